//! Poisson stick process and the lilypond approximations built on it.
//!
//! Background integrals run in stick-aligned coordinates: `a` along the
//! stick and `d` across it, so `γ dγ dψ = da dd` and the orientation drops
//! out of the integrand.

use std::f64::consts::FRAC_PI_2;

use super::kernel::{OffsetKernel, Primitive};
use crate::error::{ensure, Error, Result};
use crate::geometry::stick_chord;
use crate::law::HalfLengthLaw;
use crate::quad::{self, Estimate, Nested, QuadratureSpec};

fn check_order(m: u8) -> Result<()> {
    if m == 2 || m == 4 {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder { model: "PSP".into(), order: m })
    }
}

fn check_law(law: &HalfLengthLaw) -> Result<()> {
    let mean = law.mean();
    ensure(mean.is_finite() && mean > 0.0, || format!("half-length law has mean {mean}"))
}

/// `∫ (1 − e^{−λℓ(a)}) da` over the whole line, where `ℓ(a)` is the overlap
/// of `[a − h, a + h]` with `[−c, c]`.
fn overlap_integral(c: f64, h: f64, lambda: f64) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    let l = 2.0 * h.min(c);
    let full = -(-lambda * l).exp_m1();
    2.0 * ((h - c).abs() * full + l - full / lambda)
}

/// Nearest-neighbor distance CDF for the PSP with Poisson vehicles.
pub fn nn_cdf_psp(
    r: f64,
    m: u8,
    mu: f64,
    lambda: f64,
    law: &HalfLengthLaw,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    check_order(m)?;
    check_law(law)?;
    ensure(r >= 0.0 && mu >= 0.0 && lambda >= 0.0, || "need r, μ, λ ≥ 0".to_string())?;
    if r == 0.0 || lambda == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let inner = spec.inner();

    // own street: origin at distance γ from the midpoint, γ uniform on [0, h]
    let nested = Nested::new();
    let own = law.expect_biased(
        |h| {
            let g = nested.absorb(quad::integrate_with_breaks(
                |gamma| (-lambda * stick_chord(gamma, 0.0, h, r)).exp(),
                0.0,
                h,
                &[(h - r).abs()],
                &inner,
            ));
            g / h
        },
        &[r],
        spec,
    );
    let own = nested.finish(own, spec)?;

    // background: 2μ E_h ∫₀^r A(√(r² − d²), h) dd with d = r sin t
    let nested = Nested::new();
    let bg = law.expect(
        |h| {
            let brk = if h < r { vec![(h / r).acos()] } else { Vec::new() };
            nested.absorb(quad::integrate_with_breaks(
                |t| {
                    let c = r * t.cos();
                    overlap_integral(c, h, lambda) * c
                },
                0.0,
                FRAC_PI_2,
                &brk,
                &inner,
            ))
        },
        &[r],
        spec,
    );
    let bg = nested.finish(bg, spec)?;

    let k = m as f64 / 2.0;
    let survival = own.value.powf(k) * (-2.0 * mu * bg.value).exp();
    let err = survival * (k * own.abs_error / own.value.max(f64::MIN_POSITIVE) + 2.0 * mu * bg.abs_error);
    Ok(Estimate {
        value: 1.0 - survival,
        abs_error: err,
    })
}

/// Laplace transform of the interference from the typical vehicle's own
/// sticks.
pub fn laplace_io_psp(
    s: f64,
    m: u8,
    lambda_p: f64,
    law: &HalfLengthLaw,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    check_order(m)?;
    check_law(law)?;
    ensure(alpha > 2.0, || format!("path-loss exponent must exceed 2, got {alpha}"))?;
    ensure(s >= 0.0 && lambda_p >= 0.0, || "need s ≥ 0 and λp ≥ 0".to_string())?;
    if s == 0.0 || lambda_p == 0.0 {
        return Ok(Estimate::exact(1.0));
    }
    let sig = s.powf(1.0 / alpha);
    let prim = Primitive::new(alpha);
    let inner = spec.inner();
    let nested = Nested::new();
    // origin at distance g from one end; symmetric about g = h
    let one = law.expect_biased(
        |h| {
            let brk = [(4.0 * sig).min(h / 2.0)];
            let v = nested.absorb(quad::integrate_with_breaks(
                |g| (-lambda_p * sig * (prim.eval(g / sig) + prim.eval((2.0 * h - g) / sig))).exp(),
                0.0,
                h,
                &brk,
                &inner,
            ));
            v / h
        },
        &[sig],
        spec,
    );
    let one = nested.finish(one, spec)?;
    let k = m as f64 / 2.0;
    let value = one.value.powf(k);
    Ok(Estimate {
        value,
        abs_error: value * k * one.abs_error / one.value.max(f64::MIN_POSITIVE),
    })
}

/// Laplace transform of the interference from all other sticks.
pub fn laplace_ir_psp(
    s: f64,
    mu: f64,
    lambda_p: f64,
    law: &HalfLengthLaw,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    check_law(law)?;
    ensure(alpha > 2.0, || format!("path-loss exponent must exceed 2, got {alpha}"))?;
    ensure(s >= 0.0 && mu >= 0.0 && lambda_p >= 0.0, || "need s, μ, λp ≥ 0".to_string())?;
    if s == 0.0 || mu == 0.0 || lambda_p == 0.0 {
        return Ok(Estimate::exact(1.0));
    }
    let sig = s.powf(1.0 / alpha);
    let spec_d = spec.inner();
    let spec_a = spec_d.inner();
    let spec_k = spec_a.inner();
    let nest_h = Nested::new();
    // lengths in units of σ = s^{1/α}; the area element scales by σ²
    let outer = law.expect(
        |h| {
            let hp = h / sig;
            let nest_d = Nested::new();
            let rd = quad::integrate_to_infinity_with_breaks(
                |d| {
                    let nest_a = Nested::new();
                    let ker = OffsetKernel::new(alpha, d, &spec_k, &nest_a);
                    let ra = quad::integrate_to_infinity_with_breaks(
                        |a| {
                            let k = ker.interval(a - hp, a + hp, &nest_a);
                            -(-lambda_p * sig * k).exp_m1()
                        },
                        0.0,
                        &[(hp - 1.0).max(0.0), hp, hp + 1.0],
                        &spec_a,
                    );
                    nest_d.absorb(nest_a.finish(ra, &spec_a))
                },
                0.0,
                &[1.0],
                &spec_d,
            );
            4.0 * nest_h.absorb(nest_d.finish(rd, &spec_d))
        },
        &[sig],
        spec,
    );
    let x = nest_h.finish(outer, spec)?;
    let scale = mu * sig * sig;
    let value = (-scale * x.value).exp();
    Ok(Estimate {
        value,
        abs_error: value * scale * x.abs_error,
    })
}

fn product(a: Estimate, b: Estimate) -> Estimate {
    Estimate {
        value: a.value * b.value,
        abs_error: a.abs_error * b.value + b.abs_error * a.value,
    }
}

/// Success probability of the typical vehicle of order `m` in the PSP.
#[allow(clippy::too_many_arguments)]
pub fn psp_success(
    m: u8,
    mu: f64,
    lambda_p: f64,
    link: f64,
    alpha: f64,
    theta: f64,
    law: &HalfLengthLaw,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    ensure(link > 0.0 && theta >= 0.0, || "need D > 0 and θ ≥ 0".to_string())?;
    let s = theta * link.powf(alpha);
    let io = laplace_io_psp(s, m, lambda_p, law, alpha, spec)?;
    let ir = laplace_ir_psp(s, mu, lambda_p, law, alpha, spec)?;
    Ok(product(io, ir))
}

/// General-vehicle PLM approximation: the PSP with Rayleigh(b) half-lengths.
pub fn plm_success_general(
    mu: f64,
    lambda_p: f64,
    link: f64,
    alpha: f64,
    theta: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let law = HalfLengthLaw::rayleigh(b)?;
    psp_success(2, mu, lambda_p, link, alpha, theta, &law, spec)
}

/// T-junction PLM approximation: the general-vehicle value times the
/// transform of a street of length `2H` ending at the origin.
pub fn plm_success_tjunction(
    mu: f64,
    lambda_p: f64,
    link: f64,
    alpha: f64,
    theta: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let law = HalfLengthLaw::rayleigh(b)?;
    let general = psp_success(2, mu, lambda_p, link, alpha, theta, &law, spec)?;
    if theta == 0.0 || lambda_p == 0.0 {
        return Ok(general);
    }
    let sig = theta.powf(1.0 / alpha) * link;
    let prim = Primitive::new(alpha);
    let ending = law.expect(|h| (-lambda_p * sig * prim.eval(2.0 * h / sig)).exp(), &[sig], spec)?;
    Ok(product(general, ending))
}
