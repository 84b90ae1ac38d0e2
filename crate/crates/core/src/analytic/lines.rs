use std::f64::consts::FRAC_PI_2;

use super::ppp::gamma_product;
use crate::error::{ensure, Error, Result};
use crate::geometry::Model;
use crate::quad::{self, Estimate, Nested, QuadratureSpec};

fn check_alpha(alpha: f64) -> Result<()> {
    ensure(alpha > 2.0 && alpha.is_finite(), || format!("path-loss exponent must exceed 2, got {alpha}"))
}

fn check_order(m: u8, model: &str) -> Result<()> {
    if m == 2 || m == 4 {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder { model: model.into(), order: m })
    }
}

/// `J(v) = 2∫₀^∞ dw / (1 + (v + w²)^{α/2})`.
fn line_integral(v: f64, alpha: f64, spec: &QuadratureSpec) -> quad::QuadResult {
    let half = alpha / 2.0;
    let brk = v.sqrt().max(1.0);
    quad::integrate_to_infinity_with_breaks(|w| 1.0 / (1.0 + (v + w * w).powf(half)), 0.0, &[brk], spec)
        .map(|e| Estimate {
            value: 2.0 * e.value,
            abs_error: 2.0 * e.abs_error,
        })
}

/// Laplace transform of the interference from one line at distance `x`.
pub fn laplace_line(s: f64, x: f64, lambda_p: f64, alpha: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    check_alpha(alpha)?;
    ensure(s > 0.0 && x >= 0.0, || format!("need s > 0 and x ≥ 0, got s={s}, x={x}"))?;
    if lambda_p == 0.0 || x.is_infinite() {
        return Ok(Estimate::exact(1.0));
    }
    let sig = s.powf(1.0 / alpha);
    let v = (x / sig).powi(2);
    let j = line_integral(v, alpha, spec)?;
    let value = (-lambda_p * sig * j.value).exp();
    Ok(Estimate {
        value,
        abs_error: value * lambda_p * sig * j.abs_error,
    })
}

/// Success probability of the typical vehicle of order `m` in the OG or PLP
/// with Poisson vehicles. One formula serves both grids.
pub fn og_plp_success(
    m: u8,
    mu: f64,
    lambda_p: f64,
    link: f64,
    alpha: f64,
    theta: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    check_order(m, "OG/PLP")?;
    check_alpha(alpha)?;
    ensure(mu >= 0.0 && lambda_p >= 0.0 && link > 0.0 && theta >= 0.0, || {
        "need μ ≥ 0, λp ≥ 0, D > 0, θ ≥ 0".to_string()
    })?;
    if theta == 0.0 || lambda_p == 0.0 {
        return Ok(Estimate::exact(1.0));
    }
    let delta = 2.0 / alpha;
    let own = m as f64 * lambda_p * link * theta.powf(delta / 2.0) * gamma_product(delta / 2.0)?;
    if mu == 0.0 {
        return Ok(Estimate::exact((-own).exp()));
    }
    // x = σ y with σ = s^{1/α}
    let sig = (theta * link.powf(alpha)).powf(1.0 / alpha);
    let inner = spec.inner();
    let nested = Nested::new();
    let outer = quad::integrate_to_infinity_with_breaks(
        |y| {
            let j = nested.absorb(line_integral(y * y, alpha, &inner));
            -(-lambda_p * sig * j).exp_m1()
        },
        0.0,
        &[1.0],
        spec,
    );
    let bg = nested.finish(outer, spec)?;
    let expo = own + 2.0 * mu * sig * bg.value;
    let value = (-expo).exp();
    Ok(Estimate {
        value,
        abs_error: value * 2.0 * mu * sig * bg.abs_error,
    })
}

/// [`og_plp_success`] for a named line model; other models are rejected.
#[allow(clippy::too_many_arguments)]
pub fn line_model_success(
    model: Model,
    m: u8,
    mu: f64,
    lambda_p: f64,
    link: f64,
    alpha: f64,
    theta: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    ensure(model.is_line_model(), || format!("{model} is not a line model"))?;
    og_plp_success(m, mu, lambda_p, link, alpha, theta, spec)
}

/// Nearest-neighbor distance CDF in the OG or PLP with Poisson vehicles.
pub fn nn_cdf_og_plp(r: f64, m: u8, mu: f64, lambda: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    check_order(m, "OG/PLP")?;
    ensure(r >= 0.0 && mu >= 0.0 && lambda >= 0.0, || "need r, μ, λ ≥ 0".to_string())?;
    if r == 0.0 || lambda == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    // u = r sin t removes the square-root edge at u = r
    let bg = quad::integrate(
        |t| {
            let c = r * t.cos();
            -(-2.0 * lambda * c).exp_m1() * c
        },
        0.0,
        FRAC_PI_2,
        spec,
    )?;
    let survival = (-(m as f64) * lambda * r - 2.0 * mu * bg.value).exp();
    Ok(Estimate {
        value: 1.0 - survival,
        abs_error: survival * 2.0 * mu * bg.abs_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn line_transform_limits() {
        assert_eq!(laplace_line(1.0, 2.0, 0.0, 4.0, &spec()).unwrap().value, 1.0);
        assert!(laplace_line(1.0, 1e6, 0.3, 4.0, &spec()).unwrap().value > 1.0 - 1e-12);
        // x = 0: exp(−2λp s^{1/α} Γ(1+1/α)Γ(1−1/α))
        let s: f64 = 0.7;
        let want = (-2.0 * 0.3 * s.powf(0.25) * gamma_product(0.25).unwrap()).exp();
        let got = laplace_line(s, 0.0, 0.3, 4.0, &spec()).unwrap();
        assert!((got.value - want).abs() < 1e-9);
    }

    #[test]
    fn line_transform_matches_direct_integral() {
        // direct ∫ du / (1 + (x² + u²)^{α/2}/s) without rescaling
        let (s, x, lp, a) = (0.01f64, 0.4, 0.3, 3.0);
        let tight = QuadratureSpec::new(1e-11, 1e-14).unwrap();
        let direct = quad::integrate_to_infinity(|u| 1.0 / (1.0 + (x * x + u * u).powf(a / 2.0) / s), 0.0, &tight)
            .unwrap()
            .value;
        let want = (-lp * 2.0 * direct).exp();
        assert!((laplace_line(s, x, lp, a, &spec()).unwrap().value - want).abs() < 1e-8);
    }

    #[test]
    fn og_plp_identities() {
        assert_eq!(og_plp_success(2, 2.0, 0.3, 0.25, 4.0, 0.0, &spec()).unwrap().value, 1.0);
        assert!(og_plp_success(3, 2.0, 0.3, 0.25, 4.0, 1.0, &spec()).is_err());
        for theta in [0.05, 1.0, 20.0] {
            let p2 = og_plp_success(2, 2.0, 0.3, 0.25, 4.0, theta, &spec()).unwrap().value;
            let p4 = og_plp_success(4, 2.0, 0.3, 0.25, 4.0, theta, &spec()).unwrap().value;
            let ratio = (-2.0 * 0.3 * 0.25 * theta.powf(0.25) * gamma_product(0.25).unwrap()).exp();
            assert!((p4 / p2 - ratio).abs() < 1e-9);
        }
    }

    #[test]
    fn og_plp_background_by_direct_line_integral() {
        // 2μ ∫₀^∞ (1 − L_x) dx with laplace_line as integrand
        let (mu, lp, d, a, theta) = (2.0, 0.3, 0.25, 4.0, 3.0);
        let s = theta * f64::powf(d, a);
        let bg = quad::integrate_to_infinity(
            |x| 1.0 - laplace_line(s, x, lp, a, &spec()).unwrap().value,
            0.0,
            &spec(),
        )
        .unwrap()
        .value;
        let own = 2.0 * lp * d * f64::powf(theta, 0.25) * gamma_product(0.25).unwrap();
        let want = (-own - 2.0 * mu * bg).exp();
        let got = og_plp_success(2, mu, lp, d, a, theta, &spec()).unwrap().value;
        assert!((got - want).abs() < 1e-7, "{got} {want}");
    }

    #[test]
    fn nn_cdf_limits() {
        assert_eq!(nn_cdf_og_plp(0.0, 2, 1.0, 0.3, &spec()).unwrap().value, 0.0);
        assert!(nn_cdf_og_plp(1.0, 2, 1.0, 1e3, &spec()).unwrap().value > 1.0 - 1e-12);
        // μ = 0: own lines only
        let v = nn_cdf_og_plp(1.3, 4, 0.0, 0.3, &spec()).unwrap().value;
        assert!((v - (1.0 - (-4.0f64 * 0.3 * 1.3).exp())).abs() < 1e-14);
        // background integral against a plain midpoint rule in u
        let (r, mu, lam) = (1.0, 1.0, 0.3);
        let n = 200_000;
        let mut acc = 0.0;
        for k in 0..n {
            let u = r * (k as f64 + 0.5) / n as f64;
            acc += 1.0 - (-2.0 * lam * (r * r - u * u).sqrt()).exp();
        }
        let bg = acc * r / n as f64;
        let want = 1.0 - (-2.0 * lam * r - 2.0 * mu * bg).exp();
        assert!((nn_cdf_og_plp(r, 2, mu, lam, &spec()).unwrap().value - want).abs() < 1e-7);
    }
}
