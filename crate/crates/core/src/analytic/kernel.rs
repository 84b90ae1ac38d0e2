//! One-dimensional path-loss primitives.

use num_complex::Complex64;

use crate::quad::{self, Nested, QuadratureSpec};

/// `P(y) = ∫₀^y dv / (1 + v^α)` for `y ≥ 0`, accurate to about 1e-13.
#[derive(Clone, Copy, Debug)]
pub struct Primitive {
    alpha: f64,
    total: f64,
    at_half: f64,
}

const SERIES_TERMS: usize = 200;

impl Primitive {
    pub fn new(alpha: f64) -> Self {
        let total = (std::f64::consts::PI / alpha) / (std::f64::consts::PI / alpha).sin();
        let mut me = Self {
            alpha,
            total,
            at_half: 0.0,
        };
        me.at_half = me.small(0.5);
        me
    }

    /// `P(∞) = (π/α)/sin(π/α)`.
    pub fn total(&self) -> f64 {
        self.total
    }

    // Σ (−1)^k y^{kα+1}/(kα+1), alternating with ratio ≤ 2^{−α}
    fn small(&self, y: f64) -> f64 {
        let ya = y.powf(self.alpha);
        let mut term = y;
        let mut sum = 0.0;
        for k in 0..SERIES_TERMS {
            let c = term / (k as f64 * self.alpha + 1.0);
            sum += if k % 2 == 0 { c } else { -c };
            if c < 1e-17 * sum.abs() {
                break;
            }
            term *= ya;
        }
        sum
    }

    // ∫_y^∞ = Σ_{k≥1} (−1)^{k+1} y^{1−kα}/(kα−1)
    fn tail(&self, y: f64) -> f64 {
        let ya = y.powf(-self.alpha);
        let mut term = y * ya;
        let mut sum = 0.0;
        for k in 1..=SERIES_TERMS {
            let c = term / (k as f64 * self.alpha - 1.0);
            sum += if k % 2 == 1 { c } else { -c };
            if c < 1e-17 * sum.abs() {
                break;
            }
            term *= ya;
        }
        sum
    }

    pub fn eval(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y.is_infinite() {
            return self.total;
        }
        if self.alpha == 4.0 {
            return quartic(y);
        }
        if y <= 0.5 {
            self.small(y)
        } else if y >= 2.0 {
            self.total - self.tail(y)
        } else {
            let a = self.alpha;
            let spec = QuadratureSpec {
                rel_tol: 1e-14,
                abs_tol: 1e-16,
                max_intervals: 200,
            };
            let mid = quad::integrate(|v| 1.0 / (1.0 + v.powf(a)), 0.5, y, &spec)
                .unwrap_or_else(|f| crate::quad::Estimate {
                    value: f.estimate,
                    abs_error: f.error_bound,
                })
                .value;
            self.at_half + mid
        }
    }

    /// `∫_a^b dv / (1 + |v|^α)` for any `a ≤ b`.
    pub fn interval(&self, a: f64, b: f64) -> f64 {
        let signed = |x: f64| if x < 0.0 { -self.eval(-x) } else { self.eval(x) };
        signed(b) - signed(a)
    }
}

// ∫₀^y dv/(1 + v⁴) = −Im[atan(y/c)/c] with c = √i
fn quartic(y: f64) -> f64 {
    let c = Complex64::new(0.0, 1.0).sqrt();
    -((y / c).atan() / c).im
}

/// `Q_d(y) = ∫₀^y dv / (1 + (v² + d²)^{α/2})`, odd in `y`.
///
/// For `α = 4`, `Q_d(y) = −Im[atan(y/c)/c]` with `c = √(d² + i)`.
pub struct OffsetKernel {
    alpha: f64,
    d2: f64,
    scale: f64,
    total: f64,
    spec: QuadratureSpec,
    root: Option<Complex64>,
}

impl OffsetKernel {
    pub fn new(alpha: f64, d: f64, spec: &QuadratureSpec, nested: &Nested) -> Self {
        let d2 = d * d;
        let scale = d.max(1.0);
        let mut k = Self {
            alpha,
            d2,
            scale,
            total: 0.0,
            spec: *spec,
            root: None,
        };
        if alpha == 4.0 {
            let c = Complex64::new(d2, 1.0).sqrt();
            k.root = Some(c);
            k.total = -(Complex64::new(std::f64::consts::FRAC_PI_2, 0.0) / c).im;
            return k;
        }
        let half = alpha / 2.0;
        let r = quad::integrate_to_infinity_with_breaks(
            |v| 1.0 / (1.0 + (v * v + d2).powf(half)),
            0.0,
            &[scale],
            spec,
        );
        k.total = nested.absorb(r);
        k
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    fn f(&self, v: f64) -> f64 {
        1.0 / (1.0 + (v * v + self.d2).powf(self.alpha / 2.0))
    }

    pub fn eval(&self, y: f64, nested: &Nested) -> f64 {
        if y < 0.0 {
            return -self.eval(-y, nested);
        }
        if y == 0.0 {
            return 0.0;
        }
        if y.is_infinite() {
            return self.total;
        }
        if let Some(c) = self.root {
            return -((y / c).atan() / c).im;
        }
        if y <= 4.0 * self.scale {
            nested.absorb(quad::integrate_with_breaks(|v| self.f(v), 0.0, y, &[self.scale], &self.spec))
        } else {
            let tail = nested.absorb(quad::integrate_to_infinity(|v| self.f(v), y, &self.spec));
            self.total - tail
        }
    }

    /// `∫_a^b dv / (1 + (v² + d²)^{α/2})`.
    pub fn interval(&self, a: f64, b: f64, nested: &Nested) -> f64 {
        // both ends far out on the same side: integrate the short piece directly
        let far = (a > 4.0 * self.scale || b < -4.0 * self.scale) && b - a < a.abs().min(b.abs());
        if let Some(c) = self.root {
            if far {
                // atan x − atan y = atan((x − y)/(1 + xy)) avoids the cancellation
                let (x, y) = (b / c, a / c);
                return -(((x - y) / (1.0 + x * y)).atan() / c).im;
            }
            return self.eval(b, nested) - self.eval(a, nested);
        }
        if far {
            return nested.absorb(quad::integrate(|v| self.f(v), a, b, &self.spec));
        }
        self.eval(b, nested) - self.eval(a, nested)
    }
}
