use std::f64::consts::PI;

use statrs::distribution::{ContinuousCDF, Normal};

use super::generator::Generator;
use crate::error::{ensure, Result};

/// Mean interference beyond `R_int` is kept below this fraction of the
/// largest decoding threshold `D^{−α}/θ_max`.
pub const TAIL_FRACTION: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McConfig {
    /// Independent realizations (fields, for the PLM).
    pub n: usize,
    pub seed: u64,
    /// Interference radius; derived from the tail bound when `None`.
    pub r_int: Option<f64>,
    /// Sampling window radius; derived from `r_int` when `None`.
    pub window: Option<f64>,
    pub ci_level: f64,
}

impl McConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            r_int: None,
            window: None,
            ci_level: 0.95,
        }
    }

    pub fn with_r_int(mut self, r: f64) -> Self {
        self.r_int = Some(r);
        self
    }

    pub fn with_window(mut self, w: f64) -> Self {
        self.window = Some(w);
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.n >= 1, || "need at least one realization".to_string())?;
        ensure(self.ci_level > 0.0 && self.ci_level < 1.0, || {
            format!("CI level must lie in (0, 1), got {}", self.ci_level)
        })?;
        if let Some(r) = self.r_int {
            ensure(r > 0.0 && r.is_finite(), || format!("interference radius must be positive, got {r}"))?;
        }
        if let Some(w) = self.window {
            ensure(w > 0.0 && w.is_finite(), || format!("window radius must be positive, got {w}"))?;
        }
        Ok(())
    }

    /// Two-sided normal quantile for `ci_level`.
    pub fn z(&self) -> f64 {
        Normal::new(0.0, 1.0)
            .expect("standard normal")
            .inverse_cdf(0.5 + self.ci_level / 2.0)
    }

    /// Window for a run that needs vehicles up to distance `reach` from
    /// every typical point.
    pub(crate) fn window_for(&self, gen: &Generator, reach: f64) -> Result<f64> {
        let need = gen.central_radius() + reach;
        match self.window {
            Some(w) => {
                ensure(w >= need, || format!("window {w} is smaller than the required {need}"))?;
                Ok(w)
            }
            None => Ok(need),
        }
    }
}

/// Radius beyond which the mean interference of active vehicles of
/// intensity `lambda_p` falls below `TAIL_FRACTION · D^{−α}/θ_max`.
pub fn interference_radius(gen: &Generator, lambda_p: f64, d: f64, alpha: f64, theta_max: f64) -> Result<f64> {
    ensure(alpha > 2.0 && d > 0.0 && theta_max > 0.0, || "need α > 2, D > 0, θ_max > 0".to_string())?;
    let budget = TAIL_FRACTION / (theta_max * d.powf(alpha));
    if lambda_p == 0.0 {
        return Ok(d);
    }
    // 1-D: 2λp R^{1−α}/(α−1) per own street
    let own = gen.own_streets() as f64;
    let r1 = if own > 0.0 {
        (2.0 * own * lambda_p / ((alpha - 1.0) * budget)).powf(1.0 / (alpha - 1.0))
    } else {
        0.0
    };
    // 2-D: λp τ 2π R^{2−α}/(α−2)
    let tau = gen.length_intensity();
    let r2 = if tau > 0.0 {
        (lambda_p * tau * 2.0 * PI / ((alpha - 2.0) * budget)).powf(1.0 / (alpha - 2.0))
    } else {
        0.0
    };
    Ok(r1.max(r2).max(d))
}
