use crate::error::{ensure, Result};

/// Symbols of the SIR model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Vehicles per unit street length.
    pub lambda: f64,
    /// ALOHA transmit probability.
    pub p: f64,
    /// Link distance.
    pub d: f64,
    /// Path-loss exponent.
    pub alpha: f64,
}

impl ModelParams {
    pub fn new(lambda: f64, p: f64, d: f64, alpha: f64) -> Result<Self> {
        let m = Self { lambda, p, d, alpha };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.lambda >= 0.0 && self.lambda.is_finite(), || {
            format!("vehicle intensity must be non-negative, got {}", self.lambda)
        })?;
        ensure((0.0..=1.0).contains(&self.p), || {
            format!("transmit probability must lie in [0, 1], got {}", self.p)
        })?;
        ensure(self.d > 0.0 && self.d.is_finite(), || format!("link distance must be positive, got {}", self.d))?;
        ensure(self.alpha > 2.0 && self.alpha.is_finite(), || {
            format!("path-loss exponent must exceed 2, got {}", self.alpha)
        })
    }

    /// `δ = 2/α`.
    pub fn delta(&self) -> f64 {
        2.0 / self.alpha
    }

    /// Intensity of active transmitters per unit length.
    pub fn lambda_p(&self) -> f64 {
        self.lambda * self.p
    }

    /// Laplace argument `s = θ D^α`.
    pub fn s(&self, theta: f64) -> f64 {
        theta * self.d.powf(self.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ModelParams::new(0.3, 1.0, 0.25, 4.0).is_ok());
        assert!(ModelParams::new(-0.1, 1.0, 0.25, 4.0).is_err());
        assert!(ModelParams::new(0.3, 1.5, 0.25, 4.0).is_err());
        assert!(ModelParams::new(0.3, 0.5, 0.0, 4.0).is_err());
        assert!(ModelParams::new(0.3, 0.5, 1.0, 2.0).is_err());
        let m = ModelParams::new(0.6, 0.5, 0.25, 4.0).unwrap();
        assert_eq!(m.delta(), 0.5);
        assert!((m.lambda_p() - 0.3).abs() < 1e-15);
        assert!((m.s(1.0) - 0.25f64.powi(4)).abs() < 1e-18);
    }
}
