use std::f64::consts::PI;

use rayon::prelude::*;

use super::config::McConfig;
use crate::error::{ensure, Error, Result};
use crate::geometry::{default_t_cap, sample_plm};
use crate::rng::stream;

/// Largest tolerated fraction of cap-truncated sticks.
pub const TRUNCATION_LIMIT: f64 = 1e-3;

/// Half-lengths of PLM sticks whose seeds fall in the window.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfLengthSample {
    /// Untruncated half-lengths, field by field.
    pub half_lengths: Vec<f64>,
    pub truncated: usize,
}

impl HalfLengthSample {
    pub fn truncated_fraction(&self) -> f64 {
        let total = self.half_lengths.len() + self.truncated;
        if total == 0 {
            0.0
        } else {
            self.truncated as f64 / total as f64
        }
    }
}

/// Grows `mc.n` PLM fields of seed intensity `mu` on a window of radius
/// `mc.window` (default `10/√μ`) and collects their half-lengths. Fails when
/// more than `TRUNCATION_LIMIT` of the sticks reach the growth cap.
pub fn sample_plm_halflengths(mu: f64, t_cap: Option<f64>, mc: &McConfig) -> Result<HalfLengthSample> {
    mc.validate()?;
    ensure(mu > 0.0 && mu.is_finite(), || format!("street intensity must be positive, got {mu}"))?;
    let window = mc.window.unwrap_or_else(|| default_t_cap(mu));
    let per_field = (0..mc.n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(mc.seed, i);
            let out = sample_plm(mu, window, t_cap, &mut rng)?;
            let sys = &out.system;
            let mut hs = Vec::new();
            let mut trunc = 0;
            for (st, &t) in sys.sticks().zip(&sys.truncated) {
                if st.mid.norm() > window {
                    continue;
                }
                if t {
                    trunc += 1;
                } else {
                    hs.push(st.half_length);
                }
            }
            Ok((hs, trunc))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sample = HalfLengthSample {
        half_lengths: Vec::new(),
        truncated: 0,
    };
    for (hs, t) in per_field {
        sample.half_lengths.extend(hs);
        sample.truncated += t;
    }
    let fraction = sample.truncated_fraction();
    if fraction > TRUNCATION_LIMIT {
        return Err(Error::TruncationExcess {
            fraction,
            limit: TRUNCATION_LIMIT,
        });
    }
    Ok(sample)
}

/// Rayleigh scale matching the sample mean: `b̂ = π/(4·mean²)`.
pub fn fit_plm_halflength(samples: &[f64]) -> Result<f64> {
    ensure(!samples.is_empty(), || "no half-length samples".to_string())?;
    ensure(samples.iter().all(|h| h.is_finite() && *h > 0.0), || {
        "half-lengths must be positive and finite".to_string()
    })?;
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    Ok(PI / (4.0 * mean * mean))
}
