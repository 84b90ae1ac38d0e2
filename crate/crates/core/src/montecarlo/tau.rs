use rayon::prelude::*;

use super::config::McConfig;
use super::generator::Generator;
use super::stats::EstimateWithCi;
use crate::error::{ensure, Error, Result};
use crate::geometry::{sample_og, sample_plm, sample_plp, sample_psp, total_length_in, Disk, Model};
use crate::rng::stream;

/// Street length per unit area in `b(o, radius)` averaged over `mc.n`
/// stationary realizations of the generator's street model.
pub fn estimate_length_intensity(gen: &Generator, radius: f64, mc: &McConfig) -> Result<EstimateWithCi> {
    gen.validate()?;
    mc.validate()?;
    ensure(radius > 0.0 && radius.is_finite(), || format!("radius must be positive, got {radius}"))?;
    if let Generator::Ppp { .. } = gen {
        return Err(Error::InvalidParameter("a PPP has no street system".into()));
    }
    let disk = Disk::at_origin(radius);
    let area = disk.area();
    let samples: Vec<f64> = (0..mc.n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(mc.seed, i);
            let sys = match gen {
                Generator::Lines { model: Model::Og, mu, .. } => sample_og(*mu, radius, &mut rng)?,
                Generator::Lines { mu, .. } => sample_plp(*mu, radius, &mut rng)?,
                Generator::Psp { mu, law, .. } => sample_psp(*mu, law, radius, &mut rng)?,
                Generator::Plm { mu, .. } => sample_plm(*mu, radius, None, &mut rng)?.system,
                Generator::Ppp { .. } => unreachable!(),
            };
            Ok(total_length_in(&sys, &disk) / area)
        })
        .collect::<Result<_>>()?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    Ok(EstimateWithCi {
        value: mean,
        half_width: mc.z() * (var / n).sqrt(),
        n: mc.n as u64,
    })
}
