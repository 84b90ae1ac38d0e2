use std::io::Write;

use super::config::McConfig;
use super::generator::Generator;
use super::stats::{run_clusters, ClusterRow, EstimateWithCi};
use crate::analytic::check_sorted;
use crate::cox::ModelParams;
use crate::error::Result;

/// Empirical CDF of the nearest-neighbor distance on an `r` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCdf {
    pub r: Vec<f64>,
    pub value: Vec<f64>,
    pub half_width: Vec<f64>,
    /// Typical points observed.
    pub n: u64,
}

impl EmpiricalCdf {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "r,value,ci,kind")?;
        for i in 0..self.r.len() {
            writeln!(w, "{:e},{:e},{:e},mc:{}", self.r[i], self.value[i], self.half_width[i], self.n)?;
        }
        Ok(())
    }

    /// Largest absolute gap to `f` over the grid.
    pub fn sup_distance<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.r
            .iter()
            .zip(&self.value)
            .map(|(&r, &v)| (v - f(r)).abs())
            .fold(0.0, f64::max)
    }
}

/// Mean and variance of the number of vehicles within `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborStats {
    pub r: Vec<f64>,
    pub mean: Vec<EstimateWithCi>,
    pub variance: Vec<EstimateWithCi>,
}

impl NeighborStats {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "r,mean,mean_ci,variance,variance_ci")?;
        for i in 0..self.r.len() {
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{:e}",
                self.r[i], self.mean[i].value, self.mean[i].half_width, self.variance[i].value, self.variance[i].half_width
            )?;
        }
        Ok(())
    }
}

fn prepare(gen: &Generator, params: &ModelParams, r: &[f64], mc: &McConfig) -> Result<f64> {
    params.validate()?;
    gen.validate()?;
    mc.validate()?;
    check_sorted("r", r)?;
    mc.window_for(gen, r[r.len() - 1])
}

/// Empirical CDF of the distance from the typical vehicle to its nearest
/// neighbor among all vehicles.
pub fn estimate_nn_cdf(gen: &Generator, params: &ModelParams, r: &[f64], mc: &McConfig) -> Result<EmpiricalCdf> {
    let window = prepare(gen, params, r, mc)?;
    let sums = run_clusters(mc, r.len(), |rng| {
        let views = gen.draw(params, window, rng)?;
        let mut row: ClusterRow = vec![(views.len() as u64, 0, 0); r.len()];
        for view in &views {
            let d2 = view.vehicles.iter().map(|v| v.r2).fold(f64::INFINITY, f64::min);
            for (cell, &x) in row.iter_mut().zip(r) {
                if d2 <= x * x {
                    cell.1 += 1;
                    cell.2 += 1;
                }
            }
        }
        Ok(row)
    })?;
    let z = mc.z();
    let est: Vec<_> = sums.iter().map(|s| s.mean(z, true)).collect();
    Ok(EmpiricalCdf {
        r: r.to_vec(),
        value: est.iter().map(|e| e.value).collect(),
        half_width: est.iter().map(|e| e.half_width).collect(),
        n: sums[0].observations(),
    })
}

/// Moments of `N_o(r)`, the number of vehicles within `r` of the typical
/// vehicle.
pub fn neighbor_count_stats(gen: &Generator, params: &ModelParams, r: &[f64], mc: &McConfig) -> Result<NeighborStats> {
    let window = prepare(gen, params, r, mc)?;
    let sums = run_clusters(mc, r.len(), |rng| {
        let views = gen.draw(params, window, rng)?;
        let mut row: ClusterRow = vec![(views.len() as u64, 0, 0); r.len()];
        for view in &views {
            for (cell, &x) in row.iter_mut().zip(r) {
                let c = view.count_within(x) as u64;
                cell.1 += c;
                cell.2 += c * c;
            }
        }
        Ok(row)
    })?;
    let z = mc.z();
    Ok(NeighborStats {
        r: r.to_vec(),
        mean: sums.iter().map(|s| s.mean(z, false)).collect(),
        variance: sums.iter().map(|s| s.variance(z)).collect(),
    })
}
