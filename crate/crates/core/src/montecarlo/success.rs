use rand_distr::{Distribution, Exp1};

use super::config::{interference_radius, McConfig};
use super::generator::Generator;
use super::stats::{run_clusters, ClusterRow};
use crate::analytic::{check_grid, CurveKind, SirCurve};
use crate::cox::{ModelParams, PalmView, ViewVehicle};
use crate::error::Result;
use crate::rng::SimRng;

/// Interference radius and sampling window of a success run.
pub fn resolve_radii(gen: &Generator, params: &ModelParams, theta_max: f64, mc: &McConfig) -> Result<(f64, f64)> {
    let r_int = match mc.r_int {
        Some(r) => r,
        None => interference_radius(gen, params.lambda_p(), params.d, params.alpha, theta_max)?,
    };
    Ok((r_int, mc.window_for(gen, r_int)?))
}

fn path_gain(r2: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        1.0 / (r2 * r2)
    } else {
        r2.powf(-alpha / 2.0)
    }
}

// Every vehicle draws its gain, so the draws do not depend on `r_int2`.
fn interference<'a>(vs: impl Iterator<Item = &'a ViewVehicle>, alpha: f64, r_int2: f64, rng: &mut SimRng) -> f64 {
    let mut sum = 0.0;
    for v in vs {
        let g: f64 = Exp1.sample(rng);
        if v.r2 <= r_int2 {
            sum += g * path_gain(v.r2, alpha);
        }
    }
    sum
}

// Largest θ with SIR > θ for the fixed link, by one draw of all gains.
fn fixed_link_threshold(view: &PalmView, params: &ModelParams, r_int2: f64, rng: &mut SimRng) -> f64 {
    let g: f64 = Exp1.sample(rng);
    let i = interference(view.vehicles.iter().filter(|v| v.active), params.alpha, r_int2, rng);
    g * params.d.powf(-params.alpha) / i
}

fn nearest_threshold(view: &PalmView, alpha: f64, r_int2: f64, rng: &mut SimRng) -> f64 {
    let Some((k, tx)) = view
        .vehicles
        .iter()
        .enumerate()
        .filter(|(_, v)| v.active)
        .min_by(|a, b| a.1.r2.total_cmp(&b.1.r2))
    else {
        return 0.0;
    };
    let g: f64 = Exp1.sample(rng);
    let others = view.vehicles.iter().enumerate().filter(|(j, v)| *j != k && v.active).map(|(_, v)| v);
    let i = interference(others, alpha, r_int2, rng);
    g * path_gain(tx.r2, alpha) / i
}

fn success_curve<F>(gen: &Generator, params: &ModelParams, theta: &[f64], mc: &McConfig, threshold: F) -> Result<SirCurve>
where
    F: Fn(&PalmView, f64, &mut SimRng) -> f64 + Sync,
{
    params.validate()?;
    gen.validate()?;
    mc.validate()?;
    check_grid(theta)?;
    let (r_int, window) = resolve_radii(gen, params, theta[theta.len() - 1].max(f64::MIN_POSITIVE), mc)?;
    let r_int2 = r_int * r_int;
    // active transmitters drawn directly at intensity λp
    let active = ModelParams {
        lambda: params.lambda_p(),
        p: 1.0,
        ..*params
    };
    let sums = run_clusters(mc, theta.len(), |rng| {
        let views = gen.draw(&active, window, rng)?;
        let mut row: ClusterRow = vec![(views.len() as u64, 0, 0); theta.len()];
        for view in &views {
            let t = threshold(view, r_int2, rng);
            for (cell, &th) in row.iter_mut().zip(theta) {
                if t > th {
                    cell.1 += 1;
                    cell.2 += 1;
                }
            }
        }
        Ok(row)
    })?;
    let z = mc.z();
    let est: Vec<_> = sums.iter().map(|s| s.mean(z, true)).collect();
    let n = sums[0].observations();
    SirCurve::new(
        theta.to_vec(),
        est.iter().map(|e| e.value.clamp(0.0, 1.0)).collect(),
        est.iter().map(|e| e.half_width).collect(),
        CurveKind::MonteCarlo { n },
    )
}

/// Success probability at link distance `D` over the θ grid. Every
/// realization draws one set of gains and marks shared by all θ, so the
/// curve is exactly non-increasing.
pub fn estimate_success(gen: &Generator, params: &ModelParams, theta: &[f64], mc: &McConfig) -> Result<SirCurve> {
    success_curve(gen, params, theta, mc, |v, r2, rng| fixed_link_threshold(v, params, r2, rng))
}

/// Success probability when the transmitter is the nearest active vehicle.
/// Realizations without an active vehicle count as failures. `params.d`
/// only sets the reference distance of the truncation bound.
pub fn nearest_transmitter_success(
    gen: &Generator,
    params: &ModelParams,
    theta: &[f64],
    mc: &McConfig,
) -> Result<SirCurve> {
    success_curve(gen, params, theta, mc, |v, r2, rng| nearest_threshold(v, params.alpha, r2, rng))
}
