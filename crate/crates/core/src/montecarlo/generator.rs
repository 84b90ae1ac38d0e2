use rand::seq::index::sample as sample_indices;
use rand::Rng;

use crate::cox::{
    condition_typical_line_model, condition_typical_psp, ModelParams, PalmView, PlmField, TypicalPoint, ViewVehicle,
};
use crate::error::{ensure, Error, Result};
use crate::geometry::{poisson_count, uniform_in_disk, Model, Point};
use crate::law::HalfLengthLaw;
use crate::rng::SimRng;

/// Rayleigh scale of PLM half-lengths per unit seed intensity.
pub const PLM_B_PER_MU: f64 = 1.04;

/// Source of Palm-conditioned views of the typical vehicle.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// Homogeneous PPP on a line through the origin (`dim = 1`) or in the
    /// plane (`dim = 2`); the vehicle intensity is the PPP intensity.
    Ppp { dim: u8 },
    /// OG or PLP with `m/2` lines through the origin.
    Lines { model: Model, m: u8, mu: f64 },
    /// PSP with `m/2` sticks through the origin.
    Psp { m: u8, mu: f64, law: HalfLengthLaw },
    /// Empirical PLM Palm sampling: each field contributes up to
    /// `per_field` typical points from `b(o, central)`; general vehicles
    /// for order 2, T-junctions for order 3.
    Plm { order: u8, mu: f64, central: f64, per_field: usize },
}

impl Generator {
    /// PLM generator with a central disk of `5/√μ` and 64 points per field.
    pub fn plm(order: u8, mu: f64) -> Self {
        Generator::Plm {
            order,
            mu,
            central: 5.0 / mu.sqrt(),
            per_field: 64,
        }
    }

    pub fn model_name(&self) -> String {
        match self {
            Generator::Ppp { dim } => format!("PPP{dim}"),
            Generator::Lines { model, .. } => model.to_string(),
            Generator::Psp { .. } => Model::Psp.to_string(),
            Generator::Plm { .. } => Model::Plm.to_string(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let order_err = |m: u8| Error::UnsupportedOrder { model: self.model_name(), order: m };
        match self {
            Generator::Ppp { dim } => {
                ensure(*dim == 1 || *dim == 2, || format!("PPP dimension must be 1 or 2, got {dim}"))
            }
            Generator::Lines { model, m, mu } => {
                ensure(model.is_line_model(), || format!("{model} is not a line model"))?;
                if *m != 2 && *m != 4 {
                    return Err(order_err(*m));
                }
                ensure(*mu >= 0.0 && mu.is_finite(), || format!("street intensity must be non-negative, got {mu}"))
            }
            Generator::Psp { m, mu, law } => {
                if *m != 2 && *m != 4 {
                    return Err(order_err(*m));
                }
                ensure(*mu >= 0.0 && mu.is_finite(), || format!("street intensity must be non-negative, got {mu}"))?;
                let mean = law.mean();
                ensure(mean.is_finite() && mean > 0.0, || format!("half-length law has mean {mean}"))
            }
            Generator::Plm { order, mu, central, per_field } => {
                if *order != 2 && *order != 3 {
                    return Err(order_err(*order));
                }
                ensure(*mu > 0.0 && mu.is_finite(), || format!("street intensity must be positive, got {mu}"))?;
                ensure(*central > 0.0 && central.is_finite(), || "central radius must be positive".to_string())?;
                ensure(*per_field >= 1, || "need at least one typical point per field".to_string())
            }
        }
    }

    /// Radius of the disk typical points are drawn from.
    pub fn central_radius(&self) -> f64 {
        match self {
            Generator::Plm { central, .. } => *central,
            _ => 0.0,
        }
    }

    /// Street branches through the typical point counted as 1-D interferer
    /// lines in the truncation bound.
    pub fn own_streets(&self) -> usize {
        match self {
            Generator::Ppp { dim: 1 } => 1,
            Generator::Ppp { .. } => 0,
            Generator::Lines { m, .. } | Generator::Psp { m, .. } => *m as usize / 2,
            Generator::Plm { .. } => 2,
        }
    }

    /// Mean street length per unit area; 1 for the planar PPP, whose
    /// intensity is already per unit area.
    pub fn length_intensity(&self) -> f64 {
        match self {
            Generator::Ppp { dim: 1 } => 0.0,
            Generator::Ppp { .. } => 1.0,
            Generator::Lines { mu, .. } => *mu,
            Generator::Psp { mu, law, .. } => 2.0 * mu * law.mean(),
            Generator::Plm { mu, .. } => 2.0 * mu * (std::f64::consts::PI / (4.0 * PLM_B_PER_MU * mu)).sqrt(),
        }
    }

    /// One independent cluster of views with vehicles of intensity
    /// `params.lambda` marked active with probability `params.p`, all within
    /// `window` of the field origin.
    pub fn draw(&self, params: &ModelParams, window: f64, rng: &mut SimRng) -> Result<Vec<PalmView>> {
        match self {
            Generator::Ppp { dim } => Ok(vec![ppp_view(*dim, params, window, rng)]),
            Generator::Lines { model, m, mu } => {
                Ok(vec![condition_typical_line_model(*model, *m, params, *mu, window, rng)?.view()])
            }
            Generator::Psp { m, mu, law } => Ok(vec![condition_typical_psp(*m, params, *mu, law, window, rng)?.view()]),
            Generator::Plm { order, mu, central, per_field } => {
                ensure(window > *central, || format!("window {window} must exceed the central radius {central}"))?;
                let field = PlmField::sample(params, *mu, window, None, rng)?;
                let points = match order {
                    2 => street_points(&field, *central, *per_field, rng),
                    _ => {
                        let all = field.typical_points(3, *central)?;
                        if all.len() <= *per_field {
                            all
                        } else {
                            let mut idx = sample_indices(rng, all.len(), *per_field).into_vec();
                            idx.sort_unstable();
                            idx.into_iter().map(|i| all[i]).collect()
                        }
                    }
                };
                let reach = window - central;
                Ok(points.iter().map(|p| field.view(p, reach)).collect())
            }
        }
    }
}

fn ppp_view(dim: u8, params: &ModelParams, window: f64, rng: &mut SimRng) -> PalmView {
    let (lambda, p) = (params.lambda, params.p);
    let mean = if dim == 1 {
        2.0 * window * lambda
    } else {
        std::f64::consts::PI * window * window * lambda
    };
    let n = poisson_count(mean, rng);
    let vehicles = (0..n)
        .map(|_| {
            let r2 = if dim == 1 {
                rng.gen_range(-window..window).powi(2)
            } else {
                uniform_in_disk(window, rng).norm_sq()
            };
            ViewVehicle {
                r2,
                active: rng.gen::<f64>() < p,
                own: dim == 1,
            }
        })
        .collect();
    PalmView { vehicles }
}

// `count` points uniform on the street length inside b(o, radius)
fn street_points(field: &PlmField, radius: f64, count: usize, rng: &mut SimRng) -> Vec<TypicalPoint> {
    let sys = &field.outcome.system;
    let mut pieces = Vec::new();
    let mut total = 0.0;
    for (k, st) in sys.streets.iter().enumerate() {
        if let Some((lo, hi)) = st.interval_in_disk(Point::ORIGIN, radius) {
            total += hi - lo;
            pieces.push((total, k, lo, hi));
        }
    }
    if total <= 0.0 {
        return Vec::new();
    }
    (0..count)
        .map(|_| {
            let u = rng.gen_range(0.0..total);
            let i = pieces.partition_point(|p| p.0 <= u).min(pieces.len() - 1);
            let (end, k, lo, hi) = pieces[i];
            let t = (hi - (end - u)).clamp(lo, hi);
            TypicalPoint {
                pos: sys.streets[k].point_at(t),
                own: [Some(k), None],
                vehicle: None,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn params() -> ModelParams {
        ModelParams::new(0.3, 1.0, 0.25, 4.0).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Generator::Ppp { dim: 3 }.validate().is_err());
        assert!(Generator::Lines { model: Model::Psp, m: 2, mu: 1.0 }.validate().is_err());
        assert!(matches!(
            Generator::Lines { model: Model::Og, m: 3, mu: 1.0 }.validate(),
            Err(Error::UnsupportedOrder { order: 3, .. })
        ));
        assert!(Generator::plm(4, 1.0).validate().is_err());
        assert!(Generator::plm(3, 1.0).validate().is_ok());
    }

    #[test]
    fn ppp_counts() {
        let mut rng = seeded(3);
        let v = Generator::Ppp { dim: 2 }.draw(&params(), 20.0, &mut rng).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].vehicles.iter().all(|x| x.r2 <= 400.0 && x.active && !x.own));
        let want = 0.3 * std::f64::consts::PI * 400.0;
        assert!((v[0].vehicles.len() as f64 - want).abs() < 5.0 * want.sqrt());
    }

    #[test]
    fn plm_points_lie_on_streets() {
        let mut rng = seeded(4);
        let g = Generator::plm(2, 1.0);
        let params = ModelParams::new(1.0, 0.5, 0.25, 4.0).unwrap();
        let views = g.draw(&params, 15.0, &mut rng).unwrap();
        assert_eq!(views.len(), 64);
        // each view sees its own street's vehicles flagged
        assert!(views.iter().all(|v| v.vehicles.iter().all(|x| x.r2 <= 100.0 + 1e-9)));
        assert!(views.iter().any(|v| v.vehicles.iter().any(|x| x.own)));
        let mut rng = seeded(4);
        let field = PlmField::sample(&params, 1.0, 15.0, None, &mut rng).unwrap();
        for p in street_points(&field, 5.0, 50, &mut rng) {
            let k = p.own[0].unwrap();
            assert!(field.outcome.system.streets[k].distance_to(p.pos) < 1e-9);
            assert!(p.pos.norm() <= 5.0 + 1e-9);
        }
    }
}
