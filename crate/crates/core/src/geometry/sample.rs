use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::street::{Line, Model, Point, Stick, Street, StreetSystem};
use crate::error::{ensure, Result};
use crate::law::{HalfLengthLaw, TAIL_MASS};

/// Draws a Poisson(mean) count; a zero mean gives zero.
pub fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).map(|d| d.sample(rng) as usize).unwrap_or(0)
}

/// Uniform point in `b(o, radius)`.
pub fn uniform_in_disk<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Point {
    let r = radius * rng.gen::<f64>().sqrt();
    Point::polar(r, 2.0 * PI * rng.gen::<f64>())
}

fn check_intensity(mu: f64, window: f64) -> Result<()> {
    ensure(mu >= 0.0 && mu.is_finite(), || format!("street intensity must be non-negative, got {mu}"))?;
    ensure(window > 0.0 && window.is_finite(), || format!("window radius must be positive, got {window}"))
}

fn sample_lines<R: Rng + ?Sized>(
    model: Model,
    mu: f64,
    window: f64,
    rng: &mut R,
    mut angle: impl FnMut(&mut R) -> f64,
) -> Result<StreetSystem> {
    check_intensity(mu, window)?;
    let mut sys = StreetSystem::empty(model, window, mu);
    let n = poisson_count(2.0 * mu * window, rng);
    for _ in 0..n {
        let offset = rng.gen_range(-window..window);
        let phi = angle(rng);
        sys.push(Street::Line(Line::new(offset, phi)));
    }
    Ok(sys)
}

/// Orthogonal grid: Poisson(μ) offsets on `[−R_w, R_w]`, each line
/// horizontal or vertical with probability 1/2.
pub fn sample_og<R: Rng + ?Sized>(mu: f64, window: f64, rng: &mut R) -> Result<StreetSystem> {
    sample_lines(Model::Og, mu, window, rng, |r| if r.gen::<bool>() { 0.0 } else { FRAC_PI_2 })
}

/// Poisson line process with uniform normal angles on `[0, π)`.
pub fn sample_plp<R: Rng + ?Sized>(mu: f64, window: f64, rng: &mut R) -> Result<StreetSystem> {
    sample_lines(Model::Plp, mu, window, rng, |r| r.gen_range(0.0..PI))
}

/// Poisson stick process. Midpoints are drawn on `b(o, R_w + q)` with `q`
/// the `1 − 10⁻⁶` half-length quantile; sticks that miss the window are
/// dropped.
pub fn sample_psp<R: Rng + ?Sized>(
    mu: f64,
    law: &HalfLengthLaw,
    window: f64,
    rng: &mut R,
) -> Result<StreetSystem> {
    check_intensity(mu, window)?;
    let pad = law.quantile(1.0 - TAIL_MASS);
    let outer = window + pad;
    let mut sys = StreetSystem::empty(Model::Psp, window, mu);
    let n = poisson_count(mu * PI * outer * outer, rng);
    for _ in 0..n {
        let mid = uniform_in_disk(outer, rng);
        let angle = rng.gen_range(0.0..PI);
        let h = law.sample(rng);
        let s = Stick::new(mid, angle, h)?;
        if s.distance_to(Point::ORIGIN) <= window {
            sys.push(Street::Stick(s));
        }
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::chord::{total_length_in, Disk};
    use crate::rng::seeded;

    #[test]
    fn og_angles_are_axis_aligned() {
        let sys = sample_og(1.0, 20.0, &mut seeded(1)).unwrap();
        assert!(!sys.is_empty());
        for s in &sys.streets {
            let a = s.angle();
            assert!(a == 0.0 || a == FRAC_PI_2);
        }
    }

    #[test]
    fn zero_intensity_is_empty() {
        assert!(sample_plp(0.0, 10.0, &mut seeded(2)).unwrap().is_empty());
        assert!(sample_og(-1.0, 10.0, &mut seeded(2)).is_err());
        assert!(sample_plp(1.0, 0.0, &mut seeded(2)).is_err());
    }

    #[test]
    fn replay_is_identical() {
        let a = sample_plp(2.0, 20.0, &mut seeded(7)).unwrap();
        let b = sample_plp(2.0, 20.0, &mut seeded(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn line_count_mean() {
        let mut rng = seeded(11);
        let reps = 400;
        let total: usize = (0..reps).map(|_| sample_og(1.0, 50.0, &mut rng).unwrap().len()).sum();
        let mean = total as f64 / reps as f64;
        // sd of the mean is 0.5
        assert!((mean - 100.0).abs() < 2.0, "{mean}");
    }

    #[test]
    fn psp_length_intensity() {
        let law = HalfLengthLaw::deterministic(10.0).unwrap();
        let mut rng = seeded(13);
        let disk = Disk::at_origin(10.0);
        let reps = 300;
        let mut acc = 0.0;
        for _ in 0..reps {
            let sys = sample_psp(0.1, &law, 10.0, &mut rng).unwrap();
            acc += total_length_in(&sys, &disk);
        }
        let tau = acc / reps as f64 / disk.area();
        assert!((tau - 2.0).abs() < 0.06, "{tau}");
    }
}
