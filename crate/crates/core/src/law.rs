//! Half-length distributions of stick streets.
//!
//! Besides the law `f_H` itself, the typical vehicle sees the length-biased
//! law `f̃_H(h) = h f_H(h) / E[H]`: a street carries vehicles in proportion
//! to its length.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::error::{Error, Result};
use crate::quad::{self, Estimate, QuadResult, QuadratureSpec};

/// Tail mass ignored when a finite support bound is needed.
pub const TAIL_MASS: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum HalfLengthLaw {
    /// All sticks have half-length `h0`.
    Deterministic(f64),
    /// `f(h) = 2bh exp(-bh²)`, mean `√(π/(4b))`.
    Rayleigh { b: f64 },
    /// Finitely many atoms; weights are normalized on construction.
    Discrete { values: Vec<f64>, weights: Vec<f64> },
    /// Histogram density: `density[i]` on `[edges[i], edges[i+1])`.
    Tabulated { edges: Vec<f64>, density: Vec<f64> },
}

impl HalfLengthLaw {
    pub fn deterministic(h0: f64) -> Result<Self> {
        if !(h0 > 0.0 && h0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "deterministic half-length must be positive and finite, got {h0}"
            )));
        }
        Ok(Self::Deterministic(h0))
    }

    pub fn rayleigh(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Rayleigh parameter b must be positive and finite, got {b}"
            )));
        }
        Ok(Self::Rayleigh { b })
    }

    /// Rayleigh law whose mean is `mean`, i.e. `b = π/(4 mean²)`.
    pub fn rayleigh_with_mean(mean: f64) -> Result<Self> {
        Self::rayleigh(std::f64::consts::PI / (4.0 * mean * mean))
    }

    pub fn discrete(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() != weights.len() {
            return Err(Error::InvalidParameter(
                "discrete law needs matching non-empty values and weights".into(),
            ));
        }
        if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter("discrete half-lengths must be positive".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter("discrete weights must be non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidParameter("discrete weights sum to zero".into()));
        }
        let weights = weights.iter().map(|w| w / total).collect();
        Ok(Self::Discrete { values, weights })
    }

    /// Histogram law. `edges` must start at 0 (or above), be strictly
    /// increasing, and bound the support; the density is renormalized.
    pub fn tabulated(edges: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 || density.len() + 1 != edges.len() {
            return Err(Error::InvalidParameter(
                "tabulated law needs n+1 edges for n densities".into(),
            ));
        }
        if edges[0] < 0.0 || edges.windows(2).any(|w| !(w[1] > w[0])) || !edges[edges.len() - 1].is_finite() {
            return Err(Error::InvalidParameter(
                "tabulated edges must be finite, non-negative and increasing".into(),
            ));
        }
        if density.iter().any(|&d| !(d >= 0.0 && d.is_finite())) {
            return Err(Error::InvalidParameter("tabulated density must be non-negative".into()));
        }
        let mass: f64 = density.iter().zip(edges.windows(2)).map(|(d, w)| d * (w[1] - w[0])).sum();
        if mass <= 0.0 {
            return Err(Error::InvalidParameter("tabulated density has zero mass".into()));
        }
        let density = density.iter().map(|d| d / mass).collect();
        let law = Self::Tabulated { edges, density };
        if !(law.mean() > 0.0) {
            return Err(Error::InvalidParameter("tabulated law has zero mean".into()));
        }
        Ok(law)
    }

    pub fn pdf(&self, h: f64) -> f64 {
        match self {
            Self::Rayleigh { b } if h >= 0.0 => 2.0 * b * h * (-b * h * h).exp(),
            Self::Tabulated { edges, density } => match bin_of(edges, h) {
                Some(i) => density[i],
                None => 0.0,
            },
            // atoms have no density
            _ => 0.0,
        }
    }

    /// Length-biased density `h f(h) / E[H]`.
    pub fn biased_pdf(&self, h: f64) -> f64 {
        h * self.pdf(h) / self.mean()
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Deterministic(h0) => *h0,
            Self::Rayleigh { b } => (std::f64::consts::PI / (4.0 * b)).sqrt(),
            Self::Discrete { values, weights } => values.iter().zip(weights).map(|(v, w)| v * w).sum(),
            Self::Tabulated { edges, density } => edges
                .windows(2)
                .zip(density)
                .map(|(w, d)| d * (w[1] * w[1] - w[0] * w[0]) / 2.0)
                .sum(),
        }
    }

    /// `E[H²]`.
    pub fn second_moment(&self) -> f64 {
        match self {
            Self::Deterministic(h0) => h0 * h0,
            Self::Rayleigh { b } => 1.0 / b,
            Self::Discrete { values, weights } => values.iter().zip(weights).map(|(v, w)| v * v * w).sum(),
            Self::Tabulated { edges, density } => edges
                .windows(2)
                .zip(density)
                .map(|(w, d)| d * (w[1].powi(3) - w[0].powi(3)) / 3.0)
                .sum(),
        }
    }

    /// Mean of the length-biased law, `E[H²]/E[H]`.
    pub fn biased_mean(&self) -> f64 {
        self.second_moment() / self.mean()
    }

    /// Inverse CDF on `[0, 1)`.
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        match self {
            Self::Deterministic(h0) => *h0,
            Self::Rayleigh { b } => (-(1.0 - p).ln() / b).sqrt(),
            Self::Discrete { values, weights } => {
                let mut order: Vec<usize> = (0..values.len()).collect();
                order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
                let mut acc = 0.0;
                for &i in &order {
                    acc += weights[i];
                    if acc >= p {
                        return values[i];
                    }
                }
                values[order[order.len() - 1]]
            }
            Self::Tabulated { edges, density } => {
                let mut acc = 0.0;
                for (w, d) in edges.windows(2).zip(density) {
                    let mass = d * (w[1] - w[0]);
                    if acc + mass >= p && mass > 0.0 {
                        return w[0] + (p - acc) / d;
                    }
                    acc += mass;
                }
                edges[edges.len() - 1]
            }
        }
    }

    /// Half-length beyond which at most [`TAIL_MASS`] of the sticks reach.
    pub fn support_bound(&self) -> f64 {
        self.quantile(1.0 - TAIL_MASS)
    }

    /// Law of `c·H`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale factor must be positive, got {c}")));
        }
        Ok(match self {
            Self::Deterministic(h0) => Self::Deterministic(h0 * c),
            Self::Rayleigh { b } => Self::Rayleigh { b: b / (c * c) },
            Self::Discrete { values, weights } => Self::Discrete {
                values: values.iter().map(|v| v * c).collect(),
                weights: weights.clone(),
            },
            Self::Tabulated { edges, density } => Self::Tabulated {
                edges: edges.iter().map(|e| e * c).collect(),
                density: density.iter().map(|d| d / c).collect(),
            },
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Deterministic(h0) => *h0,
            Self::Rayleigh { b } => {
                let e: f64 = Exp1.sample(rng);
                (e / b).sqrt()
            }
            Self::Discrete { values, weights } => values[pick(weights, rng.gen::<f64>())],
            Self::Tabulated { .. } => self.quantile(rng.gen::<f64>()),
        }
    }

    /// Draw from the length-biased law `f̃_H`.
    pub fn sample_biased<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Deterministic(h0) => *h0,
            Self::Rayleigh { b } => {
                // b H̃² ~ Gamma(3/2, 1)
                let g = Gamma::new(1.5, 1.0).expect("valid gamma shape");
                let x: f64 = g.sample(rng);
                (x / b).sqrt()
            }
            Self::Discrete { values, weights } => {
                let biased: Vec<f64> = values.iter().zip(weights).map(|(v, w)| v * w).collect();
                let total: f64 = biased.iter().sum();
                values[pick(&biased, rng.gen::<f64>() * total)]
            }
            Self::Tabulated { edges, density } => {
                // within a bin the biased density is ∝ h, so its CDF is quadratic
                let total = self.mean();
                let target = rng.gen::<f64>() * total;
                let mut acc = 0.0;
                for (w, d) in edges.windows(2).zip(density) {
                    let mass = d * (w[1] * w[1] - w[0] * w[0]) / 2.0;
                    if acc + mass >= target && mass > 0.0 {
                        return (w[0] * w[0] + 2.0 * (target - acc) / d).sqrt();
                    }
                    acc += mass;
                }
                edges[edges.len() - 1]
            }
        }
    }

    /// `E[g(H)]`. `breaks` lists half-lengths where `g` has kinks.
    pub fn expect<F: FnMut(f64) -> f64>(&self, g: F, breaks: &[f64], spec: &QuadratureSpec) -> QuadResult {
        self.expect_weighted(g, breaks, spec, false)
    }

    /// `E[g(H̃)]` under the length-biased law.
    pub fn expect_biased<F: FnMut(f64) -> f64>(&self, g: F, breaks: &[f64], spec: &QuadratureSpec) -> QuadResult {
        self.expect_weighted(g, breaks, spec, true)
    }

    fn expect_weighted<F: FnMut(f64) -> f64>(
        &self,
        mut g: F,
        breaks: &[f64],
        spec: &QuadratureSpec,
        biased: bool,
    ) -> QuadResult {
        let mean = self.mean();
        match self {
            Self::Deterministic(h0) => Ok(Estimate::exact(g(*h0))),
            Self::Discrete { values, weights } => {
                let norm = if biased { mean } else { 1.0 };
                let v = values
                    .iter()
                    .zip(weights)
                    .map(|(&h, &w)| {
                        let bias = if biased { h } else { 1.0 };
                        w * bias * g(h) / norm
                    })
                    .sum();
                Ok(Estimate::exact(v))
            }
            Self::Rayleigh { b } => {
                // x = b h² turns the weight into e^{-x}
                let b = *b;
                let xb: Vec<f64> = breaks.iter().map(|h| b * h * h).collect();
                quad::integrate_to_infinity_with_breaks(
                    |x| {
                        let h = (x / b).sqrt();
                        let w = if biased { h / mean } else { 1.0 };
                        let e = (-x).exp();
                        if e == 0.0 {
                            0.0
                        } else {
                            w * e * g(h)
                        }
                    },
                    0.0,
                    &xb,
                    spec,
                )
            }
            Self::Tabulated { edges, density } => {
                let mut all: Vec<f64> = edges.clone();
                all.extend_from_slice(breaks);
                let lo = edges[0];
                let hi = edges[edges.len() - 1];
                quad::integrate_with_breaks(
                    |h| {
                        let d = match bin_of(edges, h) {
                            Some(i) => density[i],
                            None => 0.0,
                        };
                        if d == 0.0 {
                            return 0.0;
                        }
                        let w = if biased { h / mean } else { 1.0 };
                        w * d * g(h)
                    },
                    lo,
                    hi,
                    &all,
                    spec,
                )
            }
        }
    }
}

fn bin_of(edges: &[f64], h: f64) -> Option<usize> {
    if h < edges[0] || h >= edges[edges.len() - 1] {
        return None;
    }
    let i = edges.partition_point(|&e| e <= h);
    Some(i - 1)
}

fn pick(weights: &[f64], mut u: f64) -> usize {
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return i;
        }
        u -= w;
    }
    weights.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use std::f64::consts::PI;

    fn laws() -> Vec<HalfLengthLaw> {
        vec![
            HalfLengthLaw::deterministic(10.0).unwrap(),
            HalfLengthLaw::rayleigh(0.0103).unwrap(),
            HalfLengthLaw::rayleigh(1.04).unwrap(),
            HalfLengthLaw::discrete(vec![0.01, 100.0], vec![1.0, 1.0]).unwrap(),
            HalfLengthLaw::tabulated(vec![0.0, 1.0, 2.0, 4.0], vec![0.2, 0.5, 0.1]).unwrap(),
        ]
    }

    #[test]
    fn rejects_degenerate_laws() {
        assert!(HalfLengthLaw::deterministic(0.0).is_err());
        assert!(HalfLengthLaw::rayleigh(0.0).is_err());
        assert!(HalfLengthLaw::rayleigh(f64::NAN).is_err());
        assert!(HalfLengthLaw::discrete(vec![0.0], vec![1.0]).is_err());
        assert!(HalfLengthLaw::tabulated(vec![0.0, 1.0], vec![0.0]).is_err());
    }

    #[test]
    fn rayleigh_mean_matches_closed_form() {
        let law = HalfLengthLaw::rayleigh(0.0103).unwrap();
        assert!((law.mean() - (PI / (4.0 * 0.0103)).sqrt()).abs() < 1e-12);
        let spec = QuadratureSpec::default();
        let m = law.expect(|h| h, &[], &spec).unwrap().value;
        assert!((m - law.mean()).abs() < 1e-6 * law.mean());
    }

    #[test]
    fn densities_integrate_to_one() {
        let spec = QuadratureSpec::new(1e-10, 1e-13).unwrap();
        for law in laws() {
            let total = law.expect(|_| 1.0, &[], &spec).unwrap().value;
            assert!((total - 1.0).abs() < 1e-8, "{law:?}: {total}");
            let biased = law.expect_biased(|_| 1.0, &[], &spec).unwrap().value;
            assert!((biased - 1.0).abs() < 1e-8, "{law:?}: {biased}");
        }
    }

    #[test]
    fn biased_mean_is_ratio_of_moments() {
        let spec = QuadratureSpec::new(1e-10, 1e-13).unwrap();
        for law in laws() {
            let m = law.expect_biased(|h| h, &[], &spec).unwrap().value;
            let want = law.second_moment() / law.mean();
            assert!((m - want).abs() < 1e-7 * want, "{law:?}: {m} vs {want}");
        }
    }

    #[test]
    fn biased_density_of_deterministic_is_unchanged() {
        let law = HalfLengthLaw::deterministic(10.0).unwrap();
        let mut rng = seeded(1);
        for _ in 0..10 {
            assert_eq!(law.sample_biased(&mut rng), 10.0);
        }
        assert_eq!(law.biased_mean(), 10.0);
    }

    #[test]
    fn two_point_law_is_dominated_by_long_sticks() {
        let law = HalfLengthLaw::discrete(vec![0.01, 100.0], vec![1.0, 1.0]).unwrap();
        let spec = QuadratureSpec::default();
        let p_long = law
            .expect_biased(|h| if h > 1.0 { 1.0 } else { 0.0 }, &[], &spec)
            .unwrap()
            .value;
        assert!((p_long - 100.0 / 100.01).abs() < 1e-12);
        assert!(p_long > 0.9998);
    }

    #[test]
    fn sample_means_match_moments() {
        let mut rng = seeded(42);
        for law in laws() {
            let n = 200_000;
            let m: f64 = (0..n).map(|_| law.sample(&mut rng)).sum::<f64>() / n as f64;
            let mb: f64 = (0..n).map(|_| law.sample_biased(&mut rng)).sum::<f64>() / n as f64;
            let sd = (law.second_moment() - law.mean().powi(2)).max(0.0).sqrt();
            assert!((m - law.mean()).abs() < 5.0 * sd / (n as f64).sqrt() + 1e-12, "{law:?}");
            assert!((mb - law.biased_mean()).abs() < 0.02 * law.biased_mean(), "{law:?}");
        }
    }

    #[test]
    fn quantile_inverts_rayleigh_cdf() {
        let law = HalfLengthLaw::rayleigh(0.5).unwrap();
        let q = law.support_bound();
        assert!((1.0 - (-(0.5 * q * q)).exp() - (1.0 - TAIL_MASS)).abs() < 1e-12);
    }

    #[test]
    fn scaling_multiplies_mean() {
        for law in laws() {
            let s = law.scaled(3.0).unwrap();
            assert!((s.mean() - 3.0 * law.mean()).abs() < 1e-12 * s.mean());
        }
    }
}
