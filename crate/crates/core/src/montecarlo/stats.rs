use rayon::prelude::*;

use super::config::McConfig;
use crate::error::Result;
use crate::rng::{stream, SimRng};

/// Point estimate with a confidence-interval half-width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateWithCi {
    pub value: f64,
    pub half_width: f64,
    /// Observations behind the estimate.
    pub n: u64,
}

/// Exact integer sums over clusters of observations: per cluster the
/// observation count `n`, the total `a` and the total of squares `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct ClusterSums {
    c: u64,
    n: u128,
    a: u128,
    b: u128,
    nn: u128,
    aa: u128,
    bb: u128,
    an: u128,
    bn: u128,
    ab: u128,
}

impl ClusterSums {
    pub fn add(&mut self, n: u64, a: u64, b: u64) {
        let (n, a, b) = (n as u128, a as u128, b as u128);
        self.c += 1;
        self.n += n;
        self.a += a;
        self.b += b;
        self.nn += n * n;
        self.aa += a * a;
        self.bb += b * b;
        self.an += a * n;
        self.bn += b * n;
        self.ab += a * b;
    }

    pub fn merge(mut self, o: &Self) -> Self {
        self.c += o.c;
        self.n += o.n;
        self.a += o.a;
        self.b += o.b;
        self.nn += o.nn;
        self.aa += o.aa;
        self.bb += o.bb;
        self.an += o.an;
        self.bn += o.bn;
        self.ab += o.ab;
        self
    }

    pub fn observations(&self) -> u64 {
        self.n as u64
    }

    fn singletons(&self) -> bool {
        self.nn == self.n
    }

    fn inflation(&self) -> f64 {
        let c = self.c as f64;
        if c > 1.0 {
            c / (c - 1.0)
        } else {
            1.0
        }
    }

    /// Mean of the per-observation values `a`; for 0/1 outcomes the
    /// Bernoulli normal interval, otherwise the cluster-robust one.
    pub fn mean(&self, z: f64, bernoulli: bool) -> EstimateWithCi {
        let n = self.n as f64;
        if self.n == 0 {
            return EstimateWithCi {
                value: f64::NAN,
                half_width: f64::NAN,
                n: 0,
            };
        }
        let m = self.a as f64 / n;
        let var = if bernoulli && self.singletons() {
            m * (1.0 - m) / n
        } else {
            let q = self.aa as f64 - 2.0 * m * self.an as f64 + m * m * self.nn as f64;
            self.inflation() * q.max(0.0) / (n * n)
        };
        EstimateWithCi {
            value: m,
            half_width: z * var.sqrt(),
            n: self.n as u64,
        }
    }

    /// Variance of the per-observation values with a delta-method interval.
    pub fn variance(&self, z: f64) -> EstimateWithCi {
        let n = self.n as f64;
        if self.n == 0 {
            return EstimateWithCi {
                value: f64::NAN,
                half_width: f64::NAN,
                n: 0,
            };
        }
        let m = self.a as f64 / n;
        let v = (self.b as f64 / n - m * m).max(0.0);
        // influence (x − m)² − v summed per cluster: B − 2mA + (m² − v)n
        let k = m * m - v;
        let q = self.bb as f64 + 4.0 * m * m * self.aa as f64 + k * k * self.nn as f64 - 4.0 * m * self.ab as f64
            + 2.0 * k * self.bn as f64
            - 4.0 * m * k * self.an as f64;
        EstimateWithCi {
            value: v,
            half_width: z * (self.inflation() * q.max(0.0)).sqrt() / n,
            n: self.n as u64,
        }
    }
}

/// Per-cluster `(n, a, b)` for each of `k` outputs.
pub(crate) type ClusterRow = Vec<(u64, u64, u64)>;

/// Runs `mc.n` independent clusters in parallel and sums their rows.
pub(crate) fn run_clusters<F>(mc: &McConfig, k: usize, f: F) -> Result<Vec<ClusterSums>>
where
    F: Fn(&mut SimRng) -> Result<ClusterRow> + Sync,
{
    let empty = || vec![ClusterSums::default(); k];
    (0..mc.n as u64)
        .into_par_iter()
        .map(|i| f(&mut stream(mc.seed, i)))
        .try_fold(empty, |mut acc, row| {
            for (s, (n, a, b)) in acc.iter_mut().zip(row?) {
                s.add(n, a, b);
            }
            Ok(acc)
        })
        .try_reduce(empty, |x, y| Ok(x.iter().zip(&y).map(|(a, b)| a.merge(b)).collect()))
}
