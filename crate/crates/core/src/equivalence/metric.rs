use std::fmt;
use std::str::FromStr;

use crate::analytic::SirCurve;
use crate::error::{Error, Result};

/// Largest pointwise gap between two success curves on a shared grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TvDistance {
    pub epsilon: f64,
    /// Grid point attaining `epsilon` (the first one on ties).
    pub theta_star: f64,
    /// `epsilon` range allowed by the combined error columns.
    pub low: f64,
    pub high: f64,
}

fn same_grid(a: &SirCurve, b: &SirCurve) -> Result<()> {
    if a.theta != b.theta {
        return Err(Error::MismatchedGrid);
    }
    Ok(())
}

/// `max_θ |p_A(θ) − p_B(θ)|` on the common grid. The interval widens each
/// gap by the sum of both curves' error columns.
pub fn tv_distance(a: &SirCurve, b: &SirCurve) -> Result<TvDistance> {
    same_grid(a, b)?;
    let mut out = TvDistance {
        epsilon: -1.0,
        theta_star: a.theta[0],
        low: 0.0,
        high: 0.0,
    };
    for i in 0..a.len() {
        let gap = (a.value[i] - b.value[i]).abs();
        let slack = a.err[i] + b.err[i];
        if gap > out.epsilon {
            out.epsilon = gap;
            out.theta_star = a.theta[i];
        }
        out.low = out.low.max(gap - slack);
        out.high = out.high.max(gap + slack);
    }
    out.high = out.high.min(1.0);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// θ → 0: ratio of outage probabilities.
    Low,
    /// θ → ∞: ratio of success probabilities.
    High,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Low => "low",
            Regime::High => "high",
        })
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" => Ok(Regime::Low),
            "high" => Ok(Regime::High),
            _ => Err(Error::InvalidParameter(format!("unknown regime {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioTrace {
    pub regime: Regime,
    pub theta: Vec<f64>,
    pub ratio: Vec<f64>,
    /// `|ratio − 1|` at the grid end deepest into the regime.
    pub last_deviation: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 && den == 0.0 {
        1.0
    } else {
        num / den
    }
}

/// Outage ratio `(1 − p_A)/(1 − p_B)` for the low regime or success ratio
/// `p_A/p_B` for the high regime along the shared grid.
pub fn asymptotic_equivalence_check(a: &SirCurve, b: &SirCurve, regime: Regime) -> Result<RatioTrace> {
    same_grid(a, b)?;
    let r: Vec<f64> = a
        .value
        .iter()
        .zip(&b.value)
        .map(|(&x, &y)| match regime {
            Regime::Low => ratio(1.0 - x, 1.0 - y),
            Regime::High => ratio(x, y),
        })
        .collect();
    let last = match regime {
        Regime::Low => r[0],
        Regime::High => r[r.len() - 1],
    };
    Ok(RatioTrace {
        regime,
        theta: a.theta.clone(),
        ratio: r,
        last_deviation: (last - 1.0).abs(),
    })
}
