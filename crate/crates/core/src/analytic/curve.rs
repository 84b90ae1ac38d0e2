//! SIR curves on a θ grid and their CSV form.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{ensure, Error, Result};
use crate::quad::Estimate;

/// How the values of a curve were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    /// Quadrature; `err` holds absolute error budgets.
    Analytic,
    /// Simulation over `n` realizations; `err` holds CI half-widths.
    MonteCarlo { n: u64 },
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveKind::Analytic => write!(f, "analytic"),
            CurveKind::MonteCarlo { n } => write!(f, "mc:{n}"),
        }
    }
}

impl FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "analytic" {
            return Ok(CurveKind::Analytic);
        }
        if let Some(n) = s.strip_prefix("mc:") {
            let n = n
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad realization count in kind {s:?}")))?;
            return Ok(CurveKind::MonteCarlo { n });
        }
        Err(Error::InvalidParameter(format!("unknown curve kind {s:?}")))
    }
}

/// Success probability `p(θ)` sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SirCurve {
    pub theta: Vec<f64>,
    pub value: Vec<f64>,
    pub err: Vec<f64>,
    pub kind: CurveKind,
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    ensure(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite(), || {
        format!("log grid needs 0 < lo < hi, got [{lo}, {hi}]")
    })?;
    ensure(n >= 2, || format!("log grid needs at least 2 points, got {n}"))?;
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect();
    g[0] = lo;
    g[n - 1] = hi;
    Ok(g)
}

/// The default 40-point grid over `[10⁻², 10²]`.
pub fn default_theta_grid() -> Vec<f64> {
    log_grid(1e-2, 1e2, 40).expect("static grid")
}

pub(crate) fn check_sorted(name: &str, grid: &[f64]) -> Result<()> {
    ensure(!grid.is_empty(), || format!("{name} grid is empty"))?;
    ensure(grid.iter().all(|t| t.is_finite() && *t >= 0.0), || format!("{name} grid has invalid entries"))?;
    ensure(grid.windows(2).all(|w| w[0] < w[1]), || format!("{name} grid must be strictly increasing"))
}

pub(crate) fn check_grid(theta: &[f64]) -> Result<()> {
    check_sorted("θ", theta)
}

impl SirCurve {
    pub fn new(theta: Vec<f64>, value: Vec<f64>, err: Vec<f64>, kind: CurveKind) -> Result<Self> {
        check_grid(&theta)?;
        ensure(value.len() == theta.len() && err.len() == theta.len(), || {
            format!("curve columns differ in length: {} {} {}", theta.len(), value.len(), err.len())
        })?;
        ensure(value.iter().all(|v| (0.0..=1.0).contains(v)), || "curve values must lie in [0, 1]".to_string())?;
        ensure(err.iter().all(|e| *e >= 0.0), || "curve errors must be non-negative".to_string())?;
        Ok(Self { theta, value, err, kind })
    }

    /// Evaluates `f` at every grid point. Values are clamped to `[0, 1]`.
    pub fn analytic<F: FnMut(f64) -> Result<Estimate>>(theta: &[f64], mut f: F) -> Result<Self> {
        check_grid(theta)?;
        let mut value = Vec::with_capacity(theta.len());
        let mut err = Vec::with_capacity(theta.len());
        for &t in theta {
            let e = f(t)?;
            value.push(e.value.clamp(0.0, 1.0));
            err.push(e.abs_error);
        }
        Self::new(theta.to_vec(), value, err, CurveKind::Analytic)
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// True when no value increases along the grid, allowing `slack`.
    pub fn is_non_increasing(&self, slack: f64) -> bool {
        self.value.windows(2).all(|w| w[1] <= w[0] + slack)
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "theta,value,err_or_ci,kind")?;
        self.write_rows(w)
    }

    pub(crate) fn write_rows<W: Write>(&self, w: &mut W) -> Result<()> {
        for i in 0..self.len() {
            writeln!(w, "{:e},{:e},{:e},{}", self.theta[i], self.value[i], self.err[i], self.kind)?;
        }
        Ok(())
    }

    /// Reads a single-curve CSV as written by [`SirCurve::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut theta = Vec::new();
        let mut value = Vec::new();
        let mut err = Vec::new();
        let mut kind = None;
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if i == 0 {
                if line != "theta,value,err_or_ci,kind" {
                    return Err(Error::Parse { line: 1, msg: format!("unexpected header {line:?}") });
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(parse_err(format!("expected 4 columns, got {}", cols.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| parse_err(format!("{s:?}: {e}")));
            theta.push(num(cols[0])?);
            value.push(num(cols[1])?);
            err.push(num(cols[2])?);
            let k: CurveKind = cols[3].parse().map_err(|e: Error| parse_err(e.to_string()))?;
            match kind {
                None => kind = Some(k),
                Some(prev) if prev != k => return Err(parse_err("mixed curve kinds".into())),
                _ => {}
            }
        }
        let kind = kind.ok_or_else(|| Error::Parse { line: 1, msg: "no rows".into() })?;
        Self::new(theta, value, err, kind)
    }
}
