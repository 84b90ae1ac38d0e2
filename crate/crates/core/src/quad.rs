//! Globally adaptive Gauss–Kronrod (G10/K21) quadrature.
//!
//! Finite intervals are integrated directly; `[a, ∞)` is mapped onto `[0, 1)`
//! with `x = a + t/(1 - t)`. The error heuristic is the QUADPACK one, so the
//! reported bound is an estimate, not a guarantee.
//!
//! Nested integrals use [`Nested`] to collect inner error and failure state
//! across the closure boundary; inner calls should run with
//! [`QuadratureSpec::inner`] so that the outer budget dominates.

use std::cell::Cell;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for one adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of subintervals kept by the adaptive driver.
    pub max_intervals: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-10,
            max_intervals: 400,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_intervals > 0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerances must be positive (rel {}, abs {})",
                self.rel_tol, self.abs_tol
            )));
        }
        Ok(())
    }

    /// Budget for an integral nested inside one run with `self`.
    pub fn inner(&self) -> Self {
        Self {
            rel_tol: self.rel_tol / 10.0,
            abs_tol: self.abs_tol / 10.0,
            max_intervals: self.max_intervals,
        }
    }

    /// Both tolerances halved; used for self-consistency checks.
    pub fn halved(&self) -> Self {
        Self {
            rel_tol: self.rel_tol / 2.0,
            abs_tol: self.abs_tol / 2.0,
            max_intervals: self.max_intervals * 2,
        }
    }

    /// Absolute error accepted for an integral of size `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Integral value with its estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            abs_error: 0.0,
        }
    }
}

/// Tolerance not reached within `max_intervals`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadFailure {
    pub estimate: f64,
    pub error_bound: f64,
}

impl From<QuadFailure> for Error {
    fn from(f: QuadFailure) -> Self {
        Error::Integration {
            estimate: f.estimate,
            error_bound: f.error_bound,
        }
    }
}

pub type QuadResult = std::result::Result<Estimate, QuadFailure>;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One 21-point Kronrod panel. Returns `(integral, error estimate)`.
fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = 0.0;
    let mut resk = fc * WGK[10];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let absc = half * XGK[j];
        let f1 = f(center - absc);
        let f2 = f(center + absc);
        fv1[j] = f1;
        fv2[j] = f2;
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err).is_eq()
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn adapt<F: FnMut(f64) -> f64>(f: &mut F, panels: &[(f64, f64)], spec: &QuadratureSpec) -> QuadResult {
    let mut heap = BinaryHeap::with_capacity(spec.max_intervals + 2);
    for &(a, b) in panels {
        if b > a {
            let (value, err) = gk21(f, a, b);
            heap.push(Panel { a, b, value, err });
        }
    }
    if heap.is_empty() {
        return Ok(Estimate::exact(0.0));
    }
    loop {
        let (total, err) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err));
        if !total.is_finite() {
            return Err(QuadFailure {
                estimate: total,
                error_bound: f64::INFINITY,
            });
        }
        if err <= spec.target(total) {
            return Ok(Estimate {
                value: total,
                abs_error: err,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if heap.len() + 2 > spec.max_intervals || !(mid > worst.a && mid < worst.b) {
            heap.push(worst);
            return Err(QuadFailure {
                estimate: total,
                error_bound: err,
            });
        }
        let (v1, e1) = gk21(f, worst.a, mid);
        let (v2, e2) = gk21(f, mid, worst.b);
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
    }
}

/// ∫ₐᵇ f.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> QuadResult {
    if b < a {
        return adapt(&mut f, &[(b, a)], spec)
            .map(|e| Estimate {
                value: -e.value,
                abs_error: e.abs_error,
            })
            .map_err(|e| QuadFailure {
                estimate: -e.estimate,
                error_bound: e.error_bound,
            });
    }
    adapt(&mut f, &[(a, b)], spec)
}

/// ∫ₐᵇ f with the interval pre-split at `breaks` (kinks, jumps). Breaks
/// outside `(a, b)` are ignored.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> QuadResult {
    let panels = split_panels(a, b, breaks);
    adapt(&mut f, &panels, spec)
}

/// ∫ₐ^∞ f via `x = a + t/(1 - t)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(f: F, a: f64, spec: &QuadratureSpec) -> QuadResult {
    integrate_to_infinity_with_breaks(f, a, &[], spec)
}

/// ∫ₐ^∞ f with breakpoints given in the original variable.
pub fn integrate_to_infinity_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> QuadResult {
    let mapped: Vec<f64> = breaks
        .iter()
        .filter(|&&x| x > a && x.is_finite())
        .map(|&x| (x - a) / (1.0 + x - a))
        .collect();
    let panels = split_panels(0.0, 1.0, &mapped);
    let mut g = |t: f64| {
        let one_minus = 1.0 - t;
        let x = a + t / one_minus;
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v / (one_minus * one_minus)
        }
    };
    adapt(&mut g, &panels, spec)
}

fn split_panels(a: f64, b: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (1.0 + y.abs()));
    let mut out = Vec::with_capacity(pts.len() + 1);
    let mut lo = a;
    for p in pts {
        out.push((lo, p));
        lo = p;
    }
    out.push((lo, b));
    out
}

// inner errors this small are dropped from the relative budget; near-zero
// inner values would otherwise report relative errors close to one
const NEGLIGIBLE: f64 = 1e-12;

/// Collects error and failure state from integrals evaluated inside an outer
/// integrand.
#[derive(Debug, Default)]
pub struct Nested {
    worst_rel: Cell<f64>,
    failed: Cell<bool>,
}

impl Nested {
    pub fn new() -> Self {
        Self::default()
    }

    /// Unwraps an inner result, remembering its relative error and whether it
    /// fell short of its tolerance.
    pub fn absorb(&self, r: QuadResult) -> f64 {
        let (value, err) = match r {
            Ok(e) => (e.value, e.abs_error),
            Err(f) => {
                self.failed.set(true);
                (f.estimate, f.error_bound)
            }
        };
        if err > NEGLIGIBLE {
            let rel = err / value.abs().max(f64::MIN_POSITIVE);
            if rel > self.worst_rel.get() {
                self.worst_rel.set(rel.min(1.0));
            }
        }
        value
    }

    pub fn record(&self, e: Estimate) {
        let rel = e.abs_error / e.value.abs().max(f64::MIN_POSITIVE);
        if rel > self.worst_rel.get() {
            self.worst_rel.set(rel.min(1.0));
        }
    }

    pub fn worst_rel(&self) -> f64 {
        self.worst_rel.get()
    }

    /// Folds inner error into the outer estimate. Fails when an inner integral
    /// failed and the combined bound misses the outer tolerance.
    pub fn finish(&self, outer: QuadResult, spec: &QuadratureSpec) -> QuadResult {
        let (value, err, ok) = match outer {
            Ok(e) => (e.value, e.abs_error, true),
            Err(f) => (f.estimate, f.error_bound, false),
        };
        let total = err + self.worst_rel.get() * value.abs();
        let within = total <= spec.target(value);
        if ok && (!self.failed.get() || within) {
            Ok(Estimate {
                value,
                abs_error: total,
            })
        } else {
            Err(QuadFailure {
                estimate: value,
                error_bound: total,
            })
        }
    }
}
