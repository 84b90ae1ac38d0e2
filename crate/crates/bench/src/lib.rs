//! Shared parameter sets for the benchmarks.

use coxnet::{HalfLengthLaw, ModelParams};

/// `λp = 0.3`, `D = 0.25`, `α = 4`.
pub fn reference_params() -> ModelParams {
    ModelParams::new(0.3, 1.0, 0.25, 4.0).expect("valid parameters")
}

/// Sticks of half-length 10.
pub fn fixed_sticks() -> HalfLengthLaw {
    HalfLengthLaw::deterministic(10.0).expect("valid law")
}
