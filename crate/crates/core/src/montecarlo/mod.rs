//! Monte Carlo estimators over Palm-conditioned realizations.
//!
//! Realization `i` draws from stream `i` of the master seed and all
//! reductions are integer sums, so results are bit-identical for any number
//! of worker threads.

mod config;
mod fit;
mod generator;
mod manifest;
mod nn;
mod stats;
mod success;
mod tau;

pub use config::{interference_radius, McConfig, TAIL_FRACTION};
pub use generator::PLM_B_PER_MU;
pub use fit::{fit_plm_halflength, sample_plm_halflengths, HalfLengthSample, TRUNCATION_LIMIT};
pub use generator::Generator;
pub use manifest::Manifest;
pub use nn::{estimate_nn_cdf, neighbor_count_stats, EmpiricalCdf, NeighborStats};
pub use stats::EstimateWithCi;
pub use success::{estimate_success, nearest_transmitter_success, resolve_radii};
pub use tau::estimate_length_intensity;
