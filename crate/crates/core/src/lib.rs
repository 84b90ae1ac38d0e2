//! Cox-process vehicular networks on random street systems.
//!
//! Street geometry (orthogonal grids, Poisson lines, Poisson sticks and the
//! lilypond model), vehicle sampling with Palm conditioning, quadrature of
//! the success-probability and nearest-neighbor expressions, Monte Carlo
//! estimators and model-equivalence metrics.

pub mod analytic;
pub mod cox;
pub mod equivalence;
pub mod error;
pub mod geometry;
pub mod law;
pub mod montecarlo;
pub mod quad;
pub mod rng;

pub use analytic::{CurveKind, SirCurve};
pub use cox::{ModelParams, TypicalScenario};
pub use equivalence::{EquivalenceReport, ModelSpec};
pub use error::{Error, Result};
pub use montecarlo::{EstimateWithCi, Generator, McConfig};
pub use geometry::{Line, Model, Point, Stick, Street, StreetSystem};
pub use law::HalfLengthLaw;
pub use quad::{Estimate, QuadratureSpec};
