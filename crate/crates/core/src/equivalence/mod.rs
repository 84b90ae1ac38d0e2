//! Model equivalence: sup-distance between success curves, parameter
//! mappings between street models and asymptotic ratio traces.

mod mapping;
mod metric;
mod report;

pub use mapping::{map_parameters, shared_orders, ModelSpec};
pub use metric::{asymptotic_equivalence_check, tv_distance, RatioTrace, Regime, TvDistance};
pub use report::EquivalenceReport;
