//! Quadrature evaluation of success probabilities and nearest-neighbor
//! distributions.

mod curve;
mod kernel;
mod lines;
mod ppp;
mod psp;

pub use curve::{default_theta_grid, log_grid, CurveKind, SirCurve};
pub(crate) use curve::{check_grid, check_sorted};
pub use kernel::{OffsetKernel, Primitive};
pub use lines::{laplace_line, line_model_success, nn_cdf_og_plp, og_plp_success};
pub use ppp::{gamma_product, high_theta_asymptote, low_theta_exponent, ppp_success};
pub use psp::{
    laplace_io_psp, laplace_ir_psp, nn_cdf_psp, plm_success_general, plm_success_tjunction, psp_success,
};
