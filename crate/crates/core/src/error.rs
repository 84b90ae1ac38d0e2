use thiserror::Error;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("order {order} is not supported for the {model} model")]
    UnsupportedOrder { model: String, order: u8 },

    #[error("integration did not reach tolerance: estimate {estimate:e}, error bound {error_bound:e}")]
    Integration { estimate: f64, error_bound: f64 },

    #[error("curves are defined on different theta grids")]
    MismatchedGrid,

    #[error("no admissible typical point after {0} attempts")]
    ResampleExhausted(usize),

    #[error("truncated stick fraction {fraction:.2e} exceeds {limit:.0e}")]
    TruncationExcess { fraction: f64, limit: f64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}
