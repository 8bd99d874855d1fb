use thiserror::Error;

/// Errors raised anywhere in the simulator, analytics, or serialization layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length {0} is not a power of two")]
    Sizing(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("normalization underflows at working precision ({0}); increase the number of digits")]
    Underflow(String),

    #[error("phase constraint interval is empty: lower bound {lower} >= upper bound {upper}")]
    EmptyInterval { lower: f64, upper: f64 },

    #[error("phase vector covers |q| <= {have}, grid needs |q| <= {need}")]
    PhaseLength { have: usize, need: usize },

    #[error("aliasing at kick {time}: population {population:e} within the grid-edge guard")]
    Aliasing { time: u64, population: f64 },

    #[error("ensemble invalid: {aborted} of {total} realizations aborted for aliasing")]
    EnsembleInvalid { aborted: usize, total: usize },

    #[error("fit refused: {0}")]
    FitRefused(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("incompatible statistics: {0}")]
    Mismatch(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
