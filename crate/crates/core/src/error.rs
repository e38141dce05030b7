use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size must be even and at least 4, got {0}")]
    InvalidGridSize(usize),

    #[error("wavenumber {k} outside the band |k| <= {max} of an n = {n} grid")]
    WavenumberOutOfBand { k: i64, max: usize, n: usize },

    #[error("grid mismatch: {left} vs {right} points")]
    GridMismatch { left: usize, right: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("inertia symbol must be strictly positive, a({k}) = {value}")]
    NonPositiveSymbol { k: usize, value: f64 },

    #[error(
        "degenerate inertia symbol a(0) = 0: operators such as -D^2 or HD only define a metric on the \
         homogeneous space Diff(S1)/S1 and are not supported"
    )]
    DegenerateSymbol,

    #[error("custom symbol needs {expected} entries (k = 0..=n/2), got {got}")]
    SymbolLength { expected: usize, got: usize },

    #[error("unknown inertia operator kind `{0}`")]
    UnknownOperator(String),

    #[error("not a diffeomorphism: min(1 + f') = {min_slope:e}")]
    NotMonotone { min_slope: f64 },

    #[error("Newton inversion did not converge for target {target} after {iterations} iterations")]
    InversionFailed { target: f64, iterations: usize },

    #[error("time step must be positive and finite, got {0}")]
    InvalidTimeStep(f64),

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("breakdown at t = {time}: {reason}")]
    Breakdown { time: f64, reason: String },

    #[error("velocity source has no sample at t = {0}")]
    MissingSample(f64),

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
