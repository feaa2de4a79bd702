use thiserror::Error;

/// Errors raised across the emulation and benchmarking pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "power iteration did not converge after {iterations} iterations \
         (best estimate {estimate:.6e}, relative residual {residual:.3e})"
    )]
    NotConverged {
        iterations: usize,
        estimate: f64,
        residual: f64,
    },

    #[error("operator is numerically singular")]
    Singular,

    #[error("operator has zero norm")]
    ZeroNorm,

    #[error("right-hand side is the zero vector")]
    ZeroRhs,

    #[error("dilated dimension {0} exceeds the desk-scale cap of 4096")]
    TooLarge(usize),

    #[error("spectral gap vanishes at s = {0}")]
    ZeroGap(f64),

    #[error("filter weights sum to zero")]
    ZeroWeights,

    #[error("post-selection failed: success-register mass {0:.3e} below 1e-6")]
    PostSelection(f64),

    #[error("duplicate spline node at {0}")]
    DuplicateNode(f64),

    #[error("value {value} at index {index} lies outside [0, 1]")]
    OutOfUnitRange { index: usize, value: f64 },

    #[error("epsilon {0} must lie in (0, 1)")]
    EpsilonOutOfRange(f64),

    #[error("ancilla count {0} outside the supported range [1, 16]")]
    AncillaCount(u32),

    #[error("estimation failed in primary subinterval {interval}: {source}")]
    Subinterval {
        interval: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("degenerate x range in log-log fit")]
    DegenerateRange,

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("csv error: {0}")]
    Csv(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<toml::de::Error> for Error {
    fn from(e: toml::de::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
