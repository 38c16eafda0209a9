use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("negative rate {value} for {what}")]
    NegativeRate { what: String, value: f64 },

    #[error("site index {index} out of range 1..={n_sites}")]
    SiteIndex { index: usize, n_sites: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    BasisIndex { index: usize, dim: usize },

    #[error("hamiltonian is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("positivity fault: eigenvalue {0:e} below tolerance")]
    Positivity(f64),

    #[error("integration aborted at t = {t} ps: trace drift {drift:e} exceeds 1e-6")]
    TraceDrift { t: f64, drift: f64 },

    #[error("sink must be traced out before evaluating correlations")]
    SinkPresent,

    #[error("state has no sink level to trace out")]
    NoSink,

    #[error("embedding of {0} qubits exceeds the oracle limit of 10")]
    OracleTooLarge(usize),

    #[error("empty series")]
    EmptySeries,

    #[error("degenerate site features: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
