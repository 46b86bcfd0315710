use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature order {order} is too small: {hint}")]
    QuadratureOrder { order: usize, hint: String },

    #[error("hermite index {0} exceeds the supported maximum of 30")]
    HermiteIndex(usize),

    #[error("window: {0}")]
    Window(String),

    #[error("shift x = {shift} truncates the window support (integrand {edge:e} at the grid edge)")]
    StftTruncation { shift: f64, edge: f64 },

    #[error("window constant hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error(
        "spectrum flagged: clamp excess {excess:e} exceeds tolerance {tolerance:e} (under-resolved quadrature, raise the order)"
    )]
    SpectrumFlagged { excess: f64, tolerance: f64 },

    #[error(
        "radial solve flagged: discarded angular block eigenvalue {discarded:e} exceeds 1e-10 (raise max_angular above {max_angular})"
    )]
    AngularTruncation { discarded: f64, max_angular: usize },

    #[error("matrix dimension {dim} exceeds the cap of {cap} nodes")]
    DimensionCap { dim: usize, cap: usize },

    #[error(
        "eigenvalue {lambda:e} at rank {rank} is below 1e-6; Nyström extension is unstable, use a larger quadrature order"
    )]
    UnstableExtension { lambda: f64, rank: usize },

    #[error("enclosing box misses {tail:e} of the intensity mass (limit {limit:e}); use a bigger box")]
    IntensityTail { tail: f64, limit: f64 },

    #[error("sampler stalled: no acceptance in {attempts} proposals")]
    SamplerStall { attempts: usize },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("report: {0}")]
    Report(String),

    #[error("sweep aborted at L = {dilation}: {source}")]
    Sweep {
        dilation: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
