use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("wrong regime: {0}")]
    Regime(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("pole at {0}")]
    Pole(Complex64),
    #[error("point {0} lies on the branch cut")]
    OnCut(Complex64),
    #[error("curve tracing failed: {0}")]
    Trace(String),
    #[error("unexpected curve topology: {0}")]
    Topology(String),
    #[error("no cut-avoiding path to {0}")]
    Routing(Complex64),
    #[error("zone of {0} is ambiguous")]
    Zone(Complex64),
    #[error("s = {0} lies outside the tabulated range")]
    TableRange(f64),
    #[error("outside oracle scope: {0}")]
    Scope(String),
    #[error("singular moment matrix at row {0}")]
    Singular(usize),
}
