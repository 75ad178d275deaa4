use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("index {index:?} out of bounds for grid shape {shape:?}")]
    OutOfBounds { index: Vec<usize>, shape: Vec<usize> },
    #[error("degenerate boundary: |psi| = {magnitude:e} below tolerance at boundary point {point}")]
    DegenerateBoundary { point: usize, magnitude: f64 },
    #[error("grid too large for dense matrix work: {points} points (limit {limit})")]
    OversizeGrid { points: usize, limit: usize },
    #[error("interior submatrix asymmetric: max |A - A^T| = {deviation:e}")]
    Asymmetric { deviation: f64 },
    #[error("eigenvalue iteration failed to converge: off-diagonal norm {off_norm:e} after {sweeps} sweeps")]
    EigenConvergence { sweeps: usize, off_norm: f64 },
    #[error("threshold search failed: {0}")]
    SearchFailure(String),
    #[error("profile relaxation failed to converge: residuals {history:?}")]
    ProfileConvergence { history: Vec<f64> },
    #[error("empty stability denominator: no boundary values and no interior terms")]
    EmptyBound,
    #[error("config error: {0}")]
    Config(String),
    #[error("malformed field snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
