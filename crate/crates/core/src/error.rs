use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient c_{index} is zero: scheme has no low-storage beta form")]
    ZeroCoefficient { index: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation failed for '{name}': {msg}")]
    Validation { name: String, msg: String },
    #[error("unknown scheme '{0}'")]
    UnknownScheme(String),
    #[error("unknown stencil or filter '{0}'")]
    UnknownStencil(String),
    #[error("phase error is undefined at z = 0")]
    UndefinedAtZero,
    #[error("amplification factor vanishes; log-based error is infinite")]
    DegenerateAmplification,
    #[error("bad grid: {0}")]
    Grid(String),
    #[error("degenerate optimization region: {0}")]
    DegenerateRegion(String),
    #[error("optimization infeasible: {0}")]
    Infeasible(String),
    #[error("field of length {len} too small for stencil half-width {halfwidth}")]
    Size { len: usize, halfwidth: usize },
    #[error("unsupported wave problem: {0}")]
    UnsupportedProblem(String),
    #[error("solution diverged")]
    Diverged,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
