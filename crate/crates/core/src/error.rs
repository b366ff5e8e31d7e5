use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at {0}")]
    Pole(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series did not converge after {terms} terms (last term {last_term:e})")]
    NonConvergence { terms: usize, last_term: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parameters outside the admissible space: {0}")]
    ParamSpace(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("matrix not symmetric at ({row}, {col}): |{upper} - {lower}| exceeds tolerance")]
    Asymmetry {
        row: usize,
        col: usize,
        upper: f64,
        lower: f64,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("missing input: {0}")]
    Missing(String),
}

pub type Result<T> = std::result::Result<T, Error>;
