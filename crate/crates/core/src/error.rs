use thiserror::Error;

/// Failure modes shared by every stage of the pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("unsupported form: {0}")]
    UnsupportedForm(String),
    #[error("unsupported source: {0}")]
    UnsupportedSource(String),
    #[error("quadrature did not converge (residual estimate {residual:e})")]
    QuadratureFailure { residual: f64 },
    #[error("degenerate splitting: c0 denominator {denominator:e} is too close to zero")]
    DegenerateSplitting { denominator: f64 },
    #[error("numerically singular system: pivot {pivot:e} in column {column}")]
    SingularSystem { column: usize, pivot: f64 },
    #[error("GMRES stopped after {iterations} iterations at relative residual {residual:e}")]
    IterativeFailure { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
