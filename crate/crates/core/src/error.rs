use thiserror::Error;

/// Errors raised by the Sinc machinery and the Nyström solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside the domain")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is singular to working precision (pivot {pivot} at step {step})")]
    SingularMatrix { step: usize, pivot: f64 },

    #[error("non-finite sample {value} at node {index}")]
    NonFiniteSample { index: i64, value: f64 },

    #[error("non-finite kernel value {value} at ({i}, {j})")]
    NonFiniteKernel { i: i64, j: i64, value: f64 },

    #[error("linear system (I - W) is singular for N = {n}")]
    SolverFailed { n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
