//! SE- and DE-Sinc-Nyström solvers for linear Volterra integro-differential
//! equations
//!
//! ```text
//! u'(t) = g(t) + mu(t) u(t) + ∫_a^t k(t, r) u(r) dr,   a <= t <= b,   u(a) = u_a.
//! ```
//!
//! The equation is integrated once and every indefinite integral is replaced
//! by Sinc indefinite integration composed with either the single-exponential
//! (tanh) or double-exponential (tanh-sinh) map of the real line onto
//! `(a, b)`. Collocating at the Sinc points gives a dense linear system for
//! the node values; the continuous approximation is then available at any
//! `t` in O(n).
//!
//! Module map:
//!
//! - [`specfun`]: sine integral and the Sinc antiderivative basis `J(j, h)`.
//! - [`transform`]: intervals, SE/DE maps, mesh sizes, Sinc grids, weights.
//! - [`indefinite`]: standalone Sinc indefinite integration.
//! - [`linalg`]: dense matrices, Hadamard product and LU solves.
//! - [`solver`]: problem model, assembly, solve and pointwise evaluation.
//! - [`benchmarks`]: the four reference problems and manufactured solutions.
//! - [`convergence`]: error sampling and exponential-rate fits.

pub mod benchmarks;
pub mod convergence;
pub mod error;
pub mod indefinite;
pub mod linalg;
pub mod solver;
pub mod specfun;
pub mod transform;

pub use error::{Error, Result};
pub use indefinite::IndefiniteApprox;
pub use solver::{Problem, SincSolution, SolverWorkspace};
pub use transform::{Interval, Method, Point, RegularityParams, SincGrid};
