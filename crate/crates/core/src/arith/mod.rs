//! Exact arithmetic: rationals, polynomials, rational functions in one
//! parameter, dense matrices and linear solving over any exact field.

mod field;
mod matrix;
mod poly;
mod ratfunc;
mod solve;

use thiserror::Error;

pub use field::{format_scalar, int, parse_scalar, ratio, Field, Ring, Scalar};
pub use matrix::Matrix;
pub use poly::Poly;
pub use ratfunc::{RatFunc, PARAM};
pub use solve::{determinant, kernel_basis, mat_inverse, rank, solve_linear, SolveKind, SolveResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?}")]
    Parse(String),
}
