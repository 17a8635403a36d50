//! Exact arithmetic substrate: rationals, cyclotomic numbers, integer
//! matrices in Hermite normal form, and integer points of polyhedra.

pub mod arith;
pub mod cyclotomic;
pub mod intmatrix;
pub mod linsys;

use thiserror::Error;

pub use cyclotomic::Cyclotomic;
pub use intmatrix::{hermite_normal_form, in_integer_column_span, integer_solve, Hermite, IntMatrix, Obstruction};
pub use linsys::{enumerate_integer_points, Constraint, LinearSystem};

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("exponent {k} is not coprime to the conductor {conductor}")]
    NotCoprime { k: i64, conductor: u32 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unbounded: variable {var} has no finite bound in the rational relaxation")]
    Unbounded { var: usize },
    #[error("Fourier-Motzkin projection exceeded its row budget ({rows} rows)")]
    ProjectionTooLarge { rows: usize },
    #[error("integer {0} exceeds the search range")]
    Overflow(String),
}
