//! Exact arithmetic over the rationals: arbitrary-precision fractions,
//! univariate polynomials, and rational functions in one variable.
//!
//! Everything downstream that claims an identity holds "exactly" reduces to
//! normalizing a [`RatFunc`] to the canonical zero here. No floating point is
//! involved anywhere in this module; floats only appear at the boundary via
//! the `eval_f64` helpers, which downstream numerical code uses to sample
//! closed-form expressions.
//!
//! Canonical forms maintained as invariants:
//! - [`Rational`]: gcd-reduced, positive denominator (guaranteed by the
//!   backing `BigRational` type).
//! - [`Poly`]: dense coefficient vector with no trailing zero; the zero
//!   polynomial is the empty vector and reports degree −1.
//! - [`RatFunc`]: numerator and denominator coprime, denominator monic, zero
//!   represented as 0/1. Two rational functions are equal as functions if and
//!   only if their canonical forms are identical.

mod poly;
mod ratfunc;
mod rational;

pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::{
    binom, format_rational, parse_rational, rat, rat_int, rational_to_f64, Rational,
};

use thiserror::Error;

/// Errors produced by exact-arithmetic operations.
///
/// These are ordinary error values, not panics: callers such as the table
/// printer evaluate rational functions at user-supplied points and must be
/// able to observe a pole without aborting.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    /// Division of rational functions by the zero function.
    #[error("division by the zero rational function")]
    DivisionByZeroFunction,
    /// Evaluation of a rational function at a root of its (reduced)
    /// denominator.
    #[error("evaluation at a pole: denominator vanishes at {0}")]
    PoleEvaluation(String),
    /// Composition f(g) where g is a constant sitting on a pole of f, so the
    /// composite is nowhere defined.
    #[error("composition with a constant lying on a pole")]
    ConstantPoleComposition,
    /// Strict coefficient access beyond the degree of a polynomial.
    #[error("coefficient index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: isize },
}
