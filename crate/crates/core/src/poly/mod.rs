//! Exact rational arithmetic and sparse multivariate polynomials under lex order.

mod context;
mod monomial;
mod polynomial;
mod text;

pub use context::{Block, ContextBuilder, VarContext, VarDesc};
pub use monomial::{Exponent, Monomial};
pub use polynomial::{Polynomial, UnivariateView};
pub use text::{format_rational, parse_polynomial, parse_rational};

/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("polynomials belong to different variable contexts")]
    ContextMismatch,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("duplicate variable {0}")]
    DuplicateVariable(String),
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
