//! Exact multivariate polynomial algebra over the rationals.
//!
//! The crate provides the small computer-algebra kernel used by the
//! identifiability engine: sparse polynomials with arbitrary-precision
//! rational coefficients, monomial orders (lex, grevlex and block
//! elimination orders), multivariate division, Buchberger's algorithm for
//! reduced Gröbner bases, and elimination ideals.

mod error;
pub mod groebner;
mod monomial;
mod order;
mod parse;
mod poly;
mod ring;

pub use error::AlgebraError;
pub use groebner::{
    buchberger, divide, eliminate, eliminate_basis, ideal_membership, s_polynomial, Budget,
    Division, GbError, GbStats, GroebnerBasis, IdealGens, ResourceLimit, Strategy,
};
pub use monomial::{Exponent, Monomial};
pub use order::{BlockOrder, OrderBlock, TermOrder};
pub use poly::{Polynomial, PolynomialDisplay};
pub use ring::{Ring, VarId};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Shorthand for building an exact rational `num / den`.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
