//! Exact arithmetic substrate: rationals, sparse polynomials, rational
//! functions, the radical extension Q(x)(r) and fraction-free linear algebra.

mod gcd;
mod matrix;
mod monomial;
mod poly;
mod radical;
mod ratfunc;
mod rational;
mod ring;

pub use gcd::{gcd, lcm};
pub use matrix::{ExactMatrix, RowSpace};
pub use monomial::Monomial;
pub use poly::MultiPoly;
pub use radical::{x_squared, RadicalElement};
pub use ratfunc::RationalFunction;
pub use rational::Rational;
pub use ring::{ExactDiv, Field, Ring};

/// Polynomial over Q.
pub type QPoly = MultiPoly<Rational>;
