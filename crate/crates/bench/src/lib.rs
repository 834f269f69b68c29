//! Fixtures shared by the benchmarks.

use quasint_core::Rational;

/// λ = (1, 2, …, n).
pub fn lambda(n: usize) -> Vec<Rational> {
    (1..=n as i64).map(Rational::integer).collect()
}
