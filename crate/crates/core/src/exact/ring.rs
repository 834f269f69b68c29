use std::fmt::Debug;

use super::Rational;

/// Commutative ring with unit. Methods take references so big coefficients are
/// never moved by accident.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;

    fn add_assign(&mut self, other: &Self) {
        *self = self.add(other);
    }
    fn scale_i64(&self, k: i64) -> Self {
        match k {
            0 => Self::zero(),
            1 => self.clone(),
            -1 => self.neg(),
            _ => self.mul(&Self::from_i64(k)),
        }
    }
    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// A ring where every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    /// Panics on division by zero.
    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv().expect("division by zero"))
    }
}

/// Domains where exact division can be attempted (used by Bareiss elimination).
pub trait ExactDiv: Ring {
    fn div_exact(&self, other: &Self) -> Option<Self>;
}
