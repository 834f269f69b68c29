use std::fmt;

use super::poly::MultiPoly;
use super::ratfunc::RationalFunction;
use super::ring::{Field, Ring};
use super::Rational;

/// `a + b·r` over Q(x₁..x_n) with `r² = Σ xᵢ²`.
#[derive(Clone)]
pub struct RadicalElement {
    n: usize,
    a: RationalFunction,
    b: RationalFunction,
}

/// Equality ignores the ambient `n`, which only widens as values combine.
impl PartialEq for RadicalElement {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b
    }
}

impl fmt::Debug for RadicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{:?}", self.a)
        } else {
            write!(f, "[{:?} + ({:?})*r]", self.a, self.b)
        }
    }
}

/// `x² = Σ xᵢ²` as a polynomial in n variables.
pub fn x_squared(n: usize) -> MultiPoly<Rational> {
    let mut p = MultiPoly::zero_in(n);
    for i in 0..n {
        p.add_term(super::Monomial::var_pow(i, 2), &Rational::one());
    }
    p
}

impl RadicalElement {
    pub fn new(n: usize, a: RationalFunction, b: RationalFunction) -> Self {
        RadicalElement { n, a, b }
    }

    pub fn rational(n: usize, a: RationalFunction) -> Self {
        RadicalElement { n, a, b: RationalFunction::zero() }
    }

    pub fn poly(n: usize, p: MultiPoly<Rational>) -> Self {
        Self::rational(n, RationalFunction::from_poly(p))
    }

    pub fn x(n: usize, i: usize) -> Self {
        Self::rational(n, RationalFunction::var(i, n))
    }

    pub fn r(n: usize) -> Self {
        RadicalElement { n, a: RationalFunction::zero(), b: RationalFunction::one() }
    }

    /// `1/r = r/x²`.
    pub fn r_inv(n: usize) -> Self {
        let b = RationalFunction::from_poly(x_squared(n)).inv().unwrap();
        RadicalElement { n, a: RationalFunction::zero(), b }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &RationalFunction {
        &self.a
    }

    pub fn b(&self) -> &RationalFunction {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.b.is_zero() && self.a.is_polynomial()
    }

    /// Partial derivative in xᵢ, using ∂r/∂xᵢ = xᵢ·r/x².
    pub fn derive(&self, i: usize) -> Self {
        let da = self.a.derivative(i);
        if self.b.is_zero() {
            return RadicalElement { n: self.n, a: da, b: RationalFunction::zero() };
        }
        assert!(i < self.n, "axis out of range");
        let x2 = RationalFunction::from_poly(x_squared(self.n));
        let xi = RationalFunction::var(i, self.n);
        let db = self.b.derivative(i).add(&self.b.mul(&xi).mul(&x2.inv().unwrap()));
        RadicalElement { n: self.n, a: da, b: db }
    }

    /// Value at a point where `r` is supplied (must equal √(x²)); `None` at a pole.
    pub fn eval(&self, x: &[Rational], r: &Rational) -> Option<Rational> {
        let a = self.a.eval(x)?;
        if self.b.is_zero() {
            return Some(a);
        }
        let b = self.b.eval(x)?;
        Some(a.add(&b.mul(r)))
    }

    /// Rendering with variables named x1..xn and the radical as `r`.
    pub fn render(&self) -> String {
        let names: Vec<String> = (1..=self.n.max(1)).map(|i| format!("x{i}")).collect();
        let a = (!self.a.is_zero()).then(|| self.a.fmt_with(&names));
        let b = (!self.b.is_zero()).then(|| {
            let s = self.b.fmt_with(&names);
            if s == "1" { "r".to_string() } else { format!("({s})*r") }
        });
        match (a, b) {
            (None, None) => "0".into(),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => format!("{a} + {b}"),
        }
    }

    pub fn scale_rational(&self, s: &Rational) -> Self {
        RadicalElement { n: self.n, a: self.a.scale_rational(s), b: self.b.scale_rational(s) }
    }

    pub fn mul_rf(&self, s: &RationalFunction) -> Self {
        RadicalElement { n: self.n, a: self.a.mul(s), b: self.b.mul(s) }
    }
}

impl Ring for RadicalElement {
    fn zero() -> Self {
        RadicalElement { n: 0, a: RationalFunction::zero(), b: RationalFunction::zero() }
    }
    fn one() -> Self {
        RadicalElement { n: 0, a: RationalFunction::one(), b: RationalFunction::zero() }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        RadicalElement { n: self.n.max(o.n), a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }
    fn sub(&self, o: &Self) -> Self {
        RadicalElement { n: self.n.max(o.n), a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }
    fn mul(&self, o: &Self) -> Self {
        let n = self.n.max(o.n);
        if self.b.is_zero() && o.b.is_zero() {
            return RadicalElement { n, a: self.a.mul(&o.a), b: RationalFunction::zero() };
        }
        let mut a = self.a.mul(&o.a);
        if !self.b.is_zero() && !o.b.is_zero() {
            let x2 = RationalFunction::from_poly(x_squared(n));
            a = a.add(&self.b.mul(&o.b).mul(&x2));
        }
        let b = self.a.mul(&o.b).add(&o.a.mul(&self.b));
        RadicalElement { n, a, b }
    }
    fn neg(&self) -> Self {
        RadicalElement { n: self.n, a: self.a.neg(), b: self.b.neg() }
    }
    fn from_i64(v: i64) -> Self {
        Self::rational(0, RationalFunction::from_i64(v))
    }
    fn from_rational(r: &Rational) -> Self {
        Self::rational(0, RationalFunction::from_rational(r))
    }
    fn scale_i64(&self, k: i64) -> Self {
        self.scale_rational(&Rational::integer(k))
    }
}

impl Field for RadicalElement {
    /// `(a + b r)⁻¹ = (a − b r)/(a² − b² x²)`.
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.b.is_zero() {
            return Some(RadicalElement { n: self.n, a: self.a.inv()?, b: RationalFunction::zero() });
        }
        let x2 = RationalFunction::from_poly(x_squared(self.n));
        let norm = self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&x2));
        let ni = norm.inv()?;
        Some(RadicalElement { n: self.n, a: self.a.mul(&ni), b: self.b.neg().mul(&ni) })
    }
}
