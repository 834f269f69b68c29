use std::fmt;

use super::gcd::gcd;
use super::poly::MultiPoly;
use super::ring::{ExactDiv, Field, Ring};
use super::Rational;

type P = MultiPoly<Rational>;

/// Reduced quotient of polynomials over Q with monic denominator.
#[derive(Clone, PartialEq)]
pub struct RationalFunction {
    num: P,
    den: P,
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

/// Renders with symbols l1, l2, ...
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nv = self.num.nvars().max(self.den.nvars()).max(1);
        let names: Vec<String> = (1..=nv).map(|i| format!("l{i}")).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

impl RationalFunction {
    pub fn new(num: P, den: P) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::from_poly(P::zero_in(num.nvars().max(den.nvars())));
        }
        if den.is_constant() {
            let c = den.constant_term();
            return Self::from_poly(num.scale(&c.inv().unwrap()));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact_poly(&g).unwrap(), den.div_exact_poly(&g).unwrap())
        };
        Self::normalized(num, den)
    }

    fn normalized(num: P, den: P) -> Self {
        let lc = den.leading().unwrap().1.clone();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.inv().unwrap();
            RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: P) -> Self {
        RationalFunction { num: p, den: P::one() }
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        Self::from_poly(P::var(i, nvars))
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(P::constant(c, 0))
    }

    pub fn num(&self) -> &P {
        &self.num
    }

    pub fn den(&self) -> &P {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.constant_term())
    }

    /// `None` at a pole.
    pub fn eval(&self, vals: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(vals);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(vals).mul(&d.inv().unwrap()))
    }

    pub fn derivative(&self, i: usize) -> Self {
        let dn = self.num.derivative(i);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return Self::new(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::new(num, self.den.mul(&self.den))
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(r), den: self.den.clone() }
    }

    /// Multiplies by a polynomial, cancelling against the denominator.
    pub fn mul_poly(&self, p: &P) -> Self {
        self.mul(&Self::from_poly(p.clone()))
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.den.is_one() {
            self.num.fmt_with(names)
        } else {
            format!("({})/({})", self.num.fmt_with(names), self.den.fmt_with(names))
        }
    }
}

impl Ring for RationalFunction {
    fn zero() -> Self {
        Self::from_poly(P::zero())
    }
    fn one() -> Self {
        Self::from_poly(P::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }
    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_one() {
            return RationalFunction { num: self.num.mul(&o.den).add(&o.num), den: o.den.clone() };
        }
        if o.den.is_one() {
            return RationalFunction { num: o.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        let g = gcd(&self.den, &o.den);
        if g.is_one() {
            let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            let den = self.den.mul(&o.den);
            return if num.is_zero() { Self::zero() } else { Self::normalized(num, den) };
        }
        let b1 = self.den.div_exact_poly(&g).unwrap();
        let d1 = o.den.div_exact_poly(&g).unwrap();
        let t = self.num.mul(&d1).add(&o.num.mul(&b1));
        if t.is_zero() {
            return Self::zero();
        }
        let g2 = gcd(&t, &g);
        if g2.is_one() {
            Self::normalized(t, b1.mul(&o.den))
        } else {
            let num = t.div_exact_poly(&g2).unwrap();
            let den = b1.mul(&o.den.div_exact_poly(&g2).unwrap());
            Self::normalized(num, den)
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        if let Some(c) = self.as_constant() {
            return o.scale_rational(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale_rational(&c);
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let a = if g1.is_one() { self.num.clone() } else { self.num.div_exact_poly(&g1).unwrap() };
        let d = if g1.is_one() { o.den.clone() } else { o.den.div_exact_poly(&g1).unwrap() };
        let c = if g2.is_one() { o.num.clone() } else { o.num.div_exact_poly(&g2).unwrap() };
        let b = if g2.is_one() { self.den.clone() } else { self.den.div_exact_poly(&g2).unwrap() };
        Self::normalized(a.mul(&c), b.mul(&d))
    }
    fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }
    fn from_i64(v: i64) -> Self {
        Self::constant(Rational::integer(v))
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }
    fn scale_i64(&self, k: i64) -> Self {
        self.scale_rational(&Rational::integer(k))
    }
}

impl Field for RationalFunction {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalized(self.den.clone(), self.num.clone()))
    }
}

impl ExactDiv for RationalFunction {
    fn div_exact(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> RationalFunction {
        RationalFunction::var(i, 3)
    }

    #[test]
    fn sums_cancel() {
        // 1/(x+y) + 1/(x-y) - 2x/(x^2-y^2) = 0
        let a = x(0).add(&x(1)).inv().unwrap();
        let b = x(0).sub(&x(1)).inv().unwrap();
        let c = x(0).scale_i64(2).mul(&x(0).mul(&x(0)).sub(&x(1).mul(&x(1))).inv().unwrap());
        assert!(a.add(&b).sub(&c).is_zero());
    }

    #[test]
    fn unique_representation() {
        let p = x(0).add(&x(1));
        let q = p.scale_i64(-3).mul(&x(2));
        let r = p.mul(&q.inv().unwrap());
        assert_eq!(r, x(2).scale_i64(-3).inv().unwrap());
        assert!(r.den().leading().unwrap().1.is_one());
    }

    #[test]
    fn derivative_quotient_rule() {
        let f = x(0).inv().unwrap(); // 1/x
        let d = f.derivative(0);
        assert_eq!(d, x(0).mul(&x(0)).inv().unwrap().neg());
    }
}
