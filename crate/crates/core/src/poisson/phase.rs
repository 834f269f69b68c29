use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Monomial, MultiPoly, Rational, RadicalElement, RationalFunction, Ring};

/// Function on T*Rⁿ: polynomial in p₁..p_n with coefficients in Q(x)(r).
#[derive(Clone, PartialEq)]
pub struct PhasePoly {
    n: usize,
    poly: MultiPoly<RadicalElement>,
}

impl fmt::Debug for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl PhasePoly {
    pub fn zero(n: usize) -> Self {
        PhasePoly { n, poly: MultiPoly::zero_in(n) }
    }

    pub fn from_parts(n: usize, poly: MultiPoly<RadicalElement>) -> Self {
        PhasePoly { n, poly: poly.with_nvars(n) }
    }

    pub fn coeff(n: usize, c: RadicalElement) -> Self {
        PhasePoly { n, poly: MultiPoly::constant(c, n) }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::coeff(n, RadicalElement::rational(n, RationalFunction::constant(c)))
    }

    pub fn int(n: usize, c: i64) -> Self {
        Self::constant(n, Rational::integer(c))
    }

    pub fn x(n: usize, i: usize) -> Self {
        Self::coeff(n, RadicalElement::x(n, i))
    }

    pub fn p(n: usize, i: usize) -> Self {
        PhasePoly { n, poly: MultiPoly::term(Monomial::var(i), RadicalElement::one(), n) }
    }

    pub fn r(n: usize) -> Self {
        Self::coeff(n, RadicalElement::r(n))
    }

    pub fn r_inv(n: usize) -> Self {
        Self::coeff(n, RadicalElement::r_inv(n))
    }

    /// Builds from a polynomial over Q in (x₁..x_n, p₁..p_n).
    pub fn from_xp(n: usize, q: &MultiPoly<Rational>) -> Self {
        let mut poly = MultiPoly::zero_in(n);
        for (m, c) in q.terms() {
            let xe: Vec<u16> = (0..n).map(|i| m.get(i)).collect();
            let pe: Vec<u16> = (0..n).map(|i| m.get(n + i)).collect();
            let cx = MultiPoly::term(Monomial::from_exps(&xe), c.clone(), n);
            poly.add_term(Monomial::from_exps(&pe), &RadicalElement::poly(n, cx));
        }
        PhasePoly { n, poly }
    }

    /// Inverse of [`from_xp`]; `None` when a coefficient is not polynomial.
    pub fn to_xp(&self) -> Option<MultiPoly<Rational>> {
        let n = self.n;
        let mut out = MultiPoly::zero_in(2 * n);
        for (pm, c) in self.poly.terms() {
            if !c.is_polynomial() {
                return None;
            }
            let pe: Vec<u16> = (0..n).map(|i| pm.get(i)).collect();
            for (xm, v) in c.a().num().terms() {
                let mut e: Vec<u16> = (0..n).map(|i| xm.get(i)).collect();
                e.extend_from_slice(&pe);
                out.add_term(Monomial::from_exps(&e), v);
            }
        }
        Some(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &MultiPoly<RadicalElement> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        PhasePoly { n: self.n, poly: self.poly.add(&o.poly) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        PhasePoly { n: self.n, poly: self.poly.sub(&o.poly) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        PhasePoly { n: self.n, poly: self.poly.mul(&o.poly) }
    }

    pub fn neg(&self) -> Self {
        PhasePoly { n: self.n, poly: self.poly.neg() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        PhasePoly { n: self.n, poly: self.poly.scale(&RadicalElement::from_rational(s)) }
    }

    pub fn scale_coeff(&self, s: &RadicalElement) -> Self {
        PhasePoly { n: self.n, poly: self.poly.scale(s) }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn derivative_p(&self, i: usize) -> Self {
        PhasePoly { n: self.n, poly: self.poly.derivative(i) }
    }

    pub fn derivative_x(&self, i: usize) -> Self {
        let mut poly = MultiPoly::zero_in(self.n);
        for (m, c) in self.poly.terms() {
            poly.add_term(m.clone(), &c.derive(i));
        }
        PhasePoly { n: self.n, poly }
    }

    pub fn p_degree(&self) -> u32 {
        self.poly.total_degree().unwrap_or(0)
    }

    /// Highest p-degree component.
    pub fn top_p_part(&self) -> Self {
        PhasePoly { n: self.n, poly: self.poly.homogeneous_part(self.p_degree()) }
    }

    /// Value at (x, p) with `r = √(x²)` supplied.
    pub fn eval(&self, x: &[Rational], p: &[Rational], r: &Rational) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in self.poly.terms() {
            let cv = c.eval(x, r).ok_or_else(|| Error::Resample("pole of a coefficient".into()))?;
            let mut t = cv;
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&p[i].pow(e as u32));
                }
            }
            acc.add_assign(&t);
        }
        Ok(acc)
    }

    pub fn render(&self) -> String {
        if self.poly.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.poly.terms().iter().rev() {
            let mut ps = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => ps.push(format!("p{}", i + 1)),
                    _ => ps.push(format!("p{}^{}", i + 1, e)),
                }
            }
            let cs = c.render();
            if ps.is_empty() {
                parts.push(cs);
            } else if cs == "1" {
                parts.push(ps.join("*"));
            } else {
                parts.push(format!("({cs})*{}", ps.join("*")));
            }
        }
        parts.join(" + ")
    }
}

/// {f, g} = Σᵢ (∂f/∂pᵢ ∂g/∂xᵢ − ∂f/∂xᵢ ∂g/∂pᵢ), so that {pᵢ, xⱼ} = δᵢⱼ.
pub fn canonical_bracket(f: &PhasePoly, g: &PhasePoly) -> PhasePoly {
    assert_eq!(f.n, g.n, "phase spaces differ");
    let n = f.n;
    let mut acc = PhasePoly::zero(n);
    for i in 0..n {
        let fp = f.derivative_p(i);
        let gp = g.derivative_p(i);
        if !fp.is_zero() {
            let gx = g.derivative_x(i);
            if !gx.is_zero() {
                acc = acc.add(&fp.mul(&gx));
            }
        }
        if !gp.is_zero() {
            let fx = f.derivative_x(i);
            if !fx.is_zero() {
                acc = acc.sub(&fx.mul(&gp));
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_sign() {
        let n = 2;
        let b = canonical_bracket(&PhasePoly::p(n, 0), &PhasePoly::x(n, 0));
        assert_eq!(b, PhasePoly::int(n, 1));
        let b = canonical_bracket(&PhasePoly::x(n, 1), &PhasePoly::p(n, 1));
        assert_eq!(b, PhasePoly::int(n, -1));
        assert!(canonical_bracket(&PhasePoly::p(n, 0), &PhasePoly::x(n, 1)).is_zero());
    }

    #[test]
    fn xp_roundtrip() {
        let n = 2;
        let f = PhasePoly::x(n, 0).mul(&PhasePoly::p(n, 1)).sub(&PhasePoly::x(n, 1).mul(&PhasePoly::p(n, 0)));
        let q = f.to_xp().unwrap();
        assert_eq!(PhasePoly::from_xp(n, &q), f);
        assert!(PhasePoly::r(n).to_xp().is_none());
    }

    #[test]
    fn radical_derivative_in_bracket() {
        // {p1, r} = x1/r
        let n = 3;
        let b = canonical_bracket(&PhasePoly::p(n, 0), &PhasePoly::r(n));
        let expect = PhasePoly::x(n, 0).mul(&PhasePoly::r_inv(n));
        assert_eq!(b, expect);
    }
}
