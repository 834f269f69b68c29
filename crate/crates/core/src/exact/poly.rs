//! Sparse multivariate polynomials over a parametric coefficient ring.

use std::collections::BTreeMap;
use std::fmt;

use super::monomial::Monomial;
use super::ring::{ExactDiv, Field, Ring};
use super::Rational;

#[derive(Clone)]
pub struct MultiPoly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> PartialEq for MultiPoly<C> {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

impl<C: Ring> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})*x{m:?}")?;
        }
        Ok(())
    }
}

impl<C: Ring> MultiPoly<C> {
    pub fn zero_in(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: C, nvars: usize) -> Self {
        Self::term(Monomial::one(), c, nvars)
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range {nvars}");
        Self::term(Monomial::var(i), C::one(), nvars)
    }

    pub fn term(m: Monomial, c: C, nvars: usize) -> Self {
        assert!(m.width() <= nvars, "monomial wider than variable table");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero_in(nvars);
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn with_nvars(mut self, nvars: usize) -> Self {
        assert!(self.terms.keys().all(|m| m.width() <= nvars));
        self.nvars = nvars;
        self
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, C> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, C> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: &C) {
        if c.is_zero() {
            return;
        }
        if m.width() > self.nvars {
            self.nvars = m.width();
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &C) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &c.mul(s));
        }
        self.nvars = self.nvars.max(other.nvars);
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m.get(i)).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero_in(self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let v = c.mul(s);
                (!v.is_zero()).then(|| (m.clone(), v))
            })
            .collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn mul_monomial(&self, mono: &Monomial, s: &C) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let v = c.mul(s);
                (!v.is_zero()).then(|| (m.mul(mono), v))
            })
            .collect();
        MultiPoly { nvars: self.nvars.max(mono.width()), terms }
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero_in(self.nvars);
        for (m, c) in &self.terms {
            let e = m.get(i);
            if e > 0 {
                out.add_term(m.with(i, e - 1), &c.scale_i64(e as i64));
            }
        }
        out
    }

    /// Evaluates every variable; `vals.len()` must cover the variables in use.
    pub fn eval(&self, vals: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&vals[i].pow(e as u32));
                }
            }
            acc.add_assign(&t);
        }
        acc
    }

    /// Substitutes each variable by a polynomial over another coefficient ring;
    /// coefficients are carried across by `lift`.
    pub fn compose<D: Ring>(
        &self,
        subs: &[MultiPoly<D>],
        lift: impl Fn(&C) -> D,
    ) -> MultiPoly<D> {
        let nv = subs.iter().map(|s| s.nvars).max().unwrap_or(0);
        let mut out = MultiPoly::<D>::zero_in(nv);
        let mut powers: Vec<Vec<MultiPoly<D>>> = vec![Vec::new(); subs.len()];
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(lift(c), nv);
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                if pw.is_empty() {
                    pw.push(MultiPoly::constant(D::one(), nv));
                }
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap().mul(&subs[i]);
                    pw.push(next);
                }
                t = t.mul(&pw[e as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::<D>::zero_in(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    /// Groups terms by the exponent of variable `i`; coefficients are free of `i`.
    pub fn coefficients_in(&self, i: usize) -> BTreeMap<u16, MultiPoly<C>> {
        let mut out: BTreeMap<u16, MultiPoly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.get(i))
                .or_insert_with(|| Self::zero_in(self.nvars))
                .add_term(m.with(i, 0), c);
        }
        out
    }

    /// Homogeneous component of the given total degree.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn fmt_with(&self, names: &[String]) -> String
    where
        C: fmt::Display,
    {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(b) if !b.contains(['+', '-']) => (true, b.to_string()),
                _ => (false, cs.clone()),
            };
            if k > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let mut factors = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            let body = if body.contains(['+', '-', ' ']) { format!("({body})") } else { body };
            if factors.is_empty() {
                s.push_str(&body);
            } else if body == "1" {
                s.push_str(&factors.join("*"));
            } else {
                s.push_str(&format!("{}*{}", body, factors.join("*")));
            }
        }
        s
    }
}

impl<C: Ring> MultiPoly<C> {
    fn combine(&self, o: &Self, sign: i64) -> Self {
        let mut out = self.clone();
        out.nvars = self.nvars.max(o.nvars);
        for (m, c) in &o.terms {
            if sign < 0 {
                out.add_term(m.clone(), &c.neg());
            } else {
                out.add_term(m.clone(), c);
            }
        }
        out
    }
}

impl<C: Ring> Ring for MultiPoly<C> {
    fn zero() -> Self {
        Self::zero_in(0)
    }
    fn one() -> Self {
        Self::constant(C::one(), 0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }
    fn add(&self, o: &Self) -> Self {
        if self.terms.len() < o.terms.len() {
            o.combine(self, 1)
        } else {
            self.combine(o, 1)
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.combine(o, -1)
    }
    fn mul(&self, o: &Self) -> Self {
        let nv = self.nvars.max(o.nvars);
        if self.terms.is_empty() || o.terms.is_empty() {
            return Self::zero_in(nv);
        }
        if o.terms.len() == 1 {
            let (m, c) = o.terms.iter().next().unwrap();
            return self.mul_monomial(m, c).with_nvars_max(nv);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return o.mul_monomial(m, c).with_nvars_max(nv);
        }
        let mut acc: std::collections::HashMap<Monomial, C> =
            std::collections::HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1.mul(c2);
                match acc.get_mut(&m) {
                    Some(v) => v.add_assign(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        MultiPoly { nvars: nv, terms }
    }
    fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        MultiPoly { nvars: self.nvars, terms }
    }
    fn from_i64(v: i64) -> Self {
        Self::constant(C::from_i64(v), 0)
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(C::from_rational(r), 0)
    }
    fn add_assign(&mut self, o: &Self) {
        self.nvars = self.nvars.max(o.nvars);
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }
    fn scale_i64(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero_in(self.nvars);
        }
        let s = C::from_i64(k);
        self.scale(&s)
    }
}

impl<C: Ring> MultiPoly<C> {
    fn with_nvars_max(mut self, nv: usize) -> Self {
        self.nvars = self.nvars.max(nv);
        self
    }
}

impl<C: Field> MultiPoly<C> {
    /// Exact division by leading-term reduction; `None` if `d` does not divide.
    pub fn div_exact_poly(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading()?;
        let dc_inv = dc.inv()?;
        if self.is_zero() {
            return Some(Self::zero_in(self.nvars));
        }
        if d.terms.len() == 1 {
            let mut q = Self::zero_in(self.nvars.max(d.nvars));
            for (m, c) in &self.terms {
                q.add_term(m.div(dm)?, &c.mul(&dc_inv));
            }
            return Some(q);
        }
        let mut r = self.clone();
        let mut q = Self::zero_in(self.nvars.max(d.nvars));
        while let Some((lm, lc)) = r.leading() {
            let qm = lm.div(dm)?;
            let qc = lc.mul(&dc_inv);
            let neg = qc.neg();
            for (m, c) in &d.terms {
                r.add_term(m.mul(&qm), &c.mul(&neg));
            }
            q.add_term(qm, &qc);
        }
        Some(q)
    }

    /// Divides through by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv().unwrap()),
            _ => self.clone(),
        }
    }
}

impl<C: Field> ExactDiv for MultiPoly<C> {
    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.div_exact_poly(other)
    }
}

impl MultiPoly<Rational> {
    pub fn from_rational_terms(nvars: usize, it: impl IntoIterator<Item = (Vec<u16>, i64)>) -> Self {
        Self::from_terms(nvars, it.into_iter().map(|(e, c)| (Monomial::from_exps(&e), Rational::integer(c))))
    }

    pub fn eval_f64(&self, vals: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64();
            for (i, &e) in m.exps().iter().enumerate() {
                t *= vals[i].powi(e as i32);
            }
            acc += t;
        }
        acc
    }
}
