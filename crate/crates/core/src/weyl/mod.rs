//! Differential operators Σ g(x, r) p̂^β with p̂ᵢ = ∂/∂xᵢ, kept normal-ordered
//! (coefficients to the left).

mod suite;

pub use suite::{quantum_central_force_suite, quantum_recursive_sets_check, QuantumSuiteOptions};

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Monomial, MultiPoly, RadicalElement, Rational, Ring};
use crate::poisson::PhasePoly;

#[derive(Clone, PartialEq)]
pub struct WeylOperator {
    /// Normal-ordered symbol: the term g·p^β stands for g∘p̂^β.
    inner: PhasePoly,
}

impl fmt::Debug for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl WeylOperator {
    pub fn zero(n: usize) -> Self {
        WeylOperator { inner: PhasePoly::zero(n) }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        WeylOperator { inner: PhasePoly::constant(n, c) }
    }

    pub fn int(n: usize, c: i64) -> Self {
        Self::constant(n, Rational::integer(c))
    }

    /// Multiplication by a function of (x, r).
    pub fn coeff(n: usize, g: RadicalElement) -> Self {
        WeylOperator { inner: PhasePoly::coeff(n, g) }
    }

    pub fn x(n: usize, i: usize) -> Self {
        WeylOperator { inner: PhasePoly::x(n, i) }
    }

    pub fn p(n: usize, i: usize) -> Self {
        WeylOperator { inner: PhasePoly::p(n, i) }
    }

    pub fn r_inv(n: usize) -> Self {
        WeylOperator { inner: PhasePoly::r_inv(n) }
    }

    /// Reads every term g·p^β of `f` as g∘p̂^β.
    pub fn from_normal_symbol(f: &PhasePoly) -> Self {
        WeylOperator { inner: f.clone() }
    }

    pub fn normal_symbol(&self) -> &PhasePoly {
        &self.inner
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        WeylOperator { inner: self.inner.add(&o.inner) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        WeylOperator { inner: self.inner.sub(&o.inner) }
    }

    pub fn neg(&self) -> Self {
        WeylOperator { inner: self.inner.neg() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        WeylOperator { inner: self.inner.scale(s) }
    }

    /// Normal-ordered product self∘o, from p̂^α∘b = Σ_γ C(α,γ) ∂^γb p̂^{α−γ}.
    pub fn compose(&self, o: &Self) -> Self {
        let n = self.n();
        let mut out: MultiPoly<RadicalElement> = MultiPoly::zero_in(n);
        let mut cache: HashMap<(usize, Monomial), RadicalElement> = HashMap::new();
        let bterms: Vec<(&Monomial, &RadicalElement)> = o.inner.poly().terms().iter().collect();
        for (alpha, a) in self.inner.poly().terms() {
            let gammas = sub_indices(alpha);
            for (bi, (beta, b)) in bterms.iter().enumerate() {
                for (gamma, binom) in &gammas {
                    let d = derivative_cached(&mut cache, bi, b, gamma);
                    if d.is_zero() {
                        continue;
                    }
                    let m = alpha.div(gamma).expect("γ ≤ α").mul(beta);
                    out.add_term(m, &a.mul(&d).scale_i64(*binom));
                }
            }
        }
        WeylOperator { inner: PhasePoly::from_parts(n, out) }
    }

    pub fn square(&self) -> Self {
        self.compose(self)
    }

    /// Leading p̂-degree part, read as a function on phase space.
    pub fn principal_symbol(&self) -> PhasePoly {
        self.inner.top_p_part()
    }

    pub fn degree(&self) -> u32 {
        self.inner.p_degree()
    }

    /// Same text as the normal symbol; `pK` stands for p̂_K acting last.
    pub fn render(&self) -> String {
        self.inner.render()
    }
}

/// All γ ≤ α with the multinomial weight Π C(αᵢ, γᵢ).
fn sub_indices(alpha: &Monomial) -> Vec<(Monomial, i64)> {
    let mut out = vec![(Vec::<u16>::new(), 1i64)];
    for &a in alpha.exps() {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for (g, w) in &out {
            for k in 0..=a {
                let mut g2 = g.clone();
                g2.push(k);
                next.push((g2, w * binomial(a as i64, k as i64)));
            }
        }
        out = next;
    }
    out.into_iter().map(|(g, w)| (Monomial::from_exps(&g), w)).collect()
}

pub(crate) fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1i64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn derivative_cached(
    cache: &mut HashMap<(usize, Monomial), RadicalElement>,
    bi: usize,
    b: &RadicalElement,
    gamma: &Monomial,
) -> RadicalElement {
    if gamma.is_one() {
        return b.clone();
    }
    if let Some(v) = cache.get(&(bi, gamma.clone())) {
        return v.clone();
    }
    // peel one derivative off the last nonzero axis
    let i = gamma.exps().iter().rposition(|&e| e > 0).unwrap();
    let lower = gamma.with(i, gamma.get(i) - 1);
    let v = derivative_cached(cache, bi, b, &lower).derive(i);
    cache.insert((bi, gamma.clone()), v.clone());
    v
}

/// A∘B − B∘A.
pub fn commutator(a: &WeylOperator, b: &WeylOperator) -> WeylOperator {
    a.compose(b).sub(&b.compose(a))
}

/// ½(A∘B + B∘A).
pub fn diamond(a: &WeylOperator, b: &WeylOperator) -> WeylOperator {
    a.compose(b).add(&b.compose(a)).scale(&Rational::new(1, 2))
}

/// Weyl symmetrization. For each term g·p^β:
/// Sym = Σ_{δ≤β} C(β,δ) 2^{−|δ|} ∂^δ g p̂^{β−δ}.
pub fn symmetrize(f: &PhasePoly) -> WeylOperator {
    let n = f.n();
    let mut out: MultiPoly<RadicalElement> = MultiPoly::zero_in(n);
    let mut cache = HashMap::new();
    for (bi, (beta, g)) in f.poly().terms().iter().enumerate() {
        for (delta, binom) in sub_indices(beta) {
            let d = derivative_cached(&mut cache, bi, g, &delta);
            if d.is_zero() {
                continue;
            }
            let w = Rational::new(binom, 1i64 << delta.degree());
            out.add_term(beta.div(&delta).unwrap(), &d.scale_rational(&w));
        }
    }
    WeylOperator { inner: PhasePoly::from_parts(n, out) }
}

/// v⁰(x) + Σ vᵏ(x) p̂ₖ for f of p-degree at most one.
pub fn standard_quantize(f: &PhasePoly) -> Result<WeylOperator> {
    if f.p_degree() > 1 {
        return Err(Error::Invalid("standard quantization needs degree ≤ 1 in p".into()));
    }
    Ok(WeylOperator::from_normal_symbol(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::central::{momentum, p_squared};

    fn q(v: i64) -> Rational {
        Rational::integer(v)
    }

    #[test]
    fn canonical_relation() {
        let n = 2;
        let w = WeylOperator::p(n, 0).compose(&WeylOperator::x(n, 0));
        let expect = WeylOperator::x(n, 0).compose(&WeylOperator::p(n, 0)).add(&WeylOperator::int(n, 1));
        assert_eq!(w, expect);
    }

    #[test]
    fn p_past_inverse_radius() {
        let n = 3;
        let w = WeylOperator::p(n, 0).compose(&WeylOperator::r_inv(n));
        let d = WeylOperator::coeff(n, RadicalElement::r_inv(n).derive(0));
        let expect = WeylOperator::r_inv(n).compose(&WeylOperator::p(n, 0)).add(&d);
        assert_eq!(w, expect);
    }

    #[test]
    fn mixed_product() {
        let n = 2;
        let (x1, x2, p1, p2) = (WeylOperator::x(n, 0), WeylOperator::x(n, 1), WeylOperator::p(n, 0), WeylOperator::p(n, 1));
        let lhs = x1.compose(&p2).compose(&x2.compose(&p1));
        let expect = x1.compose(&x2).compose(&p1).compose(&p2).add(&x1.compose(&p1));
        assert_eq!(lhs, expect);
    }

    #[test]
    fn symmetrization_examples() {
        let n = 3;
        let xp = PhasePoly::x(n, 0).mul(&PhasePoly::p(n, 0));
        let expect = WeylOperator::x(n, 0).compose(&WeylOperator::p(n, 0)).add(&WeylOperator::constant(n, Rational::new(1, 2)));
        assert_eq!(symmetrize(&xp), expect);
        let pij = momentum(n, 0, 2);
        assert_eq!(symmetrize(&pij), standard_quantize(&pij).unwrap());
        let hat_p2 = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).fold(WeylOperator::zero(n), |a, (i, j)| {
            let m = standard_quantize(&momentum(n, i, j)).unwrap();
            a.add(&m.square())
        });
        assert_eq!(hat_p2.sub(&symmetrize(&p_squared(n))), WeylOperator::constant(n, Rational::new(3, 2)));
    }

    #[test]
    fn standard_quantization_rejects_quadratic() {
        assert!(standard_quantize(&PhasePoly::p(2, 0).square()).is_err());
        assert_eq!(standard_quantize(&PhasePoly::int(2, 1)).unwrap(), WeylOperator::int(2, 1));
    }

    #[test]
    fn symmetrize_matches_ordering_average() {
        // x₁²p₁² x₂p₂ by brute-force average of all distinct factor orderings
        let n = 2;
        let factors = vec![
            WeylOperator::x(n, 0),
            WeylOperator::x(n, 0),
            WeylOperator::p(n, 0),
            WeylOperator::p(n, 0),
            WeylOperator::x(n, 1),
            WeylOperator::p(n, 1),
        ];
        let keys = [0u8, 0, 1, 1, 2, 3];
        let avg = ordering_average(&factors, &keys);
        let f = PhasePoly::x(n, 0)
            .square()
            .mul(&PhasePoly::p(n, 0).square())
            .mul(&PhasePoly::x(n, 1))
            .mul(&PhasePoly::p(n, 1));
        assert_eq!(symmetrize(&f), avg);
        let _ = q(0);
    }

    /// Average of the products over all distinct orderings of a multiset.
    pub(crate) fn ordering_average(factors: &[WeylOperator], keys: &[u8]) -> WeylOperator {
        let n = factors[0].n();
        let mut sum = WeylOperator::zero(n);
        let mut count = 0i64;
        let mut used = vec![false; factors.len()];
        fn rec(
            f: &[WeylOperator],
            keys: &[u8],
            used: &mut Vec<bool>,
            acc: WeylOperator,
            depth: usize,
            sum: &mut WeylOperator,
            count: &mut i64,
        ) {
            if depth == f.len() {
                *sum = sum.add(&acc);
                *count += 1;
                return;
            }
            let mut seen = Vec::new();
            for i in 0..f.len() {
                if used[i] || seen.contains(&keys[i]) {
                    continue;
                }
                seen.push(keys[i]);
                used[i] = true;
                rec(f, keys, used, acc.compose(&f[i]), depth + 1, sum, count);
                used[i] = false;
            }
        }
        rec(factors, keys, &mut used, WeylOperator::int(n, 1), 0, &mut sum, &mut count);
        sum.scale(&Rational::new(1, count))
    }
}
