use crate::error::{Error, Result};
use crate::exact::{Field, Rational, Ring};
use crate::rigid::{hamiltonian, manakov_coefficient, manakov_integral, ManakovIndex};
use crate::son::pairs;

use super::{sym_k, symmetrize, uea_commutator, PbwElement};

/// A quadratic element of the commuting family: ĉ_{k,k−2}, or Ĥ^λ = −ĉ_{3/2,−1/2}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quadratic {
    Manakov(usize),
    Hamiltonian,
}

impl Quadratic {
    pub fn label(&self) -> String {
        match self {
            Quadratic::Manakov(k) => format!("c_{}_{}", k, k - 2),
            Quadratic::Hamiltonian => "H".into(),
        }
    }

    /// a^{ij}; for Ĥ this is a^{ij}_{3/2,−1/2} = 1/(λᵢ+λⱼ) and the overall sign is applied by the caller.
    fn a<F: Field>(&self, lam: &[F], i: usize, j: usize) -> F {
        match self {
            Quadratic::Manakov(k) => manakov_coefficient(ManakovIndex { k: *k, l: 1 }, &[i, j], lam).unwrap(),
            Quadratic::Hamiltonian => F::one().div(&lam[i].add(&lam[j])),
        }
    }
}

/// ĉ_{k,k−2l}: symmetrization of the classical Manakov integral.
pub fn manakov_operator<C: Ring>(idx: ManakovIndex, n: usize, lam: &[C]) -> PbwElement<C> {
    symmetrize(n, &manakov_integral(idx, n, lam))
}

/// Ĥ^λ = ½ Σ_{i<j} (P̂ij)²/(λᵢ+λⱼ).
pub fn hamiltonian_operator<C: Field>(n: usize, lam: &[C]) -> PbwElement<C> {
    symmetrize(n, &hamiltonian(n, lam))
}

/// (D·[Ĥ^λ, x], D) with D = Π_{i<j}(λᵢ+λⱼ), so that no division is needed.
pub fn hamiltonian_commutator_scaled<C: Ring>(n: usize, lam: &[C], x: &PbwElement<C>) -> (PbwElement<C>, C) {
    let ps = pairs(n);
    let sums: Vec<C> = ps.iter().map(|&(i, j)| lam[i].add(&lam[j])).collect();
    let d = sums.iter().fold(C::one(), |a, s| a.mul(s));
    let half = C::from_rational(&Rational::new(1, 2));
    let mut out = PbwElement::zero(n);
    for (a, &(i, j)) in ps.iter().enumerate() {
        let p = PbwElement::generator(n, i, j);
        let y = uea_commutator(&p.mul(&p), x);
        if y.is_zero() {
            continue;
        }
        let w = sums.iter().enumerate().filter(|&(b, _)| b != a).fold(half.clone(), |acc, (_, s)| acc.mul(s));
        out = out.add(&y.scale(&w));
    }
    (out, d)
}

/// Ĉ₆,₂ = ĉ₆,₂ + (5/12) Σ_{i<j} λᵢ²λⱼ² (P̂ij)².
pub fn modified_c62<C: Ring>(n: usize, lam: &[C]) -> Result<PbwElement<C>> {
    if n < 4 {
        return Err(Error::Invalid("the modified operator needs n ≥ 4".into()));
    }
    let base = manakov_operator(ManakovIndex { k: 6, l: 2 }, n, lam);
    Ok(base.add(&c62_correction(n, lam)))
}

pub(crate) fn c62_correction<C: Ring>(n: usize, lam: &[C]) -> PbwElement<C> {
    let w = C::from_rational(&Rational::new(5, 12));
    let mut out = PbwElement::zero(n);
    for (i, j) in pairs(n) {
        let p = PbwElement::generator(n, i, j);
        let c = w.mul(&lam[i]).mul(&lam[i]).mul(&lam[j]).mul(&lam[j]);
        out = out.add(&p.mul(&p).scale(&c));
    }
    out
}

/// Sym₃(P̂ij, P̂jk, P̂ki).
pub fn sym3_cycle<C: Ring>(n: usize, i: usize, j: usize, k: usize) -> PbwElement<C> {
    sym_k(n, &[(i, j), (j, k), (k, i)])
}

fn antisymmetrize<F: Field>(i: usize, j: usize, k: usize, b: impl Fn(usize, usize, usize) -> F) -> F {
    let even = b(i, j, k).add(&b(j, k, i)).add(&b(k, i, j));
    let odd = b(j, i, k).add(&b(i, k, j)).add(&b(k, j, i));
    even.sub(&odd).mul(&F::from_rational(&Rational::new(1, 6)))
}

/// b^{[ijk]} in [q̂, ĉ_{h,h−4}] = Σ_{i<j<k} b^{[ijk]} Sym₃(P̂ij, P̂jk, P̂ki), from the general
/// coefficient formula in terms of a^{ij} and a^{ijkp}_{h,h−4}. Valid for any h ≥ 4.
pub fn obstruction_b_general<F: Field>(q: Quadratic, h: usize, lam: &[F], i: usize, j: usize, k: usize) -> F {
    let n = lam.len();
    let idx = ManakovIndex { k: h, l: 2 };
    let a4 = |t: [usize; 4]| manakov_coefficient(idx, &t, lam).unwrap();
    let raw = |i: usize, j: usize, k: usize| {
        let others: Vec<usize> = (0..n).filter(|&p| p != i && p != j && p != k).collect();
        let mut first = a4([i, i, j, k]).scale_i64(2).sub(&a4([i, i, k, k]).scale_i64(3));
        for &p in &others {
            first = first.sub(&a4([i, i, k, p]));
        }
        let mut out = q.a(lam, i, j).mul(&first);
        for &p in &others {
            out = out.add(&q.a(lam, k, p).mul(&a4([i, i, j, k]).sub(&a4([i, i, j, p]))));
        }
        out
    };
    let b = antisymmetrize(i, j, k, raw);
    match q {
        Quadratic::Manakov(_) => b,
        Quadratic::Hamiltonian => b.neg(),
    }
}

/// Closed forms of b^{[ijk]} for h ∈ {5, 6}: zero for h = 5,
/// (5/6)[λᵢ^{2(l−1)}(λⱼ²−λₖ²) + cyclic] for h = 6, and −(5/6)[λᵢ(λⱼ²−λₖ²) + cyclic] for Ĥ.
pub fn obstruction_b<F: Field>(q: Quadratic, h: usize, lam: &[F], i: usize, j: usize, k: usize) -> Result<F> {
    match h {
        5 => Ok(F::zero()),
        6 => {
            let (pw, s) = match q {
                Quadratic::Manakov(l) => (2 * (l as u32 - 1), 1),
                Quadratic::Hamiltonian => (1, -1),
            };
            let sq = |x: &F| x.mul(x);
            let term = |a: usize, b: usize, c: usize| lam[a].pow(pw).mul(&sq(&lam[b]).sub(&sq(&lam[c])));
            let sum = term(i, j, k).add(&term(j, k, i)).add(&term(k, i, j));
            Ok(sum.mul(&F::from_rational(&Rational::new(5 * s, 6))))
        }
        _ => Err(Error::Invalid(format!("closed-form obstruction only for h = 5, 6 (got {h})"))),
    }
}

/// b̄^{ijk} in −(1/4) Σ_{ij} α^{ij} [q̂, (P̂ij)²] = Σ_{i<j<k} b̄^{ijk} Sym₃(P̂ij, P̂jk, P̂ki).
pub fn correction_bracket_coefficient<F: Field>(
    q: Quadratic,
    alpha: impl Fn(usize, usize) -> F,
    lam: &[F],
    i: usize,
    j: usize,
    k: usize,
) -> F {
    let a = |x: usize, y: usize| q.a(lam, x, y);
    let b = alpha(j, k).sub(&alpha(i, k)).mul(&a(i, j))
        .add(&alpha(k, i).sub(&alpha(j, i)).mul(&a(j, k)))
        .add(&alpha(i, j).sub(&alpha(k, j)).mul(&a(k, i)));
    match q {
        Quadratic::Manakov(_) => b,
        Quadratic::Hamiltonian => b.neg(),
    }
}

/// −(5/6) Σ_{h,l,m} λ_l⁴λ_m² ((5/3) Sym₃(P̂hl, P̂lm, P̂mh) + Σ_{i,j} Sym₅(P̂ij, P̂jh, P̂hl, P̂lm, P̂mi)),
/// all indices running over 1..n.
pub fn c56_expansion<C: Ring>(n: usize, lam: &[C]) -> PbwElement<C> {
    let five_thirds = C::from_rational(&Rational::new(5, 3));
    let mut out = PbwElement::zero(n);
    for h in 0..n {
        for l in (0..n).filter(|&l| l != h) {
            for m in (0..n).filter(|&m| m != l && m != h) {
                let w = lam[l].pow(4).mul(&lam[m].pow(2));
                let mut inner = sym3_cycle::<C>(n, h, l, m).scale(&five_thirds);
                for i in (0..n).filter(|&i| i != m) {
                    for j in (0..n).filter(|&j| j != i && j != h) {
                        inner = inner.add(&sym_k(n, &[(i, j), (j, h), (h, l), (l, m), (m, i)]));
                    }
                }
                out = out.add(&inner.scale(&w));
            }
        }
    }
    out.scale(&C::from_rational(&Rational::new(-5, 6)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RationalFunction;

    fn q(v: i64) -> Rational {
        Rational::integer(v)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn low_degree_operators() {
        let n = 4;
        let lam = ints(&[1, 2, 3, 4]);
        let c20 = manakov_operator(ManakovIndex { k: 2, l: 1 }, n, &lam);
        let mut expect = PbwElement::zero(n);
        for (i, j) in pairs(n) {
            let p = PbwElement::<Rational>::generator(n, i, j);
            expect = expect.add(&p.mul(&p));
        }
        assert_eq!(c20, expect.scale(&Rational::new(-1, 2)));
        let h = hamiltonian_operator(n, &lam);
        assert_eq!(h.degree(), 2);
        assert_eq!(h.len(), 6);
        assert_eq!(h.coeff(&[0, 0]), Rational::new(1, 6));
    }

    #[test]
    fn c51_coefficients() {
        let n = 6;
        let lam = ints(&[1, 2, 3, 4, 5, 6]);
        let c = manakov_operator(ManakovIndex { k: 5, l: 2 }, n, &lam);
        assert_eq!(c.degree(), 4);
        let classical = manakov_integral(ManakovIndex { k: 5, l: 2 }, n, &lam);
        assert_eq!(c.principal_symbol(), classical);
        // P12 P23 P34 P41 enters with (λ₁²+λ₂²+λ₃²+λ₄²)/(4·2) from each of its 8 closed walks
        let w = |i: usize, j: usize| crate::son::pair_index(n, i, j) as u8;
        let mut word = vec![w(0, 1), w(1, 2), w(2, 3), w(0, 3)];
        word.sort_unstable();
        assert_eq!(c.coeff(&word), Rational::integer(-30));
    }

    #[test]
    fn correction_term() {
        let n = 6;
        let lam = ints(&[1, 2, 3, 4, 5, 6]);
        let corr = c62_correction(n, &lam);
        assert_eq!(corr.len(), 15);
        let mu = vec![q(2); n];
        let corr = c62_correction(n, &mu);
        let cas = manakov_operator(ManakovIndex { k: 2, l: 1 }, n, &mu);
        assert_eq!(corr, cas.scale(&Rational::new(-5 * 16, 6)));
        let full = modified_c62(n, &lam).unwrap();
        assert_eq!(full.principal_symbol(), manakov_integral(ManakovIndex { k: 6, l: 2 }, n, &lam));
    }

    #[test]
    fn obstruction_examples() {
        let lam = ints(&[1, 2, 3]);
        assert_eq!(obstruction_b(Quadratic::Hamiltonian, 6, &lam, 0, 1, 2).unwrap(), Rational::new(-5, 3));
        assert_eq!(obstruction_b(Quadratic::Manakov(2), 6, &lam, 0, 1, 2).unwrap(), Rational::zero());
        assert_eq!(obstruction_b(Quadratic::Manakov(4), 5, &lam, 0, 1, 2).unwrap(), Rational::zero());
        assert!(obstruction_b(Quadratic::Manakov(4), 4, &lam, 0, 1, 2).is_err());
    }

    #[test]
    fn general_formula_reduces_to_closed_forms() {
        let n = 6;
        let lam: Vec<RationalFunction> = (0..n).map(|i| RationalFunction::var(i, n)).collect();
        for qd in [Quadratic::Manakov(3), Quadratic::Manakov(5), Quadratic::Hamiltonian] {
            for h in [5, 6] {
                let g = obstruction_b_general(qd, h, &lam, 0, 2, 4);
                assert_eq!(g, obstruction_b(qd, h, &lam, 0, 2, 4).unwrap(), "{qd:?} h={h}");
            }
        }
    }

    #[test]
    fn bar_b_matches_b6() {
        let n = 5;
        let lam: Vec<RationalFunction> = (0..n).map(|i| RationalFunction::var(i, n)).collect();
        let alpha = |i: usize, j: usize| {
            lam[i].mul(&lam[i]).mul(&lam[j]).mul(&lam[j]).mul(&RationalFunction::from_rational(&Rational::new(5, 6)))
        };
        for qd in [Quadratic::Manakov(4), Quadratic::Hamiltonian] {
            let b = correction_bracket_coefficient(qd, alpha, &lam, 1, 2, 4);
            assert_eq!(b, obstruction_b(qd, 6, &lam, 1, 2, 4).unwrap());
        }
    }
}
