//! Free n-dimensional rigid body on T*SO(n): H^λ, Euler brackets, Manakov
//! integrals and the centrality/defect counts.

mod assemble;
mod suite;

pub use assemble::{assemble_integrable_set, block_casimirs, explicit_lambda, full_casimirs, z_lambda, RigidBodySet};
pub use suite::{classical_rigid_suite, LambdaMode, RigidSuiteOptions};
pub(crate) use suite::{fmt_lambda, random_lambda};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, Field, Monomial, MultiPoly, Rational, Ring};
use crate::poisson::lie::left;
use crate::poisson::LiePoissonPoly;
use crate::son::{dim, pair_index, partitions, MomentSpec, SkewMatrix};

/// c_{k,k−2l}: 2 ≤ k ≤ n, 1 ≤ l ≤ [k/2].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ManakovIndex {
    pub k: usize,
    pub l: usize,
}

impl ManakovIndex {
    pub fn new(k: usize, l: usize, n: usize) -> Result<Self> {
        if k < 2 || k > n || l == 0 || 2 * l > k {
            return Err(Error::Invalid(format!("no Manakov index (k={k}, l={l}) for n={n}")));
        }
        Ok(ManakovIndex { k, l })
    }

    /// Power of ρ, k − 2l.
    pub fn j(&self) -> usize {
        self.k - 2 * self.l
    }

    /// Degree in the momenta.
    pub fn degree(&self) -> usize {
        2 * self.l
    }

    /// c_{2m,0} does not depend on λ.
    pub fn is_casimir(&self) -> bool {
        self.j() == 0
    }

    pub fn label(&self) -> String {
        format!("c_{}_{}", self.k, self.j())
    }

    /// The complete set M in lexicographic (k, l) order.
    pub fn all(n: usize) -> Vec<ManakovIndex> {
        let mut v = Vec::new();
        for k in 2..=n {
            for l in 1..=k / 2 {
                v.push(ManakovIndex { k, l });
            }
        }
        v
    }
}

/// H^λ = ½ Σ_{i<j} (P^L_ij)²/(λᵢ+λⱼ).
pub fn hamiltonian<C: Field>(n: usize, lam: &[C]) -> LiePoissonPoly<C> {
    assert_eq!(lam.len(), n);
    let nn = dim(n);
    let half = C::from_rational(&Rational::new(1, 2));
    let mut h = MultiPoly::zero_in(nn);
    for i in 0..n {
        for j in i + 1..n {
            let c = half.div(&lam[i].add(&lam[j]));
            h.add_term(Monomial::var_pow(pair_index(n, i, j), 2), &c);
        }
    }
    h
}

/// (λᵢ−λⱼ) Σₖ P_ik P_kj / ((λᵢ+λₖ)(λₖ+λⱼ)), which equals {H^λ, P_ij}.
pub fn euler_form<C: Field>(n: usize, lam: &[C], i: usize, j: usize) -> LiePoissonPoly<C> {
    let mut acc = MultiPoly::zero_in(dim(n));
    for k in (0..n).filter(|&k| k != i && k != j) {
        let w = lam[i].sub(&lam[j]).div(&lam[i].add(&lam[k]).mul(&lam[k].add(&lam[j])));
        acc = acc.add(&left::<C>(n, i, k).mul(&left(n, k, j)).scale(&w));
    }
    acc
}

/// h_m of the given values (sum of all degree-m monomials).
fn complete_homogeneous<C: Ring>(xs: &[C], m: usize) -> C {
    let mut h = vec![C::zero(); m + 1];
    h[0] = C::one();
    for x in xs {
        for d in 1..=m {
            let t = x.mul(&h[d - 1]);
            h[d].add_assign(&t);
        }
    }
    h[m].clone()
}

/// a^{i₁…i_{2l}}_{k,k−2l} = Σ_{b₁+…+b_{2l}=k−2l} Π λ_{i_t}^{2b_t}; indices 0-based.
pub fn manakov_coefficient<C: Ring>(idx: ManakovIndex, indices: &[usize], lam: &[C]) -> Result<C> {
    if indices.len() != idx.degree() {
        return Err(Error::Invalid(format!("{} needs {} indices", idx.label(), idx.degree())));
    }
    if indices.iter().any(|&i| i >= lam.len()) {
        return Err(Error::Invalid("index out of range".into()));
    }
    let sq: Vec<C> = indices.iter().map(|&i| lam[i].mul(&lam[i])).collect();
    Ok(complete_homogeneous(&sq, idx.j()))
}

/// c_{k,k−2l} = (1/4l) Σ a^{i₁…i_{2l}} P_{i₁i₂}P_{i₂i₃}…P_{i_{2l}i₁}.
pub fn manakov_integral<C: Ring>(idx: ManakovIndex, n: usize, lam: &[C]) -> LiePoissonPoly<C> {
    assert_eq!(lam.len(), n);
    let nn = dim(n);
    let len = idx.degree();
    let sq: Vec<C> = lam.iter().map(|x| x.mul(x)).collect();
    let mut coeffs: HashMap<Vec<usize>, C> = HashMap::new();
    let mut terms: HashMap<Monomial, C> = HashMap::new();
    let mut cycle = vec![0usize; len];
    walk_cycles(n, &mut cycle, 0, &mut |c| {
        let mut key = c.to_vec();
        key.sort_unstable();
        let a = coeffs
            .entry(key)
            .or_insert_with(|| {
                let xs: Vec<C> = c.iter().map(|&i| sq[i].clone()).collect();
                complete_homogeneous(&xs, idx.j())
            })
            .clone();
        let mut exps = vec![0u16; nn];
        let mut sign = 1i64;
        for t in 0..len {
            let (a, b) = (c[t], c[(t + 1) % len]);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if a > b {
                sign = -sign;
            }
            exps[pair_index(n, lo, hi)] += 1;
        }
        terms.entry(Monomial::from_exps(&exps)).or_insert_with(C::zero).add_assign(&a.scale_i64(sign));
    });
    let scale = C::from_rational(&Rational::new(1, 4 * idx.l as i64));
    let mut out = MultiPoly::zero_in(nn);
    for (m, c) in terms {
        out.add_term(m, &c.mul(&scale));
    }
    out
}

/// Every closed walk i₁ → … → i_len → i₁ with no repeated consecutive index.
fn walk_cycles(n: usize, c: &mut Vec<usize>, t: usize, f: &mut impl FnMut(&[usize])) {
    if t == c.len() {
        if c[t - 1] != c[0] {
            f(c);
        }
        return;
    }
    for i in 0..n {
        if t > 0 && c[t - 1] == i {
            continue;
        }
        c[t] = i;
        walk_cycles(n, c, t + 1, f);
    }
}

/// Symbolic P^L as a skew matrix of variables.
pub fn momentum_matrix(n: usize) -> SkewMatrix<MultiPoly<Rational>> {
    let nn = dim(n);
    SkewMatrix::from_upper(n, (0..nn).map(|a| MultiPoly::var(a, nn)).collect())
}

/// (1/2k) Tr(P^L + Λ²ρ)^k as a polynomial in ρ, coefficients indexed by power.
pub fn generating_coefficients<C: Field>(k: usize, n: usize, lam: &[C]) -> Vec<LiePoissonPoly<C>> {
    let nn = dim(n);
    let rho = nn;
    let p = momentum_matrix(n).to_dense();
    let m = ExactMatrix::from_fn(n, n, |i, j| {
        let mut e: MultiPoly<C> = p.get(i, j).map_coeffs(|c| C::from_rational(c)).with_nvars(nn + 1);
        if i == j {
            e = e.add(&MultiPoly::term(Monomial::var(rho), lam[i].mul(&lam[i]), nn + 1));
        }
        e
    });
    let mut pow = m.clone();
    for _ in 1..k {
        pow = pow.mul(&m);
    }
    let mut tr = MultiPoly::zero_in(nn + 1);
    for i in 0..n {
        tr = tr.add(pow.get(i, i));
    }
    let tr = tr.scale(&C::from_rational(&Rational::new(1, 2 * k as i64)));
    let by_power = tr.coefficients_in(rho);
    (0..=k)
        .map(|j| by_power.get(&(j as u16)).cloned().unwrap_or_else(|| MultiPoly::zero_in(nn + 1)).with_nvars(nn))
        .collect()
}

/// (rank B^λ, k(B^λ), r(B^λ), k̄(q)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub rank_b: usize,
    pub k: usize,
    pub r: usize,
    pub k_bar: usize,
}

/// Closed-form counts for the multiplicity pattern of `spec`.
pub fn centrality_defect(spec: &MomentSpec) -> Counts {
    counts_for(spec.q())
}

/// Closed-form counts for a partition q of n.
pub fn counts_for(q: &[usize]) -> Counts {
    let n: usize = q.iter().sum();
    let nn = dim(n);
    if q.len() == 1 {
        let s = n / 2;
        return Counts { rank_b: 2 * nn - s, k: s, r: 0, k_bar: s };
    }
    let mut cross = 0;
    for (a, &x) in q.iter().enumerate() {
        for &y in &q[a + 1..] {
            cross += x * y;
        }
    }
    let d = q.iter().filter(|&&x| x % 2 == 1).count();
    let k = n - (d + 1) / 2;
    debug_assert_eq!(k, n / 2 + q.iter().map(|x| x / 2).sum::<usize>());
    let r = cross - k;
    Counts { rank_b: 2 * nn - cross, k, r, k_bar: k + r / 2 }
}

/// Counts from kernel dimensions at the point `a`: rank B = 2N − σ₁,
/// k = σ + σ₂ − σ₃ with σ = dim ker ad_A, r = 2N − rank − k.
pub fn counts_from_kernels(spec: &MomentSpec, a: &SkewMatrix<Rational>) -> Counts {
    let nn = dim(spec.n());
    let (s1, s2, s3) = a.sigma_triple(spec);
    let sigma = a.ad_kernel_dim();
    let rank_b = 2 * nn - s1;
    let k = sigma + s2 - s3;
    let r = 2 * nn - rank_b - k;
    Counts { rank_b, k, r, k_bar: k + r / 2 }
}

/// z^λ = [n/2] + Σ[qᵢ/2] for u > 1, [n/2] for u = 1.
pub fn z_count(spec: &MomentSpec) -> usize {
    let n = spec.n();
    if spec.u() == 1 {
        n / 2
    } else {
        n / 2 + spec.q().iter().map(|x| x / 2).sum::<usize>()
    }
}

/// One row of the rigid-body count table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub n: usize,
    pub q: Vec<usize>,
    pub k: usize,
    pub r: usize,
    pub k_bar: usize,
}

impl CountRow {
    pub fn from_q(q: &[usize]) -> Self {
        let c = counts_for(q);
        CountRow { n: q.iter().sum(), q: q.to_vec(), k: c.k, r: c.r, k_bar: c.k_bar }
    }

    pub fn q_label(&self) -> String {
        let s: Vec<String> = self.q.iter().map(|x| x.to_string()).collect();
        format!("({})", s.join(","))
    }
}

/// Rows for 3 ≤ n ≤ `max_n`, every partition, in table order. The standard
/// table stops at 25 rows and leaves out (2,2,2); `include_all` keeps it.
pub fn count_table(max_n: usize, include_all: bool) -> Vec<CountRow> {
    let mut rows = Vec::new();
    for n in 3..=max_n {
        for q in partitions(n) {
            if !include_all && q == [2, 2, 2] {
                continue;
            }
            rows.push(CountRow::from_q(&q));
        }
    }
    rows
}

/// The 25 rows for n ≤ 6.
pub fn table3() -> Vec<CountRow> {
    count_table(6, false)
}

/// β₂..β_n with H^λ = Σ βₖ c_{k,k−2}, solved exactly; `None` if inconsistent.
pub fn hamiltonian_in_manakov<C: Field + crate::exact::ExactDiv>(n: usize, lam: &[C]) -> Option<Vec<C>> {
    let h = hamiltonian(n, lam);
    let cs: Vec<LiePoissonPoly<C>> =
        (2..=n).map(|k| manakov_integral(ManakovIndex { k, l: 1 }, n, lam)).collect();
    let nn = dim(n);
    // one equation per P_ij² coefficient
    let rows: Vec<Vec<C>> = (0..nn)
        .map(|a| {
            let m = Monomial::var_pow(a, 2);
            let mut row: Vec<C> = cs.iter().map(|c| c.coeff(&m)).collect();
            row.push(h.coeff(&m).neg());
            row
        })
        .collect();
    let (_, ker) = ExactMatrix::from_rows(rows).exact_rank();
    let last = cs.len();
    let v = ker.into_iter().find(|v| !v[last].is_zero())?;
    let inv = v[last].inv()?;
    let beta: Vec<C> = v[..last].iter().map(|x| x.mul(&inv)).collect();
    let mut sum = MultiPoly::zero_in(nn);
    for (b, c) in beta.iter().zip(&cs) {
        sum = sum.add(&c.scale(b));
    }
    (sum == h).then_some(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RationalFunction;
    use crate::poisson::LiePoisson;

    fn q(v: i64) -> Rational {
        Rational::integer(v)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn generic(n: usize) -> Vec<RationalFunction> {
        MomentSpec::generic(n).lambda_rf()
    }

    #[test]
    fn hamiltonian_shapes() {
        let h = hamiltonian(3, &generic(3));
        assert_eq!(h.len(), 3);
        let mu = q(5);
        let h = hamiltonian(4, &vec![mu.clone(); 4]);
        let p2 = left_square_sum(4);
        assert_eq!(h, p2.scale(&Rational::new(1, 20)));
    }

    fn left_square_sum(n: usize) -> LiePoissonPoly<Rational> {
        (0..dim(n)).fold(MultiPoly::zero_in(dim(n)), |a, v| a.add(&MultiPoly::term(Monomial::var_pow(v, 2), q(1), dim(n))))
    }

    #[test]
    fn euler_brackets_symbolic() {
        for n in 3..=4 {
            let lam = generic(n);
            let h = hamiltonian(n, &lam);
            let lp = LiePoisson::new(n);
            for i in 0..n {
                for j in i + 1..n {
                    assert_eq!(lp.bracket(&h, &left(n, i, j)), euler_form(n, &lam, i, j), "n={n} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn coefficient_examples() {
        let lam = generic(4);
        let a = manakov_coefficient(ManakovIndex { k: 3, l: 1 }, &[0, 2], &lam).unwrap();
        assert_eq!(a, lam[0].mul(&lam[0]).add(&lam[2].mul(&lam[2])));
        let a = manakov_coefficient(ManakovIndex { k: 5, l: 2 }, &[0, 1, 2, 3], &lam).unwrap();
        let sum = lam.iter().fold(RationalFunction::zero(), |s, x| s.add(&x.mul(x)));
        assert_eq!(a, sum);
        let a = manakov_coefficient(ManakovIndex { k: 2, l: 1 }, &[0, 1], &lam).unwrap();
        assert!(a.is_one());
        // l = 1 closed form (λᵢ^{2(k−1)} − λⱼ^{2(k−1)})/(λᵢ² − λⱼ²)
        let (x, y) = (q(2), q(3));
        let a = manakov_coefficient(ManakovIndex { k: 5, l: 1 }, &[0, 1], &[x.clone(), y.clone()]).unwrap();
        let expect = x.pow(8).sub(&y.pow(8)).div(&x.pow(2).sub(&y.pow(2)));
        assert_eq!(a, expect);
    }

    #[test]
    fn c20_is_half_negative_square_sum() {
        let c = manakov_integral(ManakovIndex { k: 2, l: 1 }, 4, &ints(&[1, 2, 3, 4]));
        assert_eq!(c, left_square_sum(4).scale(&Rational::new(-1, 2)));
    }

    #[test]
    fn explicit_form_matches_generating_function() {
        let lam = generic(3);
        for k in 2..=3 {
            let g = generating_coefficients(k, 3, &lam);
            for l in 1..=k / 2 {
                let idx = ManakovIndex { k, l };
                assert_eq!(manakov_integral(idx, 3, &lam), g[idx.j()], "{}", idx.label());
            }
            assert!(g[k - 1].is_empty());
        }
        let lam = ints(&[1, 2, 3, 5, 7]);
        for idx in ManakovIndex::all(5) {
            let g = generating_coefficients(idx.k, 5, &lam);
            assert_eq!(manakov_integral(idx, 5, &lam), g[idx.j()], "{}", idx.label());
        }
    }

    #[test]
    fn c31_commutes_with_h_symbolic() {
        let lam = generic(3);
        let c = manakov_integral(ManakovIndex { k: 3, l: 1 }, 3, &lam);
        assert!(LiePoisson::new(3).bracket(&c, &hamiltonian(3, &lam)).is_empty());
    }

    #[test]
    fn hamiltonian_combination() {
        let beta = hamiltonian_in_manakov(3, &ints(&[1, 2, 3])).unwrap();
        assert_eq!(beta, vec![Rational::new(-5, 12), Rational::new(1, 60)]);
        assert!(hamiltonian_in_manakov(4, &generic(4)).is_some());
    }

    #[test]
    fn count_examples() {
        let c = |v: &[usize]| counts_for(v);
        assert_eq!((c(&[1, 2, 3]).k, c(&[1, 2, 3]).r, c(&[1, 2, 3]).k_bar), (5, 6, 8));
        assert_eq!((c(&[2, 2]).k, c(&[2, 2]).r, c(&[2, 2]).k_bar), (4, 0, 4));
        assert_eq!((c(&[1, 1, 1]).k, c(&[1, 1, 1]).r, c(&[1, 1, 1]).k_bar), (1, 2, 2));
        assert_eq!(c(&[2, 2, 2]), Counts { rank_b: 18, k: 6, r: 6, k_bar: 9 });
    }

    #[test]
    fn table_rows() {
        let t = table3();
        assert_eq!(t.len(), 25);
        let find = |q: &[usize]| t.iter().find(|r| r.q == q).unwrap().clone();
        let r = find(&[1, 2, 2]);
        assert_eq!((r.k, r.r, r.k_bar), (4, 4, 6));
        let r = find(&[1, 1, 1, 1, 1, 1]);
        assert_eq!((r.k, r.r, r.k_bar), (3, 12, 9));
        // the closed forms give (5, 4, 7) for (3,3) and (2, 4, 4) for (1,1,1,1)
        let r = find(&[3, 3]);
        assert_eq!((r.k, r.r, r.k_bar), (5, 4, 7));
        let r = find(&[1, 1, 1, 1]);
        assert_eq!((r.k, r.r, r.k_bar), (2, 4, 4));
        assert_eq!(count_table(6, true).len(), 26);
    }

    #[test]
    fn k_bar_closed_form() {
        for n in 2..=12 {
            for qv in partitions(n) {
                let c = counts_for(&qv);
                assert_eq!(c.r % 2, 0, "{qv:?}");
                if qv.len() > 1 {
                    let sq: usize = qv.iter().map(|x| x * x).sum();
                    let d = qv.iter().filter(|&&x| x % 2 == 1).count();
                    assert_eq!(4 * c.k_bar + 2 * ((d + 1) / 2), n * n + 2 * n - sq);
                }
            }
        }
    }

    #[test]
    fn kernel_counts_agree() {
        let mut s = crate::sample::Sampler::new(4);
        for n in 2..=6 {
            for qv in partitions(n) {
                let spec = MomentSpec::symbolic(qv.clone()).unwrap();
                let a = crate::son::random_skew(n, &mut s);
                assert_eq!(counts_from_kernels(&spec, &a), centrality_defect(&spec), "{qv:?}");
            }
        }
    }
}
