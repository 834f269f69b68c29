use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use quasint_core::dynamics::{euler_rhs, euler_rhs_exact};
use quasint_core::exact::{ExactMatrix, Monomial, MultiPoly, Rational, RationalFunction, Ring};
use quasint_core::poisson::{canonical_bracket, LiePoisson, PhasePoly};
use quasint_core::rigid::counts_for;
use quasint_core::sample::Sampler;
use quasint_core::son::{cayley_orthogonal, dim, partitions, random_skew, MomentSpec, SkewMatrix, StructureConstants};
use quasint_core::uea::{pbw_normalize, symmetrize, uea_commutator, PbwElement};
use quasint_core::weyl::{self, WeylOperator};

fn cfg(seed: u64) -> Config {
    Config { cases: 100, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

type Terms = Vec<(Vec<usize>, i64)>;

fn terms(nv: usize, max_terms: usize, degs: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0..nv, degs), -5i64..=5), 1..=max_terms)
}

fn poly(nv: usize, t: &Terms) -> MultiPoly<Rational> {
    let mut p = MultiPoly::zero_in(nv);
    for (vars, c) in t {
        let mut e = vec![0u16; nv];
        for &v in vars {
            e[v] += 1;
        }
        p.add_term(Monomial::from_exps(&e), &Rational::integer(*c));
    }
    p
}

fn q(v: i64) -> Rational {
    Rational::integer(v)
}

// ---------- PBW rewriting oracle ----------

/// Rewrites Σ c·word until every word is non-decreasing, always fixing the
/// leftmost (or rightmost) descent first.
fn naive_normalize(n: usize, input: &[(Vec<usize>, Rational)], leftmost: bool) -> BTreeMap<Vec<usize>, Rational> {
    let sc = StructureConstants::new(n);
    let mut work: Vec<(Vec<usize>, Rational)> = input.to_vec();
    let mut out: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    while let Some((w, c)) = work.pop() {
        let mut descents = (0..w.len().saturating_sub(1)).filter(|&k| w[k] > w[k + 1]);
        let k = if leftmost { descents.next() } else { descents.last() };
        match k {
            None => {
                let e = out.entry(w).or_insert_with(Rational::zero);
                *e = e.add(&c);
            }
            Some(k) => {
                let mut swapped = w.clone();
                swapped.swap(k, k + 1);
                work.push((swapped, c.clone()));
                if let Some((s, g)) = sc.bracket(w[k], w[k + 1]) {
                    let mut v = w[..k].to_vec();
                    v.push(g);
                    v.extend_from_slice(&w[k + 2..]);
                    work.push((v, c.scale_i64(s)));
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn as_map(e: &PbwElement<Rational>) -> BTreeMap<Vec<usize>, Rational> {
    e.terms().iter().map(|(w, c)| (w.iter().map(|&g| g as usize).collect(), c.clone())).collect()
}

fn words(nn: usize) -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..nn, 0..=4), -3i64..=3), 1..=3)
}

fn pbw(n: usize, w: &[(Vec<usize>, i64)]) -> PbwElement<Rational> {
    let v: Vec<(Vec<usize>, Rational)> = w.iter().map(|(g, c)| (g.clone(), q(*c))).collect();
    pbw_normalize(n, &v)
}

proptest! {
    #![proptest_config(cfg(101))]
    #[test]
    fn pbw_confluence(n in 3usize..=5, raw in words(10)) {
        let nn = dim(n);
        let input: Vec<(Vec<usize>, Rational)> =
            raw.iter().map(|(g, c)| (g.iter().map(|&x| x % nn).collect(), q(*c))).collect();
        let left = naive_normalize(n, &input, true);
        let right = naive_normalize(n, &input, false);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(as_map(&pbw_normalize(n, &input)), left);
    }
}

proptest! {
    #![proptest_config(cfg(102))]
    #[test]
    fn pbw_associative(a in words(6), b in words(6), c in words(6)) {
        let (a, b, c) = (pbw(4, &a), pbw(4, &b), pbw(4, &c));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }
}

proptest! {
    #![proptest_config(cfg(103))]
    #[test]
    fn uea_jacobi(a in words(6), b in words(6), c in words(6)) {
        let (a, b, c) = (pbw(4, &a), pbw(4, &b), pbw(4, &c));
        let br = uea_commutator;
        let j = br(&br(&a, &b), &c).add(&br(&br(&b, &c), &a)).add(&br(&br(&c, &a), &b));
        prop_assert!(j.is_zero());
    }
}

proptest! {
    #![proptest_config(cfg(104))]
    #[test]
    fn uea_principal_symbol(df in 1usize..=3, dg in 1usize..=3, tf in terms(6, 3, 3..=3), tg in terms(6, 3, 3..=3)) {
        let n = 4;
        let cut = |t: &Terms, d: usize| -> Terms { t.iter().map(|(v, c)| (v[..d].to_vec(), *c)).collect() };
        let f = poly(6, &cut(&tf, df));
        let g = poly(6, &cut(&tg, dg));
        let top = uea_commutator(&symmetrize(n, &f), &symmetrize(n, &g)).homogeneous_part(df + dg - 1);
        prop_assert_eq!(top.principal_symbol(), LiePoisson::new(n).bracket(&f, &g));
        prop_assert_eq!(symmetrize(n, &f).principal_symbol(), f);
    }
}

// ---------- Poisson brackets ----------

proptest! {
    #![proptest_config(cfg(105))]
    #[test]
    fn lie_poisson_jacobi_and_leibniz(a in terms(6, 3, 1..=3), b in terms(6, 3, 1..=3), c in terms(6, 3, 1..=3)) {
        let lp = LiePoisson::new(4);
        let (f, g, h) = (poly(6, &a), poly(6, &b), poly(6, &c));
        let br = |x: &MultiPoly<Rational>, y: &MultiPoly<Rational>| lp.bracket(x, y);
        let j = br(&br(&f, &g), &h).add(&br(&br(&g, &h), &f)).add(&br(&br(&h, &f), &g));
        prop_assert!(j.is_zero());
        prop_assert_eq!(br(&f, &g.mul(&h)), br(&f, &g).mul(&h).add(&g.mul(&br(&f, &h))));
        prop_assert_eq!(br(&f, &g), br(&g, &f).neg());
    }
}

fn phase(n: usize, t: &Terms) -> PhasePoly {
    PhasePoly::from_xp(n, &poly(2 * n, t))
}

proptest! {
    #![proptest_config(cfg(106))]
    #[test]
    fn canonical_jacobi(a in terms(4, 3, 1..=3), b in terms(4, 3, 1..=3), c in terms(4, 3, 1..=3)) {
        let (f, g, h) = (phase(2, &a), phase(2, &b), phase(2, &c));
        let br = canonical_bracket;
        let j = br(&br(&f, &g), &h).add(&br(&br(&g, &h), &f)).add(&br(&br(&h, &f), &g));
        prop_assert!(j.is_zero());
    }
}

// ---------- Weyl operators ----------

fn op(t: &Terms) -> WeylOperator {
    WeylOperator::from_normal_symbol(&phase(2, t))
}

proptest! {
    #![proptest_config(cfg(107))]
    #[test]
    fn weyl_associative_and_jacobi(a in terms(4, 3, 0..=2), b in terms(4, 3, 0..=2), c in terms(4, 3, 0..=2)) {
        let (x, y, z) = (op(&a), op(&b), op(&c));
        prop_assert_eq!(x.compose(&y).compose(&z), x.compose(&y.compose(&z)));
        let br = weyl::commutator;
        let j = br(&br(&x, &y), &z).add(&br(&br(&y, &z), &x)).add(&br(&br(&z, &x), &y));
        prop_assert!(j.is_zero());
    }
}

proptest! {
    #![proptest_config(cfg(108))]
    #[test]
    fn weyl_symbols(a in terms(4, 3, 0..=3), b in terms(4, 3, 0..=3)) {
        let (x, y) = (op(&a), op(&b));
        prop_assert_eq!(x.compose(&y).principal_symbol(), x.principal_symbol().mul(&y.principal_symbol()));
        let f = phase(2, &a);
        prop_assert_eq!(weyl::symmetrize(&f).principal_symbol(), f.top_p_part());
    }
}

proptest! {
    #![proptest_config(cfg(109))]
    #[test]
    fn linear_quantization_is_homomorphism(
        a in terms(2, 3, 0..=2), b in terms(2, 3, 0..=2), c in terms(2, 3, 0..=2), d in terms(2, 3, 0..=2),
        i in 0usize..2, j in 0usize..2,
    ) {
        // v0(x) + v(x) p_i, coefficients in x only
        let lin = |v0: &Terms, v: &Terms, k: usize| phase(2, v0).add(&phase(2, v).mul(&PhasePoly::p(2, k)));
        let (f, g) = (lin(&a, &b, i), lin(&c, &d, j));
        let lhs = weyl::commutator(&weyl::standard_quantize(&f).unwrap(), &weyl::standard_quantize(&g).unwrap());
        prop_assert_eq!(lhs, weyl::standard_quantize(&canonical_bracket(&f, &g)).unwrap());
    }
}

// ---------- so(n) ----------

proptest! {
    #![proptest_config(cfg(110))]
    #[test]
    fn skew_jacobi(n in 2usize..=5, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let (a, b, c) = (random_skew(n, &mut s), random_skew(n, &mut s), random_skew(n, &mut s));
        let br = |x: &SkewMatrix<Rational>, y: &SkewMatrix<Rational>| x.bracket(y).unwrap();
        let j = br(&br(&a, &b), &c).add(&br(&br(&b, &c), &a)).add(&br(&br(&c, &a), &b));
        prop_assert!(j.upper().iter().all(Ring::is_zero));
    }
}

proptest! {
    #![proptest_config(cfg(111))]
    #[test]
    fn ad_kernel_is_half_n(n in 2usize..=7, seed in any::<u64>()) {
        let a = random_skew(n, &mut Sampler::new(seed));
        prop_assert_eq!(a.ad_kernel_dim(), n / 2);
    }
}

proptest! {
    #![proptest_config(cfg(112))]
    #[test]
    fn conjugation_invariance(n in 2usize..=5, seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let a = random_skew(n, &mut smp);
        let x = cayley_orthogonal(&random_skew(n, &mut smp)).unwrap();
        let b = SkewMatrix::from_dense(&x.mul(&a.to_dense()).mul(&x.transpose())).unwrap();
        prop_assert_eq!(b.casimir_set().unwrap(), a.casimir_set().unwrap());
        prop_assert_eq!(b.ad_kernel_dim(), a.ad_kernel_dim());
        prop_assert_eq!(b.to_dense().char_poly().unwrap(), a.to_dense().char_poly().unwrap());
    }
}

proptest! {
    #![proptest_config(cfg(113))]
    #[test]
    fn sigma_closed_forms(n in 2usize..=7, pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let parts = partitions(n);
        let qv = parts[pick.index(parts.len())].clone();
        let spec = MomentSpec::symbolic(qv.clone()).unwrap();
        let a = random_skew(n, &mut Sampler::new(seed));
        let (s1, s2, s3) = a.sigma_triple(&spec);
        let sigma = a.ad_kernel_dim();
        if qv.len() == 1 {
            prop_assert_eq!((s1, s2, s3), (sigma, sigma, sigma));
        } else {
            let sq: usize = qv.iter().map(|x| x * x).sum();
            let d = qv.iter().filter(|&&x| x % 2 == 1).count();
            prop_assert_eq!(s1, (n * n - sq) / 2);
            prop_assert_eq!(s2, (n - d) / 2);
            prop_assert_eq!(s3, 0);
        }
        prop_assert!(s1 >= sigma + s2 - s3);
        if n >= 3 {
            prop_assert_eq!(sigma + s2 - s3, counts_for(&qv).k);
        }
    }
}

// ---------- exact core ----------

proptest! {
    #![proptest_config(cfg(114))]
    #[test]
    fn ring_axioms(a in terms(3, 3, 0..=3), b in terms(3, 3, 0..=3), c in terms(3, 3, 0..=3)) {
        let (f, g, h) = (poly(3, &a), poly(3, &b), poly(3, &c));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
    }
}

proptest! {
    #![proptest_config(cfg(115))]
    #[test]
    fn rational_function_normalization(a in terms(2, 2, 0..=2), b in terms(2, 2, 0..=2), c in terms(2, 2, 0..=2), d in terms(2, 2, 0..=2)) {
        let (pa, pb, pc, pd) = (poly(2, &a), poly(2, &b), poly(2, &c), poly(2, &d));
        prop_assume!(!pb.is_zero() && !pd.is_zero());
        let x = RationalFunction::new(pa.clone(), pb.clone());
        let y = RationalFunction::new(pc.clone(), pd.clone());
        let z = RationalFunction::new(pa.mul(&pd).add(&pb.mul(&pc)), pb.mul(&pd));
        prop_assert!(x.add(&y).sub(&z).is_zero());
    }
}

fn minor_det(m: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> i64 {
    if rows.len() == 1 {
        return m[rows[0]][cols[0]];
    }
    let mut acc = 0;
    for (k, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let s = if k % 2 == 0 { 1 } else { -1 };
        acc += s * m[rows[0]][c] * minor_det(m, &rows[1..], &rest);
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|b| b.count_ones() as usize == k).map(|b| (0..n).filter(|i| b >> i & 1 == 1).collect()).collect()
}

fn minor_rank(m: &[Vec<i64>]) -> usize {
    let (r, c) = (m.len(), m[0].len());
    (1..=r.min(c))
        .rev()
        .find(|&k| subsets(r, k).iter().any(|rs| subsets(c, k).iter().any(|cs| minor_det(m, rs, cs) != 0)))
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(cfg(116))]
    #[test]
    fn rank_matches_minors(r in 1usize..=4, c in 1usize..=4, cells in prop::collection::vec(-2i64..=2, 16)) {
        let m: Vec<Vec<i64>> = (0..r).map(|i| cells[i * 4..i * 4 + c].to_vec()).collect();
        let em = ExactMatrix::from_rows(m.iter().map(|row| row.iter().map(|&v| q(v)).collect()).collect());
        prop_assert_eq!(em.rank(), minor_rank(&m));
    }
}

// ---------- dynamics ----------

proptest! {
    #![proptest_config(cfg(117))]
    #[test]
    fn euler_rhs_exact_vs_float(n in 3usize..=6, seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let lam = smp.distinct_positive(n, 20);
        let p = SkewMatrix::from_upper(n, (0..dim(n)).map(|_| smp.small_rational(50)).collect());
        let ex = euler_rhs_exact(&p, &lam);
        let dense: Vec<f64> = (0..n * n).map(|k| p.get(k / n, k % n).to_f64()).collect();
        let lf: Vec<f64> = lam.iter().map(Rational::to_f64).collect();
        let fl = euler_rhs(&dense, &lf);
        let scale = ex.upper().iter().map(|x| x.to_f64().abs()).fold(1e-300, f64::max);
        for i in 0..n {
            for j in 0..n {
                prop_assert!((ex.get(i, j).to_f64() - fl[i * n + j]).abs() <= 1e-13 * scale);
            }
        }
    }
}

/// Every property above, for running them as a group.
#[allow(dead_code)]
pub fn all() -> Vec<(&'static str, fn())> {
    vec![
        ("pbw_confluence", pbw_confluence),
        ("pbw_associative", pbw_associative),
        ("uea_jacobi", uea_jacobi),
        ("uea_principal_symbol", uea_principal_symbol),
        ("lie_poisson_jacobi_and_leibniz", lie_poisson_jacobi_and_leibniz),
        ("canonical_jacobi", canonical_jacobi),
        ("weyl_associative_and_jacobi", weyl_associative_and_jacobi),
        ("weyl_symbols", weyl_symbols),
        ("linear_quantization_is_homomorphism", linear_quantization_is_homomorphism),
        ("skew_jacobi", skew_jacobi),
        ("ad_kernel_is_half_n", ad_kernel_is_half_n),
        ("conjugation_invariance", conjugation_invariance),
        ("sigma_closed_forms", sigma_closed_forms),
        ("ring_axioms", ring_axioms),
        ("rational_function_normalization", rational_function_normalization),
        ("rank_matches_minors", rank_matches_minors),
        ("euler_rhs_exact_vs_float", euler_rhs_exact_vs_float),
    ]
}
