//! U(so(n)) in the PBW basis: sorted words in the generators P̂_ij (i<j),
//! ordered as (1,2) < (1,3) < … < (n−1,n).

mod operators;
mod suite;

pub use operators::{
    c56_expansion, correction_bracket_coefficient, hamiltonian_operator, hamiltonian_commutator_scaled, manakov_operator,
    modified_c62, obstruction_b, sym3_cycle, Quadratic,
};
pub use suite::{verify_quantum_rigid, QuantumRigidOptions};

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use smallvec::SmallVec;

use crate::exact::{Monomial, MultiPoly, Rational, RationalFunction, Ring};
use crate::son::{dim, pair_index, pairs, StructureConstants};

pub type Word = SmallVec<[u8; 12]>;

type Expansion<T> = Rc<Vec<(Word, T)>>;

/// Σ c_w · w over sorted generator words.
#[derive(Clone, PartialEq)]
pub struct PbwElement<C> {
    n: usize,
    terms: BTreeMap<Word, C>,
}

impl<C: Ring> fmt::Debug for PbwElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<C: Ring> PbwElement<C> {
    pub fn zero(n: usize) -> Self {
        PbwElement { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: C) -> Self {
        Self::from_terms(n, [(Word::new(), c)])
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, C::one())
    }

    /// P̂_ij for any i ≠ j (P̂_ji = −P̂_ij); zero when i = j.
    pub fn generator(n: usize, i: usize, j: usize) -> Self {
        if i == j {
            return Self::zero(n);
        }
        let (lo, hi, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let w: Word = SmallVec::from_slice(&[pair_index(n, lo, hi) as u8]);
        Self::from_terms(n, [(w, C::from_i64(s))])
    }

    /// Sums coefficients of equal words; every word must already be sorted.
    pub fn from_terms(n: usize, it: impl IntoIterator<Item = (Word, C)>) -> Self {
        let mut e = Self::zero(n);
        for (w, c) in it {
            debug_assert!(w.windows(2).all(|p| p[0] <= p[1]), "unsorted word");
            e.add_term(w, &c);
        }
        e
    }

    fn add_term(&mut self, w: Word, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Word, C> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn coeff(&self, w: &[u8]) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        PbwElement { n: self.n, terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        Self::from_terms(self.n, self.terms.iter().map(|(w, c)| (w.clone(), c.mul(s))))
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> PbwElement<D> {
        PbwElement::from_terms(self.n, self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    pub fn homogeneous_part(&self, d: usize) -> Self {
        PbwElement { n: self.n, terms: self.terms.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Top-degree part as a commutative polynomial in the N left momenta.
    pub fn principal_symbol(&self) -> MultiPoly<C> {
        let nn = dim(self.n);
        let d = self.degree();
        let mut p = MultiPoly::zero_in(nn);
        for (w, c) in self.terms.iter().filter(|(w, _)| w.len() == d) {
            p.add_term(word_monomial(nn, w), c);
        }
        p
    }

    pub fn mul(&self, o: &Self) -> Self {
        algebra(self.n).mul(self, o)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names: Vec<String> = pairs(self.n).iter().map(|&(i, j)| crate::central::pair_label(i, j)).collect();
        let mut parts = Vec::new();
        // highest degree first
        let mut keys: Vec<&Word> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        for w in keys {
            let c = &self.terms[w];
            let word = w.iter().map(|&g| names[g as usize].as_str()).collect::<Vec<_>>().join("*");
            let cs = format!("{c:?}");
            parts.push(match (w.is_empty(), c.is_one()) {
                (true, _) => cs,
                (false, true) => word,
                (false, false) => format!("({cs})*{word}"),
            });
        }
        parts.join(" + ")
    }
}

fn word_monomial(nn: usize, w: &[u8]) -> Monomial {
    let mut e = vec![0u16; nn];
    for &g in w {
        e[g as usize] += 1;
    }
    Monomial::from_exps(&e)
}

/// Sorted word of a commutative monomial.
pub fn monomial_word(m: &Monomial) -> Word {
    let mut w = Word::new();
    for (g, &e) in m.exps().iter().enumerate() {
        for _ in 0..e {
            w.push(g as u8);
        }
    }
    w
}

/// Rewriting context for one n: structure constants and memo tables.
pub struct PbwAlgebra {
    n: usize,
    sc: StructureConstants,
    right: RefCell<HashMap<(Word, u8), Expansion<i64>>>,
    sym: RefCell<HashMap<Word, Expansion<Rational>>>,
}

thread_local! {
    static ALGEBRAS: RefCell<HashMap<usize, Rc<PbwAlgebra>>> = RefCell::new(HashMap::new());
}

/// Shared per-thread algebra for `n`, so memo tables survive between calls.
pub fn algebra(n: usize) -> Rc<PbwAlgebra> {
    ALGEBRAS.with(|a| a.borrow_mut().entry(n).or_insert_with(|| Rc::new(PbwAlgebra::new(n))).clone())
}

impl PbwAlgebra {
    pub fn new(n: usize) -> Self {
        assert!(dim(n) < 256, "generator index must fit in u8");
        PbwAlgebra { n, sc: StructureConstants::new(n), right: RefCell::default(), sym: RefCell::default() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Normal form of w·g for a sorted word w: u·x·g = (u·g)·x + u·[x, g] when x > g.
    pub fn right_mul(&self, w: &Word, g: u8) -> Expansion<i64> {
        if w.last().is_none_or(|&x| x <= g) {
            let mut v = w.clone();
            v.push(g);
            return Rc::new(vec![(v, 1)]);
        }
        let key = (w.clone(), g);
        if let Some(e) = self.right.borrow().get(&key) {
            return e.clone();
        }
        let x = *w.last().unwrap();
        let u: Word = SmallVec::from_slice(&w[..w.len() - 1]);
        let mut acc: HashMap<Word, i64> = HashMap::new();
        for (v, c) in self.right_mul(&u, g).iter() {
            for (v2, c2) in self.right_mul(v, x).iter() {
                *acc.entry(v2.clone()).or_insert(0) += c * c2;
            }
        }
        if let Some((s, e)) = self.sc.bracket(x as usize, g as usize) {
            for (v, c) in self.right_mul(&u, e as u8).iter() {
                *acc.entry(v.clone()).or_insert(0) += s * c;
            }
        }
        let out: Vec<(Word, i64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        let out = Rc::new(out);
        self.right.borrow_mut().insert(key, out.clone());
        out
    }

    /// Normal form of the product of a sorted word by a sequence of generators.
    pub fn word_times(&self, w: &Word, gens: &[u8]) -> HashMap<Word, i64> {
        let mut cur: HashMap<Word, i64> = HashMap::from([(w.clone(), 1)]);
        for &g in gens {
            let mut next: HashMap<Word, i64> = HashMap::with_capacity(cur.len() * 2);
            for (v, c) in &cur {
                for (v2, c2) in self.right_mul(v, g).iter() {
                    *next.entry(v2.clone()).or_insert(0) += c * c2;
                }
            }
            next.retain(|_, c| *c != 0);
            cur = next;
        }
        cur
    }

    pub fn mul<C: Ring>(&self, a: &PbwElement<C>, b: &PbwElement<C>) -> PbwElement<C> {
        assert_eq!(a.n, b.n);
        let mut acc: HashMap<Word, C> = HashMap::new();
        for (u, x) in &a.terms {
            for (v, y) in &b.terms {
                let xy = x.mul(y);
                for (w, k) in self.word_times(u, v) {
                    acc.entry(w).or_insert_with(C::zero).add_assign(&xy.scale_i64(k));
                }
            }
        }
        PbwElement::from_terms(a.n, acc)
    }

    /// AB − BA, skipping the top-degree words that cancel.
    pub fn commutator<C: Ring>(&self, a: &PbwElement<C>, b: &PbwElement<C>) -> PbwElement<C> {
        assert_eq!(a.n, b.n);
        let mut acc: HashMap<Word, C> = HashMap::new();
        for (u, x) in &a.terms {
            for (v, y) in &b.terms {
                let top = u.len() + v.len();
                let xy = x.mul(y);
                let uv = self.word_times(u, v);
                let vu = self.word_times(v, u);
                for (w, k) in uv {
                    if w.len() < top {
                        acc.entry(w).or_insert_with(C::zero).add_assign(&xy.scale_i64(k));
                    }
                }
                for (w, k) in vu {
                    if w.len() < top {
                        acc.entry(w).or_insert_with(C::zero).add_assign(&xy.scale_i64(-k));
                    }
                }
            }
        }
        PbwElement::from_terms(a.n, acc)
    }

    /// Average over the distinct orderings of the multiset `m` (a sorted word).
    pub fn sym_word(&self, m: &Word) -> Expansion<Rational> {
        if m.len() <= 1 {
            return Rc::new(vec![(m.clone(), Rational::one())]);
        }
        if let Some(e) = self.sym.borrow().get(m) {
            return e.clone();
        }
        let d = m.len() as i64;
        let mut acc: HashMap<Word, Rational> = HashMap::new();
        let mut i = 0;
        while i < m.len() {
            let g = m[i];
            let e = m.iter().filter(|&&x| x == g).count();
            let mut rest = m.clone();
            rest.remove(i);
            let w = Rational::new(e as i64, d);
            for (v, c) in self.sym_word(&rest).iter() {
                let cw = c.mul(&w);
                for (v2, k) in self.right_mul(v, g).iter() {
                    acc.entry(v2.clone()).or_insert_with(Rational::zero).add_assign(&cw.scale_i64(*k));
                }
            }
            i += e;
        }
        let out: Vec<(Word, Rational)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let out = Rc::new(out);
        self.sym.borrow_mut().insert(m.clone(), out.clone());
        out
    }

    /// Symmetrization of a polynomial in the left momenta.
    pub fn symmetrize<C: Ring>(&self, f: &MultiPoly<C>) -> PbwElement<C> {
        let mut acc: HashMap<Word, C> = HashMap::new();
        for (m, c) in f.terms() {
            for (w, r) in self.sym_word(&monomial_word(m)).iter() {
                acc.entry(w.clone()).or_insert_with(C::zero).add_assign(&c.mul(&C::from_rational(r)));
            }
        }
        PbwElement::from_terms(self.n, acc)
    }
}

/// Normal form of Σ c·(g₁g₂…g_k) for arbitrary generator sequences.
pub fn pbw_normalize<C: Ring>(n: usize, words: &[(Vec<usize>, C)]) -> PbwElement<C> {
    let alg = algebra(n);
    let mut acc: HashMap<Word, C> = HashMap::new();
    for (gens, c) in words {
        let gens: Vec<u8> = gens.iter().map(|&g| g as u8).collect();
        for (w, k) in alg.word_times(&Word::new(), &gens) {
            acc.entry(w).or_insert_with(C::zero).add_assign(&c.scale_i64(k));
        }
    }
    PbwElement::from_terms(n, acc)
}

pub fn uea_commutator<C: Ring>(a: &PbwElement<C>, b: &PbwElement<C>) -> PbwElement<C> {
    algebra(a.n).commutator(a, b)
}

/// (1/k!) Σ_π f_{π(1)}⋯f_{π(k)} for signed generators P̂_{ij}, given as index pairs.
pub fn sym_k<C: Ring>(n: usize, factors: &[(usize, usize)]) -> PbwElement<C> {
    let mut sign = 1i64;
    let mut m = Word::new();
    for &(i, j) in factors {
        if i == j {
            return PbwElement::zero(n);
        }
        if i > j {
            sign = -sign;
        }
        m.push(pair_index(n, i.min(j), i.max(j)) as u8);
    }
    m.sort_unstable();
    let alg = algebra(n);
    let s = C::from_i64(sign);
    PbwElement::from_terms(n, alg.sym_word(&m).iter().map(|(w, r)| (w.clone(), s.mul(&C::from_rational(r)))))
}

pub fn symmetrize<C: Ring>(n: usize, f: &MultiPoly<C>) -> PbwElement<C> {
    algebra(n).symmetrize(f)
}

/// Coefficient rings used by the quantum checks, with their fraction fields.
pub trait Coefficient: Ring {
    type Frac: crate::exact::Field + crate::exact::ExactDiv + fmt::Display;
    fn to_frac(&self) -> Self::Frac;
}

impl Coefficient for Rational {
    type Frac = Rational;
    fn to_frac(&self) -> Rational {
        self.clone()
    }
}

impl Coefficient for MultiPoly<Rational> {
    type Frac = RationalFunction;
    fn to_frac(&self) -> RationalFunction {
        RationalFunction::from_poly(self.clone())
    }
}
