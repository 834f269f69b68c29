//! The Lie algebra so(n) in the basis D^{ij}, i<j, ordered lexicographically.
//! Indices are 0-based internally and 1-based in every rendered string.

mod moments;

pub use moments::{partitions, LambdaSource, MomentSpec};

use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, Field, Rational, Ring};
use crate::sample::Sampler;

/// Number of basis elements of so(n).
pub fn dim(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic position of the pair (i, j), i < j.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(dim(n));
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

/// Sign and basis index of D^{ab} for an arbitrary ordered pair.
pub fn signed_pair(n: usize, a: usize, b: usize) -> Option<(i64, usize)> {
    use std::cmp::Ordering::*;
    match a.cmp(&b) {
        Less => Some((1, pair_index(n, a, b))),
        Greater => Some((-1, pair_index(n, b, a))),
        Equal => None,
    }
}

/// Table of [D^a, D^b] = sign·D^c over basis indices.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    n: usize,
    pairs: Vec<(usize, usize)>,
    table: Vec<Option<(i64, usize)>>,
}

impl StructureConstants {
    pub fn new(n: usize) -> Self {
        let pairs = pairs(n);
        let nn = pairs.len();
        let mut table = vec![None; nn * nn];
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(h, k)) in pairs.iter().enumerate() {
                table[a * nn + b] = basis_bracket(n, i, j, h, k);
            }
        }
        StructureConstants { n, pairs, table }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn bracket(&self, a: usize, b: usize) -> Option<(i64, usize)> {
        self.table[a * self.pairs.len() + b]
    }
}

/// [D^{ij}, D^{hk}] = −δ_{ih}D^{jk} − δ_{jk}D^{ih} + δ_{ik}D^{jh} + δ_{jh}D^{ik}.
pub fn basis_bracket(n: usize, i: usize, j: usize, h: usize, k: usize) -> Option<(i64, usize)> {
    let mut acc: Vec<(i64, usize)> = Vec::new();
    let mut push = |s: i64, a: usize, b: usize| {
        if let Some((t, c)) = signed_pair(n, a, b) {
            if let Some(e) = acc.iter_mut().find(|e| e.1 == c) {
                e.0 += s * t;
            } else {
                acc.push((s * t, c));
            }
        }
    };
    if i == h {
        push(-1, j, k);
    }
    if j == k {
        push(-1, i, h);
    }
    if i == k {
        push(1, j, h);
    }
    if j == h {
        push(1, i, k);
    }
    acc.retain(|e| e.0 != 0);
    assert!(acc.len() <= 1, "so(n) brackets of basis elements are monomial");
    acc.pop()
}

/// Skew-symmetric matrix stored by its upper triangle.
#[derive(Clone, PartialEq, Debug)]
pub struct SkewMatrix<C> {
    n: usize,
    upper: Vec<C>,
}

impl<C: Ring> SkewMatrix<C> {
    pub fn zero(n: usize) -> Self {
        SkewMatrix { n, upper: vec![C::zero(); dim(n)] }
    }

    pub fn from_upper(n: usize, upper: Vec<C>) -> Self {
        assert_eq!(upper.len(), dim(n), "upper triangle length");
        SkewMatrix { n, upper }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn upper(&self) -> &[C] {
        &self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> C {
        match signed_pair(self.n, i, j) {
            Some((1, c)) => self.upper[c].clone(),
            Some((_, c)) => self.upper[c].neg(),
            None => C::zero(),
        }
    }

    /// Sets A_{ij} (and so A_{ji} = −value).
    pub fn set(&mut self, i: usize, j: usize, v: C) {
        match signed_pair(self.n, i, j) {
            Some((1, c)) => self.upper[c] = v,
            Some((_, c)) => self.upper[c] = v.neg(),
            None => panic!("diagonal of a skew matrix is fixed at zero"),
        }
    }

    pub fn to_dense(&self) -> ExactMatrix<C> {
        ExactMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// Upper triangle of a dense matrix; errors unless it is skew.
    pub fn from_dense(m: &ExactMatrix<C>) -> Result<Self> {
        let n = m.rows();
        if m.cols() != n {
            return Err(Error::Shape("skew matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if !m.get(i, j).add(m.get(j, i)).is_zero() {
                    return Err(Error::Invalid(format!("not skew at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        let upper = pairs(n).into_iter().map(|(i, j)| m.get(i, j).clone()).collect();
        Ok(SkewMatrix { n, upper })
    }

    pub fn add(&self, o: &Self) -> Self {
        let upper = self.upper.iter().zip(&o.upper).map(|(a, b)| a.add(b)).collect();
        SkewMatrix { n: self.n, upper }
    }

    pub fn scale(&self, s: &C) -> Self {
        SkewMatrix { n: self.n, upper: self.upper.iter().map(|a| a.mul(s)).collect() }
    }

    /// AB − BA from the structure constants.
    pub fn bracket(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::Shape(format!("so({}) vs so({})", self.n, o.n)));
        }
        let sc = StructureConstants::new(self.n);
        Ok(self.bracket_with(o, &sc))
    }

    pub fn bracket_with(&self, o: &Self, sc: &StructureConstants) -> Self {
        let mut out = Self::zero(self.n);
        for (a, x) in self.upper.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in o.upper.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                if let Some((s, c)) = sc.bracket(a, b) {
                    out.upper[c].add_assign(&x.mul(y).scale_i64(s));
                }
            }
        }
        out
    }

    /// Matrix of ad_A in the D basis: column b holds the coordinates of [A, D^b].
    pub fn ad_matrix(&self) -> ExactMatrix<C> {
        let sc = StructureConstants::new(self.n);
        let nn = dim(self.n);
        let mut m: ExactMatrix<C> = ExactMatrix::zeros(nn, nn);
        for (a, x) in self.upper.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for b in 0..nn {
                if let Some((s, c)) = sc.bracket(a, b) {
                    let v = m.get(c, b).add(&x.scale_i64(s));
                    m.set(c, b, v);
                }
            }
        }
        m
    }

    /// Casimirs C₁..C_s, s = [n/2]: det(λE − A) = λⁿ + C₁λⁿ⁻² + C₂λⁿ⁻⁴ + ….
    pub fn casimir_set(&self) -> Result<Vec<C>> {
        let cp = self.to_dense().char_poly()?;
        let n = self.n;
        for k in (1..=n).step_by(2) {
            if !cp[n - k].is_zero() {
                return Err(Error::Invalid("odd characteristic coefficient nonzero: matrix not skew".into()));
            }
        }
        Ok((1..=n / 2).map(|k| cp[n - 2 * k].clone()).collect())
    }
}

/// D^{ij} as a skew matrix; `i`, `j` 0-based.
pub fn basis_element<C: Ring>(n: usize, i: usize, j: usize) -> Result<SkewMatrix<C>> {
    if i == j || i >= n || j >= n {
        return Err(Error::Invalid(format!("no basis element D^({},{}) in so({n})", i + 1, j + 1)));
    }
    let mut m = SkewMatrix::zero(n);
    m.set(i, j, C::one());
    Ok(m)
}

impl<C: Field + crate::exact::ExactDiv> SkewMatrix<C> {
    /// σ(A) = dim ker ad_A.
    pub fn ad_kernel_dim(&self) -> usize {
        dim(self.n) - self.ad_matrix().rank()
    }

    /// (σ₁λ, σ₂λ, σ₃λ) for the block structure of `spec`.
    pub fn sigma_triple(&self, spec: &MomentSpec) -> (usize, usize, usize) {
        assert_eq!(self.n, spec.n());
        let ad = self.ad_matrix();
        let nn = dim(self.n);
        let ilam: Vec<usize> = spec.block_pairs().iter().map(|&(i, j)| pair_index(self.n, i, j)).collect();
        let m1 = ExactMatrix::from_fn(ilam.len(), nn, |r, c| ad.get(ilam[r], c).clone());
        let m2 = ExactMatrix::from_fn(ilam.len(), ilam.len(), |r, c| ad.get(ilam[r], ilam[c]).clone());
        let m3 = ExactMatrix::from_fn(nn, ilam.len(), |r, c| ad.get(r, ilam[c]).clone());
        (nn - m1.rank(), ilam.len() - m2.rank(), ilam.len() - m3.rank())
    }
}

pub fn random_skew(n: usize, s: &mut Sampler) -> SkewMatrix<Rational> {
    SkewMatrix::from_upper(n, (0..dim(n)).map(|_| s.rational()).collect())
}

/// X = (I − S)(I + S)⁻¹.
pub fn cayley_orthogonal(s: &SkewMatrix<Rational>) -> Result<ExactMatrix<Rational>> {
    let n = s.n();
    let sd = s.to_dense();
    let id: ExactMatrix<Rational> = ExactMatrix::identity(n);
    let inv = id
        .add(&sd)
        .inverse()
        .ok_or_else(|| Error::Resample("I + S singular".into()))?;
    Ok(id.sub(&sd).mul(&inv))
}

pub fn is_orthogonal(x: &ExactMatrix<Rational>) -> bool {
    x.rows() == x.cols() && x.transpose().mul(x) == ExactMatrix::identity(x.rows())
}

/// P^R = X P^L Xᵀ.
pub fn right_from_left(x: &ExactMatrix<Rational>, pl: &SkewMatrix<Rational>) -> Result<SkewMatrix<Rational>> {
    if !is_orthogonal(x) {
        return Err(Error::Invalid("X is not orthogonal".into()));
    }
    SkewMatrix::from_dense(&x.mul(&pl.to_dense()).mul(&x.transpose()))
}
