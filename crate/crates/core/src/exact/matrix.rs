use super::ring::{ExactDiv, Field, Ring};
use crate::error::Error;

/// Dense rectangular matrix over one coefficient domain.
#[derive(Clone, PartialEq, Debug)]
pub struct ExactMatrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Ring> ExactMatrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols, "shape mismatch");
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols, "shape mismatch");
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(o.get(i, j)))
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul(s))
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = C::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc.add_assign(&self.get(i, j).mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Coefficients of det(λE − A), lowest degree first, by the division-free
    /// Berkowitz recurrence.
    pub fn char_poly(&self) -> Result<Vec<C>, Error> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("char_poly of {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        // v holds coefficients highest degree first.
        let mut v: Vec<C> = vec![C::one()];
        for k in 0..n {
            // column of the Toeplitz factor: 1, -a_kk, -R S, -R A S, ...
            let mut col: Vec<C> = vec![C::one(), self.get(k, k).neg()];
            let mut s: Vec<C> = (0..k).map(|i| self.get(i, k).clone()).collect();
            for _ in 0..k {
                let rs = (0..k).fold(C::zero(), |acc, j| acc.add(&self.get(k, j).mul(&s[j])));
                col.push(rs.neg());
                s = (0..k)
                    .map(|i| (0..k).fold(C::zero(), |acc, j| acc.add(&self.get(i, j).mul(&s[j]))))
                    .collect();
            }
            let mut next = vec![C::zero(); k + 2];
            for (i, out) in next.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    if i >= j && i - j < col.len() {
                        out.add_assign(&col[i - j].mul(vj));
                    }
                }
            }
            v = next;
        }
        v.reverse();
        Ok(v)
    }
}

impl<C: ExactDiv> ExactMatrix<C> {
    /// Fraction-free (Bareiss) row echelon form. Returns the transformed
    /// matrix and its pivot columns.
    pub fn bareiss_echelon(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prev = C::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let piv = m.get(r, c).clone();
            for i in r + 1..m.rows {
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = piv.mul(m.get(i, j)).sub(&f.mul(m.get(r, j)));
                    let v = if prev.is_one() { v } else { v.div_exact(&prev).expect("Bareiss division is exact") };
                    m.set(i, j, v);
                }
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn det(&self) -> Result<C, Error> {
        if self.rows != self.cols {
            return Err(Error::Shape("det of non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut prev = C::one();
        let mut sign = 1i64;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m.get(i, k).is_zero()) else {
                return Ok(C::zero());
            };
            if p != k {
                for j in 0..n {
                    m.data.swap(p * n + j, k * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = m.get(k, k).mul(m.get(i, j)).sub(&m.get(i, k).mul(m.get(k, j)));
                    m.set(i, j, v.div_exact(&prev).expect("Bareiss division is exact"));
                }
            }
            prev = m.get(k, k).clone();
        }
        let d = if n == 0 { C::one() } else { m.get(n - 1, n - 1).clone() };
        Ok(d.scale_i64(sign))
    }
}

impl<C: Field + ExactDiv> ExactMatrix<C> {
    /// Rank and a kernel basis (one vector per free column).
    pub fn exact_rank(&self) -> (usize, Vec<Vec<C>>) {
        let (e, pivots) = self.bareiss_echelon();
        let rank = pivots.len();
        let mut kernel = Vec::new();
        for f in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut x = vec![C::zero(); self.cols];
            x[f] = C::one();
            for (r, &pc) in pivots.iter().enumerate().rev() {
                let mut s = C::zero();
                for j in pc + 1..self.cols {
                    if !x[j].is_zero() {
                        s.add_assign(&e.get(r, j).mul(&x[j]));
                    }
                }
                x[pc] = s.neg().div(e.get(r, pc));
            }
            kernel.push(x);
        }
        (rank, kernel)
    }

    pub fn rank(&self) -> usize {
        self.bareiss_echelon().1.len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&i| !a.get(i, c).is_zero())?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let pi = a.get(c, c).inv()?;
            for j in 0..n {
                let v = a.get(c, j).mul(&pi);
                a.set(c, j, v);
                let v = inv.get(c, j).mul(&pi);
                inv.set(c, j, v);
            }
            for i in 0..n {
                if i == c || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..n {
                    let v = a.get(i, j).sub(&f.mul(a.get(c, j)));
                    a.set(i, j, v);
                    let v = inv.get(i, j).sub(&f.mul(inv.get(c, j)));
                    inv.set(i, j, v);
                }
            }
        }
        Some(inv)
    }
}

/// Echelon basis grown one row at a time.
#[derive(Clone, Debug, Default)]
pub struct RowSpace<C> {
    /// (pivot column, row normalized to 1 at the pivot)
    basis: Vec<(usize, Vec<C>)>,
}

impl<C: Field> RowSpace<C> {
    pub fn new() -> Self {
        RowSpace { basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Adds `row` if it is independent of the rows kept so far.
    pub fn insert(&mut self, mut row: Vec<C>) -> bool {
        for (pc, b) in &self.basis {
            if row[*pc].is_zero() {
                continue;
            }
            let f = row[*pc].clone();
            for (x, y) in row.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[pc].inv().expect("nonzero");
        let row = row.iter().map(|x| x.mul(&inv)).collect();
        self.basis.push((pc, row));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn q(v: i64) -> Rational {
        Rational::integer(v)
    }

    fn mat(rows: &[&[i64]]) -> ExactMatrix<Rational> {
        ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
    }

    #[test]
    fn row_space_matches_rank() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1], &[1, 3, 4]]);
        let mut rs = RowSpace::new();
        let kept: Vec<bool> = (0..4).map(|i| rs.insert(m.row(i).to_vec())).collect();
        assert_eq!(kept, vec![true, false, true, false]);
        assert_eq!(rs.rank(), m.rank());
    }

    #[test]
    fn rank_of_proportional_rows() {
        let m = mat(&[&[1, 2], &[2, 4]]);
        let (r, k) = m.exact_rank();
        assert_eq!(r, 1);
        assert_eq!(k, vec![vec![q(-2), q(1)]]);
    }

    #[test]
    fn identity_full_rank() {
        let (r, k) = ExactMatrix::<Rational>::identity(5).exact_rank();
        assert_eq!((r, k.len()), (5, 0));
        let (r, k) = ExactMatrix::<Rational>::zeros(0, 0).exact_rank();
        assert_eq!((r, k.len()), (0, 0));
    }

    #[test]
    fn char_poly_examples() {
        let a = mat(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]]);
        assert_eq!(a.char_poly().unwrap(), vec![q(0), q(1), q(0), q(1)]);
        let b = mat(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 2], &[0, 0, -2, 0]]);
        assert_eq!(b.char_poly().unwrap(), vec![q(4), q(0), q(5), q(0), q(1)]);
        let z = ExactMatrix::<Rational>::zeros(3, 3);
        assert_eq!(z.char_poly().unwrap(), vec![q(0), q(0), q(0), q(1)]);
        assert!(ExactMatrix::<Rational>::zeros(2, 3).char_poly().is_err());
    }

    #[test]
    fn det_and_inverse() {
        let a = mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det().unwrap(), q(18));
        let i = a.inverse().unwrap();
        assert_eq!(a.mul(&i), ExactMatrix::identity(3));
    }
}
