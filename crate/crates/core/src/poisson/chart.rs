use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, MultiPoly, Rational, Ring, RowSpace};
use crate::sample::{Sampler, MAX_RESAMPLES};
use crate::son::{basis_element, cayley_orthogonal, dim, pairs, random_skew, right_from_left, SkewMatrix};

use super::phase::PhasePoly;

/// Rational point of T*Rⁿ with x on a sphere of rational radius, so that
/// `r` evaluates exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub x: Vec<Rational>,
    pub p: Vec<Rational>,
    pub r: Rational,
}

impl PhasePoint {
    pub fn new(x: Vec<Rational>, p: Vec<Rational>, r: Rational) -> Result<Self> {
        if x.len() != p.len() {
            return Err(Error::Shape("x and p lengths differ".into()));
        }
        let x2 = x.iter().fold(Rational::zero(), |a, v| a.add(&v.mul(v)));
        if r.is_negative() || r.mul(&r) != x2 {
            return Err(Error::Invalid("r is not the norm of x".into()));
        }
        if x2.is_zero() {
            return Err(Error::Resample("x = 0".into()));
        }
        Ok(PhasePoint { x, p, r })
    }

    pub fn random(n: usize, s: &mut Sampler) -> Self {
        let r = s.small_positive(100);
        let x = s.sphere_point(n, &r);
        let p = (0..n).map(|_| s.rational()).collect();
        PhasePoint { x, p, r }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

/// Row of ∂f/∂x then ∂f/∂p at the point.
pub fn phase_gradient(f: &PhasePoly, pt: &PhasePoint) -> Result<Vec<Rational>> {
    let n = f.n();
    let mut row = Vec::with_capacity(2 * n);
    for i in 0..n {
        row.push(f.derivative_x(i).eval(&pt.x, &pt.p, &pt.r)?);
    }
    for i in 0..n {
        row.push(f.derivative_p(i).eval(&pt.x, &pt.p, &pt.r)?);
    }
    Ok(row)
}

pub fn phase_jacobian(fs: &[PhasePoly], pt: &PhasePoint) -> Result<ExactMatrix<Rational>> {
    let rows = fs.iter().map(|f| phase_gradient(f, pt)).collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(ExactMatrix::zeros(0, 2 * pt.n()));
    }
    Ok(ExactMatrix::from_rows(rows))
}

/// Exact rank of the Jacobian of `fs` at `pt`.
pub fn phase_jacobian_rank(fs: &[PhasePoly], pt: &PhasePoint) -> Result<usize> {
    Ok(phase_jacobian(fs, pt)?.rank())
}

/// Rank at `pt`, resampling the point when it hits a pole.
pub fn phase_rank_sampled(fs: &[PhasePoly], n: usize, s: &mut Sampler) -> Result<usize> {
    for _ in 0..MAX_RESAMPLES {
        let pt = PhasePoint::random(n, s);
        match phase_jacobian_rank(fs, &pt) {
            Err(Error::Resample(_)) => continue,
            r => return r,
        }
    }
    Err(Error::Degenerate { attempts: MAX_RESAMPLES, what: "phase-space point".into() })
}

/// Point of T*SO(n) in the chart (P^L, S) with X = (I−S)(I+S)⁻¹.
#[derive(Clone, Debug)]
pub struct BodyPoint {
    n: usize,
    pl: SkewMatrix<Rational>,
    s: SkewMatrix<Rational>,
    x: ExactMatrix<Rational>,
    pr: SkewMatrix<Rational>,
    /// ∂(P^L, P^R)/∂(P^L, S), 2N×2N.
    jy: ExactMatrix<Rational>,
}

impl BodyPoint {
    pub fn new(pl: SkewMatrix<Rational>, s: SkewMatrix<Rational>) -> Result<Self> {
        let n = pl.n();
        if s.n() != n {
            return Err(Error::Shape("S and P^L dimensions differ".into()));
        }
        let x = cayley_orthogonal(&s)?;
        let pr = right_from_left(&x, &pl)?;
        let id: ExactMatrix<Rational> = ExactMatrix::identity(n);
        let ips_inv = id.add(&s.to_dense()).inverse().ok_or_else(|| Error::Resample("I + S singular".into()))?;
        let nn = dim(n);
        let mut jy = ExactMatrix::zeros(2 * nn, 2 * nn);
        for a in 0..nn {
            jy.set(a, a, Rational::one());
        }
        let xt = x.transpose();
        let pld = pl.to_dense();
        let i_plus_x = id.add(&x);
        for (b, &(i, j)) in pairs(n).iter().enumerate() {
            let d = basis_element::<Rational>(n, i, j)?.to_dense();
            let dpl = x.mul(&d).mul(&xt);
            let dx = i_plus_x.mul(&d).mul(&ips_inv).scale(&Rational::integer(-1));
            let t = dx.mul(&pld).mul(&xt);
            // X P dXᵀ = −(dX P Xᵀ)ᵀ since P is skew
            let ds = t.sub(&t.transpose());
            for (c, &(h, k)) in pairs(n).iter().enumerate() {
                jy.set(nn + c, b, dpl.get(h, k).clone());
                jy.set(nn + c, nn + b, ds.get(h, k).clone());
            }
        }
        Ok(BodyPoint { n, pl, s, x, pr, jy })
    }

    pub fn random(n: usize, smp: &mut Sampler) -> Result<Self> {
        for _ in 0..MAX_RESAMPLES {
            let pl = random_skew(n, smp);
            let s = SkewMatrix::from_upper(n, (0..dim(n)).map(|_| smp.small_rational(50)).collect());
            match Self::new(pl, s) {
                Err(Error::Resample(_)) => continue,
                r => return r,
            }
        }
        Err(Error::Degenerate { attempts: MAX_RESAMPLES, what: "Cayley chart point".into() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn left(&self) -> &SkewMatrix<Rational> {
        &self.pl
    }

    pub fn right(&self) -> &SkewMatrix<Rational> {
        &self.pr
    }

    pub fn seed(&self) -> &SkewMatrix<Rational> {
        &self.s
    }

    pub fn orthogonal(&self) -> &ExactMatrix<Rational> {
        &self.x
    }

    /// (P^L, P^R) values in variable order.
    pub fn y(&self) -> Vec<Rational> {
        let mut v = self.pl.upper().to_vec();
        v.extend_from_slice(self.pr.upper());
        v
    }

    pub fn chart_jacobian(&self) -> &ExactMatrix<Rational> {
        &self.jy
    }

    /// Gradient of `f` in the chart coordinates.
    pub fn gradient(&self, f: &MultiPoly<Rational>) -> Vec<Rational> {
        let nn = dim(self.n);
        let y = self.y();
        let gy: Vec<Rational> = (0..2 * nn)
            .map(|a| if a < f.nvars() { f.derivative(a).eval(&y) } else { Rational::zero() })
            .collect();
        (0..2 * nn)
            .map(|c| {
                let mut acc = Rational::zero();
                for (a, g) in gy.iter().enumerate() {
                    if !g.is_zero() {
                        acc.add_assign(&g.mul(self.jy.get(a, c)));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn jacobian(&self, fs: &[MultiPoly<Rational>]) -> ExactMatrix<Rational> {
        if fs.is_empty() {
            return ExactMatrix::zeros(0, 2 * dim(self.n));
        }
        ExactMatrix::from_rows(fs.iter().map(|f| self.gradient(f)).collect())
    }

    pub fn jacobian_rank(&self, fs: &[MultiPoly<Rational>]) -> usize {
        let mut space = RowSpace::new();
        fs.iter().filter(|f| space.insert(self.gradient(f))).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::lie::{left_momenta, right_momenta};

    #[test]
    fn phase_point_validation() {
        let q = Rational::integer;
        assert!(PhasePoint::new(vec![q(3), q(4)], vec![q(1), q(1)], q(5)).is_ok());
        assert!(PhasePoint::new(vec![q(3), q(4)], vec![q(1), q(1)], q(4)).is_err());
    }

    #[test]
    fn left_and_right_ranks() {
        let mut s = Sampler::new(11);
        for n in 2..=4 {
            let pt = BodyPoint::random(n, &mut s).unwrap();
            let nn = dim(n);
            let l: Vec<MultiPoly<Rational>> = left_momenta(n);
            let r: Vec<MultiPoly<Rational>> = right_momenta(n);
            assert_eq!(pt.jacobian_rank(&l), nn);
            assert_eq!(pt.jacobian_rank(&r), nn);
            let mut all = l.clone();
            all.extend(r);
            assert_eq!(pt.jacobian_rank(&all), 2 * nn - n / 2);
        }
    }

    #[test]
    fn chart_derivative_matches_difference_quotient() {
        // P^R is polynomial in P^L, so the P^L columns are exact; check one S column
        // against the symmetric difference quotient, which is exact to O(h²).
        let n = 3;
        let mut smp = Sampler::new(5);
        let pt = BodyPoint::random(n, &mut smp).unwrap();
        let h = Rational::new(1, 1_000_000);
        let shift = |sgn: i64| {
            let mut s = pt.seed().clone();
            let v = s.get(0, 2).add(&h.scale_i64(sgn));
            s.set(0, 2, v);
            BodyPoint::new(pt.left().clone(), s).unwrap()
        };
        let (a, b) = (shift(1), shift(-1));
        let nn = dim(n);
        for c in 0..nn {
            let dq = a.right().upper()[c].sub(&b.right().upper()[c]).mul(&h.scale_i64(2).recip());
            let exact = pt.chart_jacobian().get(nn + c, nn + 1).clone();
            assert!((dq.to_f64() - exact.to_f64()).abs() < 1e-6 * (1.0 + exact.to_f64().abs()));
        }
    }
}
