//! Euler equations on so(n) in binary64, with RK4 and invariant drift.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{MultiPoly, Rational, Ring};
use crate::rigid::{hamiltonian, manakov_integral, ManakovIndex};
use crate::sample::Sampler;
use crate::son::{dim, pair_index, pairs, MomentSpec, SkewMatrix};

/// Dense row-major skew matrix state.
#[derive(Clone, Debug)]
pub struct FlowState {
    n: usize,
    p: Vec<f64>,
    t: f64,
    lambda: Vec<f64>,
}

impl FlowState {
    pub fn new(spec: &MomentSpec, upper: &[f64]) -> Result<Self> {
        let lambda = spec.lambda_f64().ok_or_else(|| Error::Invalid("dynamics needs explicit lambda".into()))?;
        if lambda.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::Invalid("lambda must be positive".into()));
        }
        Self::from_parts(lambda, upper)
    }

    pub fn from_parts(lambda: Vec<f64>, upper: &[f64]) -> Result<Self> {
        let n = lambda.len();
        if upper.len() != dim(n) {
            return Err(Error::Shape(format!("expected {} entries, got {}", dim(n), upper.len())));
        }
        let mut p = vec![0.0; n * n];
        for (&(i, j), &v) in pairs(n).iter().zip(upper) {
            p[i * n + j] = v;
            p[j * n + i] = -v;
        }
        Ok(FlowState { n, p, t: 0.0, lambda })
    }

    pub fn from_exact(spec: &MomentSpec, s: &SkewMatrix<Rational>) -> Result<Self> {
        let up: Vec<f64> = s.upper().iter().map(Rational::to_f64).collect();
        Self::new(spec, &up)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n + j]
    }

    /// Coordinates P_ij, i < j, in lexicographic order.
    pub fn upper(&self) -> Vec<f64> {
        pairs(self.n).iter().map(|&(i, j)| self.get(i, j)).collect()
    }

    fn reskew(&mut self) {
        let n = self.n;
        for i in 0..n {
            self.p[i * n + i] = 0.0;
            for j in i + 1..n {
                let a = 0.5 * (self.p[i * n + j] - self.p[j * n + i]);
                self.p[i * n + j] = a;
                self.p[j * n + i] = -a;
            }
        }
    }
}

/// Ṗ = {P, H^λ}: Ṗ_ij = −(λᵢ−λⱼ) Σₖ P_ik P_kj / ((λᵢ+λₖ)(λₖ+λⱼ)). Dense, row-major.
pub fn euler_rhs(p: &[f64], lam: &[f64]) -> Vec<f64> {
    let n = lam.len();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let mut s = 0.0;
            for k in 0..n {
                if k != i && k != j {
                    s += p[i * n + k] * p[k * n + j] / ((lam[i] + lam[k]) * (lam[k] + lam[j]));
                }
            }
            let v = -(lam[i] - lam[j]) * s;
            out[i * n + j] = v;
            out[j * n + i] = -v;
        }
    }
    out
}

/// Same right-hand side over Q.
pub fn euler_rhs_exact(p: &SkewMatrix<Rational>, lam: &[Rational]) -> SkewMatrix<Rational> {
    let n = lam.len();
    let mut out = SkewMatrix::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let mut s = Rational::zero();
            for k in (0..n).filter(|&k| k != i && k != j) {
                let d = lam[i].add(&lam[k]).mul(&lam[k].add(&lam[j]));
                s.add_assign(&p.get(i, k).mul(&p.get(k, j)).mul(&d.recip()));
            }
            out.set(i, j, lam[i].sub(&lam[j]).mul(&s).neg());
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub n: usize,
    pub lambda: Vec<f64>,
    pub times: Vec<f64>,
    /// Upper-triangle coordinates per sample.
    pub states: Vec<Vec<f64>>,
}

fn axpy(y: &[f64], a: f64, x: &[f64]) -> Vec<f64> {
    y.iter().zip(x).map(|(y, x)| y + a * x).collect()
}

/// Classical RK4 with re-skewing after each step; samples every `stride` steps plus the last.
pub fn integrate(state: &FlowState, dt: f64, steps: usize, stride: usize) -> Result<Trajectory> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Invalid(format!("dt must be positive, got {dt}")));
    }
    let stride = stride.max(1);
    let mut s = state.clone();
    let lam = s.lambda.clone();
    let mut tr = Trajectory { n: s.n, lambda: lam.clone(), times: vec![s.t], states: vec![s.upper()] };
    for step in 1..=steps {
        let k1 = euler_rhs(&s.p, &lam);
        let k2 = euler_rhs(&axpy(&s.p, dt / 2.0, &k1), &lam);
        let k3 = euler_rhs(&axpy(&s.p, dt / 2.0, &k2), &lam);
        let k4 = euler_rhs(&axpy(&s.p, dt, &k3), &lam);
        for (idx, v) in s.p.iter_mut().enumerate() {
            *v += dt / 6.0 * (k1[idx] + 2.0 * k2[idx] + 2.0 * k3[idx] + k4[idx]);
        }
        s.reskew();
        s.t = state.t + step as f64 * dt;
        if s.p.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(step));
        }
        if step % stride == 0 || step == steps {
            tr.times.push(s.t);
            tr.states.push(s.upper());
        }
    }
    Ok(tr)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Drift {
    pub label: String,
    pub initial: f64,
    pub drift: f64,
}

pub type Invariant = (String, MultiPoly<Rational>);

/// H^λ and every c_{k,k−2l} for explicit λ.
pub fn standard_invariants(lam: &[Rational]) -> Vec<Invariant> {
    let n = lam.len();
    let mut v = vec![("H".to_string(), hamiltonian(n, lam))];
    v.extend(ManakovIndex::all(n).into_iter().map(|idx| (idx.label(), manakov_integral(idx, n, lam))));
    v
}

/// The coordinate P_{i+1,j+1}, conserved only in degenerate cases.
pub fn coordinate(n: usize, i: usize, j: usize) -> Invariant {
    (format!("P_{}_{}", i + 1, j + 1), MultiPoly::var(pair_index(n, i, j), dim(n)))
}

/// Seeded initial momentum with entries uniform in [−1, 1).
pub fn random_start(n: usize, seed: u64) -> Vec<f64> {
    let mut s = Sampler::new(seed);
    (0..dim(n)).map(|_| s.f64_unit()).collect()
}

/// max_t |I(t) − I(0)| / max(1, |I(0)|) per invariant.
pub fn conservation_report(tr: &Trajectory, invariants: &[Invariant]) -> Vec<Drift> {
    invariants
        .iter()
        .map(|(label, f)| {
            let i0 = f.eval_f64(&tr.states[0]);
            let worst = tr.states.iter().map(|s| (f.eval_f64(s) - i0).abs()).fold(0.0, f64::max);
            Drift { label: label.clone(), initial: i0, drift: worst / i0.abs().max(1.0) }
        })
        .collect()
}

/// Header `t,P_1_2,…,H,…` followed by one row per sample.
pub fn trajectory_csv(tr: &Trajectory, invariants: &[Invariant]) -> String {
    let mut out = String::from("t");
    for (i, j) in pairs(tr.n) {
        write!(out, ",P_{}_{}", i + 1, j + 1).unwrap();
    }
    for (label, _) in invariants {
        write!(out, ",{label}").unwrap();
    }
    out.push('\n');
    for (t, s) in tr.times.iter().zip(&tr.states) {
        write!(out, "{t:e}").unwrap();
        for v in s {
            write!(out, ",{v:e}").unwrap();
        }
        for (_, f) in invariants {
            write!(out, ",{:e}", f.eval_f64(s)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Max drift at dt divided by max drift at dt/2 over the same span.
pub fn halving_ratio(state: &FlowState, dt: f64, t_end: f64, invariants: &[Invariant]) -> Result<f64> {
    let run = |h: f64| -> Result<f64> {
        let steps = (t_end / h).round() as usize;
        let tr = integrate(state, h, steps, 1)?;
        Ok(conservation_report(&tr, invariants).iter().map(|d| d.drift).fold(0.0, f64::max))
    };
    Ok(run(dt)? / run(dt / 2.0)?)
}
