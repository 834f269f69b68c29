//! Integrable sets for a particle in a central field on T*Rⁿ.

mod tree;

pub use tree::{build_recursive_sets, default_lprime, enumerate_trees, Labeled, SplitTree};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Rational, Ring};
use crate::poisson::{canonical_bracket, involution_report, phase_rank_sampled, PhasePoly};
use crate::report::{Check, Status, VerificationReport};
use crate::sample::Sampler;

pub fn pair_label(i: usize, j: usize) -> String {
    if i.max(j) >= 9 {
        format!("P_{},{}", i + 1, j + 1)
    } else {
        format!("P_{}{}", i + 1, j + 1)
    }
}

pub fn subset_label(idx: &[usize]) -> String {
    let sep = if idx.iter().any(|&i| i >= 9) { "," } else { "" };
    let s: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("P^2_({})", s.join(sep))
}

/// P_ij = xᵢpⱼ − xⱼpᵢ (0-based).
pub fn momentum(n: usize, i: usize, j: usize) -> PhasePoly {
    PhasePoly::x(n, i).mul(&PhasePoly::p(n, j)).sub(&PhasePoly::x(n, j).mul(&PhasePoly::p(n, i)))
}

pub fn momenta(n: usize) -> Vec<PhasePoly> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push(momentum(n, i, j));
        }
    }
    v
}

/// Σ P_ij² over pairs inside `idx`.
pub fn p_squared_subset(n: usize, idx: &[usize]) -> PhasePoly {
    let mut acc = PhasePoly::zero(n);
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            acc = acc.add(&momentum(n, i, j).square());
        }
    }
    acc
}

pub fn p_squared(n: usize) -> PhasePoly {
    p_squared_subset(n, &(0..n).collect::<Vec<_>>())
}

/// p².
pub fn p2(n: usize) -> PhasePoly {
    (0..n).fold(PhasePoly::zero(n), |a, i| a.add(&PhasePoly::p(n, i).square()))
}

/// x² = r².
pub fn r2(n: usize) -> PhasePoly {
    (0..n).fold(PhasePoly::zero(n), |a, i| a.add(&PhasePoly::x(n, i).square()))
}

pub fn x_dot_p(n: usize) -> PhasePoly {
    (0..n).fold(PhasePoly::zero(n), |a, i| a.add(&PhasePoly::x(n, i).mul(&PhasePoly::p(n, i))))
}

/// ½p² − α/r.
pub fn kepler_hamiltonian(n: usize, alpha: &Rational) -> PhasePoly {
    p2(n).scale(&Rational::new(1, 2)).sub(&PhasePoly::r_inv(n).scale(alpha))
}

/// Instance of H = f(p², r, P²) used to verify the rotation-invariant sets.
pub fn sample_hamiltonian(n: usize) -> PhasePoly {
    kepler_hamiltonian(n, &Rational::one()).add(&p_squared(n).scale(&Rational::new(1, 3)))
}

/// Aᵢ = Σⱼ P_ij pⱼ − αxᵢ/r.
pub fn runge_lenz(n: usize, alpha: &Rational, i: usize) -> PhasePoly {
    let mut a = PhasePoly::zero(n);
    for j in 0..n {
        if j != i {
            a = a.add(&momentum(n, i, j).mul(&PhasePoly::p(n, j)));
        }
    }
    a.sub(&PhasePoly::x(n, i).mul(&PhasePoly::r_inv(n)).scale(alpha))
}

/// L = (P₁₃..P₁ₙ, P₂₃..P₂ₙ).
fn default_l(n: usize) -> Vec<Labeled> {
    default_lprime(&(0..n).collect::<Vec<_>>())
        .into_iter()
        .map(|(i, j)| (pair_label(i, j), momentum(n, i, j)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct IntegrableSetSpec {
    pub n: usize,
    pub label: String,
    pub central: Vec<Labeled>,
    pub noncentral: Vec<Labeled>,
}

impl IntegrableSetSpec {
    pub fn k(&self) -> usize {
        self.central.len()
    }

    pub fn len(&self) -> usize {
        self.central.len() + self.noncentral.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn all(&self) -> Vec<Labeled> {
        self.central.iter().chain(&self.noncentral).cloned().collect()
    }

    /// `(H, P^2; P_13, P_23)` style rendering.
    pub fn render(&self) -> String {
        let c: Vec<&str> = self.central.iter().map(|x| x.0.as_str()).collect();
        let nc: Vec<&str> = self.noncentral.iter().map(|x| x.0.as_str()).collect();
        if nc.is_empty() {
            format!("({})", c.join(", "))
        } else {
            format!("({}; {})", c.join(", "), nc.join(", "))
        }
    }

    /// Central-vs-all involution and Jacobian rank at `points` random points.
    pub fn verify(&self, seed: u64, points: usize) -> VerificationReport {
        let mut rep = involution_report(
            &format!("{}:", self.label),
            &self.central,
            &self.all(),
            canonical_bracket,
            PhasePoly::is_zero,
            PhasePoly::render,
        );
        let fs: Vec<PhasePoly> = self.all().into_iter().map(|x| x.1).collect();
        let mut smp = Sampler::new(seed);
        for t in 0..points {
            let id = format!("{}:rank#{t}", self.label);
            let anchor = format!("Jacobian rank of {} equals {}", self.render(), fs.len());
            let c = match phase_rank_sampled(&fs, self.n, &mut smp) {
                Ok(r) if r == fs.len() => Check::new(id, anchor, Status::GenericPointCertificate),
                Ok(r) => Check::new(id, anchor, Status::Fail).with_witness(format!("rank {r}")),
                Err(e) => Check::new(id, anchor, Status::Fail).with_witness(e.to_string()),
            };
            rep.push(c);
        }
        rep
    }
}

/// H prepended to the recursive set: central = (H, Z), noncentral = L.
pub fn recursive_integrable_set(n: usize, tree: &SplitTree, h: &PhasePoly, label: &str) -> Result<IntegrableSetSpec> {
    let (z, l) = build_recursive_sets(n, tree)?;
    let mut central = vec![("H".to_string(), h.clone())];
    central.extend(z);
    Ok(IntegrableSetSpec { n, label: label.into(), central, noncentral: l })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    GenericF,
    Kepler(Rational),
    Oscillator,
    FOfP2,
}

pub fn catalog(n: usize, family: &Family) -> Result<IntegrableSetSpec> {
    if n < 2 {
        return Err(Error::Invalid("n must be at least 2".into()));
    }
    let h = |s: &str, p: PhasePoly| (s.to_string(), p);
    let (label, central, noncentral) = match family {
        Family::GenericF => {
            let central = vec![h("H", sample_hamiltonian(n)), h("P^2", p_squared(n))];
            ("generic_f", central, default_l(n))
        }
        Family::Kepler(alpha) => {
            let mut nc = vec![h("P^2", p_squared(n))];
            nc.extend(default_l(n));
            nc.push(h("A_1", runge_lenz(n, alpha, 0)));
            ("kepler", vec![h("H", kepler_hamiltonian(n, alpha))], nc)
        }
        Family::Oscillator => {
            let hi = |i: usize| {
                PhasePoly::p(n, i).square().add(&PhasePoly::x(n, i).square()).scale(&Rational::new(1, 2))
            };
            let hh = (0..n).fold(PhasePoly::zero(n), |a, i| a.add(&hi(i)));
            let mut nc: Vec<Labeled> = (0..n - 1).map(|i| (format!("H_{}", i + 1), hi(i))).collect();
            nc.extend((1..n).map(|j| (pair_label(0, j), momentum(n, 0, j))));
            ("oscillator", vec![h("H", hh)], nc)
        }
        Family::FOfP2 => {
            let mut nc = vec![h("p^2", p2(n)), h("r", PhasePoly::r(n))];
            nc.extend(default_l(n));
            ("f_of_P2", vec![h("P^2", p_squared(n))], nc)
        }
    };
    Ok(IntegrableSetSpec { n, label: format!("{label} n={n}"), central, noncentral })
}

/// {H, Aᵢ} = 0 for every i and A² = 2P²H + α².
pub fn runge_lenz_check(n: usize, alpha: &Rational) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let h = kepler_hamiltonian(n, alpha);
    let mut a2 = PhasePoly::zero(n);
    for i in 0..n {
        let a = runge_lenz(n, alpha, i);
        let b = canonical_bracket(&h, &a);
        rep.push(Check::from_bool(
            format!("runge_lenz_conserved_{}", i + 1),
            format!("{{H, A_{}}} = 0", i + 1),
            b.is_zero(),
            || b.render(),
        ));
        a2 = a2.add(&a.square());
    }
    let rhs = p_squared(n).mul(&h).scale(&Rational::integer(2)).add(&PhasePoly::constant(n, alpha.mul(alpha)));
    let d = a2.sub(&rhs);
    rep.push(Check::from_bool("runge_lenz_square", "A^2 = 2 P^2 H + alpha^2", d.is_zero(), || d.render()));
    rep
}

/// One row of the central-force tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub set: String,
    pub k: usize,
}

/// The trees behind the n = 4 and n = 5 rows, in table order.
pub fn table_trees(n: usize) -> Result<Vec<SplitTree>> {
    use SplitTree as T;
    let s = T::set;
    Ok(match n {
        4 => vec![
            s(&[0, 1, 2, 3]),
            T::split(T::stop_with(&[0, 1, 2], &[(0, 1), (0, 2)]), s(&[3])),
            T::split(T::split(s(&[0, 1]), s(&[2])), s(&[3])),
            T::split(s(&[0, 1]), s(&[2, 3])),
        ],
        5 => vec![
            s(&[0, 1, 2, 3, 4]),
            T::split(s(&[0, 1, 2, 3]), s(&[4])),
            T::split(T::split(s(&[0, 1, 2]), s(&[3])), s(&[4])),
            T::split(T::split(T::split(s(&[0, 1]), s(&[2])), s(&[3])), s(&[4])),
            T::split(T::split(s(&[0, 1]), s(&[2, 3])), s(&[4])),
            T::split(T::stop_with(&[0, 1, 2], &[(0, 1), (0, 2)]), s(&[3, 4])),
            T::split(T::split(s(&[0, 1]), s(&[2])), s(&[3, 4])),
        ],
        _ => return Err(Error::Invalid(format!("tables exist for n = 4 and n = 5, not {n}"))),
    })
}

/// Table rows for n ∈ {4, 5}, each with its verification report.
pub fn emit_tables(n: usize, seed: u64, points: usize) -> Result<Vec<(TableRow, VerificationReport)>> {
    let h = sample_hamiltonian(n);
    table_trees(n)?
        .iter()
        .enumerate()
        .map(|(r, t)| {
            let set = recursive_integrable_set(n, t, &h, &format!("n{n}row{}", r + 1))?;
            let rep = set.verify(seed.wrapping_add(r as u64), points);
            Ok((TableRow { set: set.render(), k: set.k() }, rep))
        })
        .collect()
}
