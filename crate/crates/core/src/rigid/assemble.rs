use crate::error::{Error, Result};
use crate::exact::{MultiPoly, Rational, Ring, RowSpace};
use crate::poisson::lie::right;
use crate::poisson::{BodyPoint, LiePoissonPoly};
use crate::son::{dim, pairs, MomentSpec, SkewMatrix};

use super::{centrality_defect, manakov_integral, momentum_matrix, z_count, Counts, ManakovIndex};

type Labeled<C> = (String, LiePoissonPoly<C>);

/// C₁..C_s of the full P^L matrix, labeled `C1`, `C2`, ….
pub fn full_casimirs<C: Ring>(n: usize) -> Vec<Labeled<C>> {
    let cs = momentum_matrix(n).casimir_set().expect("skew");
    cs.into_iter()
        .enumerate()
        .map(|(i, c)| (format!("C{}", i + 1), c.map_coeffs(|x| C::from_rational(x))))
        .collect()
}

/// Casimirs of every diagonal block of P^L with equal moments, labeled
/// `C1_(45)` etc.
pub fn block_casimirs<C: Ring>(spec: &MomentSpec) -> Vec<Labeled<C>> {
    let n = spec.n();
    let p = momentum_matrix(n);
    let mut out = Vec::new();
    for block in spec.blocks() {
        if block.len() < 2 {
            continue;
        }
        let m = block.len();
        let mut sub = SkewMatrix::zero(m);
        for a in 0..m {
            for b in a + 1..m {
                sub.set(a, b, p.get(block[a], block[b]));
            }
        }
        let tag: String = if n < 10 {
            block.iter().map(|i| (i + 1).to_string()).collect()
        } else {
            block.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
        };
        for (i, c) in sub.casimir_set().expect("skew").into_iter().enumerate() {
            out.push((format!("C{}_({tag})", i + 1), c.map_coeffs(|x| C::from_rational(x))));
        }
    }
    out
}

/// Z^λ: full Casimirs, plus the block Casimirs when u > 1.
pub fn z_lambda<C: Ring>(spec: &MomentSpec) -> Vec<Labeled<C>> {
    let mut z = full_casimirs(spec.n());
    if spec.u() > 1 {
        z.extend(block_casimirs(spec));
    }
    debug_assert_eq!(z.len(), z_count(spec));
    z
}

/// Integrable set (Z^λ, selected Manakov integrals; P′ᴿ, P′^{Lλ}) at explicit λ.
#[derive(Clone, Debug)]
pub struct RigidBodySet {
    pub spec: MomentSpec,
    pub lambda: Vec<Rational>,
    pub counts: Counts,
    pub z: Vec<Labeled<Rational>>,
    pub manakov: Vec<(ManakovIndex, LiePoissonPoly<Rational>)>,
    /// P′ᴿ as 0-based pairs.
    pub right: Vec<(usize, usize)>,
    /// Block momenta P^L_ij (λᵢ = λⱼ) used after P′ᴿ when still short.
    pub left_block: Vec<(usize, usize)>,
}

fn pair_tag(t: &str, i: usize, j: usize) -> String {
    if i.max(j) >= 9 {
        format!("{t}_{},{}", i + 1, j + 1)
    } else {
        format!("{t}_{}{}", i + 1, j + 1)
    }
}

impl RigidBodySet {
    pub fn n(&self) -> usize {
        self.spec.n()
    }

    /// Central subset, all in 2N variables.
    pub fn central(&self) -> Vec<Labeled<Rational>> {
        let nv = 2 * dim(self.n());
        let mut v: Vec<Labeled<Rational>> = self.z.iter().map(|(l, p)| (l.clone(), p.clone().with_nvars(nv))).collect();
        v.extend(self.manakov.iter().map(|(i, p)| (i.label(), p.clone().with_nvars(nv))));
        v
    }

    pub fn noncentral(&self) -> Vec<Labeled<Rational>> {
        let n = self.n();
        let nv = 2 * dim(n);
        let mut v: Vec<Labeled<Rational>> = self.right.iter().map(|&(i, j)| (pair_tag("R", i, j), right(n, i, j))).collect();
        v.extend(
            self.left_block
                .iter()
                .map(|&(i, j)| (pair_tag("P", i, j), crate::poisson::lie::left::<Rational>(n, i, j).with_nvars(nv))),
        );
        v
    }

    pub fn all(&self) -> Vec<Labeled<Rational>> {
        let mut v = self.central();
        v.extend(self.noncentral());
        v
    }

    pub fn len(&self) -> usize {
        self.z.len() + self.manakov.len() + self.right.len() + self.left_block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(C1, c_3_1; R_12, R_13)`.
    pub fn render(&self) -> String {
        let c: Vec<String> = self.central().into_iter().map(|x| x.0).collect();
        let nc: Vec<String> = self.noncentral().into_iter().map(|x| x.0).collect();
        format!("({}; {})", c.join(", "), nc.join(", "))
    }
}

/// Explicit λ for the spec: its own values, or 1, 2, …, u per block when symbolic.
pub fn explicit_lambda(spec: &MomentSpec) -> Vec<Rational> {
    match spec.lambda_rational() {
        Some(v) => v,
        None => {
            let u = spec.symbol_count();
            let mu: Vec<Rational> = (1..=u as i64).map(Rational::integer).collect();
            spec.specialize(&mu).expect("distinct block values").lambda_rational().unwrap()
        }
    }
}

/// Greedy assembly at `point`: r/2 Manakov integrals on top of Z^λ, then right
/// momenta and block momenta in lexicographic order, each kept only if it
/// raises the exact Jacobian rank.
pub fn assemble_integrable_set(spec: &MomentSpec, point: &BodyPoint) -> Result<RigidBodySet> {
    let n = spec.n();
    if point.n() != n {
        return Err(Error::Shape("chart point dimension differs from the spec".into()));
    }
    let lambda = explicit_lambda(spec);
    let counts = centrality_defect(spec);
    let nn = dim(n);
    let z: Vec<Labeled<Rational>> = z_lambda(spec);
    let mut space = RowSpace::new();
    let independent = z.iter().filter(|(_, p)| space.insert(point.gradient(p))).count();
    if independent != z.len() {
        return Err(Error::Degenerate { attempts: 1, what: format!("Z^λ has rank {independent} of {} at the point", z.len()) });
    }
    let mut manakov = Vec::new();
    for idx in ManakovIndex::all(n) {
        if manakov.len() == counts.r / 2 {
            break;
        }
        let c = manakov_integral(idx, n, &lambda);
        if space.insert(point.gradient(&c)) {
            manakov.push((idx, c));
        }
    }
    if manakov.len() < counts.r / 2 {
        return Err(Error::Degenerate {
            attempts: 1,
            what: format!("only {} of {} Manakov integrals raise the rank", manakov.len(), counts.r / 2),
        });
    }
    let target = 2 * nn - counts.k_bar;
    let mut right_sel = Vec::new();
    let mut left_sel = Vec::new();
    let block = spec.block_pairs();
    let candidates = pairs(n).into_iter().map(|p| (true, p)).chain(block.into_iter().map(|p| (false, p)));
    for (is_right, (i, j)) in candidates {
        if space.rank() == target {
            break;
        }
        let f: MultiPoly<Rational> =
            if is_right { right(n, i, j) } else { crate::poisson::lie::left(n, i, j) };
        if space.insert(point.gradient(&f)) {
            if is_right {
                right_sel.push((i, j));
            } else {
                left_sel.push((i, j));
            }
        }
    }
    let cur = space.rank();
    if cur != target {
        return Err(Error::Degenerate { attempts: 1, what: format!("rank stalls at {cur}, target {target}") });
    }
    Ok(RigidBodySet { spec: spec.clone(), lambda, counts, z, manakov, right: right_sel, left_block: left_sel })
}
