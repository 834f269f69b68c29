use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::exact::{ExactDiv, Field, Rational, Ring};
use crate::poisson::lie::{left, render, right};
use crate::poisson::{BodyPoint, LiePoisson, LiePoissonPoly};
use crate::report::{Check, Status, VerificationReport};
use crate::sample::Sampler;
use crate::son::{dim, pairs, MomentSpec};

use super::assemble::explicit_lambda;
use super::{
    assemble_integrable_set, centrality_defect, counts_from_kernels, euler_form, hamiltonian,
    hamiltonian_in_manakov, manakov_integral, z_count, z_lambda, ManakovIndex,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaMode {
    Symbolic,
    Sampled,
}

#[derive(Clone, Debug)]
pub struct RigidSuiteOptions {
    /// `None`: symbolic for n ≤ 5 and for degree ≤ 2 pairs, sampled otherwise.
    pub mode: Option<LambdaMode>,
    /// Random λ per sampled check.
    pub samples: usize,
    /// Random chart points per rank or kernel check.
    pub points: usize,
    pub seed: u64,
}

impl Default for RigidSuiteOptions {
    fn default() -> Self {
        RigidSuiteOptions { mode: None, samples: 3, points: 3, seed: 1 }
    }
}

const SYMBOLIC: &str = "symbolic lambda";

pub const C2M0_NOTE: &str = "c_{2m,0} is taken as (1/4m) Tr((P^L)^{2m}), the rho^0 coefficient of (1/2k) Tr(P^L + J^2 rho)^k";

/// Outcome of one bracket, keyed by check id.
struct Outcome {
    anchor: String,
    mode: String,
    witness: Option<String>,
}

type Items<C> = Vec<(String, usize, LiePoissonPoly<C>)>;

fn manakov_items<C: Field>(n: usize, lam: &[C]) -> Items<C> {
    let mut v = vec![("H".to_string(), 2, hamiltonian(n, lam))];
    for idx in ManakovIndex::all(n) {
        v.push((idx.label(), idx.degree(), manakov_integral(idx, n, lam)));
    }
    v
}

/// {c, H}, {c, c′} and {c, P^L_ij} for block pairs, restricted to degree
/// pairs accepted by `include`.
fn manakov_brackets<C: Field + Display>(
    spec: &MomentSpec,
    lam: &[C],
    include: &dyn Fn(usize, usize) -> bool,
    mode: &str,
    out: &mut BTreeMap<usize, (String, Outcome)>,
) {
    let n = spec.n();
    let lp = LiePoisson::new(n);
    let items = manakov_items(n, lam);
    let mut record = |ord: usize, id: String, anchor: String, v: LiePoissonPoly<C>| {
        let w = (!v.is_empty()).then(|| crate::report::truncate(&render(n, &v), 400));
        let e = out.entry(ord).or_insert((id, Outcome { anchor, mode: mode.to_string(), witness: None }));
        if e.1.witness.is_none() {
            e.1.witness = w;
        }
    };
    let mut ord = 0;
    for a in 1..items.len() {
        for b in 0..a {
            ord += 1;
            let (la, da, fa) = &items[a];
            let (lb, db, fb) = &items[b];
            if !include(*da, *db) {
                continue;
            }
            record(ord, format!("{{{la},{lb}}}"), format!("{{{la}, {lb}}} = 0"), lp.bracket(fa, fb));
        }
    }
    let block = spec.block_pairs();
    for (la, da, fa) in items.iter().skip(1) {
        ord += 1;
        if block.is_empty() || !include(*da, 1) {
            continue;
        }
        let mut acc = LiePoissonPoly::zero_in(dim(n));
        for &(i, j) in &block {
            let v = lp.bracket(fa, &left(n, i, j));
            if !v.is_empty() {
                acc = v;
                break;
            }
        }
        record(ord, format!("{{{la},P^Llambda}}"), format!("{la} commutes with every block momentum"), acc);
    }
}

fn euler_check<C: Field>(n: usize, lam: &[C]) -> Option<String> {
    let h = hamiltonian(n, lam);
    let lp = LiePoisson::new(n);
    for (i, j) in pairs(n) {
        let d = lp.bracket(&h, &left(n, i, j)).sub(&euler_form(n, lam, i, j));
        if !d.is_empty() {
            return Some(format!("pair ({},{})", i + 1, j + 1));
        }
    }
    None
}

pub(crate) fn fmt_lambda(l: &[Rational]) -> String {
    let s: Vec<String> = l.iter().map(|x| x.to_string()).collect();
    format!("lambda=({})", s.join(","))
}

pub(crate) fn random_lambda(spec: &MomentSpec, smp: &mut Sampler) -> Vec<Rational> {
    let mu = smp.distinct_positive(spec.symbol_count(), 50);
    spec.specialize(&mu).expect("distinct").lambda_rational().unwrap()
}

/// Exact classical rigid-body checks for the moments in `spec`.
pub fn classical_rigid_suite(spec: &MomentSpec, opts: &RigidSuiteOptions) -> VerificationReport {
    let n = spec.n();
    let mut rep = VerificationReport::default();
    rep.note(C2M0_NOTE);
    let mut smp = Sampler::new(opts.seed);
    let counts = centrality_defect(spec);
    rep.push(
        Check::new("counts", "closed-form rank B, k(B), r(B), k-bar(q)", Status::Pass).with_witness(format!(
            "rank_b={} k={} r={} k_bar={}",
            counts.rank_b, counts.k, counts.r, counts.k_bar
        )),
    );
    for t in 0..opts.points {
        let a = crate::son::random_skew(n, &mut smp);
        let kc = counts_from_kernels(spec, &a);
        let c = if kc == counts {
            Check::new(format!("counts_kernel#{t}"), "kernel-dimension counts equal the closed forms", Status::GenericPointCertificate)
        } else {
            Check::new(format!("counts_kernel#{t}"), "kernel-dimension counts equal the closed forms", Status::Fail)
                .with_witness(format!("{kc:?}"))
        };
        rep.push(c);
    }

    // Euler form, H as a combination of the c_{k,k-2}, and the Manakov brackets
    let mut outcomes = BTreeMap::new();
    let symbolic_pair = |da: usize, db: usize| match opts.mode {
        Some(LambdaMode::Symbolic) => true,
        Some(LambdaMode::Sampled) => false,
        None => n <= 5 || (da <= 2 && db <= 2),
    };
    if let Some(lam) = spec.lambda_rational() {
        let mode = fmt_lambda(&lam);
        rep.push(euler_report(n, euler_check(n, &lam), &mode));
        rep.push(combination_report(n, &lam, &mode));
        manakov_brackets(spec, &lam, &|_, _| true, &mode, &mut outcomes);
    } else {
        let lam = spec.lambda_rf();
        let all_sym = opts.mode != Some(LambdaMode::Sampled);
        let lams: Vec<Vec<Rational>> = (0..opts.samples.max(1)).map(|_| random_lambda(spec, &mut smp)).collect();
        let sampled_mode = format!("sampled at {} random distinct lambda", lams.len());
        if all_sym {
            rep.push(euler_report(n, euler_check(n, &lam), SYMBOLIC));
        } else {
            let w = lams.iter().find_map(|l| euler_check(n, l));
            rep.push(euler_report(n, w, &sampled_mode));
        }
        if all_sym && n <= 4 {
            rep.push(combination_report(n, &lam, SYMBOLIC));
        } else {
            rep.push(combination_report(n, &lams[0], &fmt_lambda(&lams[0])));
        }
        manakov_brackets(spec, &lam, &symbolic_pair, SYMBOLIC, &mut outcomes);
        let sampled = |da: usize, db: usize| !symbolic_pair(da, db);
        for l in &lams {
            manakov_brackets(spec, l, &sampled, &sampled_mode, &mut outcomes);
        }
    }
    for (_, (id, o)) in outcomes {
        let c = Check::from_bool(id, o.anchor, o.witness.is_none(), || o.witness.clone().unwrap_or_default());
        rep.push(c.with_mode(o.mode));
    }

    rep.extend(z_lambda_report(spec, opts.points, &mut smp));
    rep.extend(assembly_report(spec, opts.points, &mut smp));
    for t in 0..opts.points {
        let ok = BodyPoint::random(n, &mut smp)
            .map(|p| p.left().casimir_set().ok() == p.right().casimir_set().ok())
            .unwrap_or(false);
        rep.push(Check::from_bool(
            format!("casimir_left_right#{t}"),
            "C(P^L) = C(P^R) at a chart point",
            ok,
            || "Casimir values differ".into(),
        ));
    }
    rep
}

fn euler_report(n: usize, w: Option<String>, mode: &str) -> Check {
    let c = Check::new(
        "euler_form",
        format!("{{H, P_ij}} = (l_i - l_j) sum_k P_ik P_kj / ((l_i + l_k)(l_k + l_j)) for n = {n}"),
        if w.is_none() { Status::Pass } else { Status::Fail },
    );
    let c = match w {
        Some(w) => c.with_witness(w),
        None => c,
    };
    c.with_mode(mode)
}

fn combination_report<C: Field + ExactDiv + Display>(n: usize, lam: &[C], mode: &str) -> Check {
    let anchor = "H is a linear combination of the c_{k,k-2}";
    let c = match hamiltonian_in_manakov(n, lam) {
        Some(beta) => {
            let s: Vec<String> = beta.iter().enumerate().map(|(i, b)| format!("beta_{}={}", i + 2, b)).collect();
            Check::new("hamiltonian_combination", anchor, Status::Pass).with_witness(s.join(" "))
        }
        None => Check::new("hamiltonian_combination", anchor, Status::Fail).with_witness("system inconsistent"),
    };
    c.with_mode(mode)
}

fn z_lambda_report(spec: &MomentSpec, points: usize, smp: &mut Sampler) -> VerificationReport {
    let n = spec.n();
    let nv = 2 * dim(n);
    let mut rep = VerificationReport::default();
    let lp = LiePoisson::new(n);
    let z: Vec<(String, LiePoissonPoly<Rational>)> = z_lambda(spec);
    let mut b: Vec<LiePoissonPoly<Rational>> = pairs(n).into_iter().map(|(i, j)| right(n, i, j)).collect();
    b.extend(spec.block_pairs().into_iter().map(|(i, j)| left::<Rational>(n, i, j).with_nvars(nv)));
    let mut w = None;
    for (l, f) in &z {
        let f = f.clone().with_nvars(nv);
        if let Some(g) = b.iter().find(|g| !lp.bracket(&f, g).is_empty()) {
            w = Some(format!("{l} vs {}", render(n, g)));
            break;
        }
    }
    rep.push(Check::from_bool("z_commutes_b", "{Z^lambda, B^lambda} = 0", w.is_none(), || w.unwrap_or_default()));
    let fs: Vec<LiePoissonPoly<Rational>> = z.iter().map(|x| x.1.clone()).collect();
    for t in 0..points {
        let id = format!("z_rank#{t}");
        let anchor = format!("rank Z^lambda = {}", z_count(spec));
        let c = match BodyPoint::random(n, smp) {
            Ok(p) => {
                let r = p.jacobian_rank(&fs);
                if r == z_count(spec) {
                    Check::new(id, anchor, Status::GenericPointCertificate)
                } else {
                    Check::new(id, anchor, Status::Fail).with_witness(format!("rank {r}"))
                }
            }
            Err(e) => Check::new(id, anchor, Status::Fail).with_witness(e.to_string()),
        };
        rep.push(c);
    }
    rep
}

fn assembly_report(spec: &MomentSpec, points: usize, smp: &mut Sampler) -> VerificationReport {
    let n = spec.n();
    let nn = dim(n);
    let lp = LiePoisson::new(n);
    let mut rep = VerificationReport::default();
    let lam = explicit_lambda(spec);
    for t in 0..points {
        let id = format!("assembly#{t}");
        let set = BodyPoint::random(n, smp).and_then(|p| assemble_integrable_set(spec, &p).map(|s| (p, s)));
        let (p, set) = match set {
            Ok(x) => x,
            Err(e) => {
                rep.push(Check::new(id, "integrable set assembles", Status::Fail).with_witness(e.to_string()));
                continue;
            }
        };
        let want = 2 * nn - set.counts.k_bar;
        let all = set.all();
        let fs: Vec<LiePoissonPoly<Rational>> = all.iter().map(|x| x.1.clone()).collect();
        let r = p.jacobian_rank(&fs);
        let anchor = format!("{} has {want} independent elements", set.render());
        let c = if all.len() == want && r == want {
            Check::new(id.clone(), anchor, Status::GenericPointCertificate)
        } else {
            Check::new(id.clone(), anchor, Status::Fail).with_witness(format!("size {} rank {r}", all.len()))
        };
        rep.push(c.with_mode(fmt_lambda(&lam)));
        if t == 0 {
            let mut w = None;
            'outer: for (la, fa) in set.central() {
                for (lb, fb) in &all {
                    if !lp.bracket(&fa, fb).is_empty() {
                        w = Some(format!("{{{la}, {lb}}} != 0"));
                        break 'outer;
                    }
                }
            }
            rep.push(
                Check::from_bool("assembly_involution", "central elements commute with the whole set", w.is_none(), || {
                    w.unwrap_or_default()
                })
                .with_mode(fmt_lambda(&lam)),
            );
        }
    }
    rep
}
