use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quasint_core::central::{catalog, emit_tables, runge_lenz_check, Family};
use quasint_core::dynamics::{
    conservation_report, integrate, random_start, standard_invariants, trajectory_csv, FlowState,
};
use quasint_core::report::TOOL_VERSION;
use quasint_core::rigid::{
    centrality_defect, classical_rigid_suite, count_table, counts_from_kernels, CountRow, LambdaMode, RigidSuiteOptions,
};
use quasint_core::sample::Sampler;
use quasint_core::son::random_skew;
use quasint_core::uea::{verify_quantum_rigid, QuantumRigidOptions};
use quasint_core::weyl::{quantum_central_force_suite, QuantumSuiteOptions};
use quasint_core::{Check, MomentSpec, Rational, Status, VerificationReport};

pub const THREADS_ENV: &str = "QUASINT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "quasint", version, about = "Exact checks for quasi-integrable sets on so(n)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the count tables, re-verifying every row.
    Tables(TablesArgs),
    /// Run a verification suite and emit its report.
    Verify(VerifyArgs),
    /// Integrate the Euler equations and measure invariant drift.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    CentralForce,
    RigidBody,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    ClassicalCentral,
    QuantumCentral,
    ClassicalRigid,
    QuantumRigid,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Symbolic,
    Sampled,
}

#[derive(Args, Debug)]
pub struct TablesArgs {
    pub which: Which,
    /// Dimension for the central-force tables (4 or 5).
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest n for the rigid-body table.
    #[arg(long, default_value_t = 6)]
    pub max_n: usize,
    /// Also emit partitions missing from the standard table.
    #[arg(long)]
    pub all_partitions: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random points per row.
    #[arg(long, default_value_t = 3)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub scope: Scope,
    #[arg(long)]
    pub n: Option<usize>,
    /// Explicit λ as comma-separated rationals "p/q".
    #[arg(long, value_delimiter = ',')]
    pub lambda: Option<Vec<String>>,
    /// Block sizes of a symbolic λ.
    #[arg(long, value_delimiter = ',')]
    pub q: Option<Vec<usize>>,
    /// Coupling of the Kepler potential, as "p/q".
    #[arg(long, default_value = "1")]
    pub alpha: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Random λ samples in sampled mode.
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    /// Random points per rank or kernel check.
    #[arg(long, default_value_t = 3)]
    pub points: usize,
    /// Split depth for recursive quantum sets.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Allow quantum-rigid beyond n = 6.
    #[arg(long)]
    pub exploratory: bool,
    /// Skip the heaviest quantum-rigid commutators.
    #[arg(long)]
    pub light: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<String>,
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Record every `stride` steps.
    #[arg(long, default_value_t = 100)]
    pub stride: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Initial P_ij, i < j, lexicographic; default is seeded uniform in [-1, 1).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p0: Option<Vec<f64>>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Drift summary JSON path; stdout when absent.
    #[arg(long)]
    pub drift: Option<PathBuf>,
}

/// Invalid configuration, exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(s: impl Into<String>) -> anyhow::Error {
    anyhow!(UsageError(s.into()))
}

/// Exit code for an error: 2 for usage errors, 1 otherwise.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    if e.downcast_ref::<UsageError>().is_some() {
        2
    } else {
        1
    }
}

pub fn threads() -> anyhow::Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(1),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(t),
            _ => Err(usage(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

/// Runs a command; returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    let threads = threads()?;
    match &cli.command {
        Command::Tables(a) => tables(a, out),
        Command::Verify(a) => verify(a, threads, out),
        Command::Simulate(a) => simulate(a, out),
    }
}

fn emit(text: &str, path: &Option<PathBuf>, out: &mut dyn Write) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => out.write_all(text.as_bytes()).context("writing output"),
    }
}

fn parse_rationals(v: &[String]) -> anyhow::Result<Vec<Rational>> {
    v.iter().map(|s| s.trim().parse::<Rational>().map_err(|e| usage(format!("bad rational {s:?}: {e}")))).collect()
}

fn check_n(n: Option<usize>, len: usize, what: &str) -> anyhow::Result<()> {
    match n {
        Some(n) if n != len => Err(usage(format!("--n {n} does not match {len} {what}"))),
        _ => Ok(()),
    }
}

fn moment_spec(a: &VerifyArgs) -> anyhow::Result<MomentSpec> {
    match (&a.lambda, &a.q) {
        (Some(_), Some(_)) => Err(usage("give either --lambda or --q, not both")),
        (Some(l), None) => {
            let lam = parse_rationals(l)?;
            check_n(a.n, lam.len(), "lambda values")?;
            MomentSpec::explicit(lam).map_err(|e| usage(e.to_string()))
        }
        (None, Some(q)) => {
            check_n(a.n, q.iter().sum(), "as the sum of --q")?;
            MomentSpec::symbolic(q.clone()).map_err(|e| usage(e.to_string()))
        }
        (None, None) => match a.n {
            Some(n) if n >= 2 => Ok(MomentSpec::generic(n)),
            Some(n) => Err(usage(format!("n must be at least 2, got {n}"))),
            None => Err(usage("one of --n, --lambda, --q is required")),
        },
    }
}

fn tables(a: &TablesArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let mut ok = true;
    let text = match a.which {
        Which::CentralForce => {
            let n = a.n.ok_or_else(|| usage("central-force tables need --n 4 or --n 5"))?;
            if n != 4 && n != 5 {
                return Err(usage(format!("central-force tables exist for n = 4 and 5, not {n}")));
            }
            let rows = emit_tables(n, a.seed, a.points)?;
            let mut items = Vec::new();
            let mut md = String::from("| set | k |\n|---|---|\n");
            for (row, rep) in &rows {
                let pass = rep.all_pass();
                ok &= pass;
                let mut v = serde_json::to_value(row)?;
                if !pass {
                    v["verified"] = json!(false);
                }
                items.push(v);
                md.push_str(&format!("| {} | {}{} |\n", row.set, row.k, if pass { "" } else { " FAIL" }));
            }
            match a.format {
                Format::Json => serde_json::to_string_pretty(&items)? + "\n",
                Format::Markdown => md,
            }
        }
        Which::RigidBody => {
            if !(3..=8).contains(&a.max_n) {
                return Err(usage(format!("--max-n must lie in 3..=8, got {}", a.max_n)));
            }
            let rows = count_table(a.max_n, a.all_partitions);
            let mut smp = Sampler::new(a.seed);
            let mut items = Vec::new();
            let mut md = String::from("| n | q | k | r | k_bar |\n|---|---|---|---|---|\n");
            for row in &rows {
                let pass = row_verified(row, a.points, &mut smp);
                ok &= pass;
                let mut v = serde_json::to_value(row)?;
                if !pass {
                    v["verified"] = json!(false);
                }
                items.push(v);
                md.push_str(&format!(
                    "| {} | {} | {} | {} | {}{} |\n",
                    row.n,
                    row.q_label(),
                    row.k,
                    row.r,
                    row.k_bar,
                    if pass { "" } else { " FAIL" }
                ));
            }
            match a.format {
                Format::Json => serde_json::to_string_pretty(&items)? + "\n",
                Format::Markdown => md,
            }
        }
    };
    emit(&text, &a.output, out)?;
    Ok(if ok { 0 } else { 1 })
}

/// Closed-form counts against kernel dimensions at random points.
fn row_verified(row: &CountRow, points: usize, smp: &mut Sampler) -> bool {
    let Ok(spec) = MomentSpec::symbolic(row.q.clone()) else { return false };
    let c = centrality_defect(&spec);
    if (c.k, c.r, c.k_bar) != (row.k, row.r, row.k_bar) {
        return false;
    }
    (0..points).all(|_| counts_from_kernels(&spec, &random_skew(row.n, smp)) == c)
}

fn lambda_mode(m: Option<Mode>) -> Option<LambdaMode> {
    m.map(|m| match m {
        Mode::Symbolic => LambdaMode::Symbolic,
        Mode::Sampled => LambdaMode::Sampled,
    })
}

fn classical_central(n: usize, alpha: &Rational, seed: u64, points: usize) -> anyhow::Result<VerificationReport> {
    let mut rep = VerificationReport::default();
    for fam in [Family::GenericF, Family::Kepler(alpha.clone()), Family::Oscillator, Family::FOfP2] {
        rep.extend(catalog(n, &fam)?.verify(seed, points));
    }
    rep.extend(runge_lenz_check(n, alpha));
    if n == 4 || n == 5 {
        for (row, r) in emit_tables(n, seed, points)? {
            rep.push(Check::new(format!("table_row:{}", row.set), format!("k = {}", row.k), Status::Pass));
            rep.extend(r);
        }
    }
    Ok(rep)
}

fn verify(a: &VerifyArgs, threads: usize, out: &mut dyn Write) -> anyhow::Result<i32> {
    let alpha: Rational = a.alpha.trim().parse().map_err(|e| usage(format!("bad --alpha {:?}: {e}", a.alpha)))?;
    let spec = moment_spec(a)?;
    let n = spec.n();
    let name = |v: &dyn Fn() -> Option<clap::builder::PossibleValue>| v().map(|p| p.get_name().to_string());
    let scope = name(&|| a.scope.to_possible_value());
    let mode = a.mode.and_then(|m| name(&|| m.to_possible_value()));
    let config = json!({
        "command": "verify",
        "scope": scope,
        "n": n,
        "lambda": spec.lambda_strings(),
        "q": spec.q(),
        "alpha": alpha.to_string(),
        "seed": a.seed,
        "mode": mode,
        "samples": a.samples,
        "points": a.points,
        "depth": a.depth,
        "threads": threads,
    });
    let central_n = |what: &str| -> anyhow::Result<()> {
        if spec.lambda_rational().is_some() || a.q.is_some() {
            return Err(usage(format!("{what} takes --n only")));
        }
        Ok(())
    };
    let mut rep = VerificationReport::new(config);
    let quantum_rigid = |rep: &mut VerificationReport| -> anyhow::Result<()> {
        if n > 6 && !a.exploratory {
            return Err(usage("quantum-rigid needs n <= 6 unless --exploratory"));
        }
        if n < 3 {
            return Err(usage("quantum-rigid needs n >= 3"));
        }
        let opts = QuantumRigidOptions {
            mode: lambda_mode(a.mode),
            samples: a.samples.saturating_sub(1),
            points: a.points,
            seed: a.seed,
            heavy: !a.light,
        };
        rep.extend(verify_quantum_rigid(&spec, &opts));
        Ok(())
    };
    let rigid_opts = RigidSuiteOptions { mode: lambda_mode(a.mode), samples: a.samples, points: a.points, seed: a.seed };
    let qc_opts = QuantumSuiteOptions { alpha: alpha.clone(), tree_depth: (n <= 5).then_some(a.depth), seed: a.seed };
    match a.scope {
        Scope::ClassicalCentral => {
            central_n("classical-central")?;
            rep.extend(classical_central(n, &alpha, a.seed, a.points)?);
        }
        Scope::QuantumCentral => {
            central_n("quantum-central")?;
            rep.extend(quantum_central_force_suite(n, &qc_opts));
        }
        Scope::ClassicalRigid => {
            if n < 3 {
                return Err(usage("classical-rigid needs n >= 3"));
            }
            rep.extend(classical_rigid_suite(&spec, &rigid_opts));
        }
        Scope::QuantumRigid => quantum_rigid(&mut rep)?,
        Scope::All => {
            if n < 3 {
                return Err(usage("all needs n >= 3"));
            }
            rep.extend(classical_central(n, &alpha, a.seed, a.points)?.prefixed("classical-central:"));
            rep.extend(quantum_central_force_suite(n, &qc_opts).prefixed("quantum-central:"));
            rep.extend(classical_rigid_suite(&spec, &rigid_opts).prefixed("classical-rigid:"));
            let mut q = VerificationReport::default();
            quantum_rigid(&mut q)?;
            rep.extend(q.prefixed("quantum-rigid:"));
        }
    }
    let text = match a.format {
        Format::Json => rep.to_json() + "\n",
        Format::Markdown => rep.to_markdown(),
    };
    emit(&text, &a.output, out)?;
    Ok(if rep.all_pass() { 0 } else { 1 })
}

fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let lam = parse_rationals(&a.lambda)?;
    check_n(a.n, lam.len(), "lambda values")?;
    let n = lam.len();
    if n < 2 {
        return Err(usage("simulate needs at least two lambda values"));
    }
    for (v, name) in [(a.t_end, "--t-end"), (a.dt, "--dt"), (a.tolerance, "--tolerance")] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(usage(format!("{name} must be positive")));
        }
    }
    let spec = MomentSpec::explicit(lam.clone()).map_err(|e| usage(e.to_string()))?;
    let p0 = match &a.p0 {
        Some(p) => p.clone(),
        None => random_start(n, a.seed),
    };
    let state = FlowState::new(&spec, &p0).map_err(|e| usage(e.to_string()))?;
    let steps = (a.t_end / a.dt).round() as usize;
    let invariants = standard_invariants(&lam);
    let summary = |extra: Value| -> Value {
        let mut v = json!({
            "tool_version": TOOL_VERSION,
            "config": {
                "command": "simulate",
                "n": n,
                "lambda": spec.lambda_strings(),
                "t_end": a.t_end,
                "dt": a.dt,
                "stride": a.stride,
                "tolerance": a.tolerance,
                "seed": a.seed,
                "p0": p0,
            },
        });
        v.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
        v
    };
    let tr = match integrate(&state, a.dt, steps, a.stride) {
        Ok(tr) => tr,
        Err(e) => {
            let s = summary(json!({ "error": e.to_string(), "pass": false }));
            emit(&(serde_json::to_string_pretty(&s)? + "\n"), &a.drift, out)?;
            eprintln!("{e}");
            return Ok(1);
        }
    };
    if let Some(p) = &a.csv {
        fs::write(p, trajectory_csv(&tr, &invariants)).with_context(|| format!("writing {}", p.display()))?;
    }
    let drifts = conservation_report(&tr, &invariants);
    let pass = drifts.iter().all(|d| d.drift <= a.tolerance);
    let s = summary(json!({ "drift": drifts, "pass": pass }));
    emit(&(serde_json::to_string_pretty(&s)? + "\n"), &a.drift, out)?;
    Ok(if pass { 0 } else { 1 })
}
