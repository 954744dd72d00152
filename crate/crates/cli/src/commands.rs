//! Argument parsing and subcommand dispatch. Every subcommand yields one
//! JSON object and an exit code.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use latkit_core::enumerate::{count_points_with, shortest_vector_with, Budget};
use latkit_core::gaussian::{gaussian_mass_with, smoothing_parameter_with, DEFAULT_ETA_TOL, DEFAULT_MASS_TOL};
use latkit_core::invariants::{beta_estimate_with, covering_radius_bounds, DeepHoleSearch};
use latkit_core::{GaussianParams, LatticeFile, ReportConfig};
use serde_json::{json, Value};

use crate::corpus::{load_entry, Corpus, CorpusEntry, InputError};
use crate::generate::{generate_random_lattice, generated_name, Style};
use crate::run::{run_verify, RunConfig, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "latkit", version, about = "Lattice invariants and transference checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First minimum and a shortest vector.
    Lambda1(BasisArgs),
    /// Smoothing parameter by certified bisection.
    Eta(BasisArgs),
    /// Certified Gaussian mass rho_{s,r}(L - t).
    Mass(MassArgs),
    /// Covering radius bounds.
    Mu(BasisArgs),
    /// Point-count exponent estimate.
    Beta(BasisArgs),
    /// Run every check on a corpus and write the reports.
    Verify(VerifyArgs),
    /// Generate a seeded random lattice file.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Tolerances {
    #[arg(long, default_value_t = DEFAULT_MASS_TOL)]
    pub mass_tol: f64,
    #[arg(long, default_value_t = DEFAULT_ETA_TOL)]
    pub eta_tol: f64,
    #[arg(long, default_value_t = Budget::DEFAULT.0)]
    pub enum_budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct BasisArgs {
    /// Lattice JSON file.
    #[arg(long)]
    pub basis: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub alpha_max: f64,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Args)]
pub struct MassArgs {
    #[arg(long)]
    pub basis: PathBuf,
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = 0.0)]
    pub r: f64,
    /// Shift as comma-separated coordinates (default: origin).
    #[arg(long)]
    pub t: Option<String>,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Directory of lattice JSON files.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub shifts: usize,
    #[arg(long, default_value_t = 2.0)]
    pub alpha_max: f64,
    /// Integral-identity parameters as multiples of lambda1.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.8,1.0")]
    pub identity_s: Vec<f64>,
    /// Gamma-bound parameters as multiples of lambda1.
    #[arg(long, value_delimiter = ',', default_value = "0.7,1.0")]
    pub bound_s: Vec<f64>,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// unimodular_of_Zn or integer_entries.
    #[arg(long, default_value = "integer_entries")]
    pub style: Style,
    #[arg(long)]
    pub name: Option<String>,
    /// Also write `<name>.json` into this directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs a parsed command, returning its JSON output and exit code.
pub fn execute(cli: &Cli) -> Result<(Value, i32)> {
    match &cli.command {
        Command::Lambda1(a) => with_workers(&a.tol, || lambda1(a)),
        Command::Eta(a) => with_workers(&a.tol, || eta(a)),
        Command::Mass(a) => with_workers(&a.tol, || mass(a)),
        Command::Mu(a) => with_workers(&a.tol, || mu(a)),
        Command::Beta(a) => with_workers(&a.tol, || beta(a)),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => gen(a).map(|v| (v, EXIT_OK)),
    }
}

fn with_workers(tol: &Tolerances, f: impl FnOnce() -> Result<Value> + Send) -> Result<(Value, i32)> {
    if tol.workers == Some(0) {
        return Err(InputError("--workers must be positive".into()).into());
    }
    let v = match tol.workers {
        Some(n) => latkit_core::exec::with_threads(n, f),
        None => f(),
    }?;
    Ok((v, EXIT_OK))
}

fn load(path: &Path) -> Result<CorpusEntry> {
    Ok(load_entry(path)?)
}

fn lambda1(a: &BasisArgs) -> Result<Value> {
    let e = load(&a.basis)?;
    let budget = Budget(a.tol.enum_budget);
    let sv = shortest_vector_with(&e.lattice, budget)?;
    let kissing = count_points_with(&e.lattice, 1.0, budget)?;
    Ok(json!({
        "name": e.name,
        "dim": e.lattice.dim(),
        "lambda1": sv.dist,
        "coeffs": sv.coeffs,
        "vector": sv.point,
        "kissing": kissing,
    }))
}

fn eta(a: &BasisArgs) -> Result<Value> {
    let e = load(&a.basis)?;
    let r = smoothing_parameter_with(&e.lattice, a.tol.eta_tol, a.tol.mass_tol, Budget(a.tol.enum_budget))?;
    Ok(json!({
        "name": e.name,
        "eta": r.eta,
        "bracket": [r.bracket.0, r.bracket.1],
        "mass_at_eta": r.mass_at_eta,
        "mass_at_lo": r.mass_at_lo,
        "mass_at_hi": r.mass_at_hi,
    }))
}

fn parse_shift(text: &str, dim: usize) -> Result<Vec<f64>> {
    let t: Vec<f64> = text
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| InputError(format!("bad --t component {x:?}: {e}"))))
        .collect::<std::result::Result<_, _>>()?;
    if t.len() != dim {
        return Err(InputError(format!("--t has {} components, lattice dimension is {dim}", t.len())).into());
    }
    Ok(t)
}

fn mass(a: &MassArgs) -> Result<Value> {
    let e = load(&a.basis)?;
    let n = e.lattice.dim();
    let t = match &a.t {
        Some(text) => parse_shift(text, n)?,
        None => vec![0.0; n],
    };
    let params = GaussianParams { s: a.s, t, r: a.r };
    let m = gaussian_mass_with(&e.lattice, &params, a.tol.mass_tol, Budget(a.tol.enum_budget))?;
    Ok(json!({
        "name": e.name,
        "s": params.s,
        "r": params.r,
        "t": params.t,
        "value": m.value,
        "tail_bound": m.tail_bound,
        "trunc_radius": m.trunc_radius,
        "rounding_bound": m.rounding_bound,
        "lower": m.lower(),
        "upper": m.upper(),
    }))
}

fn report_config(a: &BasisArgs) -> ReportConfig {
    ReportConfig {
        mass_tol: a.tol.mass_tol,
        eta_tol: a.tol.eta_tol,
        budget: a.tol.enum_budget,
        alpha_max: a.alpha_max,
        deep_hole: DeepHoleSearch { seed: a.tol.seed, ..DeepHoleSearch::default() },
    }
}

fn mu(a: &BasisArgs) -> Result<Value> {
    let e = load(&a.basis)?;
    let b = covering_radius_bounds(&e.lattice, &report_config(a))?;
    Ok(json!({
        "name": e.name,
        "mu_lo": b.mu_lo,
        "mu_hi": b.mu_hi,
        "deep_hole": b.deep_hole,
        "gso_bound": b.gso_bound,
        "eta_bound": b.eta_bound,
    }))
}

fn beta(a: &BasisArgs) -> Result<Value> {
    let e = load(&a.basis)?;
    let b = beta_estimate_with(&e.lattice, a.alpha_max, Budget(a.tol.enum_budget))?;
    Ok(json!({
        "name": e.name,
        "beta_hat": b.beta_hat,
        "alpha_at_max": b.alpha_at_max,
        "alpha_max": a.alpha_max,
        "lambda1": b.lambda1,
        "samples": b.samples,
    }))
}

fn verify(a: &VerifyArgs) -> Result<(Value, i32)> {
    let corpus = Corpus::load(&a.corpus, a.tol.seed)?;
    let cfg = RunConfig {
        mass_tol: a.tol.mass_tol,
        eta_tol: a.tol.eta_tol,
        enum_budget: a.tol.enum_budget,
        shifts: a.shifts,
        alpha_max: a.alpha_max,
        identity_fractions: a.identity_s.clone(),
        bound_fractions: a.bound_s.clone(),
        seed: a.tol.seed,
        out: a.out.clone(),
        workers: a.tol.workers,
        ..RunConfig::default()
    };
    let outcome = run_verify(&corpus, &cfg)?;
    let checks: usize = outcome.results.iter().map(|r| r.records.len()).sum();
    let failed: Vec<Value> = outcome
        .results
        .iter()
        .flat_map(|r| &r.records)
        .filter(|r| r.is_failure())
        .map(|r| json!({ "lattice": r.lattice_name, "check": r.check_id.as_str() }))
        .collect();
    Ok((
        json!({
            "lattices": outcome.results.len(),
            "checks": checks,
            "failures": outcome.failures,
            "failed": failed,
            "out": a.out.display().to_string(),
            "exit_code": outcome.exit_code,
        }),
        outcome.exit_code,
    ))
}

fn gen(a: &GenArgs) -> Result<Value> {
    let lattice = generate_random_lattice(a.dim, a.seed, a.style).map_err(|e| InputError(e.to_string()))?;
    let name = a.name.clone().unwrap_or_else(|| generated_name(a.dim, a.seed, a.style));
    let file = LatticeFile::from_lattice(&name, &lattice, None);
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        file.save(&dir.join(format!("{name}.json")))?;
    }
    Ok(serde_json::to_value(&file)?)
}
