//! The `verify` pipeline over a corpus.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use anyhow::{Context, Result};
use latkit_core::enumerate::Budget;
use latkit_core::gaussian::{DEFAULT_ETA_TOL, DEFAULT_MASS_TOL};
use latkit_core::invariants::DeepHoleSearch;
use latkit_core::{exec, verify_lattice, LatticeVerification, ReportConfig, VerifyConfig};

use crate::corpus::{Corpus, InputError};
use crate::output;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mass_tol: f64,
    pub eta_tol: f64,
    pub enum_budget: u64,
    pub shifts: usize,
    pub alpha_max: f64,
    /// Integral-identity parameters, as multiples of `lambda1`.
    pub identity_fractions: Vec<f64>,
    /// Gamma-bound parameters, as multiples of `lambda1`.
    pub bound_fractions: Vec<f64>,
    pub profile_points: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads; `None` uses the default pool.
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let v = VerifyConfig::default();
        Self {
            mass_tol: DEFAULT_MASS_TOL,
            eta_tol: DEFAULT_ETA_TOL,
            enum_budget: Budget::DEFAULT.0,
            shifts: v.shifts,
            alpha_max: v.report.alpha_max,
            identity_fractions: v.identity_fractions,
            bound_fractions: v.bound_fractions,
            profile_points: v.profile_points,
            seed: 0,
            out: PathBuf::from("out"),
            workers: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), InputError> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !(positive(self.mass_tol) && self.mass_tol <= 0.1) {
            return Err(InputError(format!("--mass-tol must lie in (0, 0.1], got {}", self.mass_tol)));
        }
        if !(positive(self.eta_tol) && self.eta_tol <= 0.01) {
            return Err(InputError(format!("--eta-tol must lie in (0, 0.01], got {}", self.eta_tol)));
        }
        if self.enum_budget == 0 {
            return Err(InputError("--enum-budget must be positive".into()));
        }
        if self.shifts == 0 || self.profile_points < 2 {
            return Err(InputError("need at least one shift and two profile radii".into()));
        }
        if !(self.alpha_max >= 1.0 && self.alpha_max.is_finite()) {
            return Err(InputError(format!("--alpha-max must be >= 1, got {}", self.alpha_max)));
        }
        if self.identity_fractions.iter().chain(&self.bound_fractions).any(|&f| !positive(f)) {
            return Err(InputError("s-grid entries must be positive".into()));
        }
        if self.workers == Some(0) {
            return Err(InputError("--workers must be positive".into()));
        }
        Ok(())
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            report: ReportConfig {
                mass_tol: self.mass_tol,
                eta_tol: self.eta_tol,
                budget: self.enum_budget,
                alpha_max: self.alpha_max,
                deep_hole: DeepHoleSearch { seed: self.seed, ..DeepHoleSearch::default() },
            },
            shifts: self.shifts,
            seed: self.seed,
            identity_fractions: self.identity_fractions.clone(),
            bound_fractions: self.bound_fractions.clone(),
            profile_points: self.profile_points,
            ..VerifyConfig::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub results: Vec<LatticeVerification>,
    pub failures: usize,
    pub exit_code: i32,
}

/// Runs every check on the corpus without writing anything.
pub fn verify_corpus(corpus: &Corpus, cfg: &RunConfig) -> Result<Vec<LatticeVerification>> {
    if corpus.is_empty() {
        return Err(InputError("empty corpus".into()).into());
    }
    cfg.validate()?;
    let vcfg = cfg.verify_config();
    let job = || {
        exec::try_map(&corpus.entries, |e| {
            verify_lattice(&e.name, &e.lattice, e.known.as_ref(), &vcfg).with_context(|| format!("lattice {}", e.name))
        })
    };
    match cfg.workers {
        Some(n) => exec::with_threads(n, job),
        None => job(),
    }
}

/// Verifies the corpus and writes `report.csv`, `invariants.csv`,
/// `summary.md` and `chart.svg` into `cfg.out`.
pub fn run_verify(corpus: &Corpus, cfg: &RunConfig) -> Result<VerifyOutcome> {
    let results = verify_corpus(corpus, cfg)?;
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let path = |name: &str| cfg.out.join(name);
    let create = |name: &str| -> Result<BufWriter<File>> {
        Ok(BufWriter::new(File::create(path(name)).with_context(|| format!("writing {}", path(name).display()))?))
    };
    output::write_report_csv(create("report.csv")?, &results)?;
    output::write_invariants_csv(create("invariants.csv")?, &results)?;
    fs::write(path("summary.md"), output::summary_markdown(&results, cfg))?;
    fs::write(path("chart.svg"), output::chart_svg(&results))?;
    let failures = results.iter().map(LatticeVerification::failures).sum();
    let exit_code = if failures == 0 { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok(VerifyOutcome { results, failures, exit_code })
}
