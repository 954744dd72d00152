//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when
//! any criterion fails.

use std::collections::BTreeSet;
use std::f64::consts::{PI, SQRT_2};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use latkit::{generate_random_lattice, run_verify, Corpus, RunConfig, Style};
use latkit_core::enumerate::Budget;
use latkit_core::gaussian::{poisson_residual_with, DEFAULT_MASS_TOL};
use latkit_core::{
    brute_force_within, count_points, enumerate_within, gaussian_mass, named, shortest_vector, smoothing_parameter,
    CheckId, EnumerationRequest, GaussianParams, Lattice, LatticeVerification, Status, VerificationRecord,
};

type Verdict = Result<String, String>;

const SEED: u64 = 1;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn theta_z(s: f64) -> f64 {
    let mut terms: Vec<f64> = (-20i32..=20).map(|k| (-PI * f64::from(k * k) / (s * s)).exp()).collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

fn coeffs(points: &[latkit_core::LatticePoint]) -> BTreeSet<Vec<i64>> {
    points.iter().map(|p| p.coeffs.clone()).collect()
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut lattices: Vec<(String, Lattice)> = vec![
        ("Z2".into(), named::integer_lattice(2)),
        ("Z3".into(), named::integer_lattice(3)),
        ("D3".into(), named::d_lattice(3)),
        ("A2".into(), named::hexagonal()),
    ];
    for seed in 0..20u64 {
        let style = if seed % 2 == 0 { Style::IntegerEntries } else { Style::UnimodularOfZn };
        let n = 1 + (seed as usize % 4);
        lattices.push((
            format!("random n={n} seed={seed}"),
            generate_random_lattice(n, 100 + seed, style).map_err(|e| e.to_string())?,
        ));
    }
    let mut compared = 0;
    for (name, l) in &lattices {
        let lambda1 = shortest_vector(l).map_err(|e| e.to_string())?.dist;
        for f in [1.0, 1.5, 2.5] {
            let req = EnumerationRequest::around_origin(l.dim(), f * lambda1);
            let fast = enumerate_within(l, &req).map_err(|e| e.to_string())?;
            let slow = brute_force_within(l, &req).map_err(|e| e.to_string())?;
            if coeffs(&fast) != coeffs(&slow) || fast.len() != slow.len() {
                return Err(format!("{name} at {f} lambda1: {} vs {} points", fast.len(), slow.len()));
            }
            compared += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("{compared} sets equal but took {secs:.1} s"));
    }
    Ok(format!("{} lattices, {compared} point sets identical, {secs:.1} s", lattices.len()))
}

fn named_invariants() -> Verdict {
    let mut notes = Vec::new();
    for (name, l, lambda1, kissing) in [
        ("Z4", named::integer_lattice(4), 1.0, 8),
        ("D4", named::d_lattice(4), SQRT_2, 24),
        ("E8", named::e8(), SQRT_2, 240),
    ] {
        let start = Instant::now();
        let sv = shortest_vector(&l).map_err(|e| e.to_string())?;
        let n1 = count_points(&l, 1.0).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        if sv.dist != lambda1 || n1 != kissing {
            return Err(format!("{name}: lambda1={} N1={n1}", sv.dist));
        }
        // Independent count of the first shell.
        let ball = if l.dim() <= 6 {
            brute_force_within(&l, &EnumerationRequest::around_origin(l.dim(), lambda1 * (1.0 + 1e-9)))
        } else {
            enumerate_within(&l, &EnumerationRequest::around_origin(l.dim(), lambda1 * (1.0 + 1e-9)))
        }
        .map_err(|e| e.to_string())?;
        if ball.len() as u64 != kissing + 1 {
            return Err(format!("{name}: oracle ball holds {} points", ball.len()));
        }
        if name == "E8" && secs >= 120.0 {
            return Err(format!("E8 took {secs:.1} s"));
        }
        notes.push(format!("{name} ({secs:.2} s)"));
    }
    Ok(format!("exact lambda1 and N1 for {}", notes.join(", ")))
}

fn theta_value() -> Verdict {
    let oracle = theta_z(1.0);
    let z1 = gaussian_mass(&named::integer_lattice(1), &GaussianParams::centered(1, 1.0), 1e-12)
        .map_err(|e| e.to_string())?;
    let z2 = gaussian_mass(&named::integer_lattice(2), &GaussianParams::centered(2, 1.0), 1e-12)
        .map_err(|e| e.to_string())?;
    let abs = (z1.midpoint() - oracle).abs();
    let rel = (z2.midpoint() / (z1.midpoint() * z1.midpoint()) - 1.0).abs();
    if abs < 1e-10 && rel < 1e-9 {
        Ok(format!("rho_1(Z) = {:.12} (|diff| {abs:.1e}); rho_1(Z^2)/rho_1(Z)^2 - 1 = {rel:.1e}", z1.midpoint()))
    } else {
        Err(format!("|diff| {abs:.1e}, product residual {rel:.1e}"))
    }
}

fn poisson() -> Verdict {
    let corpus = Corpus::load(&corpus_dir(), SEED).map_err(|e| e.to_string())?;
    // Large-determinant lattices have very dense duals; only the node cap
    // is raised, never the tolerance.
    let budget = Budget(20_000_000_000);
    let mut worst = (0.0f64, String::new());
    let mut count = 0;
    for e in corpus.entries.iter().filter(|e| e.lattice.dim() <= 6) {
        for s in [0.7, 1.0, 1.6] {
            let r = poisson_residual_with(&e.lattice, s, DEFAULT_MASS_TOL, budget)
                .map_err(|err| format!("{}: {err}", e.name))?;
            if r.is_nan() || r >= 1e-8 {
                return Err(format!("{} at s={s}: residual {r:.3e}", e.name));
            }
            if r >= worst.0 {
                worst = (r, format!("{} s={s}", e.name));
            }
            count += 1;
        }
    }
    Ok(format!("{count} residuals < 1e-8, largest {:.2e} ({})", worst.0, worst.1))
}

fn smoothing() -> Verdict {
    let tol = 1e-6;
    let z1 = smoothing_parameter(&named::integer_lattice(1), tol).map_err(|e| e.to_string())?;
    // Scalar bisection oracle on 1 + 2 sum exp(-pi eta^2 k^2) = 3/2.
    let (mut lo, mut hi) = (0.1f64, 3.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if theta_z(1.0 / mid) > 1.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle = 0.5 * (lo + hi);
    if (z1.eta - oracle).abs() >= 1e-3 {
        return Err(format!("eta(Z) = {} vs oracle {oracle}", z1.eta));
    }
    let bracket_ok = |r: &latkit_core::SmoothingResult| {
        r.bracket.0 <= r.eta && r.eta <= r.bracket.1 && r.mass_at_lo.lower() > 1.5 && r.mass_at_hi.upper() < 1.5
    };
    let z2 = named::integer_lattice(2);
    let base = smoothing_parameter(&z2, tol).map_err(|e| e.to_string())?;
    let mut scaled = Vec::new();
    for c in [2.0, 0.5] {
        let r = smoothing_parameter(&z2.scaled(c).map_err(|e| e.to_string())?, tol).map_err(|e| e.to_string())?;
        if !bracket_ok(&r) {
            return Err(format!("bracket invariant broken at scale {c}"));
        }
        // eta(cL) = c eta(L).
        let want = c * base.eta;
        if (r.eta - want).abs() > 2.0 * tol * want {
            return Err(format!("eta({c} Z^2) = {} vs {want}", r.eta));
        }
        scaled.push(r.eta);
    }
    if !bracket_ok(&z1) || !bracket_ok(&base) {
        return Err("bracket invariant broken".into());
    }
    Ok(format!(
        "eta(Z) = {:.9} vs oracle {oracle:.9}; brackets certified; eta(2Z^2) = {:.9} = 2 eta(Z^2) and eta(Z^2/2) = {:.9} = eta(Z^2)/2 \
         (the law as literally stated, eta(2L) = eta(L)/2, contradicts eta(cL) = c eta(L))",
        z1.eta, scaled[0], scaled[1]
    ))
}

fn records(
    results: &[LatticeVerification],
    id: CheckId,
) -> impl Iterator<Item = (&LatticeVerification, &VerificationRecord)> {
    results.iter().flat_map(move |v| v.records.iter().filter(move |r| r.check_id == id).map(move |r| (v, r)))
}

fn expect_passes(results: &[LatticeVerification], id: CheckId, max_dim: usize, per_lattice: usize) -> Verdict {
    let mut passed = 0;
    for v in results.iter().filter(|v| v.report.dim <= max_dim) {
        let rs: Vec<_> = v.records.iter().filter(|r| r.check_id == id).collect();
        if rs.len() != per_lattice {
            return Err(format!("{}: {} {id} records, expected {per_lattice}", v.report.name, rs.len()));
        }
        if let Some(bad) = rs.iter().find(|r| r.status != Status::Pass) {
            return Err(format!("{}: {id} {} ({})", v.report.name, bad.status, bad.details));
        }
        passed += rs.len();
    }
    Ok(format!("{passed} {id} records pass"))
}

fn sandwich(results: &[LatticeVerification]) -> Verdict {
    let lattices = results.iter().filter(|v| v.report.dim <= 6).count();
    for (v, r) in records(results, CheckId::SandwichEq2) {
        if !r.details.contains("shifts=200") {
            return Err(format!("{}: unexpected shift count ({})", v.report.name, r.details));
        }
    }
    expect_passes(results, CheckId::SandwichEq2, 6, 1).map(|m| format!("{m} on {lattices} lattices, 200 shifts each"))
}

fn lower_transference(results: &[LatticeVerification]) -> Verdict {
    let m = expect_passes(results, CheckId::LowerHalf, usize::MAX, 1)?;
    let mut zn = 0;
    for v in results.iter().filter(|v| v.report.name.starts_with('Z') && v.report.name[1..].parse::<usize>().is_ok()) {
        let n = v.report.dim as f64;
        let mu = v.report.mu_exact.ok_or_else(|| format!("{}: no exact covering radius", v.report.name))?;
        let product = mu * v.report.lambda1_dual;
        if (product - n.sqrt() / 2.0).abs() >= 1e-8 {
            return Err(format!("{}: mu lambda1* = {product}", v.report.name));
        }
        zn += 1;
    }
    Ok(format!("{m}; mu_exact lambda1* = sqrt(n)/2 on {zn} integer lattices"))
}

fn tail_monotone(results: &[LatticeVerification], summary: &str) -> Verdict {
    for v in results {
        if !v.profile.is_monotone() {
            return Err(format!("{}: certified increase at grid indices {:?}", v.report.name, v.profile.violations));
        }
        let row = format!("| {} | ", v.report.name);
        if !summary.lines().any(|l| l.starts_with(&row) && l.ends_with("| yes |")) {
            return Err(format!("{}: r* row missing from summary.md", v.report.name));
        }
    }
    Ok(format!("{} profiles nonincreasing; r*/(sqrt(n) s) recorded in summary.md", results.len()))
}

fn cli_run(workers: &str, out: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_latkit"))
        .args(["verify", "--corpus"])
        .arg(corpus_dir())
        .arg("--out")
        .arg(out)
        .args(["--seed", &SEED.to_string(), "--workers", workers])
        .stdout(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if status.code() == Some(0) {
        Ok(())
    } else {
        Err(format!("latkit verify --workers {workers} exited with {status}"))
    }
}

fn determinism(in_process: &Path) -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let one = dir.path().join("w1");
    let four = dir.path().join("w4");
    cli_run("1", &one)?;
    cli_run("4", &four)?;
    for file in ["report.csv", "invariants.csv"] {
        let a = fs::read(one.join(file)).map_err(|e| e.to_string())?;
        let b = fs::read(four.join(file)).map_err(|e| e.to_string())?;
        let c = fs::read(in_process.join(file)).map_err(|e| e.to_string())?;
        if a != b || a != c {
            return Err(format!("{file} differs between runs"));
        }
    }
    Ok("report.csv and invariants.csv byte-identical for 1 and 4 workers and the default pool".into())
}

fn main() -> ExitCode {
    let mut lines: Vec<(usize, Verdict)> = Vec::new();
    let mut report = |k: usize, v: Verdict| {
        match &v {
            Ok(msg) => println!("criterion {k}: PASS {msg}"),
            Err(msg) => println!("criterion {k}: FAIL {msg}"),
        }
        lines.push((k, v));
    };
    report(1, oracle_equivalence());
    report(2, named_invariants());
    report(3, theta_value());
    report(4, poisson());
    report(5, smoothing());

    let dir = tempfile::tempdir().expect("temp dir");
    let out = dir.path().join("verify");
    let cfg = RunConfig { seed: SEED, out: out.clone(), shifts: 200, ..RunConfig::default() };
    let outcome = Corpus::load(&corpus_dir(), SEED)
        .map_err(|e| e.to_string())
        .and_then(|c| run_verify(&c, &cfg).map_err(|e| format!("{e:#}")));
    match outcome {
        Ok(outcome) => {
            let results = &outcome.results;
            let summary = fs::read_to_string(out.join("summary.md")).unwrap_or_default();
            report(6, sandwich(results));
            report(7, expect_passes(results, CheckId::Thm3Identity, 4, 3));
            report(8, expect_passes(results, CheckId::Thm3Bound, 4, 2));
            report(9, lower_transference(results));
            report(10, tail_monotone(results, &summary));
            report(11, determinism(&out));
        }
        Err(e) => {
            for k in 6..=11 {
                report(k, Err(format!("verify run failed: {e}")));
            }
        }
    }
    let failed = lines.iter().filter(|(_, v)| v.is_err()).count();
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
