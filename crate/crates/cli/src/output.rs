//! Report files: CSV tables, a Markdown summary and an SVG chart.
//!
//! All numbers go through [`fmt_num`], so the output does not depend on the
//! locale or on the platform's float printing.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;

use latkit_core::transference::{IMPROVED_CONSTANT, INV_2PI, INV_2PI_E};
use latkit_core::{CheckId, LatticeVerification, Status};

use crate::run::RunConfig;

/// Significant digits of every CSV number.
pub const SIG_DIGITS: usize = 12;

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside `[1e-4, 1e12)`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map_or(String::new(), fmt_num)
}

pub const REPORT_HEADER: [&str; 7] = ["lattice_name", "check_id", "status", "lhs", "rhs", "margin", "details"];

pub const INVARIANTS_HEADER: [&str; 19] = [
    "name",
    "dim",
    "det",
    "lambda1",
    "lambda1_dual",
    "kissing",
    "mu_lo",
    "mu_hi",
    "mu_exact",
    "eta",
    "eta_lo",
    "eta_hi",
    "beta_hat",
    "beta_hat_dual",
    "alpha_max",
    "product_lo",
    "product_hi",
    "mu_eta_ratio",
    "r_star_normalized",
];

pub fn write_report_csv<W: Write>(out: W, results: &[LatticeVerification]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for rec in results.iter().flat_map(|r| &r.records) {
        w.write_record([
            rec.lattice_name.clone(),
            rec.check_id.to_string(),
            rec.status.to_string(),
            fmt_num(rec.lhs),
            fmt_num(rec.rhs),
            fmt_num(rec.margin),
            rec.details.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_invariants_csv<W: Write>(out: W, results: &[LatticeVerification]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(INVARIANTS_HEADER)?;
    for v in results {
        let r = &v.report;
        w.write_record([
            r.name.clone(),
            r.dim.to_string(),
            fmt_num(r.det),
            fmt_num(r.lambda1),
            fmt_num(r.lambda1_dual),
            r.kissing.to_string(),
            fmt_num(r.mu_lo),
            fmt_num(r.mu_hi),
            opt_num(r.mu_exact),
            fmt_num(r.eta),
            fmt_num(r.eta_lo),
            fmt_num(r.eta_hi),
            fmt_num(r.beta_hat),
            fmt_num(r.beta_hat_dual),
            fmt_num(r.alpha_max),
            fmt_num(r.normalized_product_lo()),
            fmt_num(r.normalized_product_hi()),
            fmt_num(r.mu_eta_ratio()),
            opt_num(v.profile.normalized_r_star()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Names starting with this prefix are seeded random lattices.
pub const GENERATED_PREFIX: &str = "rand-";

pub fn summary_markdown(results: &[LatticeVerification], cfg: &RunConfig) -> String {
    let mut md = String::new();
    let failures: Vec<_> = results.iter().flat_map(|r| &r.records).filter(|r| r.is_failure()).collect();
    let _ = writeln!(md, "# Lattice verification summary\n");
    let _ = writeln!(
        md,
        "Seed {}, mass tolerance {}, eta tolerance {}, enumeration budget {}, {} shifts, alpha_max {}.\n",
        cfg.seed,
        fmt_num(cfg.mass_tol),
        fmt_num(cfg.eta_tol),
        cfg.enum_budget,
        cfg.shifts,
        fmt_num(cfg.alpha_max)
    );
    let verdict = if failures.is_empty() { "all checks passed" } else { "some checks FAILED" };
    let _ = writeln!(md, "{} lattices, {verdict}.\n", results.len());

    let _ = writeln!(md, "## Invariants\n");
    let _ = writeln!(
        md,
        "| lattice | n | lambda1 | lambda1* | kissing | mu | eta | beta_hat | beta_hat* | mu lambda1*/n |"
    );
    let _ = writeln!(md, "|---|---|---|---|---|---|---|---|---|---|");
    for v in results {
        let r = &v.report;
        let mu = match r.mu_exact {
            Some(m) => format!("{} (exact)", fmt6(m)),
            None => format!("[{}, {}]", fmt6(r.mu_lo), fmt6(r.mu_hi)),
        };
        let _ = writeln!(
            md,
            "| {} | {} | {} | {} | {} | {mu} | {} | {} | {} | [{}, {}] |",
            r.name,
            r.dim,
            fmt6(r.lambda1),
            fmt6(r.lambda1_dual),
            r.kissing,
            fmt6(r.eta),
            fmt6(r.beta_hat),
            fmt6(r.beta_hat_dual),
            fmt6(r.normalized_product_lo()),
            fmt6(r.normalized_product_hi())
        );
    }

    let _ = writeln!(md, "\n## Checks\n");
    let _ = writeln!(md, "| check | pass | fail | report-only |");
    let _ = writeln!(md, "|---|---|---|---|");
    for id in ALL_CHECKS {
        let of =
            |s: Status| results.iter().flat_map(|r| &r.records).filter(|r| r.check_id == id && r.status == s).count();
        let _ = writeln!(md, "| {id} | {} | {} | {} |", of(Status::Pass), of(Status::Fail), of(Status::ReportOnly));
    }
    if !failures.is_empty() {
        let _ = writeln!(md, "\n### Failures\n");
        for f in &failures {
            let _ = writeln!(
                md,
                "- {} {}: lhs {}, rhs {}; {}",
                f.lattice_name,
                f.check_id,
                fmt_num(f.lhs),
                fmt_num(f.rhs),
                f.details
            );
        }
    }

    let _ = writeln!(md, "\n## Tail radius\n");
    let _ = writeln!(
        md,
        "Least grid radius r* with rho_(s,r)(L)/rho_s(L) <= 1/3 at s = eta, as r*/(sqrt(n) s); compare 1/sqrt(2 pi) = {}.\n",
        fmt6(1.0 / (2.0 * PI).sqrt())
    );
    let _ = writeln!(md, "| lattice | r*/(sqrt(n) s) | ratio monotone |");
    let _ = writeln!(md, "|---|---|---|");
    for v in results {
        let r = v.profile.normalized_r_star().map_or("none on grid".to_string(), fmt6);
        let _ = writeln!(md, "| {} | {r} | {} |", v.report.name, if v.profile.is_monotone() { "yes" } else { "NO" });
    }

    let _ = writeln!(md, "\n## Normalized product\n");
    let _ = writeln!(
        md,
        "mu lambda1(L*)/n against 1/(2 pi e) = {}, 0.1275 and 1/(2 pi) = {}. The asymptotic constants carry \
         unquantified lower-order terms, so these are context, not assertions.\n",
        fmt6(INV_2PI_E),
        fmt6(INV_2PI)
    );
    let generated: Vec<_> = results.iter().filter(|v| v.report.name.starts_with(GENERATED_PREFIX)).collect();
    if !generated.is_empty() {
        let mean = generated.iter().map(|v| v.report.normalized_product_lo()).sum::<f64>() / generated.len() as f64;
        let _ = writeln!(
            md,
            "Heuristic: the {} seeded random lattices are a stand-in for Haar-random lattices, not samples of them; \
             their mean lower product {} is compared with the random-lattice constant 1/(2 pi e) only heuristically.\n",
            generated.len(),
            fmt6(mean)
        );
    }
    let above = results.iter().filter(|v| v.report.normalized_product_lo() > IMPROVED_CONSTANT).count();
    let _ = writeln!(md, "{above} lattice(s) have a lower product above 0.1275.");
    md
}

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

const ALL_CHECKS: [CheckId; 9] = [
    CheckId::SandwichEq2,
    CheckId::TailEq3Report,
    CheckId::MuEtaEq4Report,
    CheckId::EtaLambdaEq5,
    CheckId::Thm3Identity,
    CheckId::Thm3Bound,
    CheckId::CorEq6,
    CheckId::LowerHalf,
    CheckId::ProductReport,
];

/// Normalized product interval per lattice against its dimension, with the
/// three reference constants as horizontal lines.
pub fn chart_svg(results: &[LatticeVerification]) -> String {
    const W: f64 = 720.0;
    const H: f64 = 440.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 170.0;
    const TOP: f64 = 30.0;
    const BOTTOM: f64 = 50.0;
    let max_n = results.iter().map(|v| v.report.dim).max().unwrap_or(1).max(2) as f64;
    let y_max =
        results.iter().map(|v| v.report.normalized_product_hi()).filter(|y| y.is_finite()).fold(INV_2PI, f64::max)
            * 1.1;
    let x = |n: f64| LEFT + (n - 0.5) / max_n * (W - LEFT - RIGHT);
    let y = |v: f64| H - BOTTOM - v / y_max * (H - TOP - BOTTOM);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="18" text-anchor="middle">normalized product mu lambda1(L*)/n versus n</text>"#,
        W / 2.0
    );
    // Axes.
    let (x0, x1, y0) = (x(0.5), x(max_n + 0.5), y(0.0));
    let _ = writeln!(svg, r#"<line x1="{x0:.1}" y1="{y0:.1}" x2="{x1:.1}" y2="{y0:.1}" stroke="black"/>"#);
    let _ = writeln!(svg, r#"<line x1="{x0:.1}" y1="{y0:.1}" x2="{x0:.1}" y2="{:.1}" stroke="black"/>"#, y(y_max));
    for n in 1..=max_n as usize {
        let xn = x(n as f64);
        let _ = writeln!(svg, r#"<line x1="{xn:.1}" y1="{y0:.1}" x2="{xn:.1}" y2="{:.1}" stroke="black"/>"#, y0 + 4.0);
        let _ = writeln!(svg, r#"<text x="{xn:.1}" y="{:.1}" text-anchor="middle">{n}</text>"#, y0 + 18.0);
    }
    let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">n</text>"#, (x0 + x1) / 2.0, H - 10.0);
    for k in 0..=4 {
        let v = y_max * k as f64 / 4.0;
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.3}</text>"#, x0 - 6.0, y(v) + 4.0);
    }
    // Reference constants.
    for (value, label, color) in [
        (INV_2PI_E, "1/(2 pi e)", "#1b9e77"),
        (IMPROVED_CONSTANT, "0.1275", "#d95f02"),
        (INV_2PI, "1/(2 pi)", "#7570b3"),
    ] {
        let yv = y(value);
        let _ = writeln!(
            svg,
            r#"<line x1="{x0:.1}" y1="{yv:.1}" x2="{x1:.1}" y2="{yv:.1}" stroke="{color}" stroke-dasharray="6 4"/>"#
        );
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" fill="{color}">{label}</text>"#, x1 + 6.0, yv + 4.0);
    }
    // Intervals, offset slightly when several lattices share a dimension.
    let mut seen = vec![0usize; max_n as usize + 1];
    for v in results {
        let r = &v.report;
        let k = seen[r.dim];
        seen[r.dim] += 1;
        let xn = x(r.dim as f64) + (k as f64 % 7.0 - 3.0) * 5.0;
        let (lo, hi) = (r.normalized_product_lo(), r.normalized_product_hi());
        if !(lo.is_finite() && hi.is_finite()) {
            continue;
        }
        let _ =
            writeln!(svg, r##"<line x1="{xn:.1}" y1="{:.1}" x2="{xn:.1}" y2="{:.1}" stroke="#444"/>"##, y(lo), y(hi));
        let _ = writeln!(
            svg,
            r##"<circle cx="{xn:.1}" cy="{:.1}" r="3" fill="#222"><title>{}: [{lo:.6}, {hi:.6}]</title></circle>"##,
            y(lo),
            r.name
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(2f64.sqrt()), "1.41421356237");
        assert_eq!(fmt_num(-1234.5), "-1234.5");
        assert_eq!(fmt_num(1e-9), "1e-09");
        assert_eq!(fmt_num(1.5e-5), "1.5e-05");
        assert_eq!(fmt_num(0.0001), "0.0001");
        assert_eq!(fmt_num(123456789012.0), "123456789012");
        assert_eq!(fmt_num(1234567890123.0), "1.23456789012e+12");
        assert_eq!(fmt_num(f64::NAN), "nan");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(9.9999999999999), "10");
    }
}
