use std::fmt::Write as _;

use cvqkd_core::figures::{FigureRow, Unit};
use cvqkd_core::montecarlo::Agreement;
use cvqkd_core::protocol::{BerReport, EveStrategy, Scenario, SourceType, Verdict};

/// Four significant digits; scientific notation below 1e-4.
pub fn sig4(x: f64) -> String {
    if !x.is_finite() {
        return "n/a".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if mag < -4 {
        return format!("{x:.3e}");
    }
    let decimals = (3 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Secure => "secure",
        Verdict::Compromised => "compromised",
    }
}

pub fn describe(s: &Scenario) -> String {
    let source = match s.source {
        SourceType::Coherent => "coherent".to_string(),
        SourceType::EprSqueezed => format!("EPR, {} dB squeezing", sig4(s.squeezing_db)),
    };
    let eve = match s.eve {
        EveStrategy::Tap { fraction } => format!("tap {}", sig4(fraction)),
        other => other.name().to_string(),
    };
    format!(
        "{source}, loss {}, eve {eve}, target BER {}",
        sig4(s.loss),
        sig4(s.target_bob_ber)
    )
}

pub fn analytic_table(s: &Scenario, r: &BerReport) -> String {
    let mut out = String::new();
    writeln!(out, "scenario      {}", describe(s)).unwrap();
    writeln!(out, "signal power  {}", sig4(r.signal_power)).unwrap();
    writeln!(out, "Bob test BER  {}", sig4(r.bob_test_ber)).unwrap();
    writeln!(out, "Eve key BER   {}", sig4(r.eve_key_ber)).unwrap();
    writeln!(out, "Bob baseline  {}", sig4(r.bob_baseline_ber)).unwrap();
    writeln!(out, "verdict       {}", verdict(r.verdict)).unwrap();
    out
}

pub fn simulate_table(
    s: &Scenario,
    a: &BerReport,
    e: &BerReport,
    z: &Agreement,
    seed: u64,
) -> String {
    let counts = e.counts.expect("empirical report has counts");
    let mut out = String::new();
    writeln!(out, "scenario      {}", describe(s)).unwrap();
    writeln!(out, "signal power  {}", sig4(a.signal_power)).unwrap();
    writeln!(out, "seed          {seed}").unwrap();
    writeln!(
        out,
        "samples       {} test, {} key",
        counts.test, counts.key
    )
    .unwrap();
    writeln!(out).unwrap();
    writeln!(
        out,
        "{:<14}{:>10}{:>11}{:>10}{:>8}",
        "", "analytic", "empirical", "sigma", "z"
    )
    .unwrap();
    for (name, ana, emp, sigma, zv) in [
        (
            "Bob test BER",
            a.bob_test_ber,
            e.bob_test_ber,
            z.bob_test_sigma,
            z.bob_test_z,
        ),
        (
            "Eve key BER",
            a.eve_key_ber,
            e.eve_key_ber,
            z.eve_key_sigma,
            z.eve_key_z,
        ),
    ] {
        writeln!(
            out,
            "{name:<14}{:>10}{:>11}{:>10}{:>8}",
            sig4(ana),
            sig4(emp),
            sig4(sigma),
            sig4(zv)
        )
        .unwrap();
    }
    writeln!(out).unwrap();
    writeln!(
        out,
        "verdict       {} (analytic: {})",
        verdict(e.verdict),
        verdict(a.verdict)
    )
    .unwrap();
    if counts.test.min(counts.key) < 100 {
        writeln!(
            out,
            "warning: fewer than 100 test or key samples; the confidence interval is wide"
        )
        .unwrap();
    }
    out
}

pub fn scan_table(param: &str, rows: &[(f64, BerReport)]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{param:>14}{:>14}{:>14}",
        "bob_test_ber", "eve_key_ber"
    )
    .unwrap();
    for (v, r) in rows {
        writeln!(
            out,
            "{:>14}{:>14}{:>14}",
            sig4(*v),
            sig4(r.bob_test_ber),
            sig4(r.eve_key_ber)
        )
        .unwrap();
    }
    out
}

pub fn scan_csv(param: &str, rows: &[(f64, BerReport)]) -> String {
    let mut out = format!("{param},bob_test_ber,eve_key_ber\n");
    for (v, r) in rows {
        writeln!(out, "{v},{},{}", r.bob_test_ber, r.eve_key_ber).unwrap();
    }
    out
}

fn figure(unit: Unit, x: f64) -> String {
    match unit {
        Unit::Rate => format!("{}%", sig4(100.0 * x)),
        Unit::Factor => sig4(x),
    }
}

pub fn reproduce_table(rows: &[FigureRow]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<46}{:>9}{:>10}{:>11}  status",
        "figure", "reference", "computed", "tolerance"
    )
    .unwrap();
    for r in rows {
        let tol = r.tolerance.map_or("-".to_string(), |t| figure(r.unit, t));
        writeln!(
            out,
            "{:<46}{:>9}{:>10}{:>11}  {}",
            r.label,
            figure(r.unit, r.reference),
            figure(r.unit, r.computed),
            tol,
            r.status
        )
        .unwrap();
    }
    out
}
