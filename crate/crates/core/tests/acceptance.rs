//! Acceptance criteria A1–A12 at full resolution.
//!
//! Runs without the libtest harness so that every criterion prints exactly
//! one PASS/FAIL line; the process exits non-zero if any criterion fails.

use dirac_step::verify::{
    antiparticle, chirality_check, conservation, extremal_points_check, limits,
    oracle_equivalence, parity_independence, phase_formula, phase_zero, slope_discontinuity,
    spectrum_oracle, total_reflection, universality, CheckOutcome, SuiteOptions,
};

fn line(id: &str, parts: &[CheckOutcome]) -> bool {
    let passed = parts.iter().all(|p| p.passed);
    println!("{id:<4} {}", if passed { "PASS" } else { "FAIL" });
    for p in parts {
        println!("     {p}");
    }
    passed
}

fn main() {
    // 200 points per unit of sin(theta), 1000 random points, fixed seed.
    let opts = SuiteOptions::default();
    let results = [
        line("A1", &[conservation(&opts)]),
        line("A2", &[oracle_equivalence(&opts)]),
        line("A3", &[total_reflection(&opts)]),
        line("A4", &[spectrum_oracle(&opts)]),
        line("A5", &[extremal_points_check(&opts)]),
        line("A6", &[limits(&opts)]),
        line("A7", &[phase_formula(&opts)]),
        line("A8", &[phase_zero(&opts)]),
        line("A9", &[universality(&opts), slope_discontinuity(&opts)]),
        line("A10", &[chirality_check(&opts)]),
        line("A11", &[antiparticle(&opts)]),
        line("A12", &[parity_independence(&opts)]),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("\nacceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
