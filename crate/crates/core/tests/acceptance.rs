//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Every criterion is an exact comparison between two independent routes.
//! The suites live in `caystir::verify` so the CLI can run them too.

use std::process::ExitCode;

use caystir::verify::{run_suite, VerifyOptions};

const CRITERIA: &[(u32, &str, &[&str])] = &[
    (1, "classical Stirling numbers vs cycle tallies", &["stirling-classical"]),
    (2, "k=1 spheres vs element BFS, n = 2..8", &["spheres-k1"]),
    (3, "k=2 spheres vs element BFS on Alt(n), n = 5..8", &["spheres-k2"]),
    (4, "k=3,4 class BFS vs analytic spheres and diameters", &["spheres-large-k"]),
    (5, "I_g recursion by enumeration", &["i-recursion"]),
    (6, "seeded Φ vs direct counts, k = 1, 2", &["phi-recursion"]),
    (7, "I_g(n,2r) bridge to Φ(Γ²ₙ; r, g)", &["bridge"]),
    (8, "k >= 3 Φ properties", &["phi-large-k"]),
    (9, "two-factor and geodesic factorizations", &["factorization"]),
    (10, "insertion/deletion calculus and deletion shift", &["insertion-identities", "deletion-lemma"]),
    (11, "3-cycle attains N(Γ¹ₙ, r), n = 5..8", &["reconstruction-k1"]),
];

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let mut failures = 0;
    let mut lines = Vec::new();
    for &(number, title, suites) in CRITERIA {
        let mut passed = true;
        let mut millis = 0;
        for suite in suites {
            let report = run_suite(suite, &opts).expect("known suite");
            print!("{}", report.to_text());
            passed &= report.passed;
            millis += report.millis;
        }
        if !passed {
            failures += 1;
        }
        let verdict = if passed { "PASS" } else { "FAIL" };
        lines.push(format!("criterion {number:>2}: {verdict}  {title} ({millis} ms)"));
    }
    println!();
    for line in &lines {
        println!("{line}");
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failures, CRITERIA.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
