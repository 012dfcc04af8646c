//! Named verification suites. Each compares an analytic or recursive route
//! with an independent brute-force count and reports per-check tallies.
//!
//! | suite | contents |
//! |-------|----------|
//! | `stirling-classical` | first-kind values vs cycle tallies over `Sym(n)`, `n <= 8`; row sums to `n <= 20`; recurrence |
//! | `spheres-k1` | every element of `Sym(n)`, `n = 2..8`, against element BFS; diameter |
//! | `spheres-k2` | every element of `Alt(n)`, `n = 5..8`, against element BFS; 3-cycle clause; diameter |
//! | `spheres-large-k` | class BFS for `k = 3, n = 12..14` and `k = 4, n = 16` |
//! | `spheres-k<K>-n<N>` | class BFS for one graph |
//! | `i-recursion` | the `I_g` recursion between degrees `n - 1` and `n <= 8` |
//! | `phi-recursion` | seeded `Φ` vs direct counts for `k = 1, 2` |
//! | `bridge` | `I_g(n, 2r) = Φ(Γ²ₙ; r, g)` by enumeration |
//! | `phi-large-k` | `k >= 3`: ball sizes, saturation, summand recurrences, symmetry |
//! | `factorization` | two-factor splits and geodesic words |
//! | `insertion-identities` | the insertion/deletion calculus |
//! | `deletion-lemma` | the distance shift under deletion |
//! | `reconstruction-k1` | the 3-cycle class attains `N(Γ¹ₙ, r)` |

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cycle_type::{factorial, partitions_of, CycleType};
use crate::metric::{
    ball_size, diameter, factor_two_k_transpositions, geodesic_factorization, sphere_radius,
    sphere_radius_of_type, GraphSpec, RadiusRule, SphereAssignment,
};
use crate::oracle::{
    class_bfs, element_bfs, joint_histogram, lehmer_unrank, phi_column, phi_column_with,
    seed_threshold, column_value, DistanceSource, OracleConfig, SeedKind,
};
use crate::perm::Permutation;
use crate::phi::{PhiEngine, PhiQuery, Regime};
use crate::stirling::StirlingFunction;

/// Suites runnable by name, in criterion order.
pub const SUITES: &[&str] = &[
    "stirling-classical",
    "spheres-k1",
    "spheres-k2",
    "spheres-large-k",
    "i-recursion",
    "phi-recursion",
    "bridge",
    "phi-large-k",
    "factorization",
    "insertion-identities",
    "deletion-lemma",
    "reconstruction-k1",
];

const MAX_SAMPLES: usize = 5;

/// Outcome of one named check inside a suite.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    /// Up to five failing cases, for diagnosis.
    pub samples: Vec<String>,
    pub note: Option<String>,
    pub millis: u128,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: 0,
            failed: 0,
            samples: Vec::new(),
            note: None,
            millis: 0,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.samples.len() < MAX_SAMPLES {
                self.samples.push(describe());
            }
        }
    }

    fn fail(&mut self, why: impl Into<String>) {
        self.record(false, || why.into());
    }

    pub fn ok(&self) -> bool {
        self.failed == 0 && self.passed > 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub millis: u128,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict} {} ({} ms)", self.suite, self.millis).unwrap();
        for c in &self.checks {
            let mark = if c.ok() { "ok  " } else { "FAIL" };
            write!(out, "  {mark} {}: {} passed, {} failed", c.name, c.passed, c.failed).unwrap();
            if let Some(note) = &c.note {
                write!(out, " [{note}]").unwrap();
            }
            writeln!(out, " ({} ms)", c.millis).unwrap();
            for s in &c.samples {
                writeln!(out, "       {s}").unwrap();
            }
        }
        out
    }
}

/// Shared knobs for every suite.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub oracle: OracleConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0x5eed,
            oracle: OracleConfig::default(),
        }
    }
}

/// Runs a suite by name; `None` for an unknown name.
pub fn run_suite(name: &str, opts: &VerifyOptions) -> Option<SuiteReport> {
    let start = Instant::now();
    let checks = match name {
        "stirling-classical" => stirling_classical(),
        "spheres-k1" => element_spheres(1, 2..=8, opts),
        "spheres-k2" => element_spheres(2, 5..=8, opts),
        "spheres-large-k" => [(3, 12), (3, 13), (3, 14), (4, 16)]
            .into_iter()
            .map(|(k, n)| class_spheres(k, n, opts))
            .collect(),
        "i-recursion" => i_recursion(opts),
        "phi-recursion" => phi_recursion(opts),
        "bridge" => bridge(opts),
        "phi-large-k" => phi_large_k(opts),
        "factorization" => factorization(opts),
        "insertion-identities" => insertion_identities(opts),
        "deletion-lemma" => deletion_lemma(opts),
        "reconstruction-k1" => reconstruction_k1(opts),
        other => {
            let (k, n) = parse_sphere_suite(other)?;
            vec![class_spheres(k, n, opts)]
        }
    };
    let passed = !checks.is_empty() && checks.iter().all(Check::ok);
    Some(SuiteReport {
        suite: name.to_string(),
        passed,
        checks,
        millis: start.elapsed().as_millis(),
    })
}

fn parse_sphere_suite(name: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix("spheres-k")?;
    let (k, n) = rest.split_once("-n")?;
    Some((k.parse().ok()?, n.parse().ok()?))
}

fn timed(mut check: Check, start: Instant) -> Check {
    check.millis = start.elapsed().as_millis();
    check
}

fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let total: u64 = (1..=n as u64).product();
    (0..total).map(move |rank| {
        let mut buf = vec![0u8; n];
        lehmer_unrank(rank, &mut buf);
        Permutation::from_images(buf.into_iter().map(u32::from).collect()).expect("bijection")
    })
}

fn stirling_classical() -> Vec<Check> {
    let mut classical = StirlingFunction::classical();

    let start = Instant::now();
    let mut tallies = Check::new("values vs cycle tallies, n <= 8");
    for n in 1..=8 {
        let mut counts = vec![0u64; n + 2];
        for g in all_permutations(n) {
            counts[g.cycle_count()] += 1;
        }
        for (m, &expected) in counts.iter().enumerate() {
            let got = classical.eval(n, m as i64).unwrap();
            tallies.record(got == BigUint::from(expected), || {
                format!("c({n},{m}) = {got}, enumeration gives {expected}")
            });
        }
    }
    let tallies = timed(tallies, start);

    let start = Instant::now();
    let mut sums = Check::new("row sums = n!, n <= 20");
    for n in 1..=20 {
        let sum: BigUint = (0..=n as i64).map(|m| classical.eval(n, m).unwrap()).sum();
        sums.record(sum == factorial(n), || format!("row {n} sums to {sum}"));
    }
    let sums = timed(sums, start);

    let start = Instant::now();
    let mut rec = Check::new("recurrence and zero region, n <= 21");
    for n in 2..=21 {
        for m in -2..=(n as i64 + 2) {
            let lhs = classical.eval(n, m).unwrap();
            let rhs = classical.eval(n - 1, m - 1).unwrap()
                + BigUint::from(n - 1) * classical.eval(n - 1, m).unwrap();
            let zero_ok = m <= n as i64 || lhs == BigUint::default();
            rec.record(lhs == rhs && zero_ok, || format!("f({n},{m}) = {lhs}, recurrence gives {rhs}"));
        }
    }
    vec![tallies, sums, timed(rec, start)]
}

fn element_spheres(k: usize, degrees: std::ops::RangeInclusive<usize>, opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = Vec::new();
    for n in degrees {
        let start = Instant::now();
        let spec = GraphSpec::new(k, n).expect("valid graph");
        let mut check = Check::new(format!("k={k} n={n}: every element vs element BFS"));
        let table = match element_bfs(&spec, &opts.oracle) {
            Ok(t) => t,
            Err(e) => {
                check.fail(e.to_string());
                checks.push(timed(check, start));
                continue;
            }
        };
        let mut three_cycles = 0u64;
        for g in all_permutations(n) {
            let bfs = table.distance(&g).unwrap();
            let (analytic, rule) = crate::metric::classify(&spec, &g).unwrap();
            if rule == RadiusRule::ThreeCycle {
                three_cycles += 1;
            }
            let expected = bfs.map_or(SphereAssignment::NotAVertex, |d| SphereAssignment::Radius(d as usize));
            check.record(analytic == expected, || format!("{g}: analytic {analytic}, BFS {expected}"));
        }
        let diam = diameter(&spec).unwrap();
        check.record(diam == table.max_distance() as usize, || {
            format!("diameter formula {diam}, BFS eccentricity {}", table.max_distance())
        });
        if k == 2 {
            check.note = Some(format!("{three_cycles} elements decided by the 3-cycle clause"));
        }
        checks.push(timed(check, start));
    }
    checks
}

/// Class-level BFS against the analytic assignment on every partition of `n`.
pub fn class_spheres(k: usize, n: usize, opts: &VerifyOptions) -> Check {
    let start = Instant::now();
    let mut check = Check::new(format!("k={k} n={n}: every cycle type vs class BFS"));
    let spec = match GraphSpec::new(k, n) {
        Ok(s) if s.analytic_valid() => s,
        Ok(_) => {
            check.fail(format!("k={k}, n={n} is outside analytic validity"));
            return timed(check, start);
        }
        Err(e) => {
            check.fail(e.to_string());
            return timed(check, start);
        }
    };
    let table = match class_bfs(&spec, &opts.oracle) {
        Ok(t) => t,
        Err(e) => {
            check.fail(e.to_string());
            return timed(check, start);
        }
    };
    let mut types = 0;
    for t in partitions_of(n) {
        types += 1;
        let analytic = sphere_radius_of_type(&spec, &t).unwrap();
        let bfs = table.get(&t).map_or(SphereAssignment::NotAVertex, SphereAssignment::Radius);
        check.record(analytic == bfs, || format!("{t}: analytic {analytic}, BFS {bfs}"));
    }
    let diam = diameter(&spec).unwrap();
    check.record(diam == table.max_distance(), || {
        format!("diameter formula {diam}, BFS eccentricity {}", table.max_distance())
    });
    check.note = Some(format!("{types} cycle types compared"));
    timed(check, start)
}

fn i_recursion(opts: &VerifyOptions) -> Vec<Check> {
    let start = Instant::now();
    let mut check = Check::new("I_g(n,r) = I_g(n-1,r) + (n-1) I_g(n-1,r-1), n <= 8, r <= 2n");
    for n in 2..=8 {
        for t in partitions_of(n).filter(|t| t.support_size() < n) {
            let big = joint_histogram(&t.representative(), &opts.oracle).unwrap();
            let small = joint_histogram(&t.with_degree(n - 1).unwrap().representative(), &opts.oracle).unwrap();
            for r in 0..=2 * n as i64 {
                let lhs = big.i_g(r);
                let rhs = small.i_g(r) + (n as u64 - 1) * small.i_g(r - 1);
                check.record(lhs == rhs, || format!("n={n} type {t} r={r}: {lhs} vs {rhs}"));
            }
        }
    }
    vec![timed(check, start)]
}

fn phi_recursion(opts: &VerifyOptions) -> Vec<Check> {
    let engine = PhiEngine::new(opts.oracle);
    let mut checks = Vec::new();
    for (k, degrees, min_r) in [(1, 2..=8, 0), (2, 5..=8, 2)] {
        let start = Instant::now();
        let mut check = Check::new(format!("k={k}: seeded Φ vs direct count, support <= 6"));
        let mut recursion_cells = 0;
        for n in degrees {
            let spec = GraphSpec::new(k, n).unwrap();
            let top = diameter(&spec).unwrap() + 1;
            for t in spec.vertex_types().filter(|t| t.support_size() <= 6) {
                let column = match phi_column(&spec, &t.representative(), &opts.oracle) {
                    Ok(c) => c,
                    Err(e) => {
                        check.fail(format!("n={n} type {t}: {e}"));
                        continue;
                    }
                };
                for r in min_r..=top {
                    let direct = column_value(&column, r);
                    match engine.phi(&PhiQuery::new(spec, r, &t).unwrap()) {
                        Ok(v) => {
                            if v.regime == Regime::AnalyticRecursion {
                                recursion_cells += 1;
                            }
                            check.record(v.value == direct, || {
                                format!("n={n} type {t} r={r}: {} vs direct {direct}", v.value)
                            });
                        }
                        Err(e) => check.fail(format!("n={n} type {t} r={r}: {e}")),
                    }
                }
            }
        }
        check.note = Some(format!("{recursion_cells} cells via the seeded recursion"));
        checks.push(timed(check, start));
    }
    checks
}

fn bridge(opts: &VerifyOptions) -> Vec<Check> {
    let start = Instant::now();
    let mut check = Check::new("I_g(n,2r) = |B¹_2r ∩ B_r g| on Γ²ₙ, n = 5..8, r >= 2");
    for n in 5..=8 {
        let spec = GraphSpec::new(2, n).unwrap();
        let table = element_bfs(&spec, &opts.oracle).unwrap();
        for t in spec.vertex_types() {
            let g = t.representative();
            let column = phi_column_with(&spec, DistanceSource::Bfs(&table), &g).unwrap();
            let hist = joint_histogram(&g, &opts.oracle).unwrap();
            for r in 2..=diameter(&spec).unwrap() + 1 {
                let lhs = BigUint::from(hist.i_g(2 * r as i64));
                let rhs = column_value(&column, r);
                check.record(lhs == rhs, || format!("n={n} type {t} r={r}: I = {lhs}, Φ = {rhs}"));
            }
        }
    }
    vec![timed(check, start)]
}

fn phi_large_k(opts: &VerifyOptions) -> Vec<Check> {
    let engine = PhiEngine::new(opts.oracle);
    let phi = |spec: GraphSpec, r: usize, t: &CycleType| engine.phi(&PhiQuery::new(spec, r, t)?);

    // (a) identity class against class-size sums.
    let start = Instant::now();
    let mut balls = Check::new("(a) Φ(r, e) = ball size, k = 3..5, n <= 30, r >= 3");
    for k in 3..=5 {
        for n in 4 * k + 1..=30 {
            let spec = GraphSpec::new(k, n).unwrap();
            let e = CycleType::identity(n);
            for r in 3..=diameter(&spec).unwrap() + 1 {
                match phi(spec, r, &e) {
                    Ok(v) => {
                        let expected = ball_size(&spec, r).unwrap();
                        balls.record(v.value == expected, || {
                            format!("k={k} n={n} r={r}: {} vs {expected}", v.value)
                        });
                    }
                    Err(err) => balls.fail(format!("k={k} n={n} r={r}: {err}")),
                }
            }
        }
    }
    let balls = timed(balls, start);

    // (b) saturation exactly at the diameter.
    let start = Instant::now();
    let mut saturation = Check::new("(b) saturation at the diameter, k = 3..5, support <= 6");
    for k in 3..=5 {
        for n in [4 * k + 1, 4 * k + 5] {
            let spec = GraphSpec::new(k, n).unwrap();
            let diam = diameter(&spec).unwrap();
            let order = spec.group_order();
            for t in spec.vertex_types().filter(|t| t.support_size() <= 6) {
                match phi(spec, diam, &t) {
                    Ok(v) => saturation.record(v.value == order, || {
                        format!("k={k} n={n} type {t}: Φ(diam) = {} vs {order}", v.value)
                    }),
                    Err(err) => saturation.fail(format!("k={k} n={n} type {t}: {err}")),
                }
            }
            match phi(spec, diam - 1, &CycleType::identity(n)) {
                Ok(v) => saturation.record(v.value < order, || {
                    format!("k={k} n={n}: ball of radius diam-1 is already everything")
                }),
                Err(err) => saturation.fail(format!("k={k} n={n}: {err}")),
            }
        }
    }
    let saturation = timed(saturation, start);

    // (c) each summand: recurrence over 20 consecutive n, agreement with
    // enumeration wherever enumeration is possible, and the sum itself.
    let start = Instant::now();
    let mut summands = Check::new("(c) k=3 summands: recurrence over 20 rows, enumeration, sum");
    let k = 3usize;
    for t in partitions_of(6).map(|t| t.with_degree(t.support_size().max(2)).unwrap()) {
        // (kind, lag): the summand is evaluated at b = (r - lag) k.
        let kinds: [(SeedKind, usize); 2] = if t.parity().is_even() {
            [(SeedKind::IRow, 0), (SeedKind::IRow, 1)]
        } else {
            [
                (SeedKind::CrossRow { offset: k as i64 }, 1),
                (SeedKind::CrossRow { offset: -(k as i64) }, 0),
            ]
        };
        let s0 = seed_threshold(&t);
        for (kind, _) in &kinds {
            let mut f = engine.stirling_for(&t, *kind).unwrap();
            for n in s0 + 1..=s0 + 20 {
                for r in 0..=3 * n as i64 {
                    let lhs = f.eval_r(n, r).unwrap();
                    let rhs = f.eval_r(n - 1, r).unwrap() + BigUint::from(n - 1) * f.eval_r(n - 1, r - 1).unwrap();
                    summands.record(lhs == rhs, || format!("{kind} {t} n={n} r={r}"));
                }
            }
            for n in s0..=opts.oracle.enumeration_cap.min(9) {
                let hist = joint_histogram(&t.with_degree(n).unwrap().representative(), &opts.oracle).unwrap();
                for b in 0..=2 * n as i64 + 3 {
                    let direct = match kind {
                        SeedKind::CrossRow { offset } => hist.cross(b + offset, b),
                        _ => hist.i_g(b),
                    };
                    let got = f.eval_r(n, b).unwrap();
                    summands.record(got == BigUint::from(direct), || {
                        format!("{kind} {t} n={n} b={b}: {got} vs enumeration {direct}")
                    });
                }
            }
        }
        for n in 13..=20 {
            let spec = GraphSpec::new(k, n).unwrap();
            for r in 3..=diameter(&spec).unwrap() + 1 {
                let parts: BigUint = kinds
                    .iter()
                    .map(|&(kind, lag)| {
                        let b = ((r - lag) * k) as i64;
                        engine.stirling_for(&t, kind).unwrap().eval_r(n, b).unwrap()
                    })
                    .sum();
                match phi(spec, r, &t) {
                    Ok(v) => summands.record(v.value == parts, || {
                        format!("type {t} n={n} r={r}: Φ {} vs summands {parts}", v.value)
                    }),
                    Err(err) => summands.fail(format!("type {t} n={n} r={r}: {err}")),
                }
            }
        }
    }
    let summands = timed(summands, start);

    // (d) inverse and conjugation invariance, element-level where BFS fits.
    let start = Instant::now();
    let mut symmetry = Check::new("(d) Φ(g) = Φ(g⁻¹) = Φ(conjugates), direct and seeded");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for (k, n) in [(3, 7), (3, 8), (4, 9)] {
        let spec = GraphSpec::new(k, n).unwrap();
        let table = element_bfs(&spec, &opts.oracle).unwrap();
        let column = |g: &Permutation| phi_column_with(&spec, DistanceSource::Bfs(&table), g).unwrap();
        for t in spec.vertex_types().filter(|t| t.support_size() <= 6 && !t.is_identity()) {
            let g = t.random_member(&mut rng);
            let base = column(&g);
            symmetry.record(column(&g.inverse()) == base, || format!("k={k} n={n} {g}: inverse differs"));
            for _ in 0..20 {
                let x = random_permutation(&mut rng, n);
                let conj = g.conjugate(&x).unwrap();
                symmetry.record(column(&conj) == base, || format!("k={k} n={n} {g} ~ {conj}: conjugate differs"));
            }
        }
    }
    for (k, n) in [(3, 17), (4, 21), (5, 23)] {
        let spec = GraphSpec::new(k, n).unwrap();
        for t in spec.vertex_types().filter(|t| t.support_size() <= 6 && !t.is_identity()) {
            let g = t.random_member(&mut rng);
            for r in 3..=diameter(&spec).unwrap() {
                let a = engine.phi(&PhiQuery::from_permutation(spec, r, &g).unwrap());
                let b = engine.phi(&PhiQuery::from_permutation(spec, r, &g.inverse()).unwrap());
                symmetry.record(a.is_ok() && a == b, || format!("k={k} n={n} {g} r={r}: {a:?} vs {b:?}"));
            }
        }
    }
    vec![balls, saturation, summands, timed(symmetry, start)]
}

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let cycles = rng.gen_range(1..=n);
    CycleType::random_with_cycle_count(rng, n, cycles).random_member(rng)
}

fn factorization(opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xfac7);

    let start = Instant::now();
    let mut pairs = Check::new("x·y = g with x, y k-transpositions, 200 random cases");
    for _ in 0..200 {
        let k = rng.gen_range(1..=8);
        let n = rng.gen_range((4 * k).max(2)..=40);
        let t = rng.gen_range(1..=k);
        let g = CycleType::random_with_cycle_count(&mut rng, n, n - 2 * t).random_member(&mut rng);
        match factor_two_k_transpositions(&g, k) {
            Ok((x, y)) => {
                let ok = x.is_k_transposition(k).unwrap()
                    && y.is_k_transposition(k).unwrap()
                    && x.compose(&y).unwrap() == g;
                pairs.record(ok, || format!("k={k} n={n} {g} -> {x} · {y}"));
            }
            Err(e) => pairs.fail(format!("k={k} n={n} {g}: {e}")),
        }
    }
    let pairs = timed(pairs, start);

    let verify_word = |check: &mut Check, spec: &GraphSpec, g: &Permutation| {
        let k = spec.k();
        match geodesic_factorization(spec, g) {
            Ok(word) => {
                let product = word
                    .iter()
                    .fold(Permutation::identity(spec.n()), |acc, h| acc.compose(h).unwrap());
                let radius = sphere_radius(spec, g).unwrap().radius();
                let ok = word.iter().all(|h| h.is_k_transposition(k).unwrap())
                    && &product == g
                    && radius == Some(word.len());
                check.record(ok, || format!("k={k} n={} {g}: word of length {}", spec.n(), word.len()));
            }
            Err(e) => check.fail(format!("k={k} n={} {g}: {e}", spec.n())),
        }
    };

    let start = Instant::now();
    let mut small = Check::new("geodesic words on every class, k = 1..2, n <= 8");
    for (k, lo) in [(1, 2), (2, 5)] {
        for n in lo..=8 {
            let spec = GraphSpec::new(k, n).unwrap();
            for t in spec.vertex_types() {
                verify_word(&mut small, &spec, &t.representative());
            }
        }
    }
    let small = timed(small, start);

    let start = Instant::now();
    let mut random = Check::new("geodesic words on 500 random classes, k = 3..5, n <= 40");
    for _ in 0..500 {
        let k = rng.gen_range(3..=5);
        let n = rng.gen_range(4 * k..=40);
        let spec = GraphSpec::new(k, n).unwrap();
        let mut g = random_permutation(&mut rng, n);
        if !spec.contains(&g) {
            g = g.compose(&Permutation::transposition(n, 1, 2).unwrap()).unwrap();
        }
        verify_word(&mut random, &spec, &g);
    }
    vec![pairs, small, timed(random, start)]
}

fn insertion_identities(opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x1235);
    let mut lemma = Check::new("ins_j(uv) = ins_j(u) · ins_0(v)");
    let mut transposition = Check::new("ins_j(g) = (j, n+1) · g for j >= 1");
    let mut inverse = Check::new("del(ins_j(g)) = g");
    let start = Instant::now();

    let mut one = |u: &Permutation, v: &Permutation, j: usize| {
        let n = u.degree();
        let uv = u.compose(v).unwrap();
        let lhs = uv.insert(j).unwrap();
        let rhs = u.insert(j).unwrap().compose(&v.insert(0).unwrap()).unwrap();
        lemma.record(lhs == rhs, || format!("u={u} v={v} j={j}"));
        if j >= 1 {
            let tau = Permutation::transposition(n + 1, j, n + 1).unwrap();
            let embedded = u.embed(n + 1).unwrap();
            let lhs = u.insert(j).unwrap();
            transposition.record(lhs == embedded.left_mul(&tau).unwrap(), || format!("g={u} j={j}"));
        }
        inverse.record(u.insert(j).unwrap().delete().unwrap() == *u, || format!("g={u} j={j}"));
    };
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let u = random_permutation(&mut rng, n);
        let v = random_permutation(&mut rng, n);
        let j = rng.gen_range(0..=n);
        one(&u, &v, j);
    }
    let sym4: Vec<Permutation> = all_permutations(4).collect();
    for u in &sym4 {
        for v in &sym4 {
            for j in 0..=4 {
                one(u, v, j);
            }
        }
    }
    let elapsed = start.elapsed().as_millis();

    let start = Instant::now();
    let mut disjoint = Check::new("images of ins_0..ins_n pairwise disjoint");
    let images: Vec<BTreeSet<Vec<u32>>> = (0..=4)
        .map(|j| sym4.iter().map(|g| g.insert(j).unwrap().images().to_vec()).collect())
        .collect();
    for i in 0..=4 {
        disjoint.record(images[i].len() == 24, || format!("ins_{i} is not injective on Sym(4)"));
        for j in i + 1..=4 {
            disjoint.record(images[i].is_disjoint(&images[j]), || format!("ins_{i} and ins_{j} overlap"));
        }
    }
    let union: BTreeSet<_> = images.iter().flatten().collect();
    disjoint.record(union.len() == 120, || format!("images cover {} of 120", union.len()));
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let (u, v) = (random_permutation(&mut rng, n), random_permutation(&mut rng, n));
        let i = rng.gen_range(0..=n);
        let j = rng.gen_range(0..=n);
        if i != j {
            disjoint.record(u.insert(i).unwrap() != v.insert(j).unwrap(), || format!("ins_{i}({u}) = ins_{j}({v})"));
        }
    }
    let disjoint = timed(disjoint, start);

    let mut checks = vec![lemma, transposition, inverse];
    for c in &mut checks {
        c.millis = elapsed;
    }
    checks.push(disjoint);
    checks
}

fn deletion_lemma(opts: &VerifyOptions) -> Vec<Check> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xde1);
    let mut shift = Check::new("shift c is the same for v and v·g, and c ∈ {0,1}");
    let mut clause = Check::new("c = 0 iff v moves n+1");
    for _ in 0..1000 {
        let n = rng.gen_range(2..=10);
        let v = random_permutation(&mut rng, n + 1);
        let g = random_permutation(&mut rng, n).embed(n + 1).unwrap();
        let vg = v.compose(&g).unwrap();
        let big = GraphSpec::new(1, n + 1).unwrap();
        let small = GraphSpec::new(1, n).unwrap();
        let radius = |spec: &GraphSpec, x: &Permutation| sphere_radius(spec, x).unwrap().radius().unwrap() as i64;
        let c_v = radius(&big, &v) - radius(&small, &v.delete().unwrap());
        let c_vg = radius(&big, &vg) - radius(&small, &vg.delete().unwrap());
        shift.record(c_v == c_vg && (c_v == 0 || c_v == 1), || format!("v={v} g={g}: {c_v} vs {c_vg}"));
        clause.record((c_v == 0) == v.moves_top(), || {
            format!("v={v} (moves n+1: {}) has c = {c_v}", v.moves_top())
        });
    }
    let elapsed = start.elapsed().as_millis();
    shift.millis = elapsed;
    clause.millis = elapsed;
    vec![shift, clause]
}

fn reconstruction_k1(opts: &VerifyOptions) -> Vec<Check> {
    let engine = PhiEngine::new(opts.oracle);
    let start = Instant::now();
    let mut check = Check::new("k=1, n = 5..8: 3-cycle class attains N(Γ¹ₙ, r) for every r");
    for n in 5..=8 {
        let spec = GraphSpec::new(1, n).unwrap();
        let three = CycleType::from_multiplicities([(3, 1), (1, n - 3)]).unwrap();
        for r in 0..n {
            match engine.reconstruction_number(&spec, r) {
                Ok(rec) => check.record(rec.argmax.contains(&three), || {
                    let best: Vec<String> = rec.argmax.iter().map(ToString::to_string).collect();
                    let own = engine.phi(&PhiQuery::new(spec, r, &three).unwrap()).unwrap().value;
                    format!("n={n} r={r}: N = {} at [{}], 3-cycle gives {own}", rec.value, best.join(", "))
                }),
                Err(e) => check.fail(format!("n={n} r={r}: {e}")),
            }
        }
    }
    vec![timed(check, start)]
}
