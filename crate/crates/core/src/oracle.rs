//! Brute-force ground truth: element-level and class-level BFS, direct
//! intersection counts, and the seed rows that start every recursion.
//!
//! Nothing here uses the closed-form radius rules except the explicitly
//! requested analytic streaming mode of [`phi_column`], which exists to
//! stretch direct counts a little past the BFS memory caps.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicU8, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycle_type::{factorial, CycleType};
use crate::metric::{radius_for_profile, GraphSpec, Group, MetricError, SphereAssignment};
use crate::perm::Permutation;
use crate::stirling::StirlingFunction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} needs n = {n}, above the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("class BFS needs about {needed} products, above the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("permutation has degree {got}, expected {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("{0} is not a vertex of the graph")]
    NotAVertex(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("seed cache: {0}")]
    Cache(String),
    #[error("bad seed row: {0}")]
    BadSeed(String),
}

/// Size limits for every brute-force routine. Defaults keep the full test
/// suite within a few minutes of single-core time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleConfig {
    /// Largest degree for element BFS over `Sym(n)`.
    pub max_sym_degree: usize,
    /// Largest degree for element BFS over `Alt(n)`.
    pub max_alt_degree: usize,
    /// Largest degree for plain enumeration of `Sym(n)` (I_g counts, seeds).
    pub enumeration_cap: usize,
    /// Upper bound on representative × generator products in class BFS.
    pub class_budget: u64,
    /// Allow direct counts that stream the group and use the closed-form radii.
    pub analytic_streaming: bool,
    /// Largest degree for analytic streaming.
    pub max_stream_degree: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_sym_degree: 9,
            max_alt_degree: 10,
            enumeration_cap: 10,
            class_budget: 400_000_000,
            analytic_streaming: false,
            max_stream_degree: 12,
        }
    }
}

impl OracleConfig {
    fn element_cap(&self, group: Group) -> usize {
        match group {
            Group::Symmetric => self.max_sym_degree,
            Group::Alternating => self.max_alt_degree,
        }
    }

    /// Whether an element BFS for `spec` fits in the caps.
    pub fn element_bfs_feasible(&self, spec: &GraphSpec) -> bool {
        spec.n() <= self.element_cap(spec.group()).min(MAX_RANKED_DEGREE)
    }

    /// Whether [`phi_column`] can run for `spec`, by BFS or by streaming.
    pub fn phi_direct_feasible(&self, spec: &GraphSpec) -> bool {
        self.element_bfs_feasible(spec)
            || (self.analytic_streaming
                && spec.analytic_valid()
                && spec.n() <= self.max_stream_degree.min(MAX_RANKED_DEGREE))
    }
}

// 20! still fits in a u64 rank; the caps are far below this anyway.
const MAX_RANKED_DEGREE: usize = 20;
const UNREACHED: u8 = u8::MAX;

/// Lexicographic rank of a permutation of `0..n` in the factorial number system.
pub fn lehmer_rank(p: &[u8]) -> u64 {
    let n = p.len();
    let mut rank = 0u64;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count() as u64;
        rank = rank * (n - i) as u64 + smaller;
    }
    rank
}

/// Inverse of [`lehmer_rank`]; writes into `out` (whose length fixes `n`).
pub fn lehmer_unrank(mut rank: u64, out: &mut [u8]) {
    let n = out.len();
    let mut digits = [0u8; MAX_RANKED_DEGREE];
    for i in (0..n).rev() {
        let radix = (n - i) as u64;
        digits[i] = (rank % radix) as u8;
        rank /= radix;
    }
    let mut unused: Vec<u8> = (0..n as u8).collect();
    for i in 0..n {
        out[i] = unused.remove(digits[i] as usize);
    }
}

/// Advances to the lexicographic successor; false after the last permutation.
fn next_permutation(p: &mut [u8]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn bytes_of(g: &Permutation) -> Vec<u8> {
    g.images().iter().map(|&x| x as u8).collect()
}

/// Right action: apply `x`, then `h`.
#[inline]
fn compose_into(x: &[u8], h: &[u8], out: &mut [u8]) {
    for (o, &xi) in out.iter_mut().zip(x) {
        *o = h[xi as usize];
    }
}

#[inline]
fn cycle_count(p: &[u8]) -> usize {
    let mut seen = 0u64;
    let mut cycles = 0;
    for start in 0..p.len() {
        if seen >> start & 1 == 1 {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while seen >> i & 1 == 0 {
            seen |= 1 << i;
            i = p[i] as usize;
        }
    }
    cycles
}

/// Non-increasing cycle lengths of `p`, written into `parts`.
fn cycle_lengths(p: &[u8], parts: &mut Vec<u8>) {
    parts.clear();
    let mut seen = 0u64;
    for start in 0..p.len() {
        if seen >> start & 1 == 1 {
            continue;
        }
        let mut len = 0u8;
        let mut i = start;
        while seen >> i & 1 == 0 {
            seen |= 1 << i;
            i = p[i] as usize;
            len += 1;
        }
        parts.push(len);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
}

fn type_from_lengths(parts: &[u8]) -> CycleType {
    CycleType::from_parts(parts.iter().map(|&l| l as u32).collect()).expect("nonempty parts")
}

fn analytic_radius(k: usize, p: &[u8]) -> SphereAssignment {
    let mut seen = 0u64;
    let (mut cycles, mut support, mut twos, mut threes) = (0, 0, 0, 0);
    for start in 0..p.len() {
        if seen >> start & 1 == 1 {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while seen >> i & 1 == 0 {
            seen |= 1 << i;
            i = p[i] as usize;
            len += 1;
        }
        cycles += 1;
        if len > 1 {
            support += len;
        }
        match len {
            2 => twos += 1,
            3 => threes += 1,
            _ => {}
        }
    }
    let is_generator = support == 2 * k && twos == k;
    let is_three_cycle = support == 3 && threes == 1;
    radius_for_profile(k, p.len() - cycles, is_generator, is_three_cycle)
}

/// Flat image arrays of every generator.
fn generator_bytes(spec: &GraphSpec) -> Vec<u8> {
    let iter = spec
        .generator_type()
        .class_iter()
        .expect("generator class fits in u64");
    let mut flat = Vec::with_capacity(iter.len() * spec.n());
    for h in iter {
        flat.extend(h.images().iter().map(|&x| x as u8));
    }
    flat
}

/// Distances from the identity for every element, indexed by Lehmer rank.
#[derive(Debug, Clone)]
pub struct ElementDistances {
    spec: GraphSpec,
    dist: Vec<u8>,
}

/// Exact BFS from `e` over the whole vertex group.
pub fn element_bfs(spec: &GraphSpec, cfg: &OracleConfig) -> Result<ElementDistances, OracleError> {
    let n = spec.n();
    let cap = cfg.element_cap(spec.group()).min(MAX_RANKED_DEGREE);
    if n > cap {
        return Err(OracleError::CapExceeded {
            what: "element BFS",
            n,
            cap,
        });
    }
    let gens = generator_bytes(spec);
    let dist: Vec<AtomicU8> = (0..factorial_u64(n)).map(|_| AtomicU8::new(UNREACHED)).collect();
    dist[0].store(0, Ordering::Relaxed);
    let mut frontier = vec![0u64];
    let mut level = 0u8;
    while !frontier.is_empty() {
        level += 1;
        frontier = frontier
            .par_iter()
            .fold(Vec::new, |mut found, &rank| {
                let mut x = vec![0u8; n];
                let mut y = vec![0u8; n];
                lehmer_unrank(rank, &mut x);
                for h in gens.chunks_exact(n) {
                    compose_into(&x, h, &mut y);
                    let r = lehmer_rank(&y);
                    if dist[r as usize]
                        .compare_exchange(UNREACHED, level, Ordering::Relaxed, Ordering::Relaxed)
                        .is_ok()
                    {
                        found.push(r);
                    }
                }
                found
            })
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            });
    }
    Ok(ElementDistances {
        spec: *spec,
        dist: dist.into_iter().map(AtomicU8::into_inner).collect(),
    })
}

impl ElementDistances {
    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    /// `None` when `g` is not a vertex.
    pub fn distance(&self, g: &Permutation) -> Result<Option<u8>, OracleError> {
        if g.degree() != self.spec.n() {
            return Err(OracleError::DegreeMismatch {
                expected: self.spec.n(),
                got: g.degree(),
            });
        }
        Ok(self.by_rank(lehmer_rank(&bytes_of(g))))
    }

    fn by_rank(&self, rank: u64) -> Option<u8> {
        match self.dist[rank as usize] {
            UNREACHED => None,
            d => Some(d),
        }
    }

    pub fn max_distance(&self) -> u8 {
        self.dist.iter().copied().filter(|&d| d != UNREACHED).max().unwrap_or(0)
    }

    pub fn sphere_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.max_distance() as usize + 1];
        for &d in self.dist.iter().filter(|&&d| d != UNREACHED) {
            sizes[d as usize] += 1;
        }
        sizes
    }

    /// Every vertex with its distance, in rank order.
    pub fn iter(&self) -> impl Iterator<Item = (Permutation, u8)> + '_ {
        let n = self.spec.n();
        self.dist
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != UNREACHED)
            .map(move |(rank, &d)| {
                let mut buf = vec![0u8; n];
                lehmer_unrank(rank as u64, &mut buf);
                let images = buf.into_iter().map(u32::from).collect();
                (Permutation::from_images(images).expect("unranked bijection"), d)
            })
    }

    /// Per-class distances. Fails if two elements of one class disagree,
    /// which would contradict distance being a class function.
    pub fn class_table(&self) -> Result<ClassDistanceTable, (CycleType, u8, u8)> {
        let mut distances = BTreeMap::new();
        for (g, d) in self.iter() {
            let t = g.cycle_type();
            match distances.get(&t) {
                Some(&prev) if prev != d as usize => return Err((t, prev as u8, d)),
                Some(_) => {}
                None => {
                    distances.insert(t, d as usize);
                }
            }
        }
        Ok(ClassDistanceTable {
            spec: self.spec,
            distances,
        })
    }
}

/// Graph distance of every vertex class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDistanceTable {
    spec: GraphSpec,
    distances: BTreeMap<CycleType, usize>,
}

#[derive(Serialize, Deserialize)]
struct ClassTableJson {
    k: usize,
    n: usize,
    distances: BTreeMap<CycleType, usize>,
}

impl ClassDistanceTable {
    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn get(&self, t: &CycleType) -> Option<usize> {
        self.distances.get(t).copied()
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    pub fn max_distance(&self) -> usize {
        self.distances.values().copied().max().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CycleType, usize)> {
        self.distances.iter().map(|(t, &d)| (t, d))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ClassTableJson {
            k: self.spec.k(),
            n: self.spec.n(),
            distances: self.distances.clone(),
        })
        .expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, OracleError> {
        let raw: ClassTableJson =
            serde_json::from_str(s).map_err(|e| OracleError::BadSeed(e.to_string()))?;
        Ok(ClassDistanceTable {
            spec: GraphSpec::new(raw.k, raw.n)?,
            distances: raw.distances,
        })
    }
}

/// BFS over cycle types: each frontier class contributes one canonical
/// representative, multiplied by every generator.
pub fn class_bfs(spec: &GraphSpec, cfg: &OracleConfig) -> Result<ClassDistanceTable, OracleError> {
    let n = spec.n();
    if n > 64 {
        return Err(OracleError::CapExceeded {
            what: "class BFS",
            n,
            cap: 64,
        });
    }
    let vertex_types = spec.vertex_types().count() as u128;
    let gen_count = spec.generator_type().class_size();
    let needed = u128::try_from(&gen_count).unwrap_or(u128::MAX).saturating_mul(vertex_types);
    if needed > cfg.class_budget as u128 {
        return Err(OracleError::BudgetExceeded {
            needed,
            budget: cfg.class_budget,
        });
    }
    let gens = generator_bytes(spec);
    let identity = CycleType::identity(n);
    let mut distances = BTreeMap::from([(identity.clone(), 0usize)]);
    let mut frontier = vec![identity];
    let mut level = 0;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for t in &frontier {
            let rep = bytes_of(&t.representative());
            let reached = gens
                .par_chunks(n * 4096)
                .fold(HashSet::<Vec<u8>>::new, |mut set, block| {
                    let mut prod = vec![0u8; n];
                    let mut parts = Vec::with_capacity(n);
                    for h in block.chunks_exact(n) {
                        compose_into(&rep, h, &mut prod);
                        cycle_lengths(&prod, &mut parts);
                        if !set.contains(parts.as_slice()) {
                            set.insert(parts.clone());
                        }
                    }
                    set
                })
                .reduce(HashSet::new, |mut a, b| {
                    a.extend(b);
                    a
                });
            for parts in reached {
                let u = type_from_lengths(&parts);
                if !distances.contains_key(&u) {
                    distances.insert(u.clone(), level);
                    next.push(u);
                }
            }
        }
        next.sort();
        frontier = next;
    }
    Ok(ClassDistanceTable {
        spec: *spec,
        distances,
    })
}

/// Where [`phi_column_with`] gets distances from.
#[derive(Clone, Copy)]
pub enum DistanceSource<'a> {
    Bfs(&'a ElementDistances),
    /// Closed-form radii; requires an analytically valid graph.
    Analytic,
}

/// `Φ(r, g)` for `r = 0..` until saturation, in one pass over the group:
/// each `x` is counted in every ball radius `>= max(d(x), d(x g⁻¹))`.
pub fn phi_column_with(
    spec: &GraphSpec,
    source: DistanceSource<'_>,
    g: &Permutation,
) -> Result<Vec<BigUint>, OracleError> {
    let n = spec.n();
    if g.degree() != n {
        return Err(OracleError::DegreeMismatch {
            expected: n,
            got: g.degree(),
        });
    }
    if !spec.contains(g) {
        return Err(OracleError::NotAVertex(g.to_string()));
    }
    if matches!(source, DistanceSource::Analytic) && !spec.analytic_valid() {
        return Err(MetricError::OutsideAnalyticValidity { k: spec.k(), n }.into());
    }
    let g_inv = bytes_of(&g.inverse());
    let total = factorial_u64(n);
    let chunk = 40_320u64.min(total);
    let chunks = total.div_ceil(chunk);
    let k = spec.k();
    let radius = |rank: u64, p: &[u8]| -> Option<u8> {
        match source {
            DistanceSource::Bfs(table) => table.by_rank(rank),
            DistanceSource::Analytic => analytic_radius(k, p).radius().map(|r| r as u8),
        }
    };
    let hist = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut hist = vec![0u64; 256];
            let start = c * chunk;
            let end = (start + chunk).min(total);
            let mut x = vec![0u8; n];
            let mut y = vec![0u8; n];
            lehmer_unrank(start, &mut x);
            for rank in start..end {
                if let Some(dx) = radius(rank, &x) {
                    compose_into(&x, &g_inv, &mut y);
                    let ry = match source {
                        DistanceSource::Bfs(_) => lehmer_rank(&y),
                        DistanceSource::Analytic => 0,
                    };
                    if let Some(dy) = radius(ry, &y) {
                        hist[dx.max(dy) as usize] += 1;
                    }
                }
                next_permutation(&mut x);
            }
            hist
        })
        .reduce(
            || vec![0u64; 256],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(a, b)| *a += b);
                a
            },
        );
    let top = hist.iter().rposition(|&c| c > 0).unwrap_or(0);
    let mut running = 0u64;
    Ok(hist[..=top]
        .iter()
        .map(|&c| {
            running += c;
            BigUint::from(running)
        })
        .collect())
}

/// Direct column, choosing element BFS when it fits and analytic streaming
/// otherwise (if enabled).
pub fn phi_column(
    spec: &GraphSpec,
    g: &Permutation,
    cfg: &OracleConfig,
) -> Result<Vec<BigUint>, OracleError> {
    if cfg.element_bfs_feasible(spec) {
        let table = element_bfs(spec, cfg)?;
        phi_column_with(spec, DistanceSource::Bfs(&table), g)
    } else if cfg.phi_direct_feasible(spec) {
        phi_column_with(spec, DistanceSource::Analytic, g)
    } else {
        Err(OracleError::CapExceeded {
            what: "direct intersection count",
            n: spec.n(),
            cap: cfg.element_cap(spec.group()),
        })
    }
}

/// Reads `Φ(r)` off a column; radii past the end are saturated.
pub fn column_value(column: &[BigUint], r: usize) -> BigUint {
    column
        .get(r)
        .or_else(|| column.last())
        .cloned()
        .unwrap_or_default()
}

/// `Φ(Γ; r, g) = |B_r(e) ∩ B_r(g)|`, counted directly.
pub fn phi_direct(
    spec: &GraphSpec,
    r: usize,
    g: &Permutation,
    cfg: &OracleConfig,
) -> Result<BigUint, OracleError> {
    Ok(column_value(&phi_column(spec, g, cfg)?, r))
}

/// `counts[i][j] = #{x ∈ Sym(n) : n - |x| = i, n - |x g⁻¹| = j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointHistogram {
    n: usize,
    counts: Vec<Vec<u64>>,
}

pub fn joint_histogram(g: &Permutation, cfg: &OracleConfig) -> Result<JointHistogram, OracleError> {
    let n = g.degree();
    let cap = cfg.enumeration_cap.min(MAX_RANKED_DEGREE);
    if n > cap {
        return Err(OracleError::CapExceeded {
            what: "enumeration of Sym(n)",
            n,
            cap,
        });
    }
    let g_inv = bytes_of(&g.inverse());
    let total = factorial_u64(n);
    let chunk = 40_320u64.min(total);
    let counts = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![vec![0u64; n]; n];
            let start = c * chunk;
            let end = (start + chunk).min(total);
            let mut x = vec![0u8; n];
            let mut y = vec![0u8; n];
            lehmer_unrank(start, &mut x);
            for _ in start..end {
                compose_into(&x, &g_inv, &mut y);
                counts[n - cycle_count(&x)][n - cycle_count(&y)] += 1;
                next_permutation(&mut x);
            }
            counts
        })
        .reduce(
            || vec![vec![0u64; n]; n],
            |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(b) {
                    ra.iter_mut().zip(rb).for_each(|(a, b)| *a += b);
                }
                a
            },
        );
    Ok(JointHistogram { n, counts })
}

impl JointHistogram {
    pub fn degree(&self) -> usize {
        self.n
    }

    /// `|B¹_ball ∩ Z_z g|`: `x` within transposition distance `ball`, and
    /// `x g⁻¹` within distance `z` with parity of `z`.
    pub fn cross(&self, ball: i64, z: i64) -> u64 {
        if ball < 0 || z < 0 {
            return 0;
        }
        let mut total = 0;
        for row in self.counts.iter().take((ball as usize).saturating_add(1)) {
            for (j, &c) in row.iter().enumerate().take((z as usize).saturating_add(1)) {
                if j as i64 % 2 == z % 2 {
                    total += c;
                }
            }
        }
        total
    }

    /// `I_g(n, r) = |B¹_r ∩ Z_r g|`.
    pub fn i_g(&self, r: i64) -> u64 {
        self.cross(r, r)
    }
}

/// `I_g(n, r)` by enumerating `Sym(n)`, `n = degree(g)`.
pub fn i_g_direct(r: i64, g: &Permutation, cfg: &OracleConfig) -> Result<u64, OracleError> {
    Ok(joint_histogram(g, cfg)?.i_g(r))
}

/// Which quantity a seed row tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeedKind {
    /// `Φ(Γ¹_t; r, g)`.
    PhiK1,
    /// `I_g(t, r)`.
    IRow,
    /// `|B¹_{b+offset} ∩ Z_b g|` indexed by `b`.
    CrossRow { offset: i64 },
}

impl fmt::Display for SeedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedKind::PhiK1 => f.write_str("phi-k1"),
            SeedKind::IRow => f.write_str("i-row"),
            SeedKind::CrossRow { offset } => write!(f, "cross-row{offset:+}"),
        }
    }
}

impl FromStr for SeedKind {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "phi-k1" => Ok(SeedKind::PhiK1),
            "i-row" => Ok(SeedKind::IRow),
            _ => s
                .strip_prefix("cross-row")
                .and_then(|o| o.parse().ok())
                .map(|offset| SeedKind::CrossRow { offset })
                .ok_or_else(|| OracleError::BadSeed(format!("unknown seed kind {s:?}"))),
        }
    }
}

/// Values of a class function at the threshold degree `t = max(s, 2)`,
/// indexed by radius, with the constant value `tail` beyond the last entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedRow {
    pub g_type: CycleType,
    pub t: usize,
    pub kind: SeedKind,
    pub row: BTreeMap<i64, BigUint>,
    pub tail: BigUint,
}

#[derive(Serialize, Deserialize)]
struct SeedRowJson {
    g_type: CycleType,
    t: usize,
    kind: String,
    row: BTreeMap<i64, String>,
    tail: String,
}

/// Threshold degree for the class: `max(support, 2)`.
pub fn seed_threshold(g_type: &CycleType) -> usize {
    g_type.support_size().max(2)
}

/// Computes the seed row of `g_type` for `kind` by enumeration at `t`.
pub fn seed_row(g_type: &CycleType, kind: SeedKind, cfg: &OracleConfig) -> Result<SeedRow, OracleError> {
    let t = seed_threshold(g_type);
    let g_type = g_type.with_degree(t).expect("t covers the support");
    let g = g_type.representative();
    let full = factorial(t);
    let (row, tail): (BTreeMap<i64, BigUint>, BigUint) = match kind {
        SeedKind::PhiK1 => {
            let spec = GraphSpec::new(1, t)?;
            let column = phi_column(&spec, &g, cfg)?;
            let row = (0..t as i64).map(|r| (r, column_value(&column, r as usize))).collect();
            (row, full)
        }
        SeedKind::IRow => {
            let hist = joint_histogram(&g, cfg)?;
            let last = 2 * (t as i64 - 1);
            let row = (0..=last).map(|r| (r, BigUint::from(hist.i_g(r)))).collect();
            (row, full / 2u32)
        }
        SeedKind::CrossRow { offset } => {
            let hist = joint_histogram(&g, cfg)?;
            let last = 2 * (t as i64 - 1) + offset.abs();
            let row = (0..=last).map(|b| (b, BigUint::from(hist.cross(b + offset, b)))).collect();
            (row, full / 2u32)
        }
    };
    let seed = SeedRow {
        g_type,
        t,
        kind,
        row,
        tail,
    };
    seed.check()?;
    Ok(seed)
}

impl SeedRow {
    /// The last tabulated value must already equal the tail, and values
    /// never decrease along a row of nested balls.
    fn check(&self) -> Result<(), OracleError> {
        if let Some((&r, last)) = self.row.iter().next_back() {
            if last != &self.tail {
                return Err(OracleError::BadSeed(format!(
                    "{} row for {} ends at r = {r} with {last}, tail is {}",
                    self.kind, self.g_type, self.tail
                )));
            }
        }
        if self.g_type.degree() != self.t {
            return Err(OracleError::BadSeed(format!(
                "type {} does not have degree t = {}",
                self.g_type, self.t
            )));
        }
        Ok(())
    }

    /// The Stirling function whose row `t` this is: `f(t, t - r) = row(r)`.
    pub fn to_stirling(&self) -> StirlingFunction {
        let t = self.t as i64;
        let seed: BTreeMap<i64, BigUint> =
            self.row.iter().map(|(&r, v)| (t - r, v.clone())).collect();
        let floor = seed.keys().next().copied().unwrap_or(t + 1);
        StirlingFunction::with_floor(self.t, floor, &seed, self.tail.clone())
            .expect("row indices are nonnegative radii")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SeedRowJson {
            g_type: self.g_type.clone(),
            t: self.t,
            kind: self.kind.to_string(),
            row: self.row.iter().map(|(&r, v)| (r, v.to_string())).collect(),
            tail: self.tail.to_string(),
        })
        .expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, OracleError> {
        let raw: SeedRowJson =
            serde_json::from_str(s).map_err(|e| OracleError::BadSeed(e.to_string()))?;
        let decimal = |v: &str| {
            v.parse::<BigUint>()
                .map_err(|_| OracleError::BadSeed(format!("bad decimal {v:?}")))
        };
        let row = raw
            .row
            .iter()
            .map(|(&r, v)| decimal(v).map(|v| (r, v)))
            .collect::<Result<_, _>>()?;
        let seed = SeedRow {
            g_type: raw.g_type,
            t: raw.t,
            kind: raw.kind.parse()?,
            row,
            tail: decimal(&raw.tail)?,
        };
        seed.check()?;
        Ok(seed)
    }
}

/// On-disk seed rows keyed by class and kind. Keys use the cycle type, never
/// the element, since every seeded quantity is a class function.
#[derive(Debug, Clone)]
pub struct SeedCache {
    dir: PathBuf,
}

impl SeedCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SeedCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, g_type: &CycleType, kind: SeedKind) -> PathBuf {
        let t = seed_threshold(g_type);
        let normalized = g_type.with_degree(t).expect("t covers the support");
        let name = normalized.to_string().replace(' ', "_");
        self.dir.join(format!("{kind}__{name}.json"))
    }

    pub fn load(&self, g_type: &CycleType, kind: SeedKind) -> Result<Option<SeedRow>, OracleError> {
        let path = self.path_for(g_type, kind);
        match fs::read_to_string(&path) {
            Ok(s) => SeedRow::from_json(&s).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(OracleError::Cache(format!("{}: {e}", path.display()))),
        }
    }

    pub fn store(&self, seed: &SeedRow) -> Result<(), OracleError> {
        let io = |e: std::io::Error| OracleError::Cache(format!("{}: {e}", self.dir.display()));
        fs::create_dir_all(&self.dir).map_err(io)?;
        let path = self.path_for(&seed.g_type, seed.kind);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, seed.to_json()).map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)
    }

    /// Cached seed rows, sorted by file name.
    pub fn list(&self) -> Result<Vec<SeedRow>, OracleError> {
        let mut paths = self.entries()?;
        paths.sort();
        paths
            .iter()
            .map(|p| {
                let s = fs::read_to_string(p)
                    .map_err(|e| OracleError::Cache(format!("{}: {e}", p.display())))?;
                SeedRow::from_json(&s)
            })
            .collect()
    }

    /// Removes every cached row; returns how many were removed.
    pub fn clear(&self) -> Result<usize, OracleError> {
        let paths = self.entries()?;
        for p in &paths {
            fs::remove_file(p).map_err(|e| OracleError::Cache(format!("{}: {e}", p.display())))?;
        }
        Ok(paths.len())
    }

    fn entries(&self) -> Result<Vec<PathBuf>, OracleError> {
        let read = match fs::read_dir(&self.dir) {
            Ok(read) => read,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(OracleError::Cache(format!("{}: {e}", self.dir.display()))),
        };
        Ok(read
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect())
    }

    /// Loads the row if cached, otherwise computes and stores it.
    pub fn get_or_compute(
        &self,
        g_type: &CycleType,
        kind: SeedKind,
        cfg: &OracleConfig,
    ) -> Result<SeedRow, OracleError> {
        if let Some(seed) = self.load(g_type, kind)? {
            return Ok(seed);
        }
        let seed = seed_row(g_type, kind, cfg)?;
        self.store(&seed)?;
        Ok(seed)
    }
}
