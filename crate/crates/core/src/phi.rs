//! Metric intersection numbers `Φ(Γᵏₙ; r, g) = |B_r(e) ∩ B_r(g)|` for
//! arbitrary `n`, and the reconstruction numbers built from them.
//!
//! Every route reduces `g` to its cycle type first. For `r >= 2` (any `r`
//! when `k = 1`) balls are unions of cycle-count bands of one parity, so `Φ`
//! is a sum of counts of the form `|B¹_a ∩ Z_b g|`, where `B¹_a` is the ball
//! of the transposition graph and `Z_b` its part of parity `b`. Each such
//! count is a Stirling function of `n` above the support of `g`, seeded by
//! enumeration at `t = max(s, 2)`:
//!
//! | graph | radius | value |
//! |-------|--------|-------|
//! | k = 1 | any | `Φ¹(n, r)`, its own seeded function |
//! | even k | r >= 2 | `I_g(n, rk)` |
//! | odd k, even g | r >= 3 | `I_g(n, rk) + I_g(n, (r-1)k)` |
//! | odd k, odd g | r >= 3 | `K₊ₖ(n, (r-1)k) + K₋ₖ(n, rk)` |
//!
//! with `I_g(n, b) = |B¹_b ∩ Z_b g|` and `K_δ(n, b) = |B¹_{b+δ} ∩ Z_b g|`.
//! For odd `g` the two parity classes of the ball are swapped by right
//! multiplication, which is why the cross terms replace the `I_g` sum.
//!
//! Radii 0 and 1 are answered by scanning `{e} ∪ H`. For odd `k >= 3` the
//! second ball contains the whole generator class next to a cycle-count band,
//! which breaks the band structure; outside the oracle caps that cell is
//! reported as unsupported rather than guessed.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cycle_type::CycleType;
use crate::metric::{diameter, GraphSpec, MetricError};
use crate::oracle::{
    column_value, element_bfs, phi_column_with, seed_row, seed_threshold, DistanceSource,
    ElementDistances, OracleConfig, OracleError, SeedCache, SeedKind,
};
use crate::perm::Permutation;
use crate::stirling::StirlingFunction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhiError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("unsupported regime: {0}")]
    Unsupported(String),
    #[error("n = {n} is not above the threshold {threshold} and the direct count is out of reach: {reason}")]
    BelowThreshold {
        n: usize,
        threshold: usize,
        reason: String,
    },
    #[error("seed infeasible: {0}")]
    SeedInfeasible(OracleError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("scan over {size} generators exceeds the budget {budget}")]
    ScanBudget { size: BigUint, budget: u64 },
    #[error("exact N unavailable: class {class}: {reason}")]
    ExactNUnavailable { class: CycleType, reason: String },
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    #[serde(rename = "analytic-recursion")]
    AnalyticRecursion,
    #[serde(rename = "oracle")]
    Oracle,
    #[serde(rename = "h-scan")]
    HScan,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::AnalyticRecursion => "analytic-recursion",
            Regime::Oracle => "oracle",
            Regime::HScan => "h-scan",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiValue {
    pub value: BigUint,
    pub regime: Regime,
}

/// A validated request for `Φ(Γᵏₙ; r, g)` with `g` given by its class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhiQuery {
    spec: GraphSpec,
    r: usize,
    g_type: CycleType,
}

impl PhiQuery {
    /// Accepts a type of any degree `<= n` whose support fits; fixed points
    /// are added or dropped to reach degree `n`.
    pub fn new(spec: GraphSpec, r: usize, g_type: &CycleType) -> Result<Self, PhiError> {
        let g_type = g_type
            .with_degree(spec.n())
            .map_err(|e| PhiError::InvalidQuery(e.to_string()))?;
        if !spec.contains_type(&g_type) {
            return Err(PhiError::InvalidQuery(format!(
                "class {g_type} is odd; the vertex group is Alt({})",
                spec.n()
            )));
        }
        Ok(PhiQuery { spec, r, g_type })
    }

    pub fn from_permutation(spec: GraphSpec, r: usize, g: &Permutation) -> Result<Self, PhiError> {
        Self::new(spec, r, &g.cycle_type())
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn g_type(&self) -> &CycleType {
        &self.g_type
    }
}

/// Cumulative direct counts `Φ(0..=R, g)` per graph and class.
type ColumnCache = Mutex<HashMap<(GraphSpec, CycleType), Arc<Vec<BigUint>>>>;

/// Evaluates `Φ` through whichever route applies, caching seeds, Stirling
/// rows, BFS tables and direct columns. Methods take `&self` and may run
/// from several threads; no lock is held across parallel work.
pub struct PhiEngine {
    cfg: OracleConfig,
    cache: Option<SeedCache>,
    force_oracle: bool,
    scan_budget: u64,
    functions: Mutex<HashMap<(CycleType, SeedKind), StirlingFunction>>,
    bfs: Mutex<HashMap<GraphSpec, Arc<ElementDistances>>>,
    columns: ColumnCache,
}

impl Default for PhiEngine {
    fn default() -> Self {
        PhiEngine::new(OracleConfig::default())
    }
}

impl PhiEngine {
    pub fn new(cfg: OracleConfig) -> Self {
        PhiEngine {
            cfg,
            cache: None,
            force_oracle: false,
            scan_budget: 50_000_000,
            functions: Mutex::default(),
            bfs: Mutex::default(),
            columns: Mutex::default(),
        }
    }

    /// Persist seed rows in `cache`.
    pub fn with_cache(mut self, cache: SeedCache) -> Self {
        self.cache = Some(cache);
        self
    }

    /// Always count directly, even where a recursion applies.
    pub fn force_oracle(mut self, on: bool) -> Self {
        self.force_oracle = on;
        self
    }

    pub fn with_scan_budget(mut self, budget: u64) -> Self {
        self.scan_budget = budget;
        self
    }

    pub fn config(&self) -> &OracleConfig {
        &self.cfg
    }

    /// The seeded Stirling function for a class: `eval_r(n, r)` is
    /// `Φ(Γ¹ₙ; r, g)` for [`SeedKind::PhiK1`], `I_g(n, r)` for
    /// [`SeedKind::IRow`] and `K_δ(n, r)` for cross rows.
    pub fn stirling_for(&self, g_type: &CycleType, kind: SeedKind) -> Result<StirlingFunction, PhiError> {
        let seed = match &self.cache {
            Some(cache) => cache.get_or_compute(g_type, kind, &self.cfg),
            None => seed_row(g_type, kind, &self.cfg),
        }
        .map_err(PhiError::SeedInfeasible)?;
        Ok(seed.to_stirling())
    }

    fn eval_seeded(&self, g_type: &CycleType, kind: SeedKind, n: usize, r: i64) -> Result<BigUint, PhiError> {
        let key = (reduced(g_type), kind);
        let cached = self.functions.lock().unwrap().contains_key(&key);
        if !cached {
            let f = self.stirling_for(g_type, kind)?;
            self.functions.lock().unwrap().entry(key.clone()).or_insert(f);
        }
        let mut functions = self.functions.lock().unwrap();
        let f = functions.get_mut(&key).expect("inserted above");
        f.eval_r(n, r)
            .map_err(|e| PhiError::InvalidQuery(e.to_string()))
    }

    /// `Φ(Γᵏₙ; r, g)` with the regime that produced it.
    pub fn phi(&self, query: &PhiQuery) -> Result<PhiValue, PhiError> {
        let spec = query.spec;
        let (k, n, r) = (spec.k(), spec.n(), query.r);
        let g_type = &query.g_type;
        let s = g_type.support_size();
        if self.force_oracle {
            return self.oracle(query);
        }
        if k == 1 {
            let t = seed_threshold(g_type);
            let value = self.eval_seeded(g_type, SeedKind::PhiK1, n, r as i64)?;
            let regime = if n == t {
                Regime::Oracle
            } else {
                Regime::AnalyticRecursion
            };
            return Ok(PhiValue { value, regime });
        }
        if r <= 1 {
            return self.h_scan(query);
        }
        let threshold = if k == 2 { s.max(4) } else { s.max(4 * k) };
        if n <= threshold {
            return self.oracle(query).map_err(|e| PhiError::BelowThreshold {
                n,
                threshold,
                reason: e.to_string(),
            });
        }
        let (rk, prev) = ((r * k) as i64, ((r - 1) * k) as i64);
        let value = if k % 2 == 0 {
            self.eval_seeded(g_type, SeedKind::IRow, n, rk)?
        } else if r == 2 {
            return self.oracle(query).map_err(|_| {
                PhiError::Unsupported(format!(
                    "odd k = {k}, r = 2 above the oracle caps: the second ball contains \
                     the generator class, which no cycle-count band describes"
                ))
            });
        } else if g_type.parity().is_even() {
            self.eval_seeded(g_type, SeedKind::IRow, n, rk)?
                + self.eval_seeded(g_type, SeedKind::IRow, n, prev)?
        } else {
            let k = k as i64;
            self.eval_seeded(g_type, SeedKind::CrossRow { offset: k }, n, prev)?
                + self.eval_seeded(g_type, SeedKind::CrossRow { offset: -k }, n, rk)?
        };
        Ok(PhiValue {
            value,
            regime: Regime::AnalyticRecursion,
        })
    }

    /// Counts `x ∈ B_r` with `x g⁻¹ ∈ B_r` for `r <= 1`, where `B_1 = {e} ∪ H`.
    fn h_scan(&self, query: &PhiQuery) -> Result<PhiValue, PhiError> {
        let spec = query.spec;
        let g_type = &query.g_type;
        let in_ball = |t: bool| u64::from(t);
        let value = if query.r == 0 {
            in_ball(g_type.is_identity())
        } else {
            let generators = spec.generator_type();
            let size = generators.class_size();
            if size > BigUint::from(self.scan_budget) {
                return Err(PhiError::ScanBudget {
                    size,
                    budget: self.scan_budget,
                });
            }
            let g = g_type.representative();
            let g_inv = g.inverse();
            let k = spec.k();
            let ball = |x: &Permutation| x.is_identity() || x.is_k_transposition(k).unwrap_or(false);
            let from_identity = in_ball(ball(&g_inv));
            let total = u64::try_from(&size).expect("scan budget fits in u64");
            const BLOCK: u64 = 1 << 16;
            let from_h: u64 = (0..total.div_ceil(BLOCK))
                .into_par_iter()
                .map(|b| {
                    generators
                        .class_range(b * BLOCK..(b + 1) * BLOCK)
                        .expect("scan budget fits in u64")
                        .filter(|h| ball(&h.compose(&g_inv).expect("same degree")))
                        .count() as u64
                })
                .sum();
            from_identity + from_h
        };
        Ok(PhiValue {
            value: BigUint::from(value),
            regime: Regime::HScan,
        })
    }

    fn element_table(&self, spec: &GraphSpec) -> Result<Arc<ElementDistances>, OracleError> {
        if let Some(t) = self.bfs.lock().unwrap().get(spec) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(element_bfs(spec, &self.cfg)?);
        Ok(Arc::clone(self.bfs.lock().unwrap().entry(*spec).or_insert(table)))
    }

    fn direct_column(&self, spec: &GraphSpec, g_type: &CycleType) -> Result<Arc<Vec<BigUint>>, OracleError> {
        let key = (*spec, g_type.clone());
        if let Some(c) = self.columns.lock().unwrap().get(&key) {
            return Ok(Arc::clone(c));
        }
        let g = g_type.representative();
        let column = if self.cfg.element_bfs_feasible(spec) {
            let table = self.element_table(spec)?;
            phi_column_with(spec, DistanceSource::Bfs(&table), &g)?
        } else if self.cfg.phi_direct_feasible(spec) {
            phi_column_with(spec, DistanceSource::Analytic, &g)?
        } else {
            return Err(OracleError::CapExceeded {
                what: "direct intersection count",
                n: spec.n(),
                cap: match spec.group() {
                    crate::metric::Group::Symmetric => self.cfg.max_sym_degree,
                    crate::metric::Group::Alternating => self.cfg.max_alt_degree,
                },
            });
        };
        let column = Arc::new(column);
        Ok(Arc::clone(self.columns.lock().unwrap().entry(key).or_insert(column)))
    }

    /// Direct count, ignoring every recursion.
    pub fn oracle(&self, query: &PhiQuery) -> Result<PhiValue, PhiError> {
        let column = self.direct_column(&query.spec, &query.g_type)?;
        Ok(PhiValue {
            value: column_value(&column, query.r),
            regime: Regime::Oracle,
        })
    }

    /// Largest radius worth tabulating: the closed-form diameter, or the
    /// BFS eccentricity of `e` outside the analytic range.
    pub fn table_diameter(&self, spec: &GraphSpec) -> Result<usize, PhiError> {
        if spec.analytic_valid() {
            Ok(diameter(spec)?)
        } else {
            Ok(self.element_table(spec)?.max_distance() as usize)
        }
    }

    /// `Φ(r)` for `r = 0..=diameter`; failing cells are kept, not dropped.
    pub fn phi_table(&self, spec: &GraphSpec, g_type: &CycleType) -> Result<PhiTable, PhiError> {
        let query = PhiQuery::new(*spec, 0, g_type)?;
        let diam = self.table_diameter(spec)?;
        let rows = (0..=diam)
            .map(|r| {
                let q = PhiQuery { r, ..query.clone() };
                PhiRow {
                    r,
                    outcome: self.phi(&q),
                }
            })
            .collect();
        Ok(PhiTable {
            spec: *spec,
            g_type: query.g_type,
            rows,
        })
    }

    /// `N(Γᵏₙ, r) = max Φ(r, g)` over nonidentity vertex classes, with every
    /// class attaining it.
    pub fn reconstruction_number(&self, spec: &GraphSpec, r: usize) -> Result<Reconstruction, PhiError> {
        let classes: Vec<CycleType> = spec.vertex_types().filter(|t| !t.is_identity()).collect();
        if self.cfg.element_bfs_feasible(spec) {
            // Shared by every oracle cell; built once before fanning out.
            self.element_table(spec)?;
        }
        let values: Vec<(CycleType, Result<PhiValue, PhiError>)> = classes
            .into_par_iter()
            .map(|t| {
                let v = PhiQuery::new(*spec, r, &t).and_then(|q| self.phi(&q));
                (t, v)
            })
            .collect();
        let mut best: Option<BigUint> = None;
        let mut argmax = Vec::new();
        for (t, v) in values {
            let v = v.map_err(|e| PhiError::ExactNUnavailable {
                class: t.clone(),
                reason: e.to_string(),
            })?;
            match &best {
                Some(b) if &v.value < b => {}
                Some(b) if &v.value == b => argmax.push(t),
                _ => {
                    best = Some(v.value);
                    argmax = vec![t];
                }
            }
        }
        let value = best.ok_or_else(|| PhiError::InvalidQuery("graph has no nonidentity class".into()))?;
        Ok(Reconstruction {
            spec: *spec,
            r,
            value,
            argmax,
        })
    }
}

/// Drops fixed points beyond `max(s, 2)`, so cache keys do not depend on `n`.
fn reduced(t: &CycleType) -> CycleType {
    t.with_degree(seed_threshold(t)).expect("threshold covers the support")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiRow {
    pub r: usize,
    pub outcome: Result<PhiValue, PhiError>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiTable {
    pub spec: GraphSpec,
    pub g_type: CycleType,
    pub rows: Vec<PhiRow>,
}

#[derive(Serialize)]
struct RowJson {
    r: usize,
    phi: Option<String>,
    regime: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

#[derive(Serialize)]
struct TableJson<'a> {
    k: usize,
    n: usize,
    g_type: &'a CycleType,
    rows: Vec<RowJson>,
}

impl PhiRow {
    fn cells(&self) -> (Option<String>, String, Option<String>) {
        match &self.outcome {
            Ok(v) => (Some(v.value.to_string()), v.regime.to_string(), None),
            Err(e) => (None, "unsupported".into(), Some(e.to_string())),
        }
    }
}

impl PhiTable {
    /// `r,phi,regime`; failing cells have an empty `phi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,phi,regime\n");
        for row in &self.rows {
            let (phi, regime, _) = row.cells();
            out.push_str(&format!("{},{},{}\n", row.r, phi.unwrap_or_default(), regime));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let (phi, regime, reason) = row.cells();
                RowJson {
                    r: row.r,
                    phi,
                    regime,
                    reason,
                }
            })
            .collect();
        serde_json::to_string_pretty(&TableJson {
            k: self.spec.k(),
            n: self.spec.n(),
            g_type: &self.g_type,
            rows,
        })
        .expect("serializable")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub spec: GraphSpec,
    pub r: usize,
    pub value: BigUint,
    pub argmax: Vec<CycleType>,
}
