//! `caystir`: metric queries on k-transposition Cayley graphs from the shell.

mod config;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use caystir::cycle_type::CycleType;
use caystir::metric::{self, GraphSpec, SphereAssignment};
use caystir::oracle::{self, ClassDistanceTable, OracleConfig, SeedCache, SeedKind};
use caystir::perm::Permutation;
use caystir::phi::{PhiEngine, PhiQuery};
use caystir::stirling::StirlingFunction;
use caystir::verify::{self, VerifyOptions};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use config::{CliConfig, FileConfig, Format, Overrides};

#[derive(Parser, Debug)]
#[command(name = "caystir", version, about = "Exact distances, spheres and ball intersections of k-transposition Cayley graphs")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "CAYSTIR_FORMAT")]
    format: Option<Format>,
    /// Worker threads for the oracle and Φ engines (0 = all cores).
    #[arg(long, global = true, env = "CAYSTIR_THREADS")]
    threads: Option<usize>,
    /// Compute by brute force even where closed forms apply.
    #[arg(long, global = true)]
    oracle: bool,
    /// Largest degree for element-level enumeration of Sym(n); Alt(n) gets one more.
    #[arg(long, global = true, env = "CAYSTIR_CAP")]
    cap: Option<usize>,
    /// Budget of representative × generator products for class BFS.
    #[arg(long, global = true, env = "CAYSTIR_CLASS_BUDGET")]
    class_budget: Option<u64>,
    /// Seed for randomized verification checks.
    #[arg(long, global = true, env = "CAYSTIR_SEED")]
    seed: Option<u64>,
    /// Directory for cached seed rows.
    #[arg(long, global = true, env = "CAYSTIR_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// TOML file with default settings.
    #[arg(long, global = true, env = "CAYSTIR_CONFIG")]
    config: Option<PathBuf>,
    /// Let direct Φ counts stream the group using closed-form radii.
    #[arg(long, global = true)]
    stream: bool,
}

#[derive(Args, Debug, Clone, Copy)]
struct GraphArgs {
    /// Transposition count of each generator.
    #[arg(short = 'k')]
    k: usize,
    /// Degree of the group.
    #[arg(short = 'n')]
    n: usize,
}

impl GraphArgs {
    fn spec(self) -> Result<GraphSpec> {
        Ok(GraphSpec::new(self.k, self.n)?)
    }
}

/// An element in cycle or one-line notation, or a cycle type via `--type`.
#[derive(Args, Debug, Clone)]
struct ClassArgs {
    /// Permutation, e.g. "(1 2 3)(4 5)", "3,1,2" or "e".
    #[arg(conflicts_with = "type", required_unless_present = "type")]
    g: Option<String>,
    /// Cycle type such as "1^6 2^3"; fixed points are padded to n.
    #[arg(long = "type")]
    r#type: Option<String>,
}

impl ClassArgs {
    fn cycle_type(&self, n: usize) -> Result<CycleType> {
        match (&self.g, &self.r#type) {
            (Some(g), _) => Ok(parse_perm(g, n)?.cycle_type()),
            (None, Some(t)) => {
                let t: CycleType = t.parse().map_err(|e| anyhow!("bad cycle type {t:?}: {e}"))?;
                Ok(t.with_degree(n)?)
            }
            (None, None) => bail!("give a permutation or --type"),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance from the identity (or from --from) to g, with the rule that decided it.
    Distance {
        #[command(flatten)]
        graph: GraphArgs,
        g: String,
        /// Measure from this vertex instead of the identity.
        #[arg(long)]
        from: Option<String>,
    },
    /// Sphere sizes for every radius.
    Spheres {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Size of the ball of radius r.
    Ball {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short = 'r')]
        r: usize,
    },
    Diameter {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Φ(r, g) = |B_r(e) ∩ B_r(g)|.
    Phi {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short = 'r')]
        r: usize,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Φ(r, g) for r = 0..diameter.
    PhiTable {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Largest Φ(r, g) over nonidentity vertices, with the classes attaining it.
    NReconstruction {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short = 'r')]
        r: usize,
    },
    /// A shortest word in the generators whose product is g.
    Factor {
        #[command(flatten)]
        graph: GraphArgs,
        g: String,
    },
    /// Evaluates a seeded Stirling function at (n, m); without -m or -r prints the row.
    Stirling {
        /// classical, transposition-balls, phi-k1, i-row or cross-row±d.
        #[arg(long, default_value = "classical")]
        kind: String,
        /// Cycle type for the seeded kinds.
        #[arg(long = "type")]
        r#type: Option<String>,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'm', conflicts_with = "r", allow_negative_numbers = true)]
        m: Option<i64>,
        /// Shorthand for m = n - r.
        #[arg(short = 'r', allow_negative_numbers = true)]
        r: Option<i64>,
    },
    /// Runs a named verification suite; exit status 1 if any check fails.
    Verify {
        /// Suite name; omit with --list.
        #[arg(required_unless_present = "list")]
        suite: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Inspect or empty the seed-row cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    List,
    Clear,
}

/// What a command produces, rendered according to `--format`.
enum Output {
    /// One record of named fields.
    Record(Vec<(&'static str, Value)>),
    Rows {
        headers: Vec<&'static str>,
        rows: Vec<Vec<String>>,
    },
    /// Already formatted for every format.
    Text(String),
}

impl Output {
    fn render(&self, format: Format) -> String {
        match self {
            Output::Record(fields) => match format {
                Format::Table => {
                    let rows: Vec<Vec<String>> =
                        fields.iter().map(|(k, v)| vec![k.to_string(), plain(v)]).collect();
                    let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                    rows.iter()
                        .map(|r| format!("{:<width$}  {}\n", r[0], r[1]).trim_end().to_string() + "\n")
                        .collect()
                }
                Format::Csv => {
                    let headers: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
                    render::csv(&headers, &[fields.iter().map(|(_, v)| plain(v)).collect()])
                }
                Format::Json => {
                    let map: Map<String, Value> =
                        fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
                    pretty(&Value::Object(map))
                }
            },
            Output::Rows { headers, rows } => match format {
                Format::Table => render::table(headers, rows),
                Format::Csv => render::csv(headers, rows),
                Format::Json => {
                    let objects = rows
                        .iter()
                        .map(|row| {
                            Value::Object(
                                headers
                                    .iter()
                                    .zip(row)
                                    .map(|(h, c)| (h.to_string(), Value::String(c.clone())))
                                    .collect(),
                            )
                        })
                        .collect();
                    pretty(&Value::Array(objects))
                }
            },
            Output::Text(s) => s.clone(),
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn big(v: &BigUint) -> Value {
    Value::String(v.to_string())
}

fn parse_perm(s: &str, n: usize) -> Result<Permutation> {
    let t = s.trim();
    if matches!(t, "e" | "id" | "()" | "") {
        return Ok(Permutation::identity(n));
    }
    Permutation::parse(t, Some(n)).with_context(|| format!("cannot parse permutation {s:?}"))
}

struct Ctx {
    config: CliConfig,
    force_oracle: bool,
}

impl Ctx {
    fn oracle_cfg(&self) -> OracleConfig {
        self.config.oracle()
    }

    fn engine(&self) -> PhiEngine {
        PhiEngine::new(self.oracle_cfg())
            .with_cache(SeedCache::new(&self.config.cache_dir))
            .force_oracle(self.force_oracle)
    }

    /// Whether closed forms may be used; otherwise explains why not.
    fn analytic(&self, spec: &GraphSpec) -> Result<bool> {
        if self.force_oracle {
            return Ok(false);
        }
        if !spec.analytic_valid() {
            bail!(
                "k = {}, n = {} is outside analytic validity; rerun with --oracle",
                spec.k(),
                spec.n()
            );
        }
        Ok(true)
    }

    /// Distances of every vertex class, by element BFS when it fits in the
    /// caps and by class BFS otherwise.
    fn class_table(&self, spec: &GraphSpec) -> Result<ClassDistanceTable> {
        let cfg = self.oracle_cfg();
        if cfg.element_bfs_feasible(spec) {
            let d = oracle::element_bfs(spec, &cfg)?;
            return d.class_table().map_err(|(t, a, b)| {
                anyhow!("distance is not constant on class {t}: saw {a} and {b}")
            });
        }
        Ok(oracle::class_bfs(spec, &cfg)?)
    }

    fn sphere_sizes(&self, spec: &GraphSpec) -> Result<(Vec<BigUint>, &'static str)> {
        if self.analytic(spec)? {
            return Ok((metric::sphere_sizes(spec)?, "analytic"));
        }
        let table = self.class_table(spec)?;
        let mut sizes = vec![BigUint::default(); table.max_distance() + 1];
        for (t, d) in table.iter() {
            sizes[d] += t.class_size();
        }
        Ok((sizes, "oracle"))
    }
}

/// Runs the command; returns its output, whether it succeeded and the format.
fn run(cli: Cli) -> Result<(Output, bool, Format)> {
    let g = &cli.global;
    let file = match &g.config {
        Some(path) => Some(FileConfig::load(path)?),
        None => None,
    };
    let config = CliConfig::resolve(
        Overrides {
            oracle_element_cap: g.cap,
            oracle_class_budget: g.class_budget,
            threads: g.threads,
            cache_dir: g.cache_dir.clone(),
            output_format: g.format,
            seed: g.seed,
            analytic_streaming: g.stream,
        },
        file,
    )?;
    if config.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let ctx = Ctx {
        config,
        force_oracle: g.oracle,
    };

    let out = match cli.command {
        Command::Distance { graph, g, from } => cmd_distance(&ctx, graph, &g, from.as_deref())?,
        Command::Spheres { graph } => {
            let spec = graph.spec()?;
            let (sizes, _) = ctx.sphere_sizes(&spec)?;
            Output::Rows {
                headers: vec!["r", "size"],
                rows: sizes
                    .iter()
                    .enumerate()
                    .map(|(r, s)| vec![r.to_string(), s.to_string()])
                    .collect(),
            }
        }
        Command::Ball { graph, r } => {
            let spec = graph.spec()?;
            let (value, regime) = if ctx.analytic(&spec)? {
                (metric::ball_size(&spec, r)?, "analytic")
            } else {
                let (sizes, regime) = ctx.sphere_sizes(&spec)?;
                (sizes.iter().take(r + 1).sum(), regime)
            };
            Output::Record(vec![
                ("k", json!(spec.k())),
                ("n", json!(spec.n())),
                ("r", json!(r)),
                ("ball", big(&value)),
                ("regime", json!(regime)),
            ])
        }
        Command::Diameter { graph } => {
            let spec = graph.spec()?;
            let (d, regime) = if ctx.analytic(&spec)? {
                (metric::diameter(&spec)?, "analytic")
            } else {
                (ctx.class_table(&spec)?.max_distance(), "oracle")
            };
            Output::Record(vec![
                ("k", json!(spec.k())),
                ("n", json!(spec.n())),
                ("diameter", json!(d)),
                ("regime", json!(regime)),
            ])
        }
        Command::Phi { graph, r, class } => {
            let spec = graph.spec()?;
            let t = class.cycle_type(spec.n())?;
            let query = PhiQuery::new(spec, r, &t)?;
            let v = ctx.engine().phi(&query)?;
            Output::Record(vec![
                ("k", json!(spec.k())),
                ("n", json!(spec.n())),
                ("r", json!(r)),
                ("g_type", json!(query.g_type().to_string())),
                ("phi", big(&v.value)),
                ("regime", json!(v.regime.to_string())),
            ])
        }
        Command::PhiTable { graph, class } => {
            let spec = graph.spec()?;
            let t = class.cycle_type(spec.n())?;
            let table = ctx.engine().phi_table(&spec, &t)?;
            match ctx.config.output_format {
                Format::Csv => Output::Text(table.to_csv()),
                Format::Json => Output::Text(table.to_json() + "\n"),
                Format::Table => Output::Rows {
                    headers: vec!["r", "phi", "regime"],
                    rows: table
                        .rows
                        .iter()
                        .map(|row| match &row.outcome {
                            Ok(v) => vec![row.r.to_string(), v.value.to_string(), v.regime.to_string()],
                            Err(e) => vec![row.r.to_string(), "-".into(), format!("unsupported: {e}")],
                        })
                        .collect(),
                },
            }
        }
        Command::NReconstruction { graph, r } => {
            let spec = graph.spec()?;
            let rec = ctx.engine().reconstruction_number(&spec, r)?;
            Output::Record(vec![
                ("k", json!(spec.k())),
                ("n", json!(spec.n())),
                ("r", json!(r)),
                ("N", big(&rec.value)),
                (
                    "argmax",
                    Value::Array(rec.argmax.iter().map(|t| json!(t.to_string())).collect()),
                ),
            ])
        }
        Command::Factor { graph, g } => cmd_factor(&ctx, graph, &g)?,
        Command::Stirling {
            kind,
            r#type,
            n,
            m,
            r,
        } => cmd_stirling(&ctx, &kind, r#type.as_deref(), n, m.or(r.map(|r| n as i64 - r)))?,
        Command::Verify { suite, list } => {
            if list {
                let mut names: Vec<String> = verify::SUITES.iter().map(|s| s.to_string()).collect();
                names.push("spheres-k<K>-n<N>".into());
                Output::Text(names.join("\n") + "\n")
            } else {
                let name = suite.expect("clap requires a suite");
                let opts = VerifyOptions {
                    seed: ctx.config.seed,
                    oracle: ctx.oracle_cfg(),
                };
                let report = verify::run_suite(&name, &opts).ok_or_else(|| {
                    anyhow!("unknown suite {name:?}; `verify --list` shows the names")
                })?;
                let text = match ctx.config.output_format {
                    Format::Json => report.to_json() + "\n",
                    _ => report.to_text(),
                };
                return Ok((Output::Text(text), report.passed, ctx.config.output_format));
            }
        }
        Command::Cache { action } => {
            let cache = SeedCache::new(&ctx.config.cache_dir);
            match action {
                CacheAction::List => Output::Rows {
                    headers: vec!["kind", "g_type", "t", "entries"],
                    rows: cache
                        .list()?
                        .iter()
                        .map(|s| {
                            vec![
                                s.kind.to_string(),
                                s.g_type.to_string(),
                                s.t.to_string(),
                                s.row.len().to_string(),
                            ]
                        })
                        .collect(),
                },
                CacheAction::Clear => {
                    let removed = cache.clear()?;
                    Output::Text(format!("removed {removed} cached rows from {}\n", cache.dir().display()))
                }
            }
        }
    };
    Ok((out, true, ctx.config.output_format))
}

fn cmd_distance(ctx: &Ctx, graph: GraphArgs, g: &str, from: Option<&str>) -> Result<Output> {
    let spec = graph.spec()?;
    let target = parse_perm(g, spec.n())?;
    let offset = match from {
        Some(u) => {
            let u = parse_perm(u, spec.n())?;
            if !spec.contains(&u) {
                bail!("{u} is not a vertex of the graph");
            }
            u.inverse().compose(&target)?
        }
        None => target.clone(),
    };
    let (assignment, rule, regime) = if ctx.analytic(&spec)? {
        let (a, rule) = metric::classify(&spec, &offset)?;
        (a, rule.to_string(), "analytic")
    } else {
        let table = ctx.class_table(&spec)?;
        let a = match table.get(&offset.cycle_type()) {
            Some(d) => SphereAssignment::Radius(d),
            None => SphereAssignment::NotAVertex,
        };
        (a, "breadth-first search".to_string(), "oracle")
    };
    let radius = match assignment {
        SphereAssignment::Radius(r) => json!(r),
        SphereAssignment::NotAVertex => json!("not-a-vertex"),
    };
    Ok(Output::Record(vec![
        ("k", json!(spec.k())),
        ("n", json!(spec.n())),
        ("g", json!(target.to_string())),
        ("distance", radius),
        ("rule", json!(rule)),
        ("regime", json!(regime)),
    ]))
}

fn cmd_factor(ctx: &Ctx, graph: GraphArgs, g: &str) -> Result<Output> {
    let spec = graph.spec()?;
    let g = parse_perm(g, spec.n())?;
    ctx.analytic(&spec)?;
    let word = metric::geodesic_factorization(&spec, &g)?;
    let mut product = Permutation::identity(spec.n());
    for x in &word {
        product = product.compose(x)?;
    }
    if product != g {
        bail!("internal error: factors multiply to {product}, not {g}");
    }
    let radius = metric::sphere_radius(&spec, &g)?.radius();
    Ok(Output::Record(vec![
        ("k", json!(spec.k())),
        ("n", json!(spec.n())),
        ("g", json!(g.to_string())),
        (
            "factors",
            Value::Array(word.iter().map(|x| json!(x.to_string())).collect()),
        ),
        ("length", json!(word.len())),
        ("distance", json!(radius)),
    ]))
}

fn cmd_stirling(ctx: &Ctx, kind: &str, g_type: Option<&str>, n: usize, m: Option<i64>) -> Result<Output> {
    let mut f = match kind {
        "classical" => StirlingFunction::classical(),
        "transposition-balls" => StirlingFunction::transposition_balls(),
        seeded => {
            let kind: SeedKind = seeded
                .parse()
                .map_err(|e| anyhow!("unknown kind {seeded:?}: {e}"))?;
            let t = g_type.ok_or_else(|| anyhow!("--type is required for {kind}"))?;
            let t: CycleType = t.parse().map_err(|e| anyhow!("bad cycle type {t:?}: {e}"))?;
            ctx.engine().stirling_for(&t, kind)?
        }
    };
    match m {
        Some(m) => Ok(Output::Record(vec![
            ("n", json!(n)),
            ("m", json!(m)),
            ("value", big(&f.eval(n, m)?)),
        ])),
        None => {
            f.warm_up(n)?;
            let lo = f.m_floor().min(n as i64);
            let rows = (lo..=n as i64)
                .map(|m| Ok(vec![m.to_string(), f.get(n, m)?.to_string()]))
                .collect::<Result<Vec<_>>>()?;
            Ok(Output::Rows {
                headers: vec!["m", "value"],
                rows,
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, ok, format)) => {
            print!("{}", out.render(format));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
