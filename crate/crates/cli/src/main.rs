//! `prefset`: optimal subset selection under set preferences.
//!
//! Exit codes: 0 on success, 1 on bad input, 2 when no subset satisfies the
//! hard constraints, 3 when a limit stopped the run.

use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use prefset::catalog::{load_catalog, AttributeSchema, Catalog, CatalogFormat, SchemaFile};
use prefset::csp_search::{solve_csp_bnb, CspSearchConfig, TreeMode, TreeStrategy, Variant};
use prefset::harness::bench::{run_benchmark, EngineVariant};
use prefset::harness::gen::{
    gen_atomic_class, gen_ksat, gen_max2sat, gen_random, gen_twosat_class, gen_vertex_cover,
    random_cnf, RandomProfile,
};
use prefset::harness::movie::{movie_problem, MovieModel};
use prefset::harness::oracle::{oracle, OracleError, DEFAULT_GUARD};
use prefset::prefmodel::ModelFile;
use prefset::problem::{Limits, Problem, SearchResult, Status};
use prefset::properties::{load_properties, PropertyValue};
use prefset::subset_search::{solve_subset_bnb, Strategy, SubsetConfig};
use prefset::tractable::{check_class, solve_atomic_greedy, solve_onevee, TractableError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXIT_NO_WITNESS: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "prefset",
    version,
    about = "Optimal subset selection under set preferences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find an optimal subset.
    Solve(SolveArgs),
    /// Exhaustive search over all subsets (small catalogs only).
    Oracle(OracleArgs),
    /// Write a generated instance as catalog and model files.
    Gen(GenArgs),
    /// Compare engines on generated instances or given files.
    Bench(BenchArgs),
    /// Show the instance parameters and which tractable solver applies.
    ExplainClass(InstanceArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Catalog file (`.csv` needs --schema; JSON may embed its schema).
    #[arg(long)]
    catalog: PathBuf,
    /// Attribute schema (JSON).
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Preference model (JSON).
    #[arg(long)]
    model: PathBuf,
    /// Property definitions (JSON array); defaults to the model's inline list.
    #[arg(long)]
    props: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Dfs,
    Bfs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Tcp,
    Gai,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// `subset`, `csp`, `auto`, or a variant name (`subset-dfs`, `BB-S+ng`, ...).
    #[arg(long, default_value = "auto")]
    engine: String,
    #[arg(long, value_enum, default_value = "dfs")]
    strategy: StrategyArg,
    /// CSP tree mode; defaults to the model kind.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    no_warm_start: bool,
    #[arg(long)]
    no_sibling: bool,
    /// Accepted for symmetry with `gen`; the engines are deterministic.
    #[arg(long)]
    seed: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Largest catalog the oracle accepts.
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    VertexCover,
    Ksat,
    Max2sat,
    Atomic,
    TwoSat,
    Movie,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Items (random, atomic, two-sat, movie) or vertices/variables.
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Properties (random, atomic, two-sat, movie) or clauses.
    #[arg(long, default_value_t = 5)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Value function instead of a TCP-net (random only).
    #[arg(long)]
    gai: bool,
    /// Output directory; receives `catalog.json` and `model.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Random,
    Movie,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark one instance from files instead of a generated suite.
    #[arg(long, requires = "model")]
    catalog: Option<PathBuf>,
    #[arg(long)]
    schema: Option<PathBuf>,
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    props: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "random")]
    suite: Suite,
    #[arg(long, default_value_t = 3)]
    count: u64,
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-cell limit in seconds.
    #[arg(long, default_value_t = 10.0)]
    timeout: f64,
    /// Comma-separated variant names; all by default.
    #[arg(long, value_delimiter = ',')]
    variants: Vec<String>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve(a) => solve(&a),
        Command::Oracle(a) => run_oracle(&a),
        Command::Gen(a) => generate(&a),
        Command::Bench(a) => bench(&a),
        Command::ExplainClass(a) => explain(&a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_problem(
    catalog: &Path,
    schema: Option<&Path>,
    model: &Path,
    props: Option<&Path>,
) -> Result<Problem> {
    let schema: Option<AttributeSchema> = match schema {
        Some(p) => Some(serde_json::from_str::<SchemaFile>(&read(p)?)?.into_schema()?),
        None => None,
    };
    let format = match catalog.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => CatalogFormat::Csv,
        _ => CatalogFormat::Json,
    };
    let file = File::open(catalog).with_context(|| format!("opening {}", catalog.display()))?;
    let cat = load_catalog(file, format, schema.as_ref())
        .with_context(|| format!("loading {}", catalog.display()))?;
    let mf =
        ModelFile::parse(&read(model)?).with_context(|| format!("loading {}", model.display()))?;
    let props = match props {
        Some(p) => load_properties(&read(p)?, cat.schema())
            .with_context(|| format!("loading {}", p.display()))?,
        None => mf.inline_properties(cat.schema())?,
    };
    let pm = mf.into_model(&props, cat.len())?;
    Ok(Problem::new(cat, props, pm)?)
}

fn instance(a: &InstanceArgs) -> Result<Problem> {
    load_problem(
        &a.catalog,
        a.schema.as_deref(),
        &a.model,
        a.props.as_deref(),
    )
}

fn limits(timeout: Option<f64>) -> Limits {
    timeout.map_or_else(Limits::none, |s| {
        Limits::timeout(Duration::from_secs_f64(s))
    })
}

fn exit_code(status: Status) -> u8 {
    match status {
        Status::Optimal => 0,
        Status::Infeasible => EXIT_NO_WITNESS,
        Status::LimitReached => EXIT_TIMEOUT,
    }
}

fn assignment_json(p: &Problem, values: &[PropertyValue]) -> Value {
    p.props
        .iter()
        .zip(values)
        .map(|(q, v)| (q.id.clone(), json!(v)))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

fn print_result(p: &Problem, engine: &str, r: &SearchResult, as_json: bool) {
    if as_json {
        let out = json!({
            "engine": engine,
            "status": r.status,
            "proven_optimal": r.proven_optimal,
            "value": r.value.is_finite().then_some(r.value),
            "exact_values": p.exact_values,
            "witness": p.ids(&r.subset),
            "assignment": assignment_json(p, &r.assignment),
            "stats": r.stats,
            "diagnostic": r.diagnostic,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        );
        return;
    }
    println!("engine: {engine}");
    println!(
        "status: {}",
        serde_json::to_value(r.status)
            .expect("serializable")
            .as_str()
            .unwrap_or("?")
    );
    if let Some(d) = &r.diagnostic {
        println!("note: {d}");
    }
    if r.status == Status::Infeasible {
        return;
    }
    println!("value: {}", r.value);
    println!("witness: {}", p.ids(&r.subset).join(" "));
    let vals: Vec<String> = p
        .props
        .iter()
        .zip(&r.assignment)
        .map(|(q, v)| format!("{}={v}", q.id))
        .collect();
    println!("assignment: {}", vals.join(" "));
    println!("wall_ms: {}", r.stats.wall_ms);
}

fn csp_config(a: &SolveArgs, base: CspSearchConfig, lim: Limits) -> CspSearchConfig {
    let mut cfg = CspSearchConfig {
        limits: lim,
        ..base
    };
    if let Some(m) = a.mode {
        cfg.mode = Some(match m {
            ModeArg::Tcp => TreeMode::Tcp,
            ModeArg::Gai => TreeMode::Gai,
        });
    }
    if matches!(a.strategy, StrategyArg::Bfs) {
        cfg.strategy = TreeStrategy::BestFirst;
    }
    if a.no_warm_start {
        cfg.warm_start = false;
    }
    if a.no_sibling {
        cfg.sibling = false;
    }
    cfg
}

fn solve(a: &SolveArgs) -> Result<u8> {
    let p = instance(&a.instance)?;
    let lim = limits(a.timeout);
    let strategy = match a.strategy {
        StrategyArg::Dfs => Strategy::DepthFirst,
        StrategyArg::Bfs => Strategy::BestFirst,
    };
    let (engine, r) = match a.engine.as_str() {
        "subset" => {
            let cfg = SubsetConfig {
                limits: if a.timeout.is_some() {
                    lim
                } else {
                    SubsetConfig::default().limits
                },
                ..SubsetConfig::default().with_strategy(strategy)
            };
            ("subset".to_string(), solve_subset_bnb(&p, cfg))
        }
        "csp" => (
            "csp".to_string(),
            solve_csp_bnb(&p, csp_config(a, CspSearchConfig::default(), lim)),
        ),
        "auto" => {
            let class = check_class(&p);
            let tractable = if class.atomic_greedy {
                Some(solve_atomic_greedy(&p))
            } else if class.two_sat {
                Some(solve_onevee(&p))
            } else {
                None
            };
            match tractable {
                Some(Ok(r)) => (class.class_name().to_string(), r),
                Some(Err(TractableError::Exhausted(id))) => {
                    let r = SearchResult::infeasible(
                        Default::default(),
                        format!("property {id} has no consistent value"),
                    );
                    (class.class_name().to_string(), r)
                }
                Some(Err(e)) => return Err(e.into()),
                None => (
                    "csp".to_string(),
                    solve_csp_bnb(&p, csp_config(a, CspSearchConfig::default(), lim)),
                ),
            }
        }
        name => match EngineVariant::from_name(name) {
            Some(EngineVariant::Csp(v)) => (
                v.name().to_string(),
                solve_csp_bnb(&p, csp_config(a, CspSearchConfig::variant(v), lim)),
            ),
            Some(v) => (v.name().to_string(), v.run(&p, lim)),
            None => bail!(
                "unknown engine `{name}` (expected subset, csp, auto, subset-dfs, subset-bfs, {})",
                Variant::ALL.map(|v| v.name()).join(", ")
            ),
        },
    };
    print_result(&p, &engine, &r, a.instance.json);
    Ok(exit_code(r.status))
}

fn run_oracle(a: &OracleArgs) -> Result<u8> {
    let p = instance(&a.instance)?;
    match oracle(&p, a.guard) {
        Ok(r) => {
            if a.instance.json {
                let out = json!({
                    "value": r.value,
                    "witness": p.ids(&r.witness),
                    "assignment": assignment_json(&p, &r.assignment),
                    "optimal_count": r.optimal_count,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("value: {}", r.value);
                println!("witness: {}", p.ids(&r.witness).join(" "));
                let vals: Vec<String> = p
                    .props
                    .iter()
                    .zip(&r.assignment)
                    .map(|(q, v)| format!("{}={v}", q.id))
                    .collect();
                println!("assignment: {}", vals.join(" "));
                println!("optimal subsets: {}", r.optimal_count);
            }
            Ok(0)
        }
        Err(OracleError::Infeasible) => {
            println!("no subset satisfies the required cardinality");
            Ok(EXIT_NO_WITNESS)
        }
        Err(e) => Err(e.into()),
    }
}

/// JSON catalog with its schema embedded.
fn catalog_json(cat: &Catalog) -> Value {
    let schema = cat.schema();
    let items: Vec<Value> = cat
        .items()
        .iter()
        .map(|o| {
            let values: serde_json::Map<String, Value> = o
                .values
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    (
                        schema.attribute(i).name.clone(),
                        json!(schema.display_value(i, v)),
                    )
                })
                .collect();
            json!({ "id": o.id, "values": values })
        })
        .collect();
    json!({ "schema": SchemaFile::from_schema(schema), "items": items })
}

fn generate(a: &GenArgs) -> Result<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let g = match a.kind {
        GenKind::Random => gen_random(&RandomProfile {
            gai: a.gai,
            ..RandomProfile::new(a.n, a.m, a.seed)
        }),
        GenKind::VertexCover => {
            let edges: Vec<(usize, usize)> = (0..a.n)
                .flat_map(|u| (u + 1..a.n).map(move |v| (u, v)))
                .collect();
            let picked = rand::seq::index::sample(&mut rng, edges.len(), a.m.min(edges.len()));
            let mut chosen: Vec<(usize, usize)> = picked.iter().map(|i| edges[i]).collect();
            chosen.sort_unstable();
            gen_vertex_cover(a.n, &chosen)
        }
        GenKind::Ksat => gen_ksat(&random_cnf(&mut rng, a.n, a.m, 3)),
        GenKind::Max2sat => gen_max2sat(&random_cnf(&mut rng, a.n, a.m, 2)),
        GenKind::Atomic => gen_atomic_class(a.seed, a.n, a.m, 3),
        GenKind::TwoSat => gen_twosat_class(a.seed, a.n, a.m),
        GenKind::Movie => movie_problem(a.n, a.seed, MovieModel::Prefix(a.m.clamp(1, 14))),
    };
    let p = &g.problem;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let model = ModelFile::from_model(&p.model, &p.props, Some(p.catalog.schema()));
    let mut model = serde_json::to_value(&model)?;
    model["provenance"] = serde_json::to_value(&g.provenance)?;
    fs::write(
        a.out.join("catalog.json"),
        serde_json::to_string_pretty(&catalog_json(&p.catalog))?,
    )?;
    fs::write(
        a.out.join("model.json"),
        serde_json::to_string_pretty(&model)?,
    )?;
    println!(
        "wrote {} items and {} properties to {}",
        p.n(),
        p.m(),
        a.out.display()
    );
    Ok(0)
}

fn bench(a: &BenchArgs) -> Result<u8> {
    let variants: Vec<EngineVariant> = if a.variants.is_empty() {
        EngineVariant::ALL.to_vec()
    } else {
        a.variants
            .iter()
            .map(|v| {
                EngineVariant::from_name(v.trim()).with_context(|| format!("unknown variant `{v}`"))
            })
            .collect::<Result<_>>()?
    };
    let instances: Vec<(String, Problem)> = match (&a.catalog, &a.model) {
        (Some(c), Some(m)) => {
            let p = load_problem(c, a.schema.as_deref(), m, a.props.as_deref())?;
            vec![(c.display().to_string(), p)]
        }
        _ => (0..a.count)
            .map(|i| {
                let seed = a.seed + i;
                match a.suite {
                    Suite::Random => (
                        format!("random-{seed}"),
                        gen_random(&RandomProfile::new(a.n, a.m, seed)).problem,
                    ),
                    Suite::Movie => (
                        format!("movie-{seed}"),
                        movie_problem(a.n, seed, MovieModel::Prefix(a.m.clamp(1, 14))).problem,
                    ),
                }
            })
            .collect(),
    };
    let report = run_benchmark(&instances, &variants, Duration::from_secs_f64(a.timeout));
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.to_tsv());
    }
    if !report.is_consistent() {
        for m in &report.mismatches {
            eprintln!("mismatch: {m}");
        }
        bail!("variants disagree on the optimum");
    }
    Ok(0)
}

fn explain(a: &InstanceArgs) -> Result<u8> {
    let p = instance(a)?;
    let c = check_class(&p);
    if a.json {
        let mut v = serde_json::to_value(&c)?;
        v["class"] = json!(c.class_name());
        println!("{}", serde_json::to_string_pretty(&v)?);
        return Ok(0);
    }
    println!(
        "n={} m={} a={} k={} d={} mu={}",
        c.n, c.m, c.a, c.k, c.d, c.mu
    );
    println!("empty properties: {}", c.empties_allowed);
    println!("negation: {}", c.negation_allowed);
    println!("class: {}", c.class_name());
    for r in &c.reasons {
        println!("  - {r}");
    }
    Ok(0)
}
