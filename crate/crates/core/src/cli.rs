//! Command-line front end. Every command except `gen` without `--out` writes
//! a JSON report (schema 1) to stdout or to `--out`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::decompose::{partition_with, verify_partition, BoundConstants, DecompositionConfig};
use crate::edgelist::{parse_edge_list, write_edge_list};
use crate::error::Error;
use crate::generators::{generate, Family};
use crate::graph::WeightedGraph;
use crate::linsolve::{exact_reff, st_potential, SolveMethod, SolverOptions};
use crate::sketch::SketchConfig;
use crate::sweep::find_sparse_cut;

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable capping worker threads (0 = automatic).
pub const THREADS_ENV: &str = "RESDECOMP_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "resdecomp",
    version,
    about = "Effective-resistance cuts and graph decomposition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic unit-weight graph as an edge list.
    Gen(GenArgs),
    /// Effective resistance between two vertices.
    Reff(ReffArgs),
    /// Low-conductance level cut from the furthest-pair potential.
    Cut(CutArgs),
    /// Partition into blocks of bounded effective-resistance diameter.
    Decompose(DecomposeArgs),
    /// Check a partition file against the loss and resistance bounds.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyName {
    Hypercube,
    Grid2d,
    Complete,
    RandomRegular,
    Barbell,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodName {
    Auto,
    Dense,
    Iterative,
}

impl From<MethodName> for SolveMethod {
    fn from(m: MethodName) -> Self {
        match m {
            MethodName::Auto => SolveMethod::Auto,
            MethodName::Dense => SolveMethod::Dense,
            MethodName::Iterative => SolveMethod::Iterative,
        }
    }
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock timing (makes reports differ between runs).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Solver accuracy in the Laplacian energy norm.
    #[arg(long, default_value_t = 1e-8)]
    zeta: f64,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodName,
    #[arg(long, default_value_t = 100_000)]
    max_iterations: usize,
}

impl SolveArgs {
    fn options(&self, seed: u64) -> SolverOptions {
        SolverOptions {
            zeta: self.zeta,
            max_iterations: self.max_iterations,
            method: self.method.into(),
            seed,
        }
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    /// Hypercube dimension.
    #[arg(long)]
    dim: Option<u32>,
    /// Grid side length.
    #[arg(long, visible_alias = "k")]
    side: Option<usize>,
    /// Vertex count (complete, random-regular).
    #[arg(long)]
    n: Option<usize>,
    /// Degree (random-regular).
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    clique_size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list destination; without it the edge list goes to stdout and no
    /// report is written.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReffArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(short = 's', long = "source")]
    s: usize,
    #[arg(short = 't', long = "sink")]
    t: usize,
    /// Use the dense pseudo-inverse instead of the solver.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    solve: SolveArgs,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Debug, Args)]
struct SketchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Multiplicative accuracy of resistance estimates (default ln 3/2).
    #[arg(long)]
    beta: Option<f64>,
}

impl SketchArgs {
    fn config(&self) -> SketchConfig {
        let mut cfg = SketchConfig::default().with_seed(self.seed);
        if let Some(beta) = self.beta {
            cfg.beta = beta;
        }
        cfg
    }
}

#[derive(Debug, Args)]
struct CutArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    #[command(flatten)]
    sketch: SketchArgs,
    #[command(flatten)]
    solve: SolveArgs,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    delta: f64,
    #[arg(long = "c-r", default_value_t = 1.0)]
    c_r: f64,
    /// Accept c_R·δ² below 4/ε (flagged in the report).
    #[arg(long)]
    allow_small_target: bool,
    /// Also verify the result against the bounds with exact block diameters.
    #[arg(long)]
    exact_verify: bool,
    #[arg(long, default_value_t = 8.0)]
    c_loss: f64,
    #[arg(long, default_value_t = 32.0)]
    c_res: f64,
    /// Write the partition as `{"blocks": [...]}` to this file.
    #[arg(long)]
    partition_out: Option<PathBuf>,
    /// Include per-edge token totals in the report.
    #[arg(long)]
    psi: bool,
    #[command(flatten)]
    sketch: SketchArgs,
    #[command(flatten)]
    solve: SolveArgs,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Partition file (`{"blocks": [...]}`) or a `decompose` report.
    #[arg(long)]
    partition: PathBuf,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 8.0)]
    c_loss: f64,
    #[arg(long, default_value_t = 32.0)]
    c_res: f64,
    #[command(flatten)]
    sketch: SketchArgs,
    #[command(flatten)]
    solve: SolveArgs,
    #[command(flatten)]
    report: ReportArgs,
}

/// Failure inside a command, mapped to an exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) => EXIT_USAGE,
            _ => EXIT_COMPUTATION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl Failure {
    fn io(path: &Path, e: std::io::Error) -> Self {
        Self {
            code: EXIT_COMPUTATION,
            message: format!("{}: {e}", path.display()),
        }
    }
}

/// Rounds to 12 significant digits.
fn sig12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_floats(value: &mut Value) {
    match value {
        Value::Number(num) if num.is_f64() => {
            if let Some(rounded) = num
                .as_f64()
                .map(sig12)
                .and_then(serde_json::Number::from_f64)
            {
                *num = rounded;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn digest(g: &WeightedGraph) -> Value {
    let (min_w, max_w) = g
        .weight_range()
        .map_or((None, None), |(a, b)| (Some(a), Some(b)));
    json!({
        "n": g.n(),
        "m": g.m(),
        "total_weight": g.total_weight(),
        "min_weight": min_w,
        "max_weight": max_w,
    })
}

fn load_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    parse_edge_list(&text).map_err(|e| Failure {
        code: EXIT_COMPUTATION,
        message: format!("{}: {e}", path.display()),
    })
}

struct Report {
    command: &'static str,
    fields: Map<String, Value>,
}

impl Report {
    fn new(command: &'static str, args: &[String]) -> Self {
        let mut fields = Map::new();
        fields.insert("schema".into(), json!(SCHEMA_VERSION));
        fields.insert("command".into(), json!(command));
        fields.insert("args".into(), json!(args));
        Self { command, fields }
    }

    fn set(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }

    fn render(self) -> String {
        let mut value = Value::Object(self.fields);
        round_floats(&mut value);
        let mut text = serde_json::to_string_pretty(&value).expect("json renders");
        text.push('\n');
        text
    }
}

fn configure_threads() {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    // Fails harmlessly if the global pool already exists.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
}

/// Runs the command line `argv` (including the program name), writing
/// reports to `stdout` and diagnostics to `stderr`. Returns the exit status.
pub fn execute<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    configure_threads();
    let echo: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();

    if let Command::Gen(args) = &cli.command {
        return match run_gen(args, &echo, stdout) {
            Ok(()) => EXIT_OK,
            Err(f) => {
                let _ = writeln!(stderr, "error: {}", f.message);
                f.code
            }
        };
    }

    let (name, report_args) = match &cli.command {
        Command::Reff(a) => ("reff", &a.report),
        Command::Cut(a) => ("cut", &a.report),
        Command::Decompose(a) => ("decompose", &a.report),
        Command::Verify(a) => ("verify", &a.report),
        Command::Gen(_) => unreachable!(),
    };
    let mut report = Report::new(name, &echo);
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Reff(a) => run_reff(a, &mut report),
        Command::Cut(a) => run_cut(a, &mut report),
        Command::Decompose(a) => run_decompose(a, &mut report),
        Command::Verify(a) => run_verify(a, &mut report),
        Command::Gen(_) => unreachable!(),
    };
    let code = match &outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            report.set("result", Value::Null);
            report.set(
                "error",
                json!({ "message": f.message, "exit_code": f.code }),
            );
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    };
    if report_args.timing {
        report.set(
            "timing",
            json!({ "elapsed_seconds": start.elapsed().as_secs_f64() }),
        );
    }
    let command = report.command;
    let text = report.render();
    match &report_args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                let _ = writeln!(stderr, "error: {command}: {}: {e}", path.display());
                return EXIT_COMPUTATION;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    code
}

fn run_gen(args: &GenArgs, echo: &[String], stdout: &mut dyn Write) -> Result<(), Failure> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure {
            code: EXIT_USAGE,
            message: format!("--{flag} is required for this family"),
        })
    };
    let family = match args.family {
        FamilyName::Hypercube => Family::Hypercube {
            dim: args.dim.ok_or_else(|| Failure {
                code: EXIT_USAGE,
                message: "--dim is required for this family".into(),
            })?,
        },
        FamilyName::Grid2d => Family::Grid2d {
            side: need(args.side, "side")?,
        },
        FamilyName::Complete => Family::Complete {
            n: need(args.n, "n")?,
        },
        FamilyName::RandomRegular => Family::RandomRegular {
            n: need(args.n, "n")?,
            degree: need(args.degree, "degree")?,
            seed: args.seed,
        },
        FamilyName::Barbell => Family::Barbell {
            clique_size: need(args.clique_size, "clique-size")?,
        },
    };
    let g = generate(family)?;
    let text = write_edge_list(&g);
    match &args.out {
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::io(path, e))?;
            let mut report = Report::new("gen", echo);
            report.set("input", digest(&g));
            report.set("seeds", json!({ "generator": args.seed }));
            report.set(
                "result",
                json!({ "family": args.family.to_possible_value().map(|v| v.get_name().to_owned()), "path": path.display().to_string(), "lines": text.lines().count() }),
            );
            let _ = stdout.write_all(report.render().as_bytes());
        }
    }
    Ok(())
}

fn run_reff(args: &ReffArgs, report: &mut Report) -> Result<(), Failure> {
    let g = load_graph(&args.graph)?;
    report.set("input", digest(&g));
    let opts = args.solve.options(0);
    report.set(
        "config",
        json!({ "exact": args.exact, "solver": to_json(&opts) }),
    );
    let result = if args.exact {
        json!({ "s": args.s, "t": args.t, "reff": exact_reff(&g, args.s, args.t)?, "method": "exact" })
    } else {
        let p = st_potential(&g, args.s, args.t, &opts)?;
        json!({ "s": args.s, "t": args.t, "reff": p.drop(), "method": "solver", "eta": p.eta, "zeta": p.zeta })
    };
    report.set("result", result);
    Ok(())
}

fn run_cut(args: &CutArgs, report: &mut Report) -> Result<(), Failure> {
    let g = load_graph(&args.graph)?;
    report.set("input", digest(&g));
    let cfg = args.sketch.config();
    let opts = args.solve.options(cfg.seed);
    report.set("seeds", json!({ "sketch": cfg.seed }));
    report.set(
        "config",
        json!({ "epsilon": args.epsilon, "sketch": to_json(&cfg), "solver": to_json(&opts) }),
    );
    let cut = find_sparse_cut(&g, args.epsilon, &cfg, &opts)?;
    report.set("result", to_json(&cut));
    Ok(())
}

fn run_decompose(args: &DecomposeArgs, report: &mut Report) -> Result<(), Failure> {
    let g = load_graph(&args.graph)?;
    report.set("input", digest(&g));
    let cfg = args.sketch.config();
    let opts = args.solve.options(cfg.seed);
    let config = if args.allow_small_target {
        DecompositionConfig::relaxed(&g, args.delta, args.c_r)?
    } else {
        DecompositionConfig::new(&g, args.delta, args.c_r)?
    };
    let constants = BoundConstants {
        c_loss: args.c_loss,
        c_res: args.c_res,
    };
    report.set("seeds", json!({ "sketch": cfg.seed }));
    report.set(
        "config",
        json!({
            "decomposition": to_json(&config),
            "sketch": to_json(&cfg),
            "solver": to_json(&opts),
            "constants": to_json(&constants),
        }),
    );
    let (partition, details) = partition_with(&g, &config, &cfg, &opts)?;
    if let Some(path) = &args.partition_out {
        let text =
            serde_json::to_string(&json!({ "blocks": partition.blocks })).expect("json renders");
        std::fs::write(path, text + "\n").map_err(|e| Failure::io(path, e))?;
    }
    let mut result = json!({
        "blocks": partition.blocks,
        "block_count": partition.blocks.len(),
        "cut_weight": partition.cut_weight,
        "loss_fraction": details.loss_fraction,
        "type_i_weight": details.type_i_weight,
        "type_ii_weight": details.type_ii_weight,
        "per_block_rdiam": details.per_block_rdiam,
        "rdiam_exact": details.rdiam_exact,
        "max_rdiam": details.per_block_rdiam.iter().copied().fold(0.0, f64::max),
        "resistance_target": config.resistance_target,
        "psi_max": details.psi_max,
        "sparse_cuts": details.sparse_cuts,
        "fallback_charges": details.fallback_charges,
        "max_depth": details.max_depth,
        "precondition_binding": config.precondition_binding,
    });
    if args.psi {
        result["psi"] = to_json(&details.psi);
    }
    if args.exact_verify {
        let v = verify_partition(&g, &partition.blocks, args.delta, constants, &cfg, &opts)?;
        result["verification"] = to_json(&v);
    }
    report.set("result", result);
    Ok(())
}

fn read_blocks(path: &Path) -> Result<Vec<Vec<usize>>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let bad = |message: String| Failure {
        code: EXIT_COMPUTATION,
        message: format!("{}: {message}", path.display()),
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let blocks = value
        .get("blocks")
        .or_else(|| value.get("result").and_then(|r| r.get("blocks")))
        .ok_or_else(|| bad("missing \"blocks\"".into()))?;
    serde_json::from_value(blocks.clone()).map_err(|e| bad(e.to_string()))
}

fn run_verify(args: &VerifyArgs, report: &mut Report) -> Result<(), Failure> {
    let g = load_graph(&args.graph)?;
    report.set("input", digest(&g));
    let blocks = read_blocks(&args.partition)?;
    let cfg = args.sketch.config();
    let opts = args.solve.options(cfg.seed);
    let constants = BoundConstants {
        c_loss: args.c_loss,
        c_res: args.c_res,
    };
    report.set("seeds", json!({ "sketch": cfg.seed }));
    report.set(
        "config",
        json!({ "delta": args.delta, "constants": to_json(&constants) }),
    );
    let v = verify_partition(&g, &blocks, args.delta, constants, &cfg, &opts)?;
    let mut result = to_json(&v);
    result["valid"] = json!(true);
    result["passed"] = json!(v.passed());
    report.set("result", result);
    Ok(())
}
