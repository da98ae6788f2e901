use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use semident_core::{
    classify_graph, classify_selected, criteria_table, load_store, run_census, verify_numeric,
    CensusConfig, CensusError, ClassifyOptions, GraphId, MixedGraph, Parametrization, TargetKind,
};

mod output;

/// Exit codes. Stable; also listed in the README.
mod exit {
    pub const FAILURE: u8 = 1;
    pub const BAD_INPUT: u8 = 2;
    pub const UNRESOLVED: u8 = 3;
    pub const VERIFICATION_FAILED: u8 = 4;
    pub const STORE: u8 = 5;
}

const STORE_ENV: &str = "SEMIDENT_STORE";

#[derive(Parser)]
#[command(
    name = "semident",
    version,
    about = "Generic identifiability of linear SEMs on mixed graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every parameter of one graph.
    Analyze(AnalyzeArgs),
    /// Classify all graphs on `--nodes` vertices into a resumable store.
    Census(CensusArgs),
    /// Emit a colored DOT drawing of a graph's classification.
    Dot(DotArgs),
    /// Check the identified parameters of a graph on exact random samples.
    Verify(VerifyArgs),
    /// Single-door, instrumental-variable and back-door results.
    Criteria(CriteriaArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct Budget {
    /// Per-target time limit for each Gröbner basis computation.
    #[arg(long, default_value_t = 600)]
    timeout_secs: u64,
}

impl Budget {
    fn options(&self) -> ClassifyOptions {
        ClassifyOptions::with_time_limit(Duration::from_secs(self.timeout_secs))
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Graph such as "3; 1->2 2->3; 2<->3".
    graph: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    budget: Budget,
    /// Comma-separated labels (l23, w11, TE(2,4), PE(2->3->4)) or kinds
    /// (direct, omega, total, path).
    #[arg(long)]
    targets: Option<String>,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    nodes: usize,
    /// Store file; defaults to $SEMIDENT_STORE, then census-m<nodes>.jsonl.
    #[arg(long)]
    store: Option<PathBuf>,
    #[arg(long)]
    resume: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    budget: Budget,
    /// Re-run graphs left unresolved with this larger per-target limit.
    #[arg(long)]
    retry_timeout_secs: Option<u64>,
    /// Only these graph ids (comma-separated).
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct DotArgs {
    /// Graph text; omit to read a record from a store with --id.
    graph: Option<String>,
    #[arg(long)]
    store: Option<PathBuf>,
    #[arg(long)]
    id: Option<u64>,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args)]
struct VerifyArgs {
    graph: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args)]
struct CriteriaArgs {
    graph: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// An error carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn new(code: u8, error: anyhow::Error) -> Self {
        Failure { code, error }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure::new(exit::FAILURE, error)
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        let code = match e {
            CensusError::Io(_) => exit::FAILURE,
            CensusError::IdOutOfRange { .. }
            | CensusError::UnsupportedM(_)
            | CensusError::Graph(_) => exit::BAD_INPUT,
            CensusError::Store { .. } | CensusError::StoreExists(_) => exit::STORE,
        };
        Failure::new(code, e.into())
    }
}

fn parse_graph(text: &str) -> Result<MixedGraph, Failure> {
    text.parse::<MixedGraph>()
        .map_err(|e| Failure::new(exit::BAD_INPUT, anyhow!("invalid graph {text:?}: {e}")))
}

fn target_filter(spec: &str, m: usize) -> impl Fn(&TargetKind) -> bool {
    let wanted: Vec<String> = spec
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    move |k: &TargetKind| {
        wanted.iter().any(|w| {
            let kind = match k {
                TargetKind::DirectEffect { .. } => "direct",
                TargetKind::OmegaEntry { .. } => "omega",
                TargetKind::TotalEffect { .. } => "total",
                TargetKind::PathEffect { .. } => "path",
            };
            w == kind || *w == k.label(m)
        })
    }
}

fn analyze(args: AnalyzeArgs) -> Result<u8, Failure> {
    let g = parse_graph(&args.graph)?;
    let options = args.budget.options();
    let report = match &args.targets {
        Some(spec) => classify_selected(&g, &options, target_filter(spec, g.m())),
        None => classify_graph(&g, &options),
    };
    let text = match args.format {
        Format::Text => output::report_text(&report),
        Format::Json => output::report_json(&report),
        Format::Dot => output::report_dot(&report),
    };
    print!("{text}");
    Ok(if report.any_unresolved() {
        exit::UNRESOLVED
    } else {
        0
    })
}

fn store_path(flag: Option<PathBuf>, default: impl FnOnce() -> Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(STORE_ENV).map(PathBuf::from))
        .or_else(default)
}

fn census(args: CensusArgs) -> Result<u8, Failure> {
    let store = store_path(args.store, || {
        Some(PathBuf::from(format!("census-m{}.jsonl", args.nodes)))
    })
    .expect("default store path");
    let mut config = CensusConfig::new(args.nodes, store);
    config.options = args.budget.options();
    config.resume = args.resume;
    config.jobs = args.jobs;
    config.only = args.only;
    config.retry_time_limit = args.retry_timeout_secs.map(Duration::from_secs);
    let summary = run_census(&config)?;
    match args.format {
        Format::Json => print!("{}", output::summary_json(&summary)),
        _ => print!("{}", summary.render_text()),
    }
    Ok(if summary.unresolved.is_empty() {
        0
    } else {
        exit::UNRESOLVED
    })
}

fn dot(args: DotArgs) -> Result<u8, Failure> {
    let report = match (&args.graph, args.id) {
        (Some(text), None) => classify_graph(&parse_graph(text)?, &args.budget.options()),
        (None, Some(id)) => {
            let path = store_path(args.store, || None).ok_or_else(|| {
                Failure::new(
                    exit::BAD_INPUT,
                    anyhow!("--id needs --store or ${STORE_ENV}"),
                )
            })?;
            let (m, records) = load_store(&path)?;
            let key = GraphId::new(m, id)?;
            match records.get(&key) {
                Some(rec) => rec.report.clone(),
                None => classify_graph(&key.decode()?, &args.budget.options()),
            }
        }
        _ => {
            return Err(Failure::new(
                exit::BAD_INPUT,
                anyhow!("give either a graph or --id (with --store)"),
            ))
        }
    };
    print!("{}", output::report_dot(&report));
    Ok(if report.any_unresolved() {
        exit::UNRESOLVED
    } else {
        0
    })
}

fn verify(args: VerifyArgs) -> Result<u8, Failure> {
    let g = parse_graph(&args.graph)?;
    let report = classify_graph(&g, &args.budget.options());
    let p = Parametrization::new(&g);
    let mut results = Vec::new();
    for (t, tr) in p.all_targets().iter().zip(&report.targets) {
        if tr.status.degree().is_none() {
            continue;
        }
        let v =
            verify_numeric(&g, t, &tr.status, args.trials, args.seed).context("verification")?;
        results.push(v);
    }
    let failed = results.iter().any(|r| !r.ok());
    match args.format {
        Format::Json => print!("{}", output::verification_json(&report, &results)),
        _ => print!("{}", output::verification_text(&report, &results)),
    }
    Ok(if failed {
        exit::VERIFICATION_FAILED
    } else if report.any_unresolved() {
        exit::UNRESOLVED
    } else {
        0
    })
}

fn criteria(args: CriteriaArgs) -> Result<u8, Failure> {
    let g = parse_graph(&args.graph)?;
    let table = criteria_table(&g);
    match args.format {
        Format::Json => print!("{}", output::criteria_json(&g, &table)),
        _ => print!("{}", output::criteria_text(&g, &table)),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Census(a) => census(a),
        Command::Dot(a) => dot(a),
        Command::Verify(a) => verify(a),
        Command::Criteria(a) => criteria(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
