//! Command-line driver: seed-set decomposition, cascade verification,
//! threshold sweeps, structural metrics, the Reichman bound, planar
//! regression, and synthetic graph generation.
//!
//! Exit codes: 0 success (and cascade complete), 1 usage error, 2 data
//! error, 3 verification found the cascade incomplete.

mod fit;
mod sweep;

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use tipcascade::cascade::gamma;
use tipcascade::community::louvain;
use tipcascade::decomp::tip_decomp;
use tipcascade::graph::{generate, load_edge_list, DirectedGraph, LoadOptions, Model, NodeId};
use tipcascade::metrics::{network_report, reichman_bound};
use tipcascade::thresholds::{resolve, ThresholdSpec};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Incomplete { activated: usize, n: usize },
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Data(msg) => write!(f, "{msg}"),
            CliError::Incomplete { activated, n } => {
                write!(f, "cascade incomplete: {activated}/{n} activated")
            }
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Incomplete { .. } => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "tipcascade",
    version,
    about = "Tipping-model seed selection and analysis for directed social networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a seed set guaranteed to tip the entire network
    Decompose(DecomposeArgs),
    /// Check whether a seed file activates the whole network
    Verify(VerifyArgs),
    /// Run the integer and fractional threshold protocols, one CSV row per trial
    Sweep(SweepArgs),
    /// Clustering and Louvain modularity, one CSV row per graph
    Metrics(MetricsArgs),
    /// Upper bound on minimum seed size for a homogeneous integer threshold
    Bound(BoundArgs),
    /// Least-squares fit of seed size on modularity and clustering
    Fit(FitArgs),
    /// Generate a synthetic edge list
    Gen(GenArgs),
}

#[derive(Args)]
struct GraphInput {
    /// Edge-list file ("u v" per line, '#' comments)
    #[arg(long)]
    graph: PathBuf,
    /// Add the reverse of every edge after loading
    #[arg(long)]
    symmetrize: bool,
    /// Trust integer ids as-is instead of relabeling densely
    #[arg(long)]
    raw_ids: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Threshold spec: int:K, frac:NUM/DEN, or frac:0.05
    #[arg(long)]
    threshold: String,
    /// Write the seed set here (default: stdout), one node per line
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the removal sequence as "node rank" lines
    #[arg(long)]
    removal_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    threshold: String,
    /// Seed file, one node per line
    #[arg(long)]
    seeds: PathBuf,
    /// Write the cascade trace as "round,node" CSV
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Integer protocol range, e.g. 1..10
    #[arg(long, default_value = "1..10")]
    int: String,
    /// Fractional protocol range, e.g. 0.05..0.60:0.05
    #[arg(long, default_value = "0.05..0.60:0.05")]
    frac: String,
    /// Trial parallelism (default: available cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Omit the runtime column so repeated sweeps are byte-identical
    #[arg(long)]
    stable_output: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Edge-list file(s); repeat for several graphs
    #[arg(long, required = true)]
    graph: Vec<PathBuf>,
    #[arg(long)]
    symmetrize: bool,
    #[arg(long)]
    raw_ids: bool,
    /// Seed for the Louvain visit order
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Write the Louvain partition as "node community" lines (single graph)
    #[arg(long)]
    partition_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Must be an integer spec (int:K)
    #[arg(long)]
    threshold: String,
}

#[derive(Args)]
struct FitArgs {
    /// CSV with a header row and columns name,M,C,S
    #[arg(long)]
    csv: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    /// Model: er:N,P or ba:N,ATTACH
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Prepend a "# n=<n> m=<m>" header comment
    #[arg(long)]
    header: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Decompose(args) => cmd_decompose(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Gen(args) => cmd_gen(args),
    }
}

fn data_err<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::Data(format!("{context}: {e}"))
}

fn load_graph(input: &GraphInput) -> Result<DirectedGraph, CliError> {
    let path = &input.graph;
    let file = File::open(path).map_err(data_err(&path.display().to_string()))?;
    load_edge_list(
        BufReader::new(file),
        &LoadOptions {
            symmetrize: input.symmetrize,
            relabel: !input.raw_ids,
        },
    )
    .map_err(data_err(&path.display().to_string()))
}

fn parse_threshold(text: &str) -> Result<ThresholdSpec, CliError> {
    ThresholdSpec::parse(text).map_err(|e| CliError::Usage(e.to_string()))
}

fn graph_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Write lines to `out`, or to stdout when no path is given.
fn emit_lines(out: &Option<PathBuf>, lines: &[String]) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(data_err(&path.display().to_string()))?;
            let mut w = BufWriter::new(file);
            for line in lines {
                writeln!(w, "{line}").map_err(data_err("write"))?;
            }
            w.flush().map_err(data_err("write"))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            for line in lines {
                writeln!(w, "{line}").map_err(data_err("write"))?;
            }
        }
    }
    Ok(())
}

fn cmd_decompose(args: DecomposeArgs) -> Result<(), CliError> {
    let spec = parse_threshold(&args.threshold)?;
    let g = load_graph(&args.input)?;

    let started = Instant::now();
    let assignment = resolve(&g, &spec).map_err(data_err("threshold resolution"))?;
    let result = tip_decomp(&g, &assignment);
    let runtime_ms = started.elapsed().as_secs_f64() * 1e3;

    let seed_lines: Vec<String> = result
        .seed
        .members()
        .iter()
        .map(|&v| g.node_name(v))
        .collect();
    emit_lines(&args.out, &seed_lines)?;

    if let Some(path) = &args.removal_out {
        let lines: Vec<String> = result
            .removal_order
            .iter()
            .enumerate()
            .map(|(rank, &v)| format!("{} {}", g.node_name(v), rank + 1))
            .collect();
        emit_lines(&Some(path.clone()), &lines)?;
    }

    eprintln!(
        "n={} m={} seed_size={} seed_fraction={:.6} runtime_ms={:.3}",
        g.n(),
        g.m(),
        result.seed.size(),
        result.seed.fraction(),
        runtime_ms
    );
    Ok(())
}

fn read_seed_file(g: &DirectedGraph, path: &Path) -> Result<Vec<NodeId>, CliError> {
    let file = File::open(path).map_err(data_err(&path.display().to_string()))?;
    let mut seeds = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(data_err("read seeds"))?;
        for token in line.split_whitespace().take(1) {
            if token.starts_with('#') {
                break;
            }
            let id = g.resolve_node(token).ok_or_else(|| {
                CliError::Data(format!(
                    "{}:{}: unknown node {token:?}",
                    path.display(),
                    idx + 1
                ))
            })?;
            seeds.push(id);
        }
    }
    Ok(seeds)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let spec = parse_threshold(&args.threshold)?;
    let g = load_graph(&args.input)?;
    let assignment = resolve(&g, &spec).map_err(data_err("threshold resolution"))?;
    let seeds = read_seed_file(&g, &args.seeds)?;

    let trace = gamma(&g, &assignment, &seeds).map_err(data_err("cascade"))?;
    if let Some(path) = &args.trace_out {
        let mut lines = vec!["round,node".to_string()];
        for (round, nodes) in trace.rounds().iter().enumerate() {
            for &v in nodes {
                lines.push(format!("{round},{}", g.node_name(v)));
            }
        }
        emit_lines(&Some(path.clone()), &lines)?;
    }

    let complete = trace.total_activated() == g.n();
    println!(
        "{{\"complete\":{complete},\"activated\":{},\"rounds\":{}}}",
        trace.total_activated(),
        trace.converged_at()
    );
    if complete {
        Ok(())
    } else {
        Err(CliError::Incomplete {
            activated: trace.total_activated(),
            n: g.n(),
        })
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let int_range = sweep::parse_int_range(&args.int)?;
    let fracs = sweep::parse_frac_range(&args.frac)?;
    let workers = match args.workers {
        Some(0) => return Err(CliError::Usage("--workers must be >= 1".into())),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |p| p.get()),
    };
    let g = load_graph(&args.input)?;
    let name = graph_name(&args.input.graph);
    let trials = sweep::build_trials(int_range, fracs);
    let lines = sweep::run_sweep(&g, &name, &trials, workers, args.stable_output)?;
    emit_lines(&args.out, &lines)
}

fn cmd_metrics(args: MetricsArgs) -> Result<(), CliError> {
    if args.partition_out.is_some() && args.graph.len() != 1 {
        return Err(CliError::Usage(
            "--partition-out needs exactly one --graph".into(),
        ));
    }
    let mut lines = vec!["name,n,m,avg_clustering,louvain_modularity".to_string()];
    for path in &args.graph {
        let input = GraphInput {
            graph: path.clone(),
            symmetrize: args.symmetrize,
            raw_ids: args.raw_ids,
        };
        let g = load_graph(&input)?;
        let report = network_report(&g, args.rng_seed).map_err(|e| {
            CliError::Data(format!(
                "{}: {e} (use --symmetrize for directed inputs)",
                path.display()
            ))
        })?;
        lines.push(format!(
            "{},{},{},{:.6},{:.6}",
            graph_name(path),
            report.n,
            report.m_undirected,
            report.avg_clustering,
            report.louvain_modularity
        ));
        if let Some(partition_path) = &args.partition_out {
            // same seed as the report, so the exported partition matches it
            let (partition, _) =
                louvain(&g, args.rng_seed).map_err(|e| CliError::Data(e.to_string()))?;
            let rows: Vec<String> = (0..g.n() as NodeId)
                .map(|v| format!("{} {}", g.node_name(v), partition.community_of(v)))
                .collect();
            emit_lines(&Some(partition_path.clone()), &rows)?;
        }
    }
    emit_lines(&args.out, &lines)
}

fn cmd_bound(args: BoundArgs) -> Result<(), CliError> {
    let spec = parse_threshold(&args.threshold)?;
    if !matches!(spec, ThresholdSpec::IntegerCap(_)) {
        return Err(CliError::Usage(
            "bound requires an integer threshold (int:K)".into(),
        ));
    }
    let g = load_graph(&args.input)?;
    let bound = reichman_bound(&g, &spec)
        .map_err(|e| CliError::Data(format!("{e} (use --symmetrize for directed inputs)")))?;
    println!("{bound:.6}");
    Ok(())
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let file = File::open(&args.csv).map_err(data_err(&args.csv.display().to_string()))?;
    let mut points = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(data_err("read csv"))?;
        if idx == 0 || line.trim().is_empty() {
            continue; // header
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(CliError::Data(format!(
                "{}:{}: expected `name,M,C,S`, got {line:?}",
                args.csv.display(),
                idx + 1
            )));
        }
        let parse = |text: &str| {
            text.trim().parse::<f64>().map_err(|_| {
                CliError::Data(format!(
                    "{}:{}: invalid number {text:?}",
                    args.csv.display(),
                    idx + 1
                ))
            })
        };
        points.push((parse(fields[1])?, parse(fields[2])?, parse(fields[3])?));
    }

    let fit = fit::fit_plane(&points).map_err(|e| CliError::Data(e.to_string()))?;
    println!(
        "coef_M={:.6} coef_C={:.6} intercept={:.6} r_squared={:.6} p_value={:.3e} rows={}",
        fit.coef_m, fit.coef_c, fit.intercept, fit.r_squared, fit.p_value, fit.rows
    );
    Ok(())
}

fn parse_model(text: &str) -> Result<Model, CliError> {
    let invalid = || {
        CliError::Usage(format!(
            "--model expects er:N,P or ba:N,ATTACH, got {text:?}"
        ))
    };
    let (kind, params) = text.split_once(':').ok_or_else(invalid)?;
    let (a, b) = params.split_once(',').ok_or_else(invalid)?;
    match kind {
        "er" => Ok(Model::ErdosRenyi {
            n: a.parse().map_err(|_| invalid())?,
            p: b.parse().map_err(|_| invalid())?,
        }),
        "ba" => Ok(Model::BarabasiAlbert {
            n: a.parse().map_err(|_| invalid())?,
            attach: b.parse().map_err(|_| invalid())?,
        }),
        _ => Err(invalid()),
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let model = parse_model(&args.model)?;
    let g = generate(model, args.rng_seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut buf = Vec::new();
    g.write_edge_list(&mut buf, args.header)
        .map_err(data_err("write"))?;
    let text = String::from_utf8(buf).expect("edge list is ascii");
    let lines: Vec<String> = text.lines().map(str::to_string).collect();
    emit_lines(&args.out, &lines)?;
    eprintln!("n={} m={}", g.n(), g.m());
    Ok(())
}
