//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for input problems (bad arguments, unreadable
//! or malformed files, invalid configuration), 2 for failures during
//! computation. All reports are deterministic JSON: rerunning a command on
//! the same inputs yields byte-identical output.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use topo_metrics::io::{
    load_embedding, load_runs_config, load_runs_manifest, render_json, save_embedding,
    write_json, FileFormat,
};
use topo_metrics::oracle::naive_persistence;
use topo_metrics::{
    compute_metrics, evaluate, pairwise_distances, scaling_experiment, synth_cloud,
    total_persistence, CloudShape, EmbeddingMatrix, Error, MetricKind, MetricName, MetricReport,
    Result, ScalingFitResult, DEFAULT_SUBSAMPLE,
};

#[derive(Parser)]
#[command(
    name = "topo-metrics",
    version,
    about = "Label-free quality metrics for embedding matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute metrics for one embedding file
    Compute(ComputeArgs),
    /// Correlate metric columns with task columns across a manifest of runs
    Evaluate(EvaluateArgs),
    /// Fit the sample-size growth exponent of connectivity persistence on
    /// uniform clouds
    Scaling(ScalingArgs),
    /// Generate a synthetic point cloud
    Synth(SynthArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Embedding file, CSV or packed binary
    #[arg(long)]
    input: PathBuf,
    /// csv or bin; inferred from the extension when omitted
    #[arg(long)]
    format: Option<FileFormat>,
    /// Comma-separated metric names; all nine when omitted
    #[arg(long, value_delimiter = ',')]
    metrics: Vec<MetricName>,
    /// euclidean or cosine
    #[arg(long, default_value = "euclidean")]
    distance: MetricKind,
    /// Cap on the points fed to the persistence metrics (default 512)
    #[arg(long)]
    subsample: Option<usize>,
    /// Seed for the subsample draw
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
    /// Use the exhaustive reference reduction for the persistence metrics
    /// (capped at 14 points)
    #[arg(long, hide = true)]
    oracle: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Run manifest: delimited text with a run_id column
    #[arg(long)]
    runs: PathBuf,
    /// TOML sidecar declaring metric/task columns, orientations, and
    /// correlation mode
    #[arg(long)]
    config: PathBuf,
    /// Report file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScalingArgs {
    /// Comma-separated ambient dimensions
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    dims: Vec<usize>,
    /// Comma-separated sample sizes, strictly increasing
    #[arg(long, value_delimiter = ',', default_value = "100,200,400,800,1600")]
    n_grid: Vec<usize>,
    /// Independent clouds per sample size
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Base seed; each trial derives its own stream
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// circle, cube, or clusters
    #[arg(long)]
    shape: CloudShape,
    /// Number of points
    #[arg(long)]
    n: usize,
    /// Ambient dimension
    #[arg(long)]
    d: usize,
    /// Gaussian noise scale
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Number of clusters (clusters shape only)
    #[arg(long, default_value_t = 1)]
    clusters: usize,
    /// Seed for the generator
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Destination file
    #[arg(long)]
    output: PathBuf,
    /// csv or bin; inferred from the extension when omitted
    #[arg(long)]
    format: Option<FileFormat>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version arrive here too; they keep exit code 0
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_input_error() { 1 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    // fail fast on a bad thread override instead of silently ignoring it
    topo_metrics::threads::configured_threads()?;
    match cli.command {
        Command::Compute(args) => run_compute(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Scaling(args) => run_scaling(args),
        Command::Synth(args) => run_synth(args),
    }
}

fn run_compute(args: ComputeArgs) -> Result<()> {
    let format = args.format.unwrap_or_else(|| FileFormat::infer(&args.input));
    let embedding = load_embedding(&args.input, format)?;
    let names: Vec<MetricName> = if args.metrics.is_empty() {
        MetricName::ALL.to_vec()
    } else {
        args.metrics.clone()
    };
    let report = if args.oracle {
        oracle_metrics(&embedding, &names, args.subsample, args.seed, args.distance)?
    } else {
        compute_metrics(&embedding, &names, args.subsample, args.seed, args.distance)?
    };

    // one flat object: metric values plus provenance, keys sorted
    let mut doc = serde_json::Map::new();
    for (name, value) in report.values() {
        doc.insert(name.clone(), json!(value));
    }
    doc.insert("input".to_owned(), json!(args.input.display().to_string()));
    doc.insert("metric_kind".to_owned(), json!(report.metric_kind()));
    doc.insert("seed".to_owned(), json!(report.seed()));
    doc.insert(
        "subsample_cap".to_owned(),
        json!(args.subsample.unwrap_or(DEFAULT_SUBSAMPLE)),
    );
    doc.insert("subsample_size".to_owned(), json!(report.subsample_size()));
    if args.oracle {
        doc.insert("oracle".to_owned(), json!(true));
    }
    emit(&args.output, &serde_json::Value::Object(doc))
}

/// Like [`compute_metrics`] but with the persistence metrics routed through
/// the exhaustive reference reduction. Debugging aid; points are capped
/// at 14.
fn oracle_metrics(
    embedding: &EmbeddingMatrix,
    names: &[MetricName],
    subsample: Option<usize>,
    seed: u64,
    kind: MetricKind,
) -> Result<MetricReport> {
    let cap = subsample.unwrap_or(DEFAULT_SUBSAMPLE);
    if cap == 0 {
        return Err(Error::BadParams(
            "subsample size must be at least 1".to_owned(),
        ));
    }
    let reduced;
    let points = if cap < embedding.n() {
        reduced = embedding.subsample(cap, seed);
        &reduced
    } else {
        embedding
    };

    let mut report = MetricReport::new(points.n(), seed, kind);
    let rest: Vec<MetricName> = names
        .iter()
        .copied()
        .filter(|name| {
            *name != MetricName::Persistence0 && *name != MetricName::Persistence1
        })
        .collect();
    if !rest.is_empty() {
        report.absorb(compute_metrics(points, &rest, Some(points.n()), seed, kind)?);
    }

    let wants0 = names.contains(&MetricName::Persistence0);
    let wants1 = names.contains(&MetricName::Persistence1);
    if wants0 || wants1 {
        let dm = pairwise_distances(points, kind)?;
        let diagrams = naive_persistence(&dm, 1)?;
        if wants0 {
            report.insert(MetricName::Persistence0, total_persistence(&diagrams[0])?.value);
        }
        if wants1 {
            report.insert(MetricName::Persistence1, total_persistence(&diagrams[1])?.value);
        }
    }
    Ok(report)
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let config = load_runs_config(&args.config)?;
    let table = load_runs_manifest(&args.runs, &config)?;
    let summary = evaluate(&table, &config.metrics, &config.tasks, config.aggregation)?;
    emit(&args.output, &summary)
}

fn run_scaling(args: ScalingArgs) -> Result<()> {
    if args.dims.is_empty() {
        return Err(Error::BadParams("no dimensions requested".to_owned()));
    }
    let fits: Vec<ScalingFitResult> = args
        .dims
        .iter()
        .map(|&d| scaling_experiment(d, &args.n_grid, args.trials, args.seed))
        .collect::<Result<_>>()?;

    #[derive(Serialize)]
    struct ScalingReport {
        seed: u64,
        trials: usize,
        fits: Vec<ScalingFitResult>,
    }
    emit(
        &args.output,
        &ScalingReport {
            seed: args.seed,
            trials: args.trials,
            fits,
        },
    )
}

fn run_synth(args: SynthArgs) -> Result<()> {
    let cloud = synth_cloud(args.shape, args.n, args.d, args.noise, args.clusters, args.seed)?;
    let format = args.format.unwrap_or_else(|| FileFormat::infer(&args.output));
    save_embedding(&args.output, &cloud, format)
}

fn emit<T: Serialize>(output: &Option<PathBuf>, value: &T) -> Result<()> {
    match output {
        Some(path) => write_json(path, value),
        None => {
            print!("{}", render_json(value)?);
            Ok(())
        }
    }
}
