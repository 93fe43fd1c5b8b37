//! `tempbc`: temporal betweenness from the command line.

mod output;

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tempbc::bounds::{hoeffding_size, vc_size, DEFAULT_UNIVERSAL_CONSTANT};
use tempbc::distance::{estimate_distances, recommended_sample_size, SourceSampling};
use tempbc::exact::DEFAULT_WORK_LIMIT;
use tempbc::{
    compare, EstimatorParams, EstimatorRegistry, LoadOptions, PathOptimality, ScoreVector,
    TemporalGraph,
};

use output::{read_scores, score_rows, write_scores, RunReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] tempbc::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(tempbc::Error::Guardrail { .. }) => 3,
            CliError::Lib(tempbc::Error::Io(_)) | CliError::Io(_) => 4,
            _ => 2,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "tempbc",
    version,
    about = "Exact and approximate temporal betweenness centrality"
)]
struct Cli {
    /// Worker threads (default: all available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list: one `u v t` triple per line.
    graph: PathBuf,
    /// Treat every edge as two arcs.
    #[arg(long)]
    undirected: bool,
    /// Drop exact duplicate edges at load.
    #[arg(long)]
    dedup: bool,
    #[arg(long, default_value = "sh")]
    opt: PathOptimality,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write scores as `node_id,score` CSV; otherwise they go in the report.
    #[arg(long)]
    scores: Option<PathBuf>,
    /// Exact scores CSV to evaluate the result against.
    #[arg(long)]
    compare: Option<PathBuf>,
    /// Top-k size for the evaluation.
    #[arg(long, default_value_t = 50)]
    k: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixedAlgo {
    Rtb,
    Ob,
    Trk,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProgressiveAlgo {
    Prtb,
    Ob,
    Trk,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bound {
    Hoeffding,
    Vc,
}

#[derive(Subcommand)]
enum Command {
    /// Exact betweenness of every node.
    Exact {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Run even when the work estimate exceeds the limit.
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = DEFAULT_WORK_LIMIT)]
        max_work: f64,
    },
    /// Fixed-size sampling estimate.
    Fixed {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum)]
        algo: FixedAlgo,
        #[arg(long, conflicts_with = "bound", required_unless_present = "bound")]
        samples: Option<usize>,
        /// Derive the sample size from a bound instead.
        #[arg(long, value_enum)]
        bound: Option<Bound>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Vertex diameter for the vc bound; computed by a census when absent.
        #[arg(long)]
        vd: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_UNIVERSAL_CONSTANT)]
        c_univ: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Progressive sampling until a stopping rule fires.
    Progressive {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum)]
        algo: ProgressiveAlgo,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 1.5)]
        alpha: f64,
        /// prtb threshold constant.
        #[arg(long, default_value_t = 2.0)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample cap (trk defaults to the Hoeffding size, prtb to 10 n).
        #[arg(long)]
        max_samples: Option<usize>,
    },
    /// Diameter, effective diameter, connectivity rate, average distance.
    Diameter {
        #[command(flatten)]
        graph: GraphArgs,
        /// Sources to sample; at least n runs every source.
        #[arg(long, conflicts_with = "epsilon")]
        samples: Option<usize>,
        /// Pick the sample size as ceil(ln n / eps^2).
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 0.9)]
        tau: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        without_replacement: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two score files.
    Compare {
        exact: PathBuf,
        approx: PathBuf,
        #[arg(long, default_value_t = 50)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(args: &GraphArgs) -> Result<TemporalGraph, CliError> {
    let opts = LoadOptions {
        undirected: args.undirected,
        dedup: args.dedup,
    };
    Ok(TemporalGraph::load_path(&args.graph, opts)?)
}

/// Writes or embeds the scores and runs the optional comparison.
fn finish_scores(
    report: &mut RunReport,
    graph: &TemporalGraph,
    scores: &ScoreVector,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let rows = score_rows(graph, scores);
    match &output.scores {
        Some(path) => {
            write_scores(path, &rows)?;
            report.scores_path = Some(path.display().to_string());
        }
        None => report.scores = Some(rows),
    }
    if let Some(path) = &output.compare {
        let exact = aligned_scores(path, graph.original_ids(), scores.optimality)?;
        let mut eval = compare(&exact, scores, output.k)?;
        eval.runtime_seconds = Some(report.wall_clock_seconds);
        report.evaluation = Some(eval);
        report.parameters.k = Some(output.k);
    }
    Ok(())
}

/// Reads a score file and orders it by the given node ids.
fn aligned_scores(path: &Path, ids: &[u64], opt: PathOptimality) -> Result<ScoreVector, CliError> {
    let rows: HashMap<u64, f64> = read_scores(path)?.into_iter().collect();
    if rows.len() != ids.len() {
        return Err(CliError::Invalid(format!(
            "{} has {} nodes, expected {}",
            path.display(),
            rows.len(),
            ids.len()
        )));
    }
    let values = ids
        .iter()
        .map(|id| {
            rows.get(id).copied().ok_or_else(|| {
                CliError::Invalid(format!("node {id} missing from {}", path.display()))
            })
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(ScoreVector {
        optimality: opt,
        values,
        normalized: true,
        sample_size: None,
    })
}

fn run(command: Command) -> Result<(), CliError> {
    let registry = EstimatorRegistry::standard();
    match command {
        Command::Exact {
            graph: gargs,
            output,
            force,
            max_work,
        } => {
            let g = load(&gargs)?;
            let mut report = RunReport::new("exact");
            report.graph = Some(g.summarize());
            report.optimality = Some(gargs.opt.to_string());
            let params = EstimatorParams {
                optimality: gargs.opt,
                max_work: (!force).then_some(max_work),
                ..Default::default()
            };
            let start = Instant::now();
            let est = registry.get("exact")?.estimate(&g, &params)?;
            report.wall_clock_seconds = start.elapsed().as_secs_f64();
            finish_scores(&mut report, &g, &est.scores, &output)?;
            report.emit(output.out.as_deref())
        }
        Command::Fixed {
            graph: gargs,
            output,
            algo,
            samples,
            bound,
            epsilon,
            delta,
            vd,
            c_univ,
            seed,
        } => {
            let g = load(&gargs)?;
            let name = match algo {
                FixedAlgo::Rtb => "rtb",
                FixedAlgo::Ob => "ob",
                FixedAlgo::Trk => "trk",
            };
            let mut report = RunReport::new(name);
            report.graph = Some(g.summarize());
            report.optimality = Some(gargs.opt.to_string());
            let r = match (samples, bound) {
                (Some(r), _) => r,
                (None, Some(Bound::Hoeffding)) => {
                    report.parameters.bound = Some("hoeffding".into());
                    hoeffding_size(epsilon, delta, g.node_count().max(1))?
                }
                (None, Some(Bound::Vc)) => {
                    report.parameters.bound = Some("vc".into());
                    let vd = match vd {
                        Some(v) => v,
                        None => {
                            let d = estimate_distances(
                                &g,
                                g.node_count().max(1),
                                1.0,
                                0,
                                SourceSampling::default(),
                            )?;
                            d.diameter as usize + 1
                        }
                    };
                    vc_size(epsilon, delta, vd.max(2), c_univ)?
                }
                (None, None) => unreachable!("clap requires one of the two"),
            };
            if bound.is_some() {
                report.parameters.epsilon = Some(epsilon);
                report.parameters.delta = Some(delta);
            }
            report.parameters.samples = Some(r);
            report.parameters.seed = Some(seed);
            let params = EstimatorParams {
                optimality: gargs.opt,
                samples: Some(r),
                seed,
                ..Default::default()
            };
            let start = Instant::now();
            let est = registry.get(name)?.estimate(&g, &params)?;
            report.wall_clock_seconds = start.elapsed().as_secs_f64();
            finish_scores(&mut report, &g, &est.scores, &output)?;
            report.emit(output.out.as_deref())
        }
        Command::Progressive {
            graph: gargs,
            output,
            algo,
            epsilon,
            delta,
            alpha,
            c,
            seed,
            max_samples,
        } => {
            let g = load(&gargs)?;
            let name = match algo {
                ProgressiveAlgo::Prtb => "prtb",
                ProgressiveAlgo::Ob => "progressive-ob",
                ProgressiveAlgo::Trk => "progressive-trk",
            };
            let mut report = RunReport::new(name);
            report.graph = Some(g.summarize());
            report.optimality = Some(gargs.opt.to_string());
            report.parameters.seed = Some(seed);
            match algo {
                ProgressiveAlgo::Prtb => report.parameters.c = Some(c),
                _ => {
                    report.parameters.epsilon = Some(epsilon);
                    report.parameters.delta = Some(delta);
                    report.parameters.alpha = Some(alpha);
                }
            }
            let params = EstimatorParams {
                optimality: gargs.opt,
                epsilon,
                delta,
                alpha,
                c,
                seed,
                max_samples,
                ..Default::default()
            };
            let start = Instant::now();
            let est = registry.get(name)?.estimate(&g, &params)?;
            report.wall_clock_seconds = start.elapsed().as_secs_f64();
            report.parameters.samples = est.stop.as_ref().map(|s| s.final_sample_size);
            report.stop = est.stop;
            finish_scores(&mut report, &g, &est.scores, &output)?;
            report.emit(output.out.as_deref())
        }
        Command::Diameter {
            graph: gargs,
            samples,
            epsilon,
            tau,
            seed,
            without_replacement,
            out,
        } => {
            let g = load(&gargs)?;
            let mut report = RunReport::new("diameter");
            report.graph = Some(g.summarize());
            let s = match (samples, epsilon) {
                (Some(s), _) => s,
                (None, Some(eps)) => {
                    report.parameters.epsilon = Some(eps);
                    recommended_sample_size(g.node_count(), eps)?
                }
                (None, None) => g.node_count().max(1),
            };
            let mode = if without_replacement {
                SourceSampling::WithoutReplacement
            } else {
                SourceSampling::WithReplacement
            };
            report.parameters.tau = Some(tau);
            report.parameters.seed = Some(seed);
            let start = Instant::now();
            let summary = estimate_distances(&g, s, tau, seed, mode)?;
            report.wall_clock_seconds = start.elapsed().as_secs_f64();
            report.parameters.samples = Some(summary.sample_size);
            report.distances = Some(summary);
            report.emit(out.as_deref())
        }
        Command::Compare {
            exact,
            approx,
            k,
            out,
        } => {
            let mut report = RunReport::new("compare");
            report.parameters.k = Some(k);
            let exact_rows = read_scores(&exact)?;
            let ids: Vec<u64> = exact_rows.iter().map(|r| r.0).collect();
            let opt = PathOptimality::Shortest;
            let a = ScoreVector {
                optimality: opt,
                values: exact_rows.iter().map(|r| r.1).collect(),
                normalized: true,
                sample_size: None,
            };
            let start = Instant::now();
            let b = aligned_scores(&approx, &ids, opt)?;
            report.evaluation = Some(compare(&a, &b, k)?);
            report.wall_clock_seconds = start.elapsed().as_secs_f64();
            report.emit(out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(0) => Err(CliError::Invalid("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(cli.command)),
            Err(e) => Err(CliError::Invalid(format!("cannot start thread pool: {e}"))),
        },
        None => run(cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
