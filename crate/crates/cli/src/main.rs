//! `sepdesign`: build intervention designs, recover causal structure from
//! them, generate test instances, query the exact small-instance oracles, and
//! run experiment batches.
//!
//! All subcommands are deterministic given their flags, print machine-
//! parseable `key=value` summary lines, and exit with 0 on success, 1 on I/O
//! or parse problems, 2 on violated preconditions, and 3 when an instance is
//! too large for an exact oracle.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sepdesign::causal::{random_scm, recover_ancestral, recover_directions, Scm};
use sepdesign::error::{Error, Result};
use sepdesign::graph::CostGraph;
use sepdesign::harness::{
    run_algorithm, run_experiment, rows_to_csv, AlgorithmId, ExperimentSpec,
};
use sepdesign::hyperfinite::hyperfinite_design;
use sepdesign::matrix::{InterventionMatrix, SeparationMode};
use sepdesign::near_mis::exact_mis;
use sepdesign::sep_matrix::{
    ancestral_design, eps_separating_matrix, exact_min_separating, PeelDesign,
};

#[derive(Parser)]
#[command(name = "sepdesign", version, about = "Separating intervention designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an intervention matrix for a graph file.
    Design(DesignArgs),
    /// Recover edge directions or ancestral relations from a design.
    Recover(RecoverArgs),
    /// Generate random graphs or causal models.
    Gen(GenArgs),
    /// Exact minimum-cost answers for small instances.
    Oracle(OracleArgs),
    /// Run experiment specs from a JSON file and write result rows.
    Bench(BenchArgs),
}

#[derive(Args)]
struct DesignArgs {
    /// Graph file in the plain-text format.
    #[arg(long)]
    graph: PathBuf,
    /// Algorithm: alg1, anc, 2logn, sslogn, largem-sep, largem-ss, hyp-sep, hyp-ss.
    #[arg(long, value_parser = parse_algo)]
    algo: AlgorithmId,
    /// Number of intervention columns.
    #[arg(long)]
    m: usize,
    /// Unseparated-edge budget parameter, where applicable.
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Failure-probability parameter, where applicable.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluation mode for the summary (defaults to the algorithm's own).
    #[arg(long, value_parser = parse_mode)]
    mode: Option<SeparationMode>,
    /// Replace the sampling search inside peeling algorithms by the exact one.
    #[arg(long)]
    oracle_mode: bool,
    /// Part-size bound for the partition-based algorithms.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Write the matrix here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the peel rounds and their vectors as JSON (peeling algorithms).
    #[arg(long)]
    history: Option<PathBuf>,
}

#[derive(Args)]
struct RecoverArgs {
    /// Skeleton (directions) or supergraph (ancestral) file.
    #[arg(long)]
    graph: PathBuf,
    /// Intervention matrix file.
    #[arg(long)]
    matrix: PathBuf,
    /// Ground-truth model JSON.
    #[arg(long)]
    scm: PathBuf,
    /// Recover ancestor pairs instead of edge directions.
    #[arg(long)]
    ancestral: bool,
    /// Write the full report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Scm,
    Graph,
}

#[derive(Args)]
struct GenArgs {
    /// What to generate.
    #[arg(long, value_enum, default_value_t = GenKind::Scm)]
    kind: GenKind,
    #[arg(long)]
    n: usize,
    /// Probability of each pair becoming an edge.
    #[arg(long, default_value_t = 0.2)]
    edge_prob: f64,
    /// Probability of each pair gaining a hidden common cause (models only).
    #[arg(long, default_value_t = 0.0)]
    latent_prob: f64,
    /// Costs drawn uniformly from this pool (graphs only).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    cost_pool: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Additionally write the model's skeleton as a graph file (models only).
    #[arg(long)]
    skeleton_out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OracleTask {
    /// Minimum-cost fully (strongly) separating matrix.
    Design,
    /// Maximum-cost independent set.
    Mis,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = OracleTask::Design)]
    task: OracleTask,
    /// Number of intervention columns (design task).
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[arg(long, value_parser = parse_mode, default_value = "sep")]
    mode: SeparationMode,
    /// Write the design matrix here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON file holding one experiment spec or a list of them.
    #[arg(long)]
    spec: PathBuf,
    /// Output path; a .json suffix selects JSON rows, anything else CSV.
    #[arg(long)]
    out: PathBuf,
}

fn parse_algo(s: &str) -> std::result::Result<AlgorithmId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<SeparationMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn intrinsic_mode(algo: AlgorithmId) -> SeparationMode {
    match algo {
        AlgorithmId::Ancestral
        | AlgorithmId::SsLogn
        | AlgorithmId::LargeMStrong
        | AlgorithmId::HyperfiniteStrong => SeparationMode::StronglySeparating,
        _ => SeparationMode::Separating,
    }
}

fn read_graph(path: &PathBuf) -> Result<CostGraph> {
    CostGraph::parse(&std::fs::read_to_string(path)?)
}

/// Peel rounds with their vectors, serialized for downstream recovery runs.
#[derive(Serialize)]
struct HistoryJson {
    groups: Vec<Vec<u32>>,
    vectors: Vec<String>,
    budget_exceeded: bool,
}

fn history_json(design: &PeelDesign) -> HistoryJson {
    HistoryJson {
        vectors: design
            .groups
            .iter()
            .map(|grp| design.matrix.row(grp[0]).to_bit_string())
            .collect(),
        groups: design.groups.clone(),
        budget_exceeded: design.budget_exceeded,
    }
}

fn cmd_design(args: DesignArgs) -> Result<()> {
    let g = read_graph(&args.graph)?;
    let (matrix, history) = match args.algo {
        AlgorithmId::Peel => {
            let d = eps_separating_matrix(&g, args.m, args.eps, args.delta, args.seed, args.oracle_mode)?;
            (d.matrix.clone(), Some(history_json(&d)))
        }
        AlgorithmId::Ancestral => {
            let d = ancestral_design(&g, args.m, args.eps, args.delta, args.seed, args.oracle_mode)?;
            (d.matrix.clone(), Some(history_json(&d)))
        }
        AlgorithmId::HyperfiniteSep | AlgorithmId::HyperfiniteStrong => {
            let mode = intrinsic_mode(args.algo);
            let d = hyperfinite_design(&g, args.m, args.eps, args.delta, mode, args.k)?;
            (d.matrix.clone(), Some(history_json(&d)))
        }
        other => (
            run_algorithm(
                other, &g, args.m, args.eps, args.delta, args.seed, args.oracle_mode, args.k,
            )?,
            None,
        ),
    };
    if let Some(path) = &args.history {
        let Some(history) = &history else {
            return Err(Error::InvalidParameter {
                name: "history",
                message: format!("{} keeps no peel history", args.algo.as_str()),
            });
        };
        std::fs::write(path, serde_json::to_string_pretty(history)?)?;
    }
    let mode = args.mode.unwrap_or_else(|| intrinsic_mode(args.algo));
    let cost = matrix.cost(&g)?;
    let unseparated = matrix.unseparated_edges(&g, mode)?.len();
    match &args.out {
        Some(path) => std::fs::write(path, matrix.to_text())?,
        None => print!("{}", matrix.to_text()),
    }
    println!("cost={cost} unseparated={unseparated} mode={}", mode.as_str());
    Ok(())
}

fn cmd_recover(args: RecoverArgs) -> Result<()> {
    let g = read_graph(&args.graph)?;
    let matrix = InterventionMatrix::parse(&std::fs::read_to_string(&args.matrix)?)?;
    let scm: Scm = serde_json::from_str(&std::fs::read_to_string(&args.scm)?)?;
    let report = if args.ancestral {
        recover_ancestral(&g, &scm, &matrix)?
    } else {
        recover_directions(&g, &scm, &matrix)?
    };
    if let Some(path) = &args.out {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    if args.ancestral {
        println!(
            "ancestral={} unresolved={} errors={}",
            report.ancestral.len(),
            report.unresolved.len(),
            report.error_count
        );
    } else {
        println!(
            "oriented={} unresolved={} errors={}",
            report.oriented.len(),
            report.unresolved.len(),
            report.error_count
        );
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    match args.kind {
        GenKind::Scm => {
            let scm = random_scm(args.n, args.edge_prob, args.latent_prob, args.seed)?;
            std::fs::write(&args.out, serde_json::to_string_pretty(&scm)?)?;
            if let Some(path) = &args.skeleton_out {
                std::fs::write(path, scm.skeleton().to_text())?;
            }
            println!(
                "nodes={} edges={} latents={}",
                args.n,
                scm.edges().len(),
                scm.latent_pairs().len()
            );
        }
        GenKind::Graph => {
            if args.skeleton_out.is_some() {
                return Err(Error::InvalidParameter {
                    name: "skeleton_out",
                    message: "only models have skeletons".into(),
                });
            }
            let g = CostGraph::random_gnp(args.n, args.edge_prob, &args.cost_pool, args.seed)?;
            std::fs::write(&args.out, g.to_text())?;
            println!("nodes={} edges={}", g.node_count(), g.edge_count());
        }
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let g = read_graph(&args.graph)?;
    match args.task {
        OracleTask::Design => {
            let (matrix, cost) = exact_min_separating(&g, args.m, args.mode)?;
            match &args.out {
                Some(path) => std::fs::write(path, matrix.to_text())?,
                None => print!("{}", matrix.to_text()),
            }
            println!("cost={cost} mode={}", args.mode.as_str());
        }
        OracleTask::Mis => {
            let best = exact_mis(&g)?;
            println!(
                "cost={} size={} nodes={}",
                g.set_cost(&best),
                best.len(),
                best.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
        }
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.spec)?;
    let specs: Vec<ExperimentSpec> = match serde_json::from_str::<Vec<ExperimentSpec>>(&text) {
        Ok(list) => list,
        Err(_) => vec![serde_json::from_str::<ExperimentSpec>(&text)?],
    };
    let mut rows = Vec::new();
    let mut first_failure: Option<Error> = None;
    for (i, spec) in specs.iter().enumerate() {
        match run_experiment(spec) {
            Ok(mut r) => rows.append(&mut r),
            Err(e) => {
                eprintln!("spec {i} failed: {e}");
                first_failure.get_or_insert(e);
            }
        }
    }
    if rows.is_empty() {
        if let Some(e) = first_failure {
            return Err(e);
        }
    }
    let json_output = args.out.extension().is_some_and(|e| e == "json");
    if json_output {
        std::fs::write(&args.out, serde_json::to_string_pretty(&rows)?)?;
    } else {
        std::fs::write(&args.out, rows_to_csv(&rows))?;
    }
    println!("specs={} rows={}", specs.len(), rows.len());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Design(args) => cmd_design(args),
        Command::Recover(args) => cmd_recover(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
