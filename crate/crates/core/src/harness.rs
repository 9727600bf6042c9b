//! Batch experiment driver: run a named design algorithm repeatedly on one
//! graph, compare against the exact small-instance oracle when possible, and
//! serialize the result rows as CSV or JSON.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CostGraph;
use crate::hyperfinite::hyperfinite_design;
use crate::matrix::{InterventionMatrix, SeparationMode};
use crate::seeds::derive_seed;
use crate::sep_matrix::{ancestral_design, eps_separating_matrix, exact_min_separating};
use crate::set_systems::{
    eps_separating_large_m, eps_strongly_separating_large_m, separating_2logn,
    strongly_separating_logn,
};

/// Largest instance the exact-design oracle columns are filled for.
pub const ORACLE_NODE_LIMIT: usize = 8;
pub const ORACLE_COLUMN_LIMIT: usize = 8;

/// The design algorithms the harness can drive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlgorithmId {
    /// Peeling design for eps-separation.
    #[serde(rename = "alg1")]
    Peel,
    /// Peeling plus antichain reassignment for strong separation.
    #[serde(rename = "anc")]
    Ancestral,
    /// Vertex-cover baseline, m >= 2 ceil(log2 n), full separation.
    #[serde(rename = "2logn")]
    TwoLogn,
    /// Same-weight-vector baseline, full strong separation.
    #[serde(rename = "sslogn")]
    SsLogn,
    /// Random grouping when columns are plentiful, eps-separation.
    #[serde(rename = "largem-sep")]
    LargeMSep,
    /// Random grouping, eps-strong separation.
    #[serde(rename = "largem-ss")]
    LargeMStrong,
    /// Partition-based peeling, eps * n * max_degree edge budget.
    #[serde(rename = "hyp-sep")]
    HyperfiniteSep,
    /// Partition-based peeling with antichain reassignment.
    #[serde(rename = "hyp-ss")]
    HyperfiniteStrong,
}

impl AlgorithmId {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmId::Peel => "alg1",
            AlgorithmId::Ancestral => "anc",
            AlgorithmId::TwoLogn => "2logn",
            AlgorithmId::SsLogn => "sslogn",
            AlgorithmId::LargeMSep => "largem-sep",
            AlgorithmId::LargeMStrong => "largem-ss",
            AlgorithmId::HyperfiniteSep => "hyp-sep",
            AlgorithmId::HyperfiniteStrong => "hyp-ss",
        }
    }

    pub const ALL: [AlgorithmId; 8] = [
        AlgorithmId::Peel,
        AlgorithmId::Ancestral,
        AlgorithmId::TwoLogn,
        AlgorithmId::SsLogn,
        AlgorithmId::LargeMSep,
        AlgorithmId::LargeMStrong,
        AlgorithmId::HyperfiniteSep,
        AlgorithmId::HyperfiniteStrong,
    ];
}

impl std::str::FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmId::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter {
                name: "algo",
                message: format!(
                    "unknown algorithm {s:?} (expected one of {})",
                    AlgorithmId::ALL.map(|a| a.as_str()).join(", ")
                ),
            })
    }
}

/// Where the experiment's graph comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSource {
    /// A graph file in the plain-text format.
    File { path: String },
    /// A seeded G(n, p) with costs drawn from the pool; the experiment's base
    /// seed fixes the graph, so every repetition sees the same instance.
    Gnp { n: usize, p: f64, cost_pool: Vec<f64> },
}

/// One experiment: a graph, an algorithm, its parameters, and how often to
/// repeat it.  Repetition i runs with the i-th seed derived from `seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub graph: GraphSource,
    pub algo: AlgorithmId,
    pub m: usize,
    #[serde(default)]
    pub eps: f64,
    #[serde(default)]
    pub delta: f64,
    pub seed: u64,
    pub repetitions: usize,
    pub mode: SeparationMode,
    /// Substitute the exact independent-set oracle inside peeling algorithms.
    #[serde(default)]
    pub oracle_mode: bool,
    /// Part-size bound for the partition-based algorithms.
    #[serde(default)]
    pub k: usize,
}

/// One result line, aligned with the CSV header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub algo: String,
    pub cost: f64,
    pub unseparated: usize,
    pub oracle_cost: Option<f64>,
    pub ratio: Option<f64>,
    pub runtime_ms: f64,
    pub seed: u64,
}

/// Dispatch one algorithm run; `oracle_mode` and `k` are ignored by the
/// algorithms that take neither.
#[allow(clippy::too_many_arguments)]
pub fn run_algorithm(
    algo: AlgorithmId,
    g: &CostGraph,
    m: usize,
    eps: f64,
    delta: f64,
    seed: u64,
    oracle_mode: bool,
    k: usize,
) -> Result<InterventionMatrix> {
    match algo {
        AlgorithmId::Peel => Ok(eps_separating_matrix(g, m, eps, delta, seed, oracle_mode)?.matrix),
        AlgorithmId::Ancestral => Ok(ancestral_design(g, m, eps, delta, seed, oracle_mode)?.matrix),
        AlgorithmId::TwoLogn => separating_2logn(g, m),
        AlgorithmId::SsLogn => strongly_separating_logn(g, m),
        AlgorithmId::LargeMSep => eps_separating_large_m(g, m, eps, seed),
        AlgorithmId::LargeMStrong => eps_strongly_separating_large_m(g, m, eps, seed),
        AlgorithmId::HyperfiniteSep => {
            Ok(hyperfinite_design(g, m, eps, delta, SeparationMode::Separating, k)?.matrix)
        }
        AlgorithmId::HyperfiniteStrong => {
            Ok(hyperfinite_design(g, m, eps, delta, SeparationMode::StronglySeparating, k)?.matrix)
        }
    }
}

fn load_graph(source: &GraphSource, seed: u64) -> Result<CostGraph> {
    match source {
        GraphSource::File { path } => CostGraph::parse(&std::fs::read_to_string(path)?),
        GraphSource::Gnp { n, p, cost_pool } => CostGraph::random_gnp(*n, *p, cost_pool, seed),
    }
}

/// Run every repetition of one spec.  The oracle columns are filled when the
/// instance fits the exact search (n <= 8, m <= 8) and a fully separating
/// design exists; the ratio of a correct algorithm never drops below 1.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentRow>> {
    if spec.repetitions == 0 {
        return Err(Error::InvalidParameter {
            name: "repetitions",
            message: "at least one repetition is required".into(),
        });
    }
    let g = load_graph(&spec.graph, spec.seed)?;
    let oracle_cost = if g.node_count() <= ORACLE_NODE_LIMIT && spec.m <= ORACLE_COLUMN_LIMIT {
        match exact_min_separating(&g, spec.m, spec.mode) {
            Ok((_, c)) => Some(c),
            Err(Error::InterventionCountTooSmall { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let mut rows = Vec::with_capacity(spec.repetitions);
    for rep in 0..spec.repetitions {
        let rep_seed = derive_seed(spec.seed, rep as u64);
        let started = Instant::now();
        let matrix = run_algorithm(
            spec.algo,
            &g,
            spec.m,
            spec.eps,
            spec.delta,
            rep_seed,
            spec.oracle_mode,
            spec.k,
        )?;
        let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
        let cost = matrix.cost(&g)?;
        let unseparated = matrix.unseparated_edges(&g, spec.mode)?.len();
        let ratio = oracle_cost.map(|oc| {
            let r = if oc == 0.0 && cost == 0.0 { 1.0 } else { cost / oc };
            assert!(
                r >= 1.0 - 1e-9,
                "algorithm {} beat the exact oracle ({cost} < {oc}); oracle bug",
                spec.algo.as_str()
            );
            r
        });
        rows.push(ExperimentRow {
            algo: spec.algo.as_str().to_string(),
            cost,
            unseparated,
            oracle_cost,
            ratio,
            runtime_ms,
            seed: rep_seed,
        });
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "algo,cost,unseparated,oracle_cost,ratio,runtime_ms,seed";

fn optional_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.algo,
            r.cost,
            r.unseparated,
            optional_cell(r.oracle_cost),
            optional_cell(r.ratio),
            r.runtime_ms,
            r.seed
        ));
    }
    out
}

fn parse_cell<T: std::str::FromStr>(line: usize, name: &str, cell: &str) -> Result<T> {
    cell.parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad {name} value {cell:?}"),
    })
}

fn parse_optional(line: usize, name: &str, cell: &str) -> Result<Option<f64>> {
    if cell.is_empty() {
        Ok(None)
    } else {
        parse_cell(line, name, cell).map(Some)
    }
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ExperimentRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        other => {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "expected header {CSV_HEADER:?}, got {:?}",
                    other.map(|(_, h)| h).unwrap_or("")
                ),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 7 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 7 fields, got {}", cells.len()),
            });
        }
        rows.push(ExperimentRow {
            algo: cells[0].to_string(),
            cost: parse_cell(lineno, "cost", cells[1])?,
            unseparated: parse_cell(lineno, "unseparated", cells[2])?,
            oracle_cost: parse_optional(lineno, "oracle_cost", cells[3])?,
            ratio: parse_optional(lineno, "ratio", cells[4])?,
            runtime_ms: parse_cell(lineno, "runtime_ms", cells[5])?,
            seed: parse_cell(lineno, "seed", cells[6])?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gnp_spec(algo: AlgorithmId, n: usize, p: f64) -> ExperimentSpec {
        ExperimentSpec {
            graph: GraphSource::Gnp {
                n,
                p,
                cost_pool: vec![1.0],
            },
            algo,
            m: 6,
            eps: 0.5,
            delta: 0.2,
            seed: 11,
            repetitions: 1,
            mode: SeparationMode::Separating,
            oracle_mode: false,
            k: 0,
        }
    }

    #[test]
    fn algorithm_ids_round_trip_as_strings() {
        for algo in AlgorithmId::ALL {
            assert_eq!(algo.as_str().parse::<AlgorithmId>().unwrap(), algo);
        }
        assert!("nope".parse::<AlgorithmId>().is_err());
    }

    #[test]
    fn edgeless_graphs_cost_nothing() {
        // Strong-separation constructions still pay one intervention per
        // group on edgeless graphs, so only the zero-row-capable algorithms
        // appear here.
        for algo in [AlgorithmId::Peel, AlgorithmId::TwoLogn, AlgorithmId::HyperfiniteSep] {
            let mut spec = gnp_spec(algo, 6, 0.0);
            spec.repetitions = 3;
            spec.k = 4;
            let rows = run_experiment(&spec).unwrap();
            assert_eq!(rows.len(), 3);
            for row in rows {
                assert_eq!(row.cost, 0.0, "{}", algo.as_str());
                assert_eq!(row.unseparated, 0);
                assert_eq!(row.oracle_cost, Some(0.0));
                assert_eq!(row.ratio, Some(1.0));
            }
        }
    }

    #[test]
    fn triangle_with_the_exact_peel_matches_the_oracle() {
        let mut spec = gnp_spec(AlgorithmId::Peel, 3, 1.0);
        spec.m = 2;
        spec.eps = 1.0;
        spec.oracle_mode = true;
        let rows = run_experiment(&spec).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].cost, 2.0);
        assert_eq!(rows[0].oracle_cost, Some(2.0));
        assert_eq!(rows[0].ratio, Some(1.0));
        assert_eq!(rows[0].unseparated, 0);
    }

    #[test]
    fn repetitions_reproduce_everything_but_the_clock() {
        let mut spec = gnp_spec(AlgorithmId::Peel, 12, 0.3);
        spec.repetitions = 4;
        let a = run_experiment(&spec).unwrap();
        let b = run_experiment(&spec).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.algo, y.algo);
            assert_eq!(x.cost, y.cost);
            assert_eq!(x.unseparated, y.unseparated);
            assert_eq!(x.oracle_cost, y.oracle_cost);
            assert_eq!(x.ratio, y.ratio);
            assert_eq!(x.seed, y.seed);
        }
        // Distinct repetition seeds, all derived from the base seed.
        assert_eq!(a[0].seed, derive_seed(11, 0));
        assert!(a.windows(2).all(|w| w[0].seed != w[1].seed));
    }

    #[test]
    fn zero_repetitions_are_rejected() {
        let mut spec = gnp_spec(AlgorithmId::Peel, 4, 0.5);
        spec.repetitions = 0;
        assert!(matches!(
            run_experiment(&spec),
            Err(Error::InvalidParameter { name: "repetitions", .. })
        ));
    }

    #[test]
    fn oracle_columns_stay_empty_on_large_instances() {
        let spec = gnp_spec(AlgorithmId::Peel, 9, 0.2);
        let rows = run_experiment(&spec).unwrap();
        assert_eq!(rows[0].oracle_cost, None);
        assert_eq!(rows[0].ratio, None);
    }

    #[test]
    fn file_sources_load_generated_graphs() {
        let g = CostGraph::random_gnp(5, 0.6, &[1.0, 2.0], 3).unwrap();
        let path = std::env::temp_dir().join(format!("harness-graph-{}.txt", std::process::id()));
        std::fs::write(&path, g.to_text()).unwrap();
        let spec = ExperimentSpec {
            graph: GraphSource::File {
                path: path.to_string_lossy().into_owned(),
            },
            ..gnp_spec(AlgorithmId::TwoLogn, 5, 0.0)
        };
        let rows = run_experiment(&spec).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].unseparated, 0);
        std::fs::remove_file(&path).unwrap();
        assert!(matches!(
            run_experiment(&ExperimentSpec {
                graph: GraphSource::File {
                    path: path.to_string_lossy().into_owned(),
                },
                ..gnp_spec(AlgorithmId::TwoLogn, 5, 0.0)
            }),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn csv_round_trips_exactly() {
        let rows = vec![
            ExperimentRow {
                algo: "alg1".into(),
                cost: 7.25,
                unseparated: 3,
                oracle_cost: Some(6.0000000001),
                ratio: Some(7.25 / 6.0000000001),
                runtime_ms: 0.123456,
                seed: 42,
            },
            ExperimentRow {
                algo: "hyp-ss".into(),
                cost: 0.0,
                unseparated: 0,
                oracle_cost: None,
                ratio: None,
                runtime_ms: 1500.0,
                seed: u64::MAX,
            },
        ];
        let text = rows_to_csv(&rows);
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(rows_from_csv(&text).unwrap(), rows);
    }

    #[test]
    fn csv_parser_reports_line_numbers() {
        assert!(matches!(
            rows_from_csv("wrong,header\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        let missing = format!("{CSV_HEADER}\nalg1,1.0,0\n");
        assert!(matches!(
            rows_from_csv(&missing),
            Err(Error::Parse { line: 2, .. })
        ));
        let bad = format!("{CSV_HEADER}\nalg1,abc,0,,,1.0,7\n");
        assert!(matches!(rows_from_csv(&bad), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn experiment_specs_serialize_for_batch_files() {
        let specs = vec![
            gnp_spec(AlgorithmId::Peel, 6, 0.4),
            ExperimentSpec {
                graph: GraphSource::File {
                    path: "g.txt".into(),
                },
                algo: AlgorithmId::HyperfiniteStrong,
                m: 8,
                eps: 0.25,
                delta: 0.1,
                seed: 9,
                repetitions: 2,
                mode: SeparationMode::StronglySeparating,
                oracle_mode: false,
                k: 16,
            },
        ];
        let json = serde_json::to_string_pretty(&specs).unwrap();
        let back: Vec<ExperimentSpec> = serde_json::from_str(&json).unwrap();
        assert_eq!(specs, back);
        assert!(json.contains("\"hyp-ss\""));
        assert!(json.contains("\"strong\""));
    }

    #[test]
    fn run_algorithm_covers_every_id() {
        let g = CostGraph::random_gnp(8, 0.3, &[1.0, 2.0], 5).unwrap();
        for algo in AlgorithmId::ALL {
            let matrix = run_algorithm(algo, &g, 8, 0.5, 0.2, 13, false, 8).unwrap();
            assert_eq!(matrix.node_count(), 8);
            assert_eq!(matrix.m(), 8);
        }
    }
}
