//! Node-weighted undirected graphs and the plain-text graph file format.
//!
//! Costs are reals in [1, W]; W is simply the largest cost present.  Edges are
//! stored canonically (u < v, sorted), which makes serialization
//! deterministic and gives every edge-iterating algorithm a fixed order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CostGraph {
    costs: Vec<f64>,
    edges: Vec<(u32, u32)>,
    adjacency: Vec<Vec<u32>>,
}

impl CostGraph {
    /// Build a graph from per-node costs and undirected edges.  Edge pairs are
    /// normalized to (min, max) and sorted; duplicates and self-loops are
    /// rejected, as are costs below 1.
    pub fn new(costs: Vec<f64>, edges: Vec<(u32, u32)>) -> Result<Self> {
        let n = costs.len();
        for (i, &c) in costs.iter().enumerate() {
            if !c.is_finite() || c < 1.0 {
                return Err(Error::InvalidParameter {
                    name: "cost",
                    message: format!("node {i} has cost {c}; costs must be finite and >= 1"),
                });
            }
        }
        let mut norm = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidParameter {
                    name: "edge",
                    message: format!("self-loop at node {a}"),
                });
            }
            for v in [a, b] {
                if v as usize >= n {
                    return Err(Error::InvalidNode { node: v, n });
                }
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter {
                name: "edge",
                message: format!("duplicate edge ({}, {})", w[0].0, w[0].1),
            });
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        Ok(CostGraph {
            costs,
            edges: norm,
            adjacency,
        })
    }

    /// Unit-cost convenience constructor.
    pub fn unit(n: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        CostGraph::new(vec![1.0; n], edges)
    }

    pub fn node_count(&self) -> usize {
        self.costs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn cost(&self, v: u32) -> f64 {
        self.costs[v as usize]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn total_cost(&self) -> f64 {
        self.costs.iter().sum()
    }

    /// Cost of a node set (each node counted once).
    pub fn set_cost(&self, nodes: &[u32]) -> f64 {
        nodes.iter().map(|&v| self.costs[v as usize]).sum()
    }

    /// The model-wide cost bound W (max cost; 1 for the empty graph).
    pub fn max_cost(&self) -> f64 {
        self.costs.iter().cloned().fold(1.0, f64::max)
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    /// Nodes with no neighbor in `u_set`: V minus the union of open
    /// neighborhoods.  A node of `u_set` itself stays in when none of its
    /// neighbors are in `u_set`.
    pub fn closed_non_neighborhood(&self, u_set: &[u32]) -> Result<Vec<u32>> {
        let n = self.node_count();
        let mut excluded = vec![false; n];
        for &u in u_set {
            if u as usize >= n {
                return Err(Error::InvalidNode { node: u, n });
            }
            for &w in self.neighbors(u) {
                excluded[w as usize] = true;
            }
        }
        Ok((0..n as u32).filter(|&v| !excluded[v as usize]).collect())
    }

    /// Number of edges with both endpoints in `s`.
    pub fn induced_edge_count(&self, s: &[u32]) -> Result<usize> {
        let n = self.node_count();
        let mut inside = vec![false; n];
        for &v in s {
            if v as usize >= n {
                return Err(Error::InvalidNode { node: v, n });
            }
            inside[v as usize] = true;
        }
        Ok(self
            .edges
            .iter()
            .filter(|&&(u, v)| inside[u as usize] && inside[v as usize])
            .count())
    }

    /// Induced subgraph on `nodes` plus the map from new ids back to the
    /// originals (new id i corresponds to `map[i]`).
    pub fn induced_subgraph(&self, nodes: &[u32]) -> Result<(CostGraph, Vec<u32>)> {
        let n = self.node_count();
        let mut sorted: Vec<u32> = nodes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut new_id = vec![u32::MAX; n];
        for (i, &v) in sorted.iter().enumerate() {
            if v as usize >= n {
                return Err(Error::InvalidNode { node: v, n });
            }
            new_id[v as usize] = i as u32;
        }
        let costs = sorted.iter().map(|&v| self.costs[v as usize]).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_id[u as usize] != u32::MAX && new_id[v as usize] != u32::MAX)
            .map(|&(u, v)| (new_id[u as usize], new_id[v as usize]))
            .collect();
        Ok((CostGraph::new(costs, edges)?, sorted))
    }

    /// Erdos-Renyi graph with costs drawn uniformly from `cost_pool`
    /// (unit costs if the pool is empty).  Fully determined by the seed.
    pub fn random_gnp(n: usize, p: f64, cost_pool: &[f64], seed: u64) -> Result<CostGraph> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter {
                name: "edge_prob",
                message: format!("{p} not in [0, 1]"),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let costs: Vec<f64> = (0..n)
            .map(|_| {
                if cost_pool.is_empty() {
                    1.0
                } else {
                    cost_pool[rng.gen_range(0..cost_pool.len())]
                }
            })
            .collect();
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.gen::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        CostGraph::new(costs, edges)
    }

    /// Serialize to the text format:
    /// ```text
    /// graph <n> <edge_count>
    /// node <index> <cost>     (one line per node)
    /// edge <u> <v>            (one line per edge, u < v, sorted)
    /// ```
    /// Costs print in shortest round-trip form, so parse(to_text(g)) == g and
    /// re-serialization is byte-identical.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "graph {} {}\n",
            self.node_count(),
            self.edge_count()
        ));
        for (i, c) in self.costs.iter().enumerate() {
            out.push_str(&format!("node {i} {c}\n"));
        }
        for (u, v) in &self.edges {
            out.push_str(&format!("edge {u} {v}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<CostGraph> {
        let mut lines = text.lines().enumerate();
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty graph file".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "graph" {
            return Err(Error::Parse {
                line: line_no + 1,
                message: "expected header `graph <n> <edge_count>`".into(),
            });
        }
        let n: usize = parse_field(fields[1], line_no + 1, "node count")?;
        let e: usize = parse_field(fields[2], line_no + 1, "edge count")?;
        let mut costs = vec![f64::NAN; n];
        for _ in 0..n {
            let (ln, text) = lines.next().ok_or(Error::Parse {
                line: 0,
                message: "unexpected end of file in node section".into(),
            })?;
            let f: Vec<&str> = text.split_whitespace().collect();
            if f.len() != 3 || f[0] != "node" {
                return Err(Error::Parse {
                    line: ln + 1,
                    message: "expected `node <index> <cost>`".into(),
                });
            }
            let idx: usize = parse_field(f[1], ln + 1, "node index")?;
            let cost: f64 = parse_field(f[2], ln + 1, "node cost")?;
            if idx >= n || !costs[idx].is_nan() {
                return Err(Error::Parse {
                    line: ln + 1,
                    message: format!("bad or repeated node index {idx}"),
                });
            }
            costs[idx] = cost;
        }
        let mut edges = Vec::with_capacity(e);
        for _ in 0..e {
            let (ln, text) = lines.next().ok_or(Error::Parse {
                line: 0,
                message: "unexpected end of file in edge section".into(),
            })?;
            let f: Vec<&str> = text.split_whitespace().collect();
            if f.len() != 3 || f[0] != "edge" {
                return Err(Error::Parse {
                    line: ln + 1,
                    message: "expected `edge <u> <v>`".into(),
                });
            }
            edges.push((
                parse_field(f[1], ln + 1, "edge endpoint")?,
                parse_field(f[2], ln + 1, "edge endpoint")?,
            ));
        }
        if let Some((ln, text)) = lines.next() {
            if !text.trim().is_empty() {
                return Err(Error::Parse {
                    line: ln + 1,
                    message: "trailing content after edge section".into(),
                });
            }
        }
        CostGraph::new(costs, edges)
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what}: {s:?}"),
    })
}

/// ceil(eps * n^2), the unseparated-edge allowance of an eps-separating
/// system on n nodes.
pub fn eps_edge_budget(n: usize, eps: f64) -> u64 {
    crate::bits::ceil_tol(eps * (n * n) as f64)
}
