//! Near-maximum independent sets on graphs that split into small connected
//! parts with few crossing edges (paths, grids, trees, and similar
//! bounded-degree families).
//!
//! `bfs_partitioner` chops the node set into connected parts of at most `k`
//! nodes.  When few edges cross between parts, `hyperfinite_near_mis` solves
//! every part exactly, drops the cross-edge endpoints, and tops the result up
//! with the most expensive leftovers; the outcome costs at least as much as a
//! true maximum independent set while inducing at most eps * n * max_degree
//! edges.  `hyperfinite_design` plugs that routine into the peeling pipeline
//! with the error share split per node, giving the same edge bound for the
//! final intervention matrix.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::bits::{ceil_log2_recip, ceil_tol, WeightColexRows};
use crate::error::{Error, Result};
use crate::graph::CostGraph;
use crate::matrix::{InterventionMatrix, SeparationMode};
use crate::near_mis::exact_mis_with_limit;
use crate::sep_matrix::{contract_supernodes, ss_matrix_complete, PeelDesign};
use crate::set_systems::by_descending_cost;

/// Largest part the per-part exact solver accepts.
pub const PART_MIS_LIMIT: usize = 40;

/// A split of the node set into connected parts of bounded size, plus the
/// list of edges whose endpoints fall into different parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphPartition {
    /// Disjoint node sets covering the graph, each sorted ascending.
    pub parts: Vec<Vec<u32>>,
    /// Size bound every part respects.
    pub max_part_size: usize,
    /// Exactly the edges with endpoints in two different parts, in the
    /// graph's edge order.
    pub cross_edges: Vec<(u32, u32)>,
}

/// Split the graph into connected parts of at most `k` nodes by repeated
/// breadth-first search from the lowest-numbered unassigned node, closing a
/// part once it reaches `k` nodes.  Judging the cross-edge count is the
/// caller's job: the partition is returned even when many edges cross.
pub fn bfs_partitioner(g: &CostGraph, k: usize) -> Result<GraphPartition> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            message: "part size bound must be at least 1".into(),
        });
    }
    let n = g.node_count();
    let mut visited = vec![false; n];
    let mut part_of = vec![usize::MAX; n];
    let mut parts: Vec<Vec<u32>> = Vec::new();
    for start in 0..n as u32 {
        if visited[start as usize] {
            continue;
        }
        let mut part = Vec::new();
        let mut queue = VecDeque::new();
        queue.push_back(start);
        visited[start as usize] = true;
        while let Some(v) = queue.pop_front() {
            part_of[v as usize] = parts.len();
            part.push(v);
            if part.len() == k {
                break;
            }
            for &w in g.neighbors(v) {
                if !visited[w as usize] {
                    visited[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        // Nodes still queued when the part filled up go back into the pool
        // and seed later parts.
        for v in queue {
            visited[v as usize] = false;
        }
        part.sort_unstable();
        parts.push(part);
    }
    let cross_edges = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| part_of[u as usize] != part_of[v as usize])
        .collect();
    Ok(GraphPartition {
        parts,
        max_part_size: k,
        cross_edges,
    })
}

fn validate_partition(g: &CostGraph, part: &GraphPartition) -> Result<Vec<usize>> {
    let n = g.node_count();
    let mut part_of = vec![usize::MAX; n];
    let mut covered = 0usize;
    for (pi, members) in part.parts.iter().enumerate() {
        if members.len() > part.max_part_size {
            return Err(Error::NotAPartition(format!(
                "part {pi} has {} nodes, over the stated bound {}",
                members.len(),
                part.max_part_size
            )));
        }
        for &v in members {
            if v as usize >= n {
                return Err(Error::InvalidNode { node: v, n });
            }
            if part_of[v as usize] != usize::MAX {
                return Err(Error::NotAPartition(format!("node {v} appears twice")));
            }
            part_of[v as usize] = pi;
            covered += 1;
        }
    }
    if covered != n {
        return Err(Error::NotAPartition(format!(
            "{covered} of {n} nodes covered"
        )));
    }
    let recount: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| part_of[u as usize] != part_of[v as usize])
        .collect();
    if recount != part.cross_edges {
        return Err(Error::NotAPartition(format!(
            "cross-edge list disagrees with the parts: listed {}, actual {}",
            part.cross_edges.len(),
            recount.len()
        )));
    }
    Ok(part_of)
}

/// Near-maximum independent set via a partition with few cross edges: solve
/// each part exactly, drop all cross-edge endpoints, then add back the
/// ceil(eps * n) most expensive remaining nodes.  The result costs at least
/// as much as a true maximum independent set and induces at most
/// eps * n * max_degree edges.
pub fn hyperfinite_near_mis(
    g: &CostGraph,
    part: &GraphPartition,
    eps: f64,
) -> Result<Vec<u32>> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            message: format!("{eps} not in (0, 1]"),
        });
    }
    validate_partition(g, part)?;
    let n = g.node_count();
    let budget = ceil_tol(eps * n as f64 / 2.0) as usize;
    let cross = part.cross_edges.len();
    if cross > budget {
        return Err(Error::CrossEdgeBudget { cross, budget });
    }
    let mut keep = vec![false; n];
    for members in &part.parts {
        let (sub, map) = g.induced_subgraph(members)?;
        let local = exact_mis_with_limit(&sub, PART_MIS_LIMIT)?;
        for &v in &local {
            keep[map[v as usize] as usize] = true;
        }
    }
    let mut boundary = vec![false; n];
    for &(u, v) in &part.cross_edges {
        boundary[u as usize] = true;
        boundary[v as usize] = true;
    }
    let boundary_count = boundary.iter().filter(|&&b| b).count();
    assert!(
        boundary_count <= 2 * cross,
        "each cross edge contributes at most two boundary nodes"
    );
    for v in 0..n {
        if boundary[v] {
            keep[v] = false;
        }
    }
    let outside: Vec<u32> = (0..n as u32).filter(|&v| !keep[v as usize]).collect();
    let top_up = (ceil_tol(eps * n as f64) as usize).min(outside.len());
    let mut result: Vec<u32> = (0..n as u32).filter(|&v| keep[v as usize]).collect();
    result.extend(by_descending_cost(g, &outside).into_iter().take(top_up));
    result.sort_unstable();
    Ok(result)
}

/// Peeling design for partition-friendly graphs: each round removes
/// `hyperfinite_near_mis` of what is left, under the per-node error share
/// eps / n, so at most eps * n * max_degree edges end up (strongly-)
/// unseparated.  `delta` is range-checked for interface parity with
/// `eps_separating_matrix` but otherwise unused; every step is deterministic.
pub fn hyperfinite_design(
    g: &CostGraph,
    m: usize,
    eps: f64,
    delta: f64,
    mode: SeparationMode,
    k: usize,
) -> Result<PeelDesign> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            message: format!("{eps} not in (0, 1]"),
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            message: format!("{delta} not in (0, 1)"),
        });
    }
    let needed = 3 * ceil_log2_recip(eps);
    if m < needed {
        return Err(Error::InterventionCountTooSmall {
            m,
            requirement: format!("the peel schedule needs m >= 3*ceil(log2(1/eps)) = {needed}"),
        });
    }
    let n = g.node_count();
    if n == 0 {
        return Ok(PeelDesign {
            matrix: InterventionMatrix::zeros(0, m),
            groups: vec![],
            budget_exceeded: false,
        });
    }
    let scaled = eps / n as f64;
    let mut matrix = InterventionMatrix::zeros(n, m);
    let mut groups: Vec<Vec<u32>> = Vec::new();
    let mut stream = WeightColexRows::new(m);
    let mut remaining: Vec<u32> = (0..n as u32).collect();
    while !remaining.is_empty() {
        let (sub, map) = g.induced_subgraph(&remaining)?;
        let partition = bfs_partitioner(&sub, k)?;
        let local = hyperfinite_near_mis(&sub, &partition, scaled)?;
        let mut peel: Vec<u32> = local.iter().map(|&v| map[v as usize]).collect();
        peel.sort_unstable();
        assert!(!peel.is_empty(), "peel rounds always make progress");
        let row = stream.next().ok_or_else(|| Error::InterventionCountTooSmall {
            m,
            requirement: format!(
                "the peel schedule needed more than 2^m = {} distinct vectors",
                1u128 << m.min(127)
            ),
        })?;
        for &v in &peel {
            matrix.set_row(v, row.clone());
        }
        let mut in_peel = vec![false; n];
        for &v in &peel {
            in_peel[v as usize] = true;
        }
        remaining.retain(|v| !in_peel[*v as usize]);
        groups.push(peel);
    }
    if mode == SeparationMode::StronglySeparating {
        let supernodes = contract_supernodes(g, &groups)?;
        let (rows, _) = ss_matrix_complete(&supernodes, m)?;
        matrix = InterventionMatrix::zeros(n, m);
        for (sn, row) in supernodes.iter().zip(&rows) {
            for &v in &sn.members {
                matrix.set_row(v, row.clone());
            }
        }
    }
    Ok(PeelDesign {
        matrix,
        groups,
        budget_exceeded: false,
    })
}
