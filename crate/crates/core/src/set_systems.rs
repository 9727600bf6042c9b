//! Baseline separating set-system constructions: the weighted vertex-cover
//! route (full separation with log-factor overhead) and the cheap randomized
//! designs available when many interventions are allowed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::{binomial, ceil_log2, ceil_tol, FixedWeightRows};
use crate::error::{Error, Result};
use crate::graph::CostGraph;
use crate::matrix::InterventionMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct VertexCoverResult {
    pub cover: Vec<u32>,
    pub cover_cost: f64,
}

/// Local-ratio (pricing) 2-approximation for minimum-cost vertex cover.
/// Edges are processed in ascending (u, v) order; a node joins the cover when
/// its residual cost reaches zero.
pub fn vertex_cover_2approx(g: &CostGraph) -> VertexCoverResult {
    let mut residual: Vec<f64> = g.costs().to_vec();
    for &(u, v) in g.edges() {
        let (u, v) = (u as usize, v as usize);
        if residual[u] > 0.0 && residual[v] > 0.0 {
            let d = residual[u].min(residual[v]);
            residual[u] -= d;
            residual[v] -= d;
        }
    }
    let cover: Vec<u32> = (0..g.node_count() as u32)
        .filter(|&v| residual[v as usize] == 0.0)
        .collect();
    let cover_cost = g.set_cost(&cover);
    VertexCoverResult { cover, cover_cost }
}

/// Nodes ordered by descending cost, ties by ascending index.  The shared
/// assignment order for every deterministic construction here.
pub(crate) fn by_descending_cost(g: &CostGraph, nodes: &[u32]) -> Vec<u32> {
    let mut sorted = nodes.to_vec();
    sorted.sort_by(|&a, &b| {
        g.cost(b)
            .partial_cmp(&g.cost(a))
            .unwrap()
            .then(a.cmp(&b))
    });
    sorted
}

/// Fully separating design using m >= 2*ceil(log2 n) interventions: cover
/// nodes receive distinct weight-ceil(log2 n) vectors (ascending colex, by
/// descending cost), everyone else the zero vector.
pub fn separating_2logn(g: &CostGraph, m: usize) -> Result<InterventionMatrix> {
    let n = g.node_count();
    let w = ceil_log2(n);
    if m < 2 * w {
        return Err(Error::InterventionCountTooSmall {
            m,
            requirement: format!("this construction needs m >= 2*ceil(log2 n) = {}", 2 * w),
        });
    }
    let cover = vertex_cover_2approx(g).cover;
    let mut matrix = InterventionMatrix::zeros(n, m);
    let mut vectors = FixedWeightRows::new(m, (0..m).collect(), w);
    for v in by_descending_cost(g, &cover) {
        let row = vectors
            .next()
            .expect("weight class exhausted despite m >= 2*ceil(log2 n)");
        matrix.set_row(v, row);
    }
    Ok(matrix)
}

/// Fully strongly separating design: all n nodes receive distinct
/// weight-ceil(log2 n) vectors, which form an antichain, at cost
/// ceil(log2 n) * C(V).
pub fn strongly_separating_logn(g: &CostGraph, m: usize) -> Result<InterventionMatrix> {
    let n = g.node_count();
    let w = ceil_log2(n);
    if binomial(m, w) < n as u128 {
        let min_m = (w..).find(|&mm| binomial(mm, w) >= n as u128).unwrap();
        return Err(Error::InterventionCountTooSmall {
            m,
            requirement: format!(
                "need C(m, ceil(log2 n)) = C(m, {w}) >= {n}; minimum feasible m is {min_m}"
            ),
        });
    }
    let all: Vec<u32> = (0..n as u32).collect();
    let mut matrix = InterventionMatrix::zeros(n, m);
    let mut vectors = FixedWeightRows::new(m, (0..m).collect(), w);
    for v in by_descending_cost(g, &all) {
        let row = vectors.next().expect("C(m, w) >= n was checked");
        matrix.set_row(v, row);
    }
    Ok(matrix)
}

fn group_count(eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            message: format!("{eps} not in (0, 1]"),
        });
    }
    Ok(ceil_tol(1.0 / eps).max(1) as usize)
}

/// eps-separating design for m >= ceil(1/eps): the vertex cover is split into
/// ceil(1/eps) uniform random groups, group i receiving the weight-1 vector
/// on column i.  Cost equals the cover cost.
pub fn eps_separating_large_m(
    g: &CostGraph,
    m: usize,
    eps: f64,
    seed: u64,
) -> Result<InterventionMatrix> {
    let groups = group_count(eps)?;
    if m < groups {
        return Err(Error::InterventionCountTooSmall {
            m,
            requirement: format!("need m >= ceil(1/eps) = {groups}"),
        });
    }
    let cover = vertex_cover_2approx(g).cover;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matrix = InterventionMatrix::zeros(g.node_count(), m);
    for &v in &cover {
        let gidx = rng.gen_range(0..groups);
        matrix.set(v, gidx, true);
    }
    Ok(matrix)
}

/// eps-strongly-separating design for m >= ceil(1/eps): every node joins one
/// of ceil(1/eps) uniform random groups with a weight-1 vector, so the cost is
/// exactly C(V).
pub fn eps_strongly_separating_large_m(
    g: &CostGraph,
    m: usize,
    eps: f64,
    seed: u64,
) -> Result<InterventionMatrix> {
    let groups = group_count(eps)?;
    if m < groups {
        return Err(Error::InterventionCountTooSmall {
            m,
            requirement: format!("need m >= ceil(1/eps) = {groups}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matrix = InterventionMatrix::zeros(g.node_count(), m);
    for v in 0..g.node_count() as u32 {
        let gidx = rng.gen_range(0..groups);
        matrix.set(v, gidx, true);
    }
    Ok(matrix)
}
