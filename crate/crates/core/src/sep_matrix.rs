//! Intervention matrix construction by repeated peeling.
//!
//! `eps_separating_matrix` removes a near-maximum independent set from the
//! remaining graph each round and gives the whole round one intervention
//! vector, drawn from the (weight, colex) stream starting at the free zero
//! vector.  Only edges inside a round stay unseparated, and each round keeps
//! its induced edges small, so the total stays within the eps * n^2 budget
//! while most nodes receive cheap low-weight vectors.
//!
//! `ancestral_design` upgrades the rounds to pairwise *strongly* separated
//! groups by re-assigning one antichain vector per round
//! (`ss_matrix_complete`), which is what direction recovery from ancestral
//! queries needs.  `exact_min_separating` is the small-instance oracle both
//! are measured against.

use crate::bits::{ceil_log2_recip, BitRow, FixedWeightRows, WeightColexRows};
use crate::error::{Error, Result};
use crate::graph::CostGraph;
use crate::matrix::{InterventionMatrix, SeparationMode};
use crate::near_mis::{exact_mis, near_mis};
use crate::seeds::derive_seed;

#[derive(Clone, Debug, PartialEq)]
pub struct PeelDesign {
    pub matrix: InterventionMatrix,
    /// Peel rounds in removal order, each sorted ascending; round i received
    /// the i-th vector of the (weight, colex) stream.
    pub groups: Vec<Vec<u32>>,
    /// True when some round's search ran out of enumeration budget.
    pub budget_exceeded: bool,
}

/// Build an eps-separating design: at most ceil(eps * n^2) edges may connect
/// same-vector nodes.  Each round peels `near_mis(current, eps^2, eps*delta)`
/// (or the exact independent set in oracle mode) and assigns it the next
/// stream vector.  Needs m >= 3 * ceil(log2(1/eps)) so enough cheap vectors
/// exist for the rounds the shrinking graph can produce.
pub fn eps_separating_matrix(
    g: &CostGraph,
    m: usize,
    eps: f64,
    delta: f64,
    seed: u64,
    oracle_mode: bool,
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
    let mut matrix = InterventionMatrix::zeros(n, m);
    let mut groups: Vec<Vec<u32>> = Vec::new();
    let mut budget_exceeded = false;
    let mut stream = WeightColexRows::new(m);
    let mut remaining: Vec<u32> = (0..n as u32).collect();
    let mut iter = 0u64;
    while !remaining.is_empty() {
        let (sub, map) = g.induced_subgraph(&remaining)?;
        let local = if oracle_mode {
            exact_mis(&sub)?
        } else {
            let r = near_mis(&sub, eps * eps, eps * delta, derive_seed(seed, iter))?;
            budget_exceeded |= r.budget_exceeded;
            r.nodes
        };
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
        iter += 1;
    }
    Ok(PeelDesign {
        matrix,
        groups,
        budget_exceeded,
    })
}

/// A contracted peel round: its members and their summed cost.
#[derive(Clone, Debug, PartialEq)]
pub struct Supernode {
    pub members: Vec<u32>,
    pub cost: f64,
}

/// Contract each group to one supernode, preserving group order.  The groups
/// must partition the node set.
pub fn contract_supernodes(g: &CostGraph, groups: &[Vec<u32>]) -> Result<Vec<Supernode>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut covered = 0usize;
    let mut out = Vec::with_capacity(groups.len());
    for group in groups {
        if group.is_empty() {
            return Err(Error::NotAPartition("a group is empty".into()));
        }
        let mut members = group.clone();
        members.sort_unstable();
        for &v in &members {
            if v as usize >= n {
                return Err(Error::InvalidNode { node: v, n });
            }
            if seen[v as usize] {
                return Err(Error::NotAPartition(format!("node {v} appears twice")));
            }
            seen[v as usize] = true;
            covered += 1;
        }
        out.push(Supernode {
            cost: g.set_cost(&members),
            members,
        });
    }
    if covered != n {
        return Err(Error::NotAPartition(format!(
            "{covered} of {n} nodes covered"
        )));
    }
    Ok(out)
}

/// Assign pairwise incomparable vectors to every supernode, minimizing the
/// weighted cost sum(cost_i * weight_i).
///
/// For each split point r, the r costliest supernodes take the weight-1
/// vectors on columns 0..r, and the rest (still in descending cost order)
/// greedily take vectors of weight >= 2 over the remaining columns, ascending
/// by (weight, colex), skipping anything comparable to an earlier pick.  The
/// cheapest feasible split wins (ties to the smaller r).  Returns one row per
/// supernode, aligned with the input order, plus the total cost.
pub fn ss_matrix_complete(supernodes: &[Supernode], m: usize) -> Result<(Vec<BitRow>, f64)> {
    let q = supernodes.len();
    if q == 0 {
        return Ok((vec![], 0.0));
    }
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&a, &b| {
        supernodes[b]
            .cost
            .partial_cmp(&supernodes[a].cost)
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut best: Option<(f64, Vec<BitRow>)> = None;
    let mut max_assigned = 0usize;
    for r in 0..=m.min(q) {
        let Some(rows) = assign_for_split(supernodes, &order, m, r, &mut max_assigned) else {
            continue;
        };
        let cost: f64 = (0..q)
            .map(|i| supernodes[i].cost * rows[i].weight() as f64)
            .sum();
        if best.as_ref().map_or(true, |(c, _)| cost < c - 1e-9) {
            best = Some((cost, rows));
        }
    }
    match best {
        Some((cost, rows)) => Ok((rows, cost)),
        None => Err(Error::AntichainDeficit {
            needed: q,
            available: max_assigned,
            m,
        }),
    }
}

fn assign_for_split(
    supernodes: &[Supernode],
    order: &[usize],
    m: usize,
    r: usize,
    max_assigned: &mut usize,
) -> Option<Vec<BitRow>> {
    let q = supernodes.len();
    let mut rows: Vec<Option<BitRow>> = vec![None; q];
    for (slot, &i) in order.iter().take(r).enumerate() {
        rows[i] = Some(BitRow::from_columns(m, &[slot]));
    }
    let mut assigned = r;
    let pool: Vec<usize> = (r..m).collect();
    let mut taken: Vec<BitRow> = Vec::new();
    let mut candidates = (2..=pool.len()).flat_map(|w| FixedWeightRows::new(m, pool.clone(), w));
    for &i in order.iter().skip(r) {
        let pick = candidates
            .by_ref()
            .find(|cand| taken.iter().all(|t| cand.is_incomparable(t)));
        let Some(row) = pick else {
            *max_assigned = (*max_assigned).max(assigned);
            return None;
        };
        taken.push(row.clone());
        rows[i] = Some(row);
        assigned += 1;
    }
    *max_assigned = (*max_assigned).max(assigned);
    Some(rows.into_iter().map(Option::unwrap).collect())
}

/// Design for ancestral-relation queries: peel as in `eps_separating_matrix`,
/// then re-assign each round one antichain vector, so any two nodes from
/// different rounds are strongly separated.  Only within-round edges (at most
/// ceil(eps * n^2) of them) remain indistinguishable.
pub fn ancestral_design(
    h: &CostGraph,
    m: usize,
    eps: f64,
    delta: f64,
    seed: u64,
    oracle_mode: bool,
) -> Result<PeelDesign> {
    let peel = eps_separating_matrix(h, m, eps, delta, seed, oracle_mode)?;
    let supernodes = contract_supernodes(h, &peel.groups)?;
    let (rows, _) = ss_matrix_complete(&supernodes, m)?;
    let mut matrix = InterventionMatrix::zeros(h.node_count(), m);
    for (sn, row) in supernodes.iter().zip(&rows) {
        for &v in &sn.members {
            matrix.set_row(v, row.clone());
        }
    }
    Ok(PeelDesign {
        matrix,
        groups: peel.groups,
        budget_exceeded: peel.budget_exceeded,
    })
}

/// Exhaustive minimum-cost design for tiny instances (n <= 8, m <= 8).  Among
/// equal-cost optima the returned matrix is the first in bit-string order of
/// the concatenated rows within the searched candidate set.
pub fn exact_min_separating(
    g: &CostGraph,
    m: usize,
    mode: SeparationMode,
) -> Result<(InterventionMatrix, f64)> {
    let n = g.node_count();
    if n > 8 || m > 8 {
        return Err(Error::OracleLimit(format!(
            "exact design search handles n <= 8 and m <= 8, got n = {n}, m = {m}"
        )));
    }
    if n == 0 {
        return Ok((InterventionMatrix::zeros(0, m), 0.0));
    }
    // A fully separating optimum uses at most n distinct rows; replacing its
    // rows, in ascending weight order, by the n cheapest vectors keeps all
    // inequality constraints and never raises any weight.  So the separating
    // search only considers the n cheapest vectors.  Incomparability is not
    // preserved by relabeling, so the strong search keeps all 2^m.
    let mut candidates: Vec<BitRow> = match mode {
        SeparationMode::Separating => WeightColexRows::new(m).take(n).collect(),
        SeparationMode::StronglySeparating => WeightColexRows::new(m).collect(),
    };
    candidates.sort_by(|a, b| a.cmp_bit_string(b));
    let weights: Vec<f64> = candidates.iter().map(|r| r.weight() as f64).collect();
    let zero_ci = candidates.iter().position(|r| r.is_zero());
    let mut search = DesignSearch {
        g,
        strong: mode == SeparationMode::StronglySeparating,
        candidates,
        weights,
        zero_ci,
        assignment: vec![usize::MAX; n],
        best_cost: f64::INFINITY,
        best: None,
    };
    search.dfs(0, 0.0);
    let Some(best) = search.best else {
        return Err(Error::InterventionCountTooSmall {
            m,
            requirement: format!(
                "no {} assignment of {m} intervention columns exists for this graph",
                match mode {
                    SeparationMode::Separating => "fully separating",
                    SeparationMode::StronglySeparating => "fully strongly separating",
                }
            ),
        });
    };
    let mut matrix = InterventionMatrix::zeros(n, m);
    for (v, &ci) in best.iter().enumerate() {
        matrix.set_row(v as u32, search.candidates[ci].clone());
    }
    Ok((matrix, search.best_cost))
}

struct DesignSearch<'a> {
    g: &'a CostGraph,
    strong: bool,
    candidates: Vec<BitRow>,
    weights: Vec<f64>,
    zero_ci: Option<usize>,
    assignment: Vec<usize>,
    best_cost: f64,
    best: Option<Vec<usize>>,
}

impl DesignSearch<'_> {
    fn dfs(&mut self, v: usize, cur: f64) {
        if cur + self.lower_bound(v) >= self.best_cost - 1e-9 {
            return;
        }
        if v == self.g.node_count() {
            self.best_cost = cur;
            self.best = Some(self.assignment.clone());
            return;
        }
        'cand: for ci in 0..self.candidates.len() {
            for &u in self.g.neighbors(v as u32) {
                if (u as usize) < v {
                    let cu = self.assignment[u as usize];
                    let ok = if self.strong {
                        self.candidates[ci].is_incomparable(&self.candidates[cu])
                    } else {
                        ci != cu
                    };
                    if !ok {
                        continue 'cand;
                    }
                }
            }
            self.assignment[v] = ci;
            self.dfs(v + 1, cur + self.g.cost(v as u32) * self.weights[ci]);
        }
        self.assignment[v] = usize::MAX;
    }

    /// Valid cost still to come for nodes v..n.  Strong mode: every
    /// non-isolated node needs weight >= 1.  Separating mode: a node whose
    /// assigned neighbor holds the zero row is forced nonzero; among the
    /// remaining unassigned-unassigned edges, each matched pair wastes at
    /// least the cheaper endpoint.
    fn lower_bound(&self, v: usize) -> f64 {
        let n = self.g.node_count();
        if self.strong {
            return (v..n)
                .filter(|&u| self.g.degree(u as u32) > 0)
                .map(|u| self.g.cost(u as u32))
                .sum();
        }
        let mut forced = vec![false; n];
        let mut lb = 0.0;
        for u in v..n {
            let hit = self.g.neighbors(u as u32).iter().any(|&w| {
                (w as usize) < v && Some(self.assignment[w as usize]) == self.zero_ci
            });
            if hit {
                forced[u] = true;
                lb += self.g.cost(u as u32);
            }
        }
        let mut used = vec![false; n];
        for &(a, b) in self.g.edges() {
            let (a, b) = (a as usize, b as usize);
            if a >= v && b >= v && !forced[a] && !forced[b] && !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                lb += self.g.cost(a as u32).min(self.g.cost(b as u32));
            }
        }
        lb
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> CostGraph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        CostGraph::unit(n, edges).unwrap()
    }

    fn path(n: usize) -> CostGraph {
        CostGraph::unit(n, (0..n as u32 - 1).map(|i| (i, i + 1)).collect()).unwrap()
    }

    fn sn(costs: &[f64]) -> Vec<Supernode> {
        costs
            .iter()
            .enumerate()
            .map(|(i, &c)| Supernode {
                members: vec![i as u32],
                cost: c,
            })
            .collect()
    }

    #[test]
    fn peel_rejects_bad_parameters() {
        let g = complete(3);
        assert!(eps_separating_matrix(&g, 2, 0.0, 0.2, 0, false).is_err());
        assert!(eps_separating_matrix(&g, 2, 0.5, 1.0, 0, false).is_err());
        let err = eps_separating_matrix(&g, 5, 0.3, 0.2, 0, false).unwrap_err();
        assert!(err.to_string().contains("3*ceil(log2(1/eps)) = 6"), "{err}");
    }

    #[test]
    fn peel_triangle_eps_one_is_free() {
        // At eps = 1 the first round swallows the whole triangle: every node
        // keeps the zero vector, and all 3 edges fit the allowance of 9.
        let g = complete(3);
        let d = eps_separating_matrix(&g, 2, 1.0, 0.2, 0, false).unwrap();
        assert_eq!(d.groups, vec![vec![0, 1, 2]]);
        assert_eq!(d.matrix.cost(&g).unwrap(), 0.0);
        assert!(d
            .matrix
            .is_eps_separating(&g, SeparationMode::Separating, 1.0)
            .unwrap());
    }

    #[test]
    fn peel_empty_graph() {
        let g = CostGraph::unit(0, vec![]).unwrap();
        let d = eps_separating_matrix(&g, 3, 0.5, 0.2, 0, false).unwrap();
        assert!(d.groups.is_empty());
        assert_eq!(d.matrix.node_count(), 0);
    }

    #[test]
    fn peel_oracle_mode_path4() {
        // Exact rounds on the unit path a-b-c-d: first {a,c}, then {b,d}.
        let g = path(4);
        let d = eps_separating_matrix(&g, 3, 0.5, 0.2, 0, true).unwrap();
        assert_eq!(d.groups, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(d.matrix.row(0).to_bit_string(), "000");
        assert_eq!(d.matrix.row(1).to_bit_string(), "100");
        assert_eq!(d.matrix.cost(&g).unwrap(), 2.0);
        assert!(d
            .matrix
            .unseparated_edges(&g, SeparationMode::Separating)
            .unwrap()
            .is_empty());
        assert!(!d.budget_exceeded);
    }

    #[test]
    fn peel_oracle_mode_respects_size_limit() {
        let g = CostGraph::unit(30, vec![]).unwrap();
        assert!(matches!(
            eps_separating_matrix(&g, 3, 0.5, 0.2, 0, true),
            Err(Error::OracleLimit(_))
        ));
    }

    #[test]
    fn peel_rounds_get_the_vector_stream_in_order() {
        let g = CostGraph::random_gnp(14, 0.4, &[1.0, 2.0], 2).unwrap();
        let d = eps_separating_matrix(&g, 4, 0.5, 0.2, 7, false).unwrap();
        let stream: Vec<BitRow> = WeightColexRows::new(4).take(d.groups.len()).collect();
        for (i, group) in d.groups.iter().enumerate() {
            for &v in group {
                assert_eq!(d.matrix.row(v), &stream[i]);
            }
        }
        // Rounds partition the node set.
        let mut all: Vec<u32> = d.groups.concat();
        all.sort_unstable();
        assert_eq!(all, (0..14).collect::<Vec<u32>>());
    }

    #[test]
    fn peel_meets_edge_budget_on_randoms() {
        for seed in 0..15 {
            let g = CostGraph::random_gnp(15, 0.3, &[1.0, 2.0, 4.0], seed).unwrap();
            let d = eps_separating_matrix(&g, 4, 0.5, 0.2, seed, false).unwrap();
            assert!(
                d.matrix
                    .is_eps_separating(&g, SeparationMode::Separating, 0.5)
                    .unwrap(),
                "seed {seed}"
            );
            // Unseparated edges are exactly the within-round ones.
            let within: usize = d
                .groups
                .iter()
                .map(|grp| g.induced_edge_count(grp).unwrap())
                .sum();
            let reported = d
                .matrix
                .unseparated_edges(&g, SeparationMode::Separating)
                .unwrap()
                .len();
            assert_eq!(within, reported, "seed {seed}");
        }
    }

    #[test]
    fn peel_deterministic() {
        let g = CostGraph::random_gnp(16, 0.3, &[1.0, 4.0], 3).unwrap();
        let a = eps_separating_matrix(&g, 4, 0.5, 0.2, 11, false).unwrap();
        let b = eps_separating_matrix(&g, 4, 0.5, 0.2, 11, false).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn contraction_validates_partitions() {
        let g = path(3);
        assert!(contract_supernodes(&g, &[vec![0, 1]]).is_err());
        assert!(contract_supernodes(&g, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(contract_supernodes(&g, &[vec![0, 1, 2], vec![]]).is_err());
        assert!(contract_supernodes(&g, &[vec![0, 1], vec![5]]).is_err());
        let sns = contract_supernodes(&g, &[vec![2, 0], vec![1]]).unwrap();
        assert_eq!(sns[0].members, vec![0, 2]);
        assert_eq!(sns[0].cost, 2.0);
        assert_eq!(sns[1].members, vec![1]);
    }

    #[test]
    fn antichain_single_supernode() {
        let (rows, cost) = ss_matrix_complete(&sn(&[7.0]), 1).unwrap();
        assert_eq!(rows[0].to_bit_string(), "1");
        assert_eq!(cost, 7.0);
        assert_eq!(ss_matrix_complete(&[], 3).unwrap().1, 0.0);
    }

    #[test]
    fn antichain_two_supernodes_use_singletons() {
        let (rows, cost) = ss_matrix_complete(&sn(&[5.0, 3.0]), 2).unwrap();
        assert_eq!(rows[0].to_bit_string(), "10");
        assert_eq!(rows[1].to_bit_string(), "01");
        assert_eq!(cost, 8.0);
    }

    #[test]
    fn antichain_three_supernodes_prefer_all_singletons() {
        // All-singleton cost 9 beats the all-pairs split's 18.
        let (rows, cost) = ss_matrix_complete(&sn(&[5.0, 3.0, 1.0]), 3).unwrap();
        assert_eq!(cost, 9.0);
        assert!(rows.iter().all(|r| r.weight() == 1));
    }

    #[test]
    fn antichain_six_supernodes_take_the_middle_layer() {
        // Six unit supernodes in 4 columns force the weight-2 layer: cost 12.
        let (rows, cost) = ss_matrix_complete(&sn(&[1.0; 6]), 4).unwrap();
        assert_eq!(cost, 12.0);
        let strings: Vec<String> = rows.iter().map(|r| r.to_bit_string()).collect();
        assert_eq!(
            strings,
            vec!["1100", "1010", "0110", "1001", "0101", "0011"]
        );
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                assert!(rows[i].is_incomparable(&rows[j]));
            }
        }
    }

    #[test]
    fn antichain_prefers_singletons_when_they_fit() {
        let (rows, cost) = ss_matrix_complete(&sn(&[10.0, 1.0, 1.0, 1.0]), 4).unwrap();
        assert_eq!(rows[0].to_bit_string(), "1000");
        assert!(rows.iter().all(|r| r.weight() == 1));
        assert_eq!(cost, 13.0);
    }

    #[test]
    fn antichain_mixed_split_when_supernodes_outnumber_columns() {
        // Seven supernodes, five columns: all-singleton is out of reach, but
        // giving only the costliest a singleton leaves exactly the six
        // weight-2 vectors over the other four columns.  Cost 4 + 2*6 = 16
        // beats the all-pairs split's 20.
        let (rows, cost) = ss_matrix_complete(&sn(&[4.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]), 5).unwrap();
        assert_eq!(rows[0].to_bit_string(), "10000");
        assert!(rows[1..].iter().all(|r| r.weight() == 2 && !r.get(0)));
        assert_eq!(cost, 16.0);
    }

    #[test]
    fn antichain_deficit_reported() {
        let err = ss_matrix_complete(&sn(&[1.0, 1.0, 1.0]), 2).unwrap_err();
        match err {
            Error::AntichainDeficit {
                needed,
                available,
                m,
            } => {
                assert_eq!((needed, available, m), (3, 2, 2));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn ancestral_k2() {
        let g = complete(2);
        let d = ancestral_design(&g, 3, 0.5, 0.2, 0, true).unwrap();
        assert_eq!(d.groups, vec![vec![0], vec![1]]);
        assert_eq!(d.matrix.row(0).to_bit_string(), "100");
        assert_eq!(d.matrix.row(1).to_bit_string(), "010");
        assert_eq!(d.matrix.cost(&g).unwrap(), 2.0);
        assert!(d
            .matrix
            .unseparated_edges(&g, SeparationMode::StronglySeparating)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn ancestral_path4_two_rounds() {
        let g = path(4);
        let d = ancestral_design(&g, 4, 0.5, 0.2, 0, true).unwrap();
        assert_eq!(d.groups, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(d.matrix.row(0).to_bit_string(), "1000");
        assert_eq!(d.matrix.row(1).to_bit_string(), "0100");
        assert_eq!(d.matrix.cost(&g).unwrap(), 4.0);
        assert!(d
            .matrix
            .unseparated_edges(&g, SeparationMode::StronglySeparating)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn ancestral_cross_round_pairs_strongly_separated() {
        let g = CostGraph::random_gnp(12, 0.35, &[1.0, 2.0], 5).unwrap();
        let d = ancestral_design(&g, 6, 0.5, 0.2, 3, false).unwrap();
        let mut round_of = vec![usize::MAX; 12];
        for (i, grp) in d.groups.iter().enumerate() {
            for &v in grp {
                round_of[v as usize] = i;
            }
        }
        for u in 0..12u32 {
            for v in u + 1..12 {
                if round_of[u as usize] != round_of[v as usize] {
                    assert!(d.matrix.is_strongly_separated(u, v).unwrap(), "{u},{v}");
                } else {
                    assert_eq!(d.matrix.row(u), d.matrix.row(v));
                }
            }
        }
    }

    #[test]
    fn exact_design_small_cases() {
        let k2 = complete(2);
        let (l, c) = exact_min_separating(&k2, 2, SeparationMode::Separating).unwrap();
        assert_eq!(c, 1.0);
        assert!(l
            .unseparated_edges(&k2, SeparationMode::Separating)
            .unwrap()
            .is_empty());

        let (l, c) = exact_min_separating(&k2, 2, SeparationMode::StronglySeparating).unwrap();
        assert_eq!(c, 2.0);
        assert_eq!(l.row(0).to_bit_string(), "01");
        assert_eq!(l.row(1).to_bit_string(), "10");

        let (_, c) = exact_min_separating(&complete(3), 2, SeparationMode::Separating).unwrap();
        assert_eq!(c, 2.0);
        let (_, c) = exact_min_separating(&complete(4), 2, SeparationMode::Separating).unwrap();
        assert_eq!(c, 4.0);

        // Path a-b-c strongly separated: every node pays weight 1.
        let (l, c) = exact_min_separating(&path(3), 2, SeparationMode::StronglySeparating).unwrap();
        assert_eq!(c, 3.0);
        assert!(l
            .unseparated_edges(&path(3), SeparationMode::StronglySeparating)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn exact_design_infeasible_and_limits() {
        assert!(matches!(
            exact_min_separating(&complete(3), 1, SeparationMode::Separating),
            Err(Error::InterventionCountTooSmall { .. })
        ));
        assert!(matches!(
            exact_min_separating(&complete(2), 1, SeparationMode::StronglySeparating),
            Err(Error::InterventionCountTooSmall { .. })
        ));
        let big = CostGraph::unit(9, vec![]).unwrap();
        assert!(matches!(
            exact_min_separating(&big, 2, SeparationMode::Separating),
            Err(Error::OracleLimit(_))
        ));
        assert!(matches!(
            exact_min_separating(&complete(2), 9, SeparationMode::Separating),
            Err(Error::OracleLimit(_))
        ));
    }

    fn brute_force_design(g: &CostGraph, m: usize, mode: SeparationMode) -> Option<f64> {
        let rows: Vec<BitRow> = (0..1u32 << m)
            .map(|code| {
                let cols: Vec<usize> = (0..m).filter(|&j| code >> j & 1 == 1).collect();
                BitRow::from_columns(m, &cols)
            })
            .collect();
        let n = g.node_count();
        let mut best: Option<f64> = None;
        for idx in 0..rows.len().pow(n as u32) {
            let mut t = idx;
            let assign: Vec<usize> = (0..n)
                .map(|_| {
                    let a = t % rows.len();
                    t /= rows.len();
                    a
                })
                .collect();
            let ok = g.edges().iter().all(|&(u, v)| {
                let (a, b) = (&rows[assign[u as usize]], &rows[assign[v as usize]]);
                match mode {
                    SeparationMode::Separating => a != b,
                    SeparationMode::StronglySeparating => a.is_incomparable(b),
                }
            });
            if ok {
                let cost: f64 = (0..n)
                    .map(|v| g.cost(v as u32) * rows[assign[v]].weight() as f64)
                    .sum();
                best = Some(best.map_or(cost, |b: f64| b.min(cost)));
            }
        }
        best
    }

    #[test]
    fn exact_design_matches_brute_force() {
        for seed in 0..12 {
            let g = CostGraph::random_gnp(5, 0.5, &[1.0, 2.0], seed).unwrap();
            for mode in [
                SeparationMode::Separating,
                SeparationMode::StronglySeparating,
            ] {
                let brute = brute_force_design(&g, 3, mode);
                match exact_min_separating(&g, 3, mode) {
                    Ok((l, c)) => {
                        let expect = brute.unwrap();
                        assert!(
                            (c - expect).abs() <= 1e-9,
                            "seed {seed} {mode:?}: {c} vs {expect}"
                        );
                        assert!(l.unseparated_edges(&g, mode).unwrap().is_empty());
                        assert!((l.cost(&g).unwrap() - c).abs() <= 1e-9);
                    }
                    Err(Error::InterventionCountTooSmall { .. }) => {
                        assert!(brute.is_none(), "seed {seed} {mode:?}");
                    }
                    Err(other) => panic!("unexpected error {other}"),
                }
            }
        }
    }

    #[test]
    fn peel_vectors_are_distinct_and_weight_ordered() {
        for seed in 0..10 {
            let g = CostGraph::random_gnp(15, 0.3, &[1.0, 2.0, 4.0], seed).unwrap();
            let design = eps_separating_matrix(&g, 8, 0.4, 0.2, seed, false).unwrap();
            let vectors: Vec<_> = design
                .groups
                .iter()
                .map(|grp| design.matrix.row(grp[0]).clone())
                .collect();
            for (i, a) in vectors.iter().enumerate() {
                for b in &vectors[i + 1..] {
                    assert_ne!(a, b, "seed {seed}: round vectors repeat");
                }
            }
            assert!(
                vectors.windows(2).all(|w| w[0].weight() <= w[1].weight()),
                "seed {seed}: later rounds got lighter vectors"
            );
            let mut all: Vec<u32> = design.groups.concat();
            all.sort_unstable();
            assert_eq!(all, (0..15).collect::<Vec<u32>>(), "seed {seed}");
            for grp in &design.groups {
                for &v in grp {
                    assert_eq!(design.matrix.row(v), design.matrix.row(grp[0]));
                }
            }
        }
    }

    #[test]
    fn strong_separation_never_costs_less_than_separation() {
        // Strongly separated rows are in particular distinct, so the optimum
        // over separating designs lower-bounds the strongly separating one.
        for seed in 0..12 {
            let g = CostGraph::random_gnp(5, 0.5, &[1.0, 2.0, 4.0], seed).unwrap();
            for m in [3usize, 4] {
                let Ok((_, strong)) =
                    exact_min_separating(&g, m, SeparationMode::StronglySeparating)
                else {
                    continue;
                };
                let (_, sep) = exact_min_separating(&g, m, SeparationMode::Separating)
                    .expect("separating must be feasible whenever strong is");
                assert!(sep <= strong + 1e-9, "seed {seed} m {m}: {sep} > {strong}");
            }
        }
    }
}
