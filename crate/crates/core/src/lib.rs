//! Minimum-cost intervention design for causal discovery.
//!
//! The input is a node-weighted undirected graph: nodes are variables with
//! per-intervention costs, edges are pairs whose causal relation must be told
//! apart.  A design is a binary matrix with one row per node and one column
//! per experiment round; two rows are *separated* when they differ and
//! *strongly separated* when each has a round the other lacks.  Separation
//! orients an edge, strong separation settles ancestry even under hidden
//! confounding, and the price of a design is the cost-weighted sum of row
//! weights.
//!
//! Exact minimum designs are only tractable on tiny instances
//! ([`sep_matrix::exact_min_separating`]), so the main constructions trade a
//! bounded number of unseparated edges for near-optimal cost:
//!
//! - [`sep_matrix::eps_separating_matrix`] peels near-maximum independent
//!   sets ([`near_mis`]) and prices each peel with the next cheapest vector;
//! - [`sep_matrix::ancestral_design`] upgrades the peels to an antichain of
//!   vectors for strong separation;
//! - [`set_systems`] holds the full-separation baselines (vertex-cover plus
//!   binary codes, fixed-weight codes, and random grouping for generous
//!   column budgets);
//! - [`hyperfinite`] specializes the pipeline to graphs that split into
//!   small connected parts, where per-part exact solving beats the general
//!   search;
//! - [`causal`] provides ground-truth models, an exact interventional
//!   independence oracle, and the recovery of directions and ancestral
//!   relations from a design;
//! - [`harness`] batches algorithm runs against the exact oracle into CSV
//!   rows.
//!
//! Everything is deterministic given the seeds threaded through the APIs.

pub mod bits;
pub mod causal;
pub mod error;
pub mod graph;
pub mod harness;
pub mod hyperfinite;
pub mod matrix;
pub mod near_mis;
pub mod seeds;
pub mod sep_matrix;
pub mod set_systems;

pub use error::{Error, Result};
pub use graph::CostGraph;
pub use matrix::{InterventionMatrix, SeparationMode};
