//! Effective resistances, potential level-set cuts, and decomposition of
//! weighted graphs into pieces of bounded effective-resistance diameter.
//!
//! The main entry points are [`linsolve::st_potential`] and
//! [`linsolve::exact_reff`] for resistances, [`sweep::find_sparse_cut`] for
//! sparse cuts, and [`decompose::partition`] for the full decomposition.

pub mod cli;
pub mod decompose;
pub mod edgelist;
pub mod error;
pub mod generators;
pub mod graph;
pub mod linsolve;
pub mod sketch;
pub mod sweep;

pub use decompose::{
    partition, partition_with, prune_low_degree, verify_partition, BoundConstants,
    DecompositionConfig, DecompositionReport, Partition, Verification,
};
pub use error::{Error, Result};
pub use generators::{generate, Family};
pub use graph::{CutStats, WeightedGraph};
pub use linsolve::{exact_reff, st_potential, PotentialVector, SolveMethod, SolverOptions};
pub use sketch::{approx_reff_from_source, furthest_pair, FurthestPair, SketchConfig};
pub use sweep::{find_sparse_cut, sweep_level_sets, CutResult, Sweep, SweepEntry};
