//! Partitioning a graph into pieces of small effective-resistance diameter.
//!
//! Each sub-instance `H` is processed as follows:
//!
//! 1. edges around vertices of degree at most `W / (2n)` are deleted, and
//!    this repeats until no such vertex keeps an edge;
//! 2. every remaining connected component gets a furthest-pair estimate;
//! 3. components whose estimate is at most `R` become blocks;
//! 4. the others are split by a sparse level cut (`ε = 1/4`) and both sides
//!    are processed again.
//!
//! `n` is the vertex count of the root graph throughout. Cut edges are
//! classified as type (i) (removed by pruning) or type (ii) (crossing a sparse
//! cut). Every type (ii) cut of weight `w(∂U)` is charged as tokens
//! `w(∂U) / w(E(U))` on the internal edges of the smaller side `U`, so that
//! `Σ_e Ψ(e) w(e)` equals the total type (ii) weight.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linsolve::{exact_resistance_diameter, SolverOptions, DENSE_LIMIT};
use crate::sketch::{furthest_pair, SketchConfig};
use crate::sweep::sparse_cut_from_pair;

/// Sparse-cut exponent used by the recursion.
pub const EPSILON: f64 = 0.25;

/// Smallest accepted trade-off parameter.
pub const MIN_DELTA: f64 = 2.0;

/// Largest block for which diameters are computed with the dense oracle.
pub const ORACLE_LIMIT: usize = DENSE_LIMIT;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionConfig {
    pub delta: f64,
    pub epsilon: f64,
    /// Constant in `R = c_R · δ² · n / W`.
    pub c_r: f64,
    /// Cut-weight budget `W = w(E) / δ`.
    pub cut_budget: f64,
    /// Resistance-diameter target `R`.
    pub resistance_target: f64,
    pub n_original: usize,
    pub total_weight: f64,
    /// True when `c_R δ² < 4/ε` was accepted through [`DecompositionConfig::relaxed`].
    pub precondition_binding: bool,
}

impl DecompositionConfig {
    /// Parameters for `g`. Requires `δ ≥ 2` and `c_R δ² ≥ 4/ε`, the regime in
    /// which the token bound on every edge holds.
    pub fn new(g: &WeightedGraph, delta: f64, c_r: f64) -> Result<Self> {
        let cfg = Self::relaxed(g, delta, c_r)?;
        if cfg.precondition_binding {
            return Err(Error::InvalidParameter(format!(
                "c_R·δ² = {} is below 4/ε = {}; raise delta to at least {:.4} or increase c_R",
                c_r * delta * delta,
                4.0 / EPSILON,
                (4.0 / (EPSILON * c_r)).sqrt()
            )));
        }
        Ok(cfg)
    }

    /// Like [`DecompositionConfig::new`] but accepts `c_R δ² < 4/ε`, flagging
    /// it in `precondition_binding`.
    pub fn relaxed(g: &WeightedGraph, delta: f64, c_r: f64) -> Result<Self> {
        if !(delta >= MIN_DELTA && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "delta must be at least {MIN_DELTA}, got {delta}"
            )));
        }
        if !(c_r > 0.0 && c_r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "c_R must be positive, got {c_r}"
            )));
        }
        let total_weight = g.total_weight();
        let n = g.n();
        let cut_budget = total_weight / delta;
        let resistance_target = if total_weight > 0.0 {
            c_r * delta * delta * n as f64 / cut_budget
        } else {
            f64::INFINITY
        };
        Ok(Self {
            delta,
            epsilon: EPSILON,
            c_r,
            cut_budget,
            resistance_target,
            n_original: n,
            total_weight,
            precondition_binding: c_r * delta * delta < 4.0 / EPSILON,
        })
    }

    /// Degree threshold `W / (2n)` for pruning.
    pub fn prune_threshold(&self) -> f64 {
        if self.n_original == 0 {
            0.0
        } else {
            self.cut_budget / (2.0 * self.n_original as f64)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    /// Disjoint sorted blocks covering every vertex, ordered by smallest id.
    pub blocks: Vec<Vec<usize>>,
    /// Total weight of edges joining different blocks.
    pub cut_weight: f64,
}

impl Partition {
    /// Validates `blocks` as a partition of `g`'s vertices and computes the
    /// cut weight.
    pub fn new(g: &WeightedGraph, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let owner = block_owner(g, &blocks)?;
        let cut_weight = g
            .edges()
            .filter(|&(u, v, _)| owner[u] != owner[v])
            .fold(0.0, |acc, (_, _, w)| acc + w);
        Ok(Self { blocks, cut_weight })
    }
}

fn block_owner(g: &WeightedGraph, blocks: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut owner = vec![usize::MAX; g.n()];
    for (b, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::NotAPartition(format!("block {b} is empty")));
        }
        for &v in block {
            if v >= g.n() {
                return Err(Error::NotAPartition(format!(
                    "vertex {v} out of range for n = {}",
                    g.n()
                )));
            }
            if owner[v] != usize::MAX {
                return Err(Error::NotAPartition(format!(
                    "vertex {v} appears more than once"
                )));
            }
            owner[v] = b;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::NotAPartition(format!("vertex {v} is not covered")));
    }
    Ok(owner)
}

/// One token charge on an edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Charge {
    /// Volume, inside the sub-instance, of the side whose internal edges were charged.
    pub volume: f64,
    /// False when the smaller side had no internal edges and the charge went
    /// to the other side or to the cut edges themselves.
    pub standard: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub config: DecompositionConfig,
    pub loss_fraction: f64,
    pub cut_weight: f64,
    pub type_i_weight: f64,
    pub type_ii_weight: f64,
    /// Resistance-diameter value for each block (same order as the partition).
    pub per_block_rdiam: Vec<f64>,
    /// Whether the matching entry of `per_block_rdiam` is exact or an upper bound.
    pub rdiam_exact: Vec<bool>,
    /// Tokens per edge, indexed like [`WeightedGraph::edges`].
    pub psi: Vec<f64>,
    pub psi_max: f64,
    pub sparse_cuts: usize,
    pub fallback_charges: usize,
    pub max_depth: usize,
    /// Chronological charges per edge.
    #[serde(skip)]
    pub charges: Vec<Vec<Charge>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneOutcome {
    pub graph: WeightedGraph,
    pub removed_weight: f64,
    /// Vertices that had edges before pruning and none after.
    pub isolated: Vec<usize>,
}

/// Repeatedly deletes every edge at a vertex whose current degree is at most
/// `threshold`, until no such vertex keeps an edge.
pub fn prune_low_degree(h: &WeightedGraph, threshold: f64) -> PruneOutcome {
    let n = h.n();
    let mut degree = h.degrees().to_vec();
    let mut live: Vec<usize> = (0..n).map(|v| h.neighbor_count(v)).collect();
    let mut pruned = vec![false; n];
    let mut queue: Vec<usize> = (0..n)
        .filter(|&v| live[v] > 0 && degree[v] <= threshold)
        .collect();
    let mut removed_weight = 0.0;
    while let Some(v) = queue.pop() {
        if pruned[v] || live[v] == 0 {
            continue;
        }
        pruned[v] = true;
        for (u, w) in h.neighbors(v) {
            if pruned[u] {
                continue;
            }
            removed_weight += w;
            degree[u] -= w;
            live[u] -= 1;
            live[v] -= 1;
            if live[u] > 0 && degree[u] <= threshold {
                queue.push(u);
            }
        }
    }
    let graph = if pruned.iter().any(|&p| p) {
        h.without_vertices_edges(&pruned)
    } else {
        h.clone()
    };
    let isolated = (0..n)
        .filter(|&v| h.neighbor_count(v) > 0 && graph.neighbor_count(v) == 0)
        .collect();
    PruneOutcome {
        graph,
        removed_weight,
        isolated,
    }
}

struct Instance {
    graph: WeightedGraph,
    to_root: Vec<usize>,
    depth: usize,
}

struct Block {
    vertices: Vec<usize>,
    /// Furthest-pair diameter bound when the block was accepted.
    rdiam_bound: f64,
}

/// Runs the recursive partitioning with `δ` and `c_R = 1`.
pub fn partition(
    g: &WeightedGraph,
    delta: f64,
    cfg: &SketchConfig,
    opts: &SolverOptions,
) -> Result<(Partition, DecompositionReport)> {
    partition_with(g, &DecompositionConfig::new(g, delta, 1.0)?, cfg, opts)
}

pub fn partition_with(
    g: &WeightedGraph,
    config: &DecompositionConfig,
    cfg: &SketchConfig,
    opts: &SolverOptions,
) -> Result<(Partition, DecompositionReport)> {
    if g.n() == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    if config.n_original != g.n() {
        return Err(Error::InvalidParameter(
            "configuration was built for a different graph".into(),
        ));
    }
    let edge_index: HashMap<(usize, usize), usize> = g
        .edges()
        .enumerate()
        .map(|(i, (u, v, _))| ((u, v), i))
        .collect();
    let root_edge = |a: usize, b: usize| edge_index[&(a.min(b), a.max(b))];
    let edge_weights: Vec<f64> = g.edges().map(|e| e.2).collect();

    let threshold = config.prune_threshold();
    let mut psi = vec![0.0; edge_weights.len()];
    let mut charges: Vec<Vec<Charge>> = vec![Vec::new(); edge_weights.len()];
    let mut blocks: Vec<Block> = Vec::new();
    let mut type_i = 0.0;
    let mut type_ii = 0.0;
    let mut sparse_cuts = 0;
    let mut fallback_charges = 0;
    let mut max_depth = 0;

    let mut stack = vec![Instance {
        graph: g.clone(),
        to_root: (0..g.n()).collect(),
        depth: 0,
    }];
    while let Some(instance) = stack.pop() {
        if instance.depth > config.n_original {
            return Err(Error::Internal(format!(
                "recursion depth {} exceeds n = {}",
                instance.depth, config.n_original
            )));
        }
        max_depth = max_depth.max(instance.depth);
        let pruned = prune_low_degree(&instance.graph, threshold);
        type_i += pruned.removed_weight;

        for component in pruned.graph.connected_components() {
            if component.len() == 1 {
                blocks.push(Block {
                    vertices: vec![instance.to_root[component[0]]],
                    rdiam_bound: 0.0,
                });
                continue;
            }
            let (h, local) = pruned.graph.induced_subgraph(&component)?;
            let to_root: Vec<usize> = local.iter().map(|&v| instance.to_root[v]).collect();
            let pair = furthest_pair(&h, cfg, opts)?;
            if pair.estimate <= config.resistance_target {
                blocks.push(Block {
                    vertices: to_root,
                    rdiam_bound: pair.diameter_upper_bound(cfg.beta),
                });
                continue;
            }

            let cut = sparse_cut_from_pair(&h, pair, config.epsilon, opts)?;
            sparse_cuts += 1;
            let mut in_u = vec![false; h.n()];
            for &v in &cut.subset {
                in_u[v] = true;
            }
            let mut crossing = Vec::new();
            let mut inside_u = Vec::new();
            let mut inside_rest = Vec::new();
            for (a, b, w) in h.edges() {
                let e = (root_edge(to_root[a], to_root[b]), w);
                match (in_u[a], in_u[b]) {
                    (true, true) => inside_u.push(e),
                    (false, false) => inside_rest.push(e),
                    _ => crossing.push(e),
                }
            }
            let cut_w: f64 = crossing.iter().map(|e| e.1).sum();
            type_ii += cut_w;

            let weight_of = |edges: &[(usize, f64)]| edges.iter().map(|e| e.1).sum::<f64>();
            let (charged, volume, standard) = if weight_of(&inside_u) > 0.0 {
                (&inside_u, cut.stats.volume, true)
            } else if weight_of(&inside_rest) > 0.0 {
                let rest_volume = 2.0 * h.total_weight() - cut.stats.volume;
                (&inside_rest, rest_volume, false)
            } else {
                (&crossing, 2.0 * h.total_weight(), false)
            };
            if !standard {
                fallback_charges += 1;
            }
            let tokens = cut_w / weight_of(charged);
            for &(e, _) in charged.iter() {
                psi[e] += tokens;
                charges[e].push(Charge { volume, standard });
            }

            let rest: Vec<usize> = (0..h.n()).filter(|&v| !in_u[v]).collect();
            let mut sides = Vec::with_capacity(2);
            for side in [&cut.subset, &rest] {
                let (sub, map) = h.induced_subgraph(side)?;
                sides.push(Instance {
                    graph: sub,
                    to_root: map.iter().map(|&v| to_root[v]).collect(),
                    depth: instance.depth + 1,
                });
            }
            // The stack pops the smaller-volume side (`cut.subset`) first.
            let larger = sides.pop().unwrap();
            stack.push(larger);
            stack.push(sides.pop().unwrap());
        }
    }

    for block in &mut blocks {
        block.vertices.sort_unstable();
    }
    blocks.sort_by_key(|b| b.vertices[0]);

    let diameters: Vec<(f64, bool)> = blocks
        .par_iter()
        .map(|block| {
            if block.vertices.len() == 1 {
                return Ok((0.0, true));
            }
            if block.vertices.len() <= ORACLE_LIMIT {
                let (sub, _) = g.induced_subgraph(&block.vertices)?;
                Ok((exact_resistance_diameter(&sub)?.0, true))
            } else {
                Ok((block.rdiam_bound, false))
            }
        })
        .collect::<Result<_>>()?;

    let partition = Partition::new(g, blocks.into_iter().map(|b| b.vertices).collect())?;
    let cut_weight = type_i + type_ii;
    let loss_fraction = if config.total_weight > 0.0 {
        cut_weight / config.total_weight
    } else {
        0.0
    };
    let psi_max = psi.iter().copied().fold(0.0, f64::max);
    let report = DecompositionReport {
        config: *config,
        loss_fraction,
        cut_weight,
        type_i_weight: type_i,
        type_ii_weight: type_ii,
        per_block_rdiam: diameters.iter().map(|d| d.0).collect(),
        rdiam_exact: diameters.iter().map(|d| d.1).collect(),
        psi,
        psi_max,
        sparse_cuts,
        fallback_charges,
        max_depth,
        charges,
    };
    Ok((partition, report))
}

/// Constants of the loss and resistance bounds checked by [`verify_partition`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    pub c_loss: f64,
    pub c_res: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self {
            c_loss: 8.0,
            c_res: 32.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub blocks: usize,
    pub cut_weight: f64,
    pub loss_fraction: f64,
    /// `C_loss / δ`.
    pub loss_bound: f64,
    pub loss_pass: bool,
    pub block_rdiam: Vec<f64>,
    pub block_rdiam_exact: Vec<bool>,
    pub max_rdiam: f64,
    /// `C_res · δ³ · n / w(E)`.
    pub rdiam_bound: f64,
    pub rdiam_pass: bool,
    pub constants: BoundConstants,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.loss_pass && self.rdiam_pass
    }
}

/// Recomputes the cut weight and per-block resistance diameters of `blocks`
/// and checks them against the loss and resistance bounds.
pub fn verify_partition(
    g: &WeightedGraph,
    blocks: &[Vec<usize>],
    delta: f64,
    constants: BoundConstants,
    cfg: &SketchConfig,
    opts: &SolverOptions,
) -> Result<Verification> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let owner = block_owner(g, blocks)?;
    let cut_weight: f64 = g
        .edges()
        .filter(|&(u, v, _)| owner[u] != owner[v])
        .fold(0.0, |acc, (_, _, w)| acc + w);
    let total = g.total_weight();
    let loss_fraction = if total > 0.0 { cut_weight / total } else { 0.0 };
    let loss_bound = constants.c_loss / delta;

    let diameters: Vec<(f64, bool)> = blocks
        .par_iter()
        .map(|block| {
            if block.len() < 2 {
                return Ok((0.0, true));
            }
            let (sub, _) = g.induced_subgraph(block)?;
            if !sub.is_connected() {
                return Ok((f64::INFINITY, true));
            }
            if block.len() <= ORACLE_LIMIT {
                Ok((exact_resistance_diameter(&sub)?.0, true))
            } else {
                let pair = furthest_pair(&sub, cfg, opts)?;
                Ok((pair.diameter_upper_bound(cfg.beta), false))
            }
        })
        .collect::<Result<_>>()?;
    let max_rdiam = diameters.iter().map(|d| d.0).fold(0.0, f64::max);
    let rdiam_bound = if total > 0.0 {
        constants.c_res * delta.powi(3) * g.n() as f64 / total
    } else {
        f64::INFINITY
    };
    Ok(Verification {
        blocks: blocks.len(),
        cut_weight,
        loss_fraction,
        loss_bound,
        loss_pass: loss_fraction <= loss_bound,
        block_rdiam: diameters.iter().map(|d| d.0).collect(),
        block_rdiam_exact: diameters.iter().map(|d| d.1).collect(),
        max_rdiam,
        rdiam_bound,
        rdiam_pass: max_rdiam <= rdiam_bound,
        constants,
    })
}
