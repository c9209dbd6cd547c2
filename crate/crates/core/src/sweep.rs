//! Level-set sweeps over electrical potentials and the sparse-cut finder.
//!
//! A sweep orders vertices by decreasing potential and scores every prefix
//! set by `Φ(S) · vol(S)^{1/2−ε}`, the quantity whose lower bound (mild
//! expansion) forces small effective resistance. A low score therefore
//! certifies a sparse cut.

use std::cmp::Reverse;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{CutStats, WeightedGraph};
use crate::linsolve::{
    assemble_laplacian, potential_with, required_solver_accuracy, LaplacianSolver, PotentialVector,
    SolverOptions,
};
use crate::sketch::{furthest_pair, FurthestPair, SketchConfig};

/// Potentials closer than this fraction of their range sort as ties.
const TIE_RESOLUTION: f64 = (1u64 << 36) as f64;

/// Scores within this relative margin of the minimum count as minimal.
const SCORE_TIE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The prefix `{v₁, …, v_k}` itself.
    Prefix,
    /// Its complement, reported when the prefix holds more than half the volume.
    Complement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepEntry {
    /// Number of vertices in the prefix.
    pub prefix_len: usize,
    /// Potential of the last vertex in the prefix.
    pub threshold: f64,
    pub side: Side,
    /// Statistics of the reported (smaller-volume) side.
    pub stats: CutStats,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    /// Vertices by decreasing potential, ties by ascending id.
    pub order: Vec<usize>,
    pub entries: Vec<SweepEntry>,
    pub epsilon: f64,
}

impl Sweep {
    /// Sorted vertex ids of the side reported by entry `index`.
    pub fn subset(&self, index: usize) -> Vec<usize> {
        let entry = &self.entries[index];
        let (prefix, rest) = self.order.split_at(entry.prefix_len);
        let mut set = match entry.side {
            Side::Prefix => prefix.to_vec(),
            Side::Complement => rest.to_vec(),
        };
        set.sort_unstable();
        set
    }

    /// Index of the minimal-score entry; near-ties go to the shortest prefix.
    pub fn best(&self) -> usize {
        let min = self
            .entries
            .iter()
            .map(|e| e.score)
            .fold(f64::INFINITY, f64::min);
        self.entries
            .iter()
            .position(|e| e.score <= min + SCORE_TIE * min.abs())
            .expect("a sweep has at least one entry")
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1/2), got {epsilon}"
        )));
    }
    Ok(())
}

/// Scores every prefix of the potential ordering, updating boundary and
/// volume in `O(deg(v))` per added vertex.
pub fn sweep_level_sets(g: &WeightedGraph, potentials: &[f64], epsilon: f64) -> Result<Sweep> {
    check_epsilon(epsilon)?;
    let n = g.n();
    if potentials.len() != n {
        return Err(Error::InvalidParameter(format!(
            "potential vector has length {}, expected {n}",
            potentials.len()
        )));
    }
    let lo = potentials.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = potentials.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    if range.is_nan() || range <= 0.0 || range.is_infinite() {
        return Err(Error::DegeneratePotential);
    }
    let key = |v: usize| ((potentials[v] - lo) / (hi - lo) * TIE_RESOLUTION).round() as u64;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (Reverse(key(v)), v));

    let total_volume = 2.0 * g.total_weight();
    let exponent = 0.5 - epsilon;
    let mut inside = vec![false; n];
    let mut boundary = 0.0;
    let mut prefix_volume = 0.0;
    let mut entries = Vec::with_capacity(n.saturating_sub(1));
    for (k, &v) in order.iter().enumerate().take(n.saturating_sub(1)) {
        inside[v] = true;
        prefix_volume += g.degree(v);
        for (u, w) in g.neighbors(v) {
            if inside[u] {
                boundary -= w;
            } else {
                boundary += w;
            }
        }
        let boundary_now = boundary.max(0.0);
        let (side, volume) = if prefix_volume <= total_volume / 2.0 {
            (Side::Prefix, prefix_volume)
        } else {
            (Side::Complement, (total_volume - prefix_volume).max(0.0))
        };
        let stats = CutStats::new(boundary_now, volume);
        let score = match stats.conductance {
            Some(phi) => phi * volume.powf(exponent),
            None => f64::INFINITY,
        };
        entries.push(SweepEntry {
            prefix_len: k + 1,
            threshold: potentials[v],
            side,
            stats,
            score,
        });
    }
    Ok(Sweep {
        order,
        entries,
        epsilon,
    })
}

/// A low-score level cut together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutResult {
    /// The smaller-volume side, sorted.
    pub subset: Vec<usize>,
    pub stats: CutStats,
    pub epsilon: f64,
    /// Achieved score `Φ(U)·vol(U)^{1/2−ε}`.
    pub certificate_c: f64,
    /// Mild-expansion level implied by the resistance of the chosen pair.
    pub target_c: Option<f64>,
    /// Flow endpoints used for the potential.
    pub source: usize,
    pub sink: usize,
    /// Sketch estimate of `Reff(source, sink)`.
    pub pair_estimate: f64,
    /// Additive potential accuracy requested and the solver accuracy used.
    pub eta: f64,
    pub zeta: f64,
    /// Extra resistance term `η (48 m^{1/2−ε} ln n + 2c) / c` allowed by
    /// working with approximate potentials.
    pub robustness_term: f64,
}

/// `c = sqrt((deg(u)^{-2ε} + deg(v)^{-2ε}) / (Reff · ε))`.
pub fn target_expansion(deg_u: f64, deg_v: f64, reff: f64, epsilon: f64) -> f64 {
    (degree_term(deg_u, deg_v, epsilon) / (reff * epsilon)).sqrt()
}

fn degree_term(deg_u: f64, deg_v: f64, epsilon: f64) -> f64 {
    deg_u.powf(-2.0 * epsilon) + deg_v.powf(-2.0 * epsilon)
}

/// Additive potential accuracy under which the approximate-potential error
/// stays dominated by the resistance bound:
/// `η = (deg(u)^{-2ε} + deg(v)^{-2ε}) / (ε c · sqrt(96 √m ln n))`.
pub fn required_potential_accuracy(
    g: &WeightedGraph,
    u: usize,
    v: usize,
    c: f64,
    epsilon: f64,
) -> f64 {
    let m = g.m() as f64;
    let n = g.n() as f64;
    degree_term(g.degree(u), g.degree(v), epsilon)
        / (epsilon * c * (96.0 * m.sqrt() * n.ln()).sqrt())
}

/// Furthest pair, then the potential between them, then the best level cut.
pub fn find_sparse_cut(
    g: &WeightedGraph,
    epsilon: f64,
    cfg: &SketchConfig,
    opts: &SolverOptions,
) -> Result<CutResult> {
    check_epsilon(epsilon)?;
    if g.n() < 2 {
        return Err(Error::InvalidParameter(
            "sparse cut needs at least two vertices".into(),
        ));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let pair = furthest_pair(g, cfg, opts)?;
    sparse_cut_from_pair(g, pair, epsilon, opts)
}

/// The sparse-cut pipeline after the furthest pair has been found.
pub(crate) fn sparse_cut_from_pair(
    g: &WeightedGraph,
    pair: FurthestPair,
    epsilon: f64,
    opts: &SolverOptions,
) -> Result<CutResult> {
    let (u, v) = (pair.u, pair.v);
    let c = target_expansion(g.degree(u), g.degree(v), pair.estimate, epsilon);
    let eta = required_potential_accuracy(g, u, v, c, epsilon).max(1e-12 * pair.estimate);
    let zeta = required_solver_accuracy(g, eta)?.min(opts.zeta);

    let laplacian = assemble_laplacian(g);
    let solve_opts = opts.with_zeta(zeta);
    let solver = LaplacianSolver::new(&laplacian, &solve_opts)?;
    let potential: PotentialVector = potential_with(&solver, g, u, v, zeta)?;
    let sweep = sweep_level_sets(g, &potential.values, epsilon)?;
    let best = sweep.best();
    let entry = sweep.entries[best];

    let m = g.m() as f64;
    let n = g.n() as f64;
    let robustness_term = eta * (48.0 * m.powf(0.5 - epsilon) * n.ln() + 2.0 * c) / c;
    Ok(CutResult {
        subset: sweep.subset(best),
        stats: entry.stats,
        epsilon,
        certificate_c: entry.score,
        target_c: Some(c),
        source: u,
        sink: v,
        pair_estimate: pair.estimate,
        eta,
        zeta,
        robustness_term,
    })
}
