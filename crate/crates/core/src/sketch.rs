//! Single-source effective-resistance estimates by random projection.
//!
//! `Reff(u, v) = ‖W^{1/2} B L† (e_u − e_v)‖²`, where `B` is the edge–vertex
//! incidence matrix. Projecting the edge space onto `k` random sign vectors
//! `q_i` and solving `L z_i = Bᵀ W^{1/2} q_i` gives an embedding whose squared
//! distances `Σ_i (z_i(u) − z_i(v))²` approximate every resistance at once.
//! When `k ≥ m` the probe set is replaced by an orthonormal basis of the edge
//! space and the estimates are exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linsolve::{assemble_laplacian, LaplacianSolver, SolverOptions};

/// Probe budget constant: `k = ⌈C · ln n / β²⌉`.
pub const PROBE_CONSTANT: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SketchConfig {
    /// Multiplicative accuracy: estimates lie within `e^{±beta}` of the truth.
    pub beta: f64,
    pub seed: u64,
    /// Number of random projections; derived from `beta` and `n` when unset.
    pub probe_count: Option<usize>,
}

impl Default for SketchConfig {
    fn default() -> Self {
        Self {
            beta: 1.5f64.ln(),
            seed: 0,
            probe_count: None,
        }
    }
}

impl SketchConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        if self.probe_count == Some(0) {
            return Err(Error::InvalidParameter(
                "probe_count must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn probes_for(&self, n: usize) -> usize {
        self.probe_count.unwrap_or_else(|| {
            let n = n.max(2) as f64;
            (PROBE_CONSTANT * n.ln() / (self.beta * self.beta)).ceil() as usize
        })
    }
}

/// Estimates `A(u, ·)` with `e^{−β} Reff(u, v) ≤ A(u, v) ≤ e^{β} Reff(u, v)`
/// with high probability. `A(u, u) = 0`.
pub fn approx_reff_from_source(
    g: &WeightedGraph,
    u: usize,
    cfg: &SketchConfig,
    opts: &SolverOptions,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    g.check_vertex(u)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    if n == 1 {
        return Ok(vec![0.0]);
    }
    let laplacian = assemble_laplacian(g);
    let solver = LaplacianSolver::new(&laplacian, opts)?;
    let edges: Vec<(usize, usize, f64)> = g.edges().collect();
    let k = cfg.probes_for(n);

    let right_hand_sides: Vec<Vec<f64>> = if k >= edges.len() {
        edges
            .iter()
            .map(|&(a, b, w)| {
                let mut rhs = vec![0.0; n];
                rhs[a] = w.sqrt();
                rhs[b] = -w.sqrt();
                rhs
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let scale = 1.0 / (k as f64).sqrt();
        (0..k)
            .map(|_| {
                let mut rhs = vec![0.0; n];
                for &(a, b, w) in &edges {
                    let q = if rng.random::<bool>() { scale } else { -scale } * w.sqrt();
                    rhs[a] += q;
                    rhs[b] -= q;
                }
                rhs
            })
            .collect()
    };

    let embeddings: Vec<Vec<f64>> = right_hand_sides
        .par_iter()
        .map(|rhs| solver.solve(rhs))
        .collect::<Result<_>>()?;

    let mut estimates = vec![0.0; n];
    for z in &embeddings {
        for (v, est) in estimates.iter_mut().enumerate() {
            let d = z[u] - z[v];
            *est += d * d;
        }
    }
    estimates[u] = 0.0;

    // A non-positive estimate for v ≠ u means the projection collapsed this
    // pair; answer it with a direct solve.
    let collapsed: Vec<usize> = (0..n).filter(|&v| v != u && estimates[v] <= 0.0).collect();
    for v in collapsed {
        let mut b = vec![0.0; n];
        b[u] = 1.0;
        b[v] = -1.0;
        let x = solver.solve(&b)?;
        estimates[v] = x[u] - x[v];
    }
    Ok(estimates)
}

/// A vertex pair whose effective resistance is at least a third of the
/// resistance diameter, with the estimate of that resistance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FurthestPair {
    pub u: usize,
    pub v: usize,
    pub estimate: f64,
}

impl FurthestPair {
    /// Upper bound on the resistance diameter: `R_diam ≤ 2 max_v Reff(u, v) ≤
    /// 2 e^β A(u, v*)`.
    pub fn diameter_upper_bound(&self, beta: f64) -> f64 {
        2.0 * beta.exp() * self.estimate
    }
}

/// Fixes `u = 0`, estimates `A(0, ·)` and returns the maximizer (ties go to
/// the smallest id).
pub fn furthest_pair(
    g: &WeightedGraph,
    cfg: &SketchConfig,
    opts: &SolverOptions,
) -> Result<FurthestPair> {
    if g.n() < 2 {
        return Err(Error::InvalidParameter(
            "furthest pair needs at least two vertices".into(),
        ));
    }
    let estimates = approx_reff_from_source(g, 0, cfg, opts)?;
    let (v, estimate) = estimates.iter().copied().enumerate().skip(1).fold(
        (1, f64::NEG_INFINITY),
        |best, (v, a)| if a > best.1 { (v, a) } else { best },
    );
    Ok(FurthestPair { u: 0, v, estimate })
}
