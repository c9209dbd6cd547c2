use serde::Serialize;

use super::laplacian::assemble_laplacian;
use super::solver::{LaplacianSolver, SolverOptions};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Smallest solver accuracy handed out by [`required_solver_accuracy`].
pub const ZETA_FLOOR: f64 = 1e-14;

/// Largest solver accuracy handed out by [`required_solver_accuracy`].
pub const ZETA_CEILING: f64 = 0.5;

/// Potentials of a unit `source -> sink` electrical flow, shifted so that the
/// sink sits at zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialVector {
    pub values: Vec<f64>,
    pub source: usize,
    pub sink: usize,
    /// Solver accuracy used.
    pub zeta: f64,
    /// Additive per-vertex error bound implied by `zeta`.
    pub eta: f64,
}

impl PotentialVector {
    /// Potential difference between source and sink, an estimate of Reff.
    pub fn drop(&self) -> f64 {
        self.values[self.source] - self.values[self.sink]
    }
}

pub fn st_potential(
    g: &WeightedGraph,
    s: usize,
    t: usize,
    opts: &SolverOptions,
) -> Result<PotentialVector> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Err(Error::InvalidParameter(
            "source and sink must differ".into(),
        ));
    }
    let laplacian = assemble_laplacian(g);
    let solver = LaplacianSolver::new(&laplacian, opts)?;
    potential_with(&solver, g, s, t, opts.zeta)
}

/// Same as [`st_potential`] with a prepared solver for `g`.
pub(crate) fn potential_with(
    solver: &LaplacianSolver<'_>,
    g: &WeightedGraph,
    s: usize,
    t: usize,
    zeta: f64,
) -> Result<PotentialVector> {
    let mut b = vec![0.0; g.n()];
    b[s] = 1.0;
    b[t] = -1.0;
    let mut values = solver.solve(&b)?;
    let shift = values[t];
    values.iter_mut().for_each(|v| *v -= shift);
    values[t] = 0.0;
    Ok(PotentialVector {
        values,
        source: s,
        sink: t,
        zeta,
        eta: implied_additive_accuracy(g, zeta)?,
    })
}

fn connected_weight_stats(g: &WeightedGraph) -> Result<(f64, f64)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    match g.weight_range() {
        Some((min_w, _)) => Ok((min_w, g.total_weight())),
        None => Err(Error::InvalidParameter("graph has no edges".into())),
    }
}

/// Certified lower bound `min w · (min w / w(E))²` on the second-smallest
/// Laplacian eigenvalue, with the universal constant taken as 1.
pub fn lambda2_lower_bound(g: &WeightedGraph) -> Result<f64> {
    let (min_w, total) = connected_weight_stats(g)?;
    Ok(min_w * (min_w / total).powi(2))
}

/// Energy-norm solver accuracy `η · (min w)² / (w(E)·√m)` sufficient for an
/// additive potential error of at most `eta`, clamped to
/// `[ZETA_FLOOR, ZETA_CEILING]`.
pub fn required_solver_accuracy(g: &WeightedGraph, eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "eta must be positive, got {eta}"
        )));
    }
    let (min_w, total) = connected_weight_stats(g)?;
    let zeta = eta * min_w * min_w / (total * (g.m() as f64).sqrt());
    Ok(zeta.clamp(ZETA_FLOOR, ZETA_CEILING))
}

/// Inverse of [`required_solver_accuracy`] before clamping.
pub fn implied_additive_accuracy(g: &WeightedGraph, zeta: f64) -> Result<f64> {
    let (min_w, total) = connected_weight_stats(g)?;
    Ok(zeta * total * (g.m() as f64).sqrt() / (min_w * min_w))
}
