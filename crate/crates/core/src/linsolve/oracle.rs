//! Dense reference computations for modest graph sizes.
//!
//! These go through the pseudo-inverse `L† = (L + J/n)⁻¹ − J/n` of a connected
//! graph, a different factorization from the grounded system used by the
//! solver, so they can serve as an independent check on it.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use super::laplacian::assemble_laplacian;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

fn shifted_factor(g: &WeightedGraph) -> Result<Cholesky<f64, nalgebra::Dyn>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut m = assemble_laplacian(g).to_dense();
    m.add_scalar_mut(1.0 / n as f64);
    Cholesky::new(m).ok_or(Error::Factorization)
}

/// Dense Moore–Penrose pseudo-inverse of the Laplacian of a connected graph.
pub fn laplacian_pseudo_inverse(g: &WeightedGraph) -> Result<DMatrix<f64>> {
    let n = g.n();
    let mut inv = shifted_factor(g)?.inverse();
    inv.add_scalar_mut(-1.0 / n as f64);
    Ok(inv)
}

/// Exact effective resistance between `s` and `t`.
pub fn exact_reff(g: &WeightedGraph, s: usize, t: usize) -> Result<f64> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Ok(0.0);
    }
    let component = g
        .connected_components()
        .into_iter()
        .find(|c| c.binary_search(&s).is_ok())
        .expect("every vertex lies in a component");
    let (Ok(s_local), Ok(t_local)) = (component.binary_search(&s), component.binary_search(&t))
    else {
        return Err(Error::InfiniteResistance { s, t });
    };
    let (sub, _) = g.induced_subgraph(&component)?;
    let factor = shifted_factor(&sub)?;
    let mut b = DVector::zeros(sub.n());
    b[s_local] = 1.0;
    b[t_local] = -1.0;
    let x = factor.solve(&b);
    Ok(x[s_local] - x[t_local])
}

/// All-pairs effective resistances of a connected graph.
pub fn exact_resistance_matrix(g: &WeightedGraph) -> Result<DMatrix<f64>> {
    let pinv = laplacian_pseudo_inverse(g)?;
    let n = g.n();
    Ok(DMatrix::from_fn(n, n, |u, v| {
        if u == v {
            0.0
        } else {
            pinv[(u, u)] + pinv[(v, v)] - 2.0 * pinv[(u, v)]
        }
    }))
}

/// Maximum effective resistance over all pairs with a pair attaining it.
/// Infinite for disconnected graphs; zero for graphs with fewer than two
/// vertices.
pub fn exact_resistance_diameter(g: &WeightedGraph) -> Result<(f64, usize, usize)> {
    if g.n() < 2 {
        return Ok((0.0, 0, 0));
    }
    if !g.is_connected() {
        let comps = g.connected_components();
        return Ok((f64::INFINITY, comps[0][0], comps[1][0]));
    }
    let r = exact_resistance_matrix(g)?;
    let mut best = (0.0, 0, 0);
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if r[(u, v)] > best.0 {
                best = (r[(u, v)], u, v);
            }
        }
    }
    Ok(best)
}

/// Second-smallest Laplacian eigenvalue by dense symmetric eigendecomposition.
pub fn algebraic_connectivity(g: &WeightedGraph) -> Result<f64> {
    if g.n() < 2 {
        return Err(Error::InvalidParameter("need at least two vertices".into()));
    }
    let eig = SymmetricEigen::new(assemble_laplacian(g).to_dense());
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values[1])
}
