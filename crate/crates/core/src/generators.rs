//! Unit-weight synthetic graph families.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// A named graph family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `d`-dimensional hypercube, `2^d` vertices.
    Hypercube {
        dim: u32,
    },
    /// `k x k` grid.
    Grid2d {
        side: usize,
    },
    Complete {
        n: usize,
    },
    /// Uniformly-ish random `d`-regular simple graph, reproducible from `seed`.
    RandomRegular {
        n: usize,
        degree: usize,
        seed: u64,
    },
    /// Two cliques of `clique_size` joined by a single bridge edge between
    /// vertex `clique_size - 1` and vertex `clique_size`.
    Barbell {
        clique_size: usize,
    },
}

pub fn generate(family: Family) -> Result<WeightedGraph> {
    let invalid = |msg: String| Err(Error::InvalidParameter(msg));
    match family {
        Family::Hypercube { dim } => {
            if !(1..=24).contains(&dim) {
                return invalid(format!("hypercube dimension must be in 1..=24, got {dim}"));
            }
            let n = 1usize << dim;
            let edges: Vec<_> = (0..n)
                .flat_map(|v| {
                    (0..dim)
                        .map(move |b| (v, v ^ (1 << b)))
                        .filter(|&(v, u)| v < u)
                        .map(|(v, u)| (v, u, 1.0))
                })
                .collect();
            WeightedGraph::from_edges(n, &edges)
        }
        Family::Grid2d { side } => {
            if side < 2 {
                return invalid(format!("grid side must be at least 2, got {side}"));
            }
            let id = |r: usize, c: usize| r * side + c;
            let mut edges = Vec::with_capacity(2 * side * (side - 1));
            for r in 0..side {
                for c in 0..side {
                    if c + 1 < side {
                        edges.push((id(r, c), id(r, c + 1), 1.0));
                    }
                    if r + 1 < side {
                        edges.push((id(r, c), id(r + 1, c), 1.0));
                    }
                }
            }
            WeightedGraph::from_edges(side * side, &edges)
        }
        Family::Complete { n } => {
            if n < 1 {
                return invalid("complete graph needs at least one vertex".into());
            }
            WeightedGraph::from_edges(n, &clique_edges(0, n))
        }
        Family::RandomRegular { n, degree, seed } => random_regular(n, degree, seed),
        Family::Barbell { clique_size } => {
            if clique_size < 2 {
                return invalid(format!(
                    "barbell clique size must be at least 2, got {clique_size}"
                ));
            }
            let mut edges = clique_edges(0, clique_size);
            edges.extend(clique_edges(clique_size, clique_size));
            edges.push((clique_size - 1, clique_size, 1.0));
            WeightedGraph::from_edges(2 * clique_size, &edges)
        }
    }
}

fn clique_edges(start: usize, size: usize) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::with_capacity(size * size.saturating_sub(1) / 2);
    for u in start..start + size {
        for v in u + 1..start + size {
            edges.push((u, v, 1.0));
        }
    }
    edges
}

const REGULAR_ATTEMPTS: usize = 1000;

/// Pairing model with incremental rejection (Steger–Wormald): unmatched
/// half-edges are paired at random, skipping pairs that would form a loop or
/// a parallel edge; restart when the remaining half-edges cannot be paired.
fn random_regular(n: usize, degree: usize, seed: u64) -> Result<WeightedGraph> {
    if degree == 0 || degree >= n || (n * degree) % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "random regular graph needs 0 < d < n and n*d even (n = {n}, d = {degree})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..REGULAR_ATTEMPTS {
        if let Some(edges) = try_pairing(n, degree, &mut rng) {
            let edges: Vec<_> = edges.into_iter().map(|(u, v)| (u, v, 1.0)).collect();
            return WeightedGraph::from_edges(n, &edges);
        }
    }
    Err(Error::InvalidParameter(format!(
        "failed to sample a simple {degree}-regular graph on {n} vertices"
    )))
}

fn try_pairing(n: usize, degree: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut points: Vec<usize> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    points.shuffle(rng);
    let mut edges = HashSet::with_capacity(n * degree / 2);
    let mut ordered = Vec::with_capacity(n * degree / 2);
    while !points.is_empty() {
        let mut placed = false;
        // Bounded number of random tries before declaring the state stuck.
        for _ in 0..4 * points.len() + 16 {
            let i = rng.random_range(0..points.len());
            let j = rng.random_range(0..points.len());
            let (u, v) = (points[i], points[j]);
            if i == j || u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if edges.insert(key) {
                ordered.push(key);
                let (hi, lo) = (i.max(j), i.min(j));
                points.swap_remove(hi);
                points.swap_remove(lo);
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    Some(ordered)
}
