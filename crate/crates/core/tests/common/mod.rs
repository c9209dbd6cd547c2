//! Graph corpora shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resdecomp::WeightedGraph;

/// Connected graph on `n` vertices: a random spanning tree plus extra edges,
/// with weights drawn uniformly from `[0.1, 10]`.
pub fn random_connected(n: usize, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        let parent = rng.random_range(0..v);
        edges.push((parent, v, rng.random_range(0.1..=10.0)));
    }
    let extra = rng.random_range(0..=n);
    for _ in 0..extra {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            edges.push((a, b, rng.random_range(0.1..=10.0)));
        }
    }
    WeightedGraph::from_edges(n, &edges).unwrap()
}

/// The seeded corpus used by the oracle suites: sizes 2..=12.
pub fn corpus(count: usize, base_seed: u64) -> Vec<WeightedGraph> {
    (0..count as u64)
        .map(|i| random_connected(2 + (i as usize % 11), base_seed + i))
        .collect()
}

pub fn path(n: usize) -> WeightedGraph {
    let edges: Vec<_> = (0..n - 1).map(|v| (v, v + 1, 1.0)).collect();
    WeightedGraph::from_edges(n, &edges).unwrap()
}

/// `count` unit cliques of `size` vertices joined in a line by single unit
/// edges from the last vertex of one clique to the first of the next.
pub fn chain_of_cliques(count: usize, size: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    for c in 0..count {
        let base = c * size;
        for a in 0..size {
            for b in a + 1..size {
                edges.push((base + a, base + b, 1.0));
            }
        }
        if c + 1 < count {
            edges.push((base + size - 1, base + size, 1.0));
        }
    }
    WeightedGraph::from_edges(count * size, &edges).unwrap()
}

/// Shortest-path distances with edge lengths `1/w` (Floyd–Warshall).
pub fn resistive_distances(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for (u, v, w) in g.edges() {
        d[u][v] = d[u][v].min(1.0 / w);
        d[v][u] = d[u][v];
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Cycle on `n` vertices plus `chords` short chords, weights in `[0.5, 2]`.
pub fn weighted_ring(n: usize, chords: usize, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<_> = (0..n)
        .map(|v| (v, (v + 1) % n, rng.random_range(0.5..=2.0)))
        .collect();
    for _ in 0..chords {
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(2..6)) % n;
        edges.push((a, b, rng.random_range(0.5..=2.0)));
    }
    WeightedGraph::from_edges(n, &edges).unwrap()
}
