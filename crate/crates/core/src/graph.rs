//! Weighted undirected graphs and cut arithmetic.
//!
//! Graphs are stored in compressed adjacency form (one sorted neighbour run per
//! vertex). Parallel input edges are merged by summing their weights and
//! self-loops are dropped, so every stored graph is simple.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};

/// An immutable, simple, undirected graph with strictly positive edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
    total_weight: f64,
    edge_count: usize,
}

/// Boundary weight, volume and conductance of a vertex set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutStats {
    pub boundary_weight: f64,
    pub volume: f64,
    /// `None` when the set has zero volume.
    pub conductance: Option<f64>,
}

impl CutStats {
    pub fn new(boundary_weight: f64, volume: f64) -> Self {
        let conductance = (volume > 0.0).then(|| boundary_weight / volume);
        Self {
            boundary_weight,
            volume,
            conductance,
        }
    }
}

impl WeightedGraph {
    /// Builds a graph on `n` vertices from `(u, v, w)` triples.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (index, &(u, v, w)) in edges.iter().enumerate() {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(Error::EdgeOutOfRange { index, vertex, n });
                }
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeight { index, weight: w });
            }
            if u != v {
                normalized.push((u.min(v), u.max(v), w));
            }
        }
        normalized.sort_by_key(|e| (e.0, e.1));

        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(normalized.len());
        for (u, v, w) in normalized {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => last.2 += w,
                _ => merged.push((u, v, w)),
            }
        }
        Ok(Self::from_simple_edges(n, &merged))
    }

    /// `edges` must be simple, with `u < v` and sorted lexicographically.
    fn from_simple_edges(n: usize, edges: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; n];
        for &(u, v, _) in edges {
            counts[u] += 1;
            counts[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for c in &counts {
            offsets.push(offsets.last().unwrap() + c);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0usize; offsets[n]];
        let mut weights = vec![0.0; offsets[n]];
        // Iterating sorted (u, v) pairs leaves every neighbour run sorted.
        for &(u, v, w) in edges {
            targets[fill[u]] = v;
            weights[fill[u]] = w;
            fill[u] += 1;
        }
        for &(u, v, w) in edges {
            targets[fill[v]] = u;
            weights[fill[v]] = w;
            fill[v] += 1;
        }
        for v in 0..n {
            let range = offsets[v]..offsets[v + 1];
            let mut run: Vec<(usize, f64)> = targets[range.clone()]
                .iter()
                .copied()
                .zip(weights[range.clone()].iter().copied())
                .collect();
            run.sort_by_key(|&(t, _)| t);
            for (slot, (t, w)) in range.zip(run) {
                targets[slot] = t;
                weights[slot] = w;
            }
        }
        let degrees: Vec<f64> = (0..n)
            .map(|v| weights[offsets[v]..offsets[v + 1]].iter().sum())
            .collect();
        let total_weight = edges.iter().map(|e| e.2).sum();
        Self {
            offsets,
            targets,
            weights,
            degrees,
            total_weight,
            edge_count: edges.len(),
        }
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    /// Weighted degree of `v`.
    pub fn degree(&self, v: usize) -> f64 {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Sum of all edge weights, w(E).
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Neighbours of `v` with edge weights, in ascending neighbour order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn neighbor_count(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Every edge once as `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| v > u)
                .map(move |(v, w)| (u, v, w))
        })
    }

    /// Smallest and largest edge weight, `None` for an edgeless graph.
    pub fn weight_range(&self) -> Option<(f64, f64)> {
        self.weights.iter().fold(None, |acc, &w| match acc {
            None => Some((w, w)),
            Some((lo, hi)) => Some((lo.min(w), hi.max(w))),
        })
    }

    /// Returns a copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be positive and finite, got {factor}"
            )));
        }
        let edges: Vec<_> = self.edges().map(|(u, v, w)| (u, v, w * factor)).collect();
        Self::from_edges(self.n(), &edges)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// Membership mask for a vertex set, rejecting out-of-range ids.
    pub(crate) fn mask(&self, set: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n()];
        for &v in set {
            self.check_vertex(v)?;
            mask[v] = true;
        }
        Ok(mask)
    }

    /// Volume vol(S) = sum of degrees in S.
    pub fn volume(&self, set: &[usize]) -> Result<f64> {
        let mask = self.mask(set)?;
        Ok(mask
            .iter()
            .enumerate()
            .filter(|(_, &inside)| inside)
            .map(|(v, _)| self.degrees[v])
            .sum())
    }

    /// Boundary weight, volume and conductance of `set`.
    pub fn cut_stats(&self, set: &[usize]) -> Result<CutStats> {
        let mask = self.mask(set)?;
        Ok(self.cut_stats_masked(&mask))
    }

    pub(crate) fn cut_stats_masked(&self, mask: &[bool]) -> CutStats {
        let mut boundary = 0.0;
        let mut volume = 0.0;
        for v in (0..self.n()).filter(|&v| mask[v]) {
            volume += self.degrees[v];
            boundary += self
                .neighbors(v)
                .filter(|&(u, _)| !mask[u])
                .map(|(_, w)| w)
                .sum::<f64>();
        }
        CutStats::new(boundary, volume)
    }

    /// Subgraph induced by `set`. New vertex `i` is the `i`-th smallest id of
    /// `set`; the returned vector maps new ids back to ids of `self`.
    pub fn induced_subgraph(&self, set: &[usize]) -> Result<(WeightedGraph, Vec<usize>)> {
        let mask = self.mask(set)?;
        let to_old: Vec<usize> = (0..self.n()).filter(|&v| mask[v]).collect();
        let mut to_new = vec![usize::MAX; self.n()];
        for (new, &old) in to_old.iter().enumerate() {
            to_new[old] = new;
        }
        let edges: Vec<_> = to_old
            .iter()
            .flat_map(|&old| {
                let to_new = &to_new;
                self.neighbors(old)
                    .filter(move |&(t, _)| t > old && to_new[t] != usize::MAX)
                    .map(move |(t, w)| (to_new[old], to_new[t], w))
            })
            .collect();
        Ok((Self::from_simple_edges(to_old.len(), &edges), to_old))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..self.n() {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            let mut component = Vec::new();
            while let Some(v) = queue.pop_front() {
                component.push(v);
                for (u, _) in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.connected_components().len() == 1
    }

    /// Returns a copy without any edge incident to a vertex in `isolate`.
    pub(crate) fn without_vertices_edges(&self, isolate: &[bool]) -> Self {
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v, _)| !isolate[u] && !isolate[v])
            .collect();
        Self::from_simple_edges(self.n(), &edges)
    }
}
