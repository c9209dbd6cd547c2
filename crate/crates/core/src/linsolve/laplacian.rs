use nalgebra::DMatrix;

use crate::graph::WeightedGraph;

/// Sparse symmetric Laplacian `L = D - W` in compressed row form.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    offsets: Vec<usize>,
    columns: Vec<usize>,
    values: Vec<f64>,
    diagonal: Vec<f64>,
}

pub fn assemble_laplacian(g: &WeightedGraph) -> LaplacianMatrix {
    let n = g.n();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut columns = Vec::with_capacity(n + 2 * g.m());
    let mut values = Vec::with_capacity(n + 2 * g.m());
    offsets.push(0);
    for v in 0..n {
        let mut diagonal_written = false;
        for (u, w) in g.neighbors(v) {
            if !diagonal_written && u > v {
                columns.push(v);
                values.push(g.degree(v));
                diagonal_written = true;
            }
            columns.push(u);
            values.push(-w);
        }
        if !diagonal_written {
            columns.push(v);
            values.push(g.degree(v));
        }
        offsets.push(columns.len());
    }
    LaplacianMatrix {
        offsets,
        columns,
        values,
        diagonal: g.degrees().to_vec(),
    }
}

impl LaplacianMatrix {
    pub fn order(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Non-zero entries of row `i` as `(column, value)`, ascending by column.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[i]..self.offsets[i + 1];
        self.columns[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    /// `y = L x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, out) in y.iter_mut().enumerate() {
            *out = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.order();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Sum of edge weights recovered from the diagonal.
    pub fn total_weight(&self) -> f64 {
        self.diagonal.iter().sum::<f64>() / 2.0
    }

    /// Smallest edge weight, `None` when there are no edges.
    pub fn min_weight(&self) -> Option<f64> {
        self.values
            .iter()
            .filter(|&&v| v < 0.0)
            .map(|v| -v)
            .reduce(f64::min)
    }

    /// True when the off-diagonal pattern forms a single connected component.
    pub fn is_connected(&self) -> bool {
        let n = self.order();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for (u, value) in self.row(v) {
                if u != v && value != 0.0 && !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }
}
