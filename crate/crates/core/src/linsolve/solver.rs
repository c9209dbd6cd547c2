use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::Serialize;

use super::laplacian::LaplacianMatrix;
use crate::error::{Error, Result};

/// Largest order solved by dense factorization under [`SolveMethod::Auto`].
pub const DENSE_LIMIT: usize = 2048;

/// Relative residual below which conjugate gradient is not pushed further.
pub const RESIDUAL_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Relative accuracy in the Laplacian energy norm.
    pub zeta: f64,
    pub max_iterations: usize,
    pub method: SolveMethod,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            zeta: 1e-8,
            max_iterations: 100_000,
            method: SolveMethod::Auto,
            seed: 0,
        }
    }
}

impl SolverOptions {
    pub fn with_zeta(self, zeta: f64) -> Self {
        Self { zeta, ..self }
    }

    pub fn with_method(self, method: SolveMethod) -> Self {
        Self { method, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.zeta > 0.0 && self.zeta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "zeta must lie in (0, 1), got {}",
                self.zeta
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "max_iterations must be positive".into(),
            ));
        }
        Ok(())
    }
}

enum Backend<'a> {
    Trivial,
    /// Cholesky factor of `L` with the last row and column removed.
    Dense(Cholesky<f64, Dyn>),
    Iterative {
        matrix: &'a LaplacianMatrix,
        residual_ratio: f64,
    },
}

/// A Laplacian prepared for repeated solves against zero-sum right-hand sides.
pub struct LaplacianSolver<'a> {
    order: usize,
    backend: Backend<'a>,
    max_iterations: usize,
}

impl<'a> LaplacianSolver<'a> {
    pub fn new(matrix: &'a LaplacianMatrix, opts: &SolverOptions) -> Result<Self> {
        opts.validate()?;
        let order = matrix.order();
        if !matrix.is_connected() {
            return Err(Error::Disconnected);
        }
        let dense = match opts.method {
            SolveMethod::Dense => true,
            SolveMethod::Iterative => false,
            SolveMethod::Auto => order <= DENSE_LIMIT,
        };
        let backend = if order <= 1 {
            Backend::Trivial
        } else if dense {
            let reduced = order - 1;
            let mut m = DMatrix::zeros(reduced, reduced);
            for i in 0..reduced {
                for (j, v) in matrix.row(i) {
                    if j < reduced {
                        m[(i, j)] = v;
                    }
                }
            }
            Backend::Dense(Cholesky::new(m).ok_or(Error::Factorization)?)
        } else {
            // Stopping rule. With r = b - L x̂ (r ⟂ 1 because b ⟂ 1):
            //   ‖x̂ - L†b‖_L² = rᵀ L† r ≤ ‖r‖² / λ₂
            //   ‖L†b‖_L²     = bᵀ L† b ≥ ‖b‖² / λ_max
            // so ‖r‖ ≤ ζ·sqrt(λ₂ / λ_max)·‖b‖ implies the energy-norm bound.
            // λ₂ is replaced by its certified lower bound and λ_max by 2·max deg.
            let min_w = matrix.min_weight().ok_or(Error::Disconnected)?;
            let total = matrix.total_weight();
            let lambda2 = min_w * (min_w / total).powi(2);
            let lambda_max = 2.0 * matrix.diagonal().iter().copied().fold(0.0, f64::max);
            let residual_ratio = (opts.zeta * (lambda2 / lambda_max).sqrt()).max(RESIDUAL_FLOOR);
            Backend::Iterative {
                matrix,
                residual_ratio,
            }
        };
        Ok(Self {
            order,
            backend,
            max_iterations: opts.max_iterations,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.backend, Backend::Dense(_))
    }

    /// Solves `L x = b` for `b ⟂ 1`, returning the solution orthogonal to 1.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.order {
            return Err(Error::InvalidParameter(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.order
            )));
        }
        let sum: f64 = b.iter().sum();
        let scale: f64 = b.iter().map(|x| x.abs()).sum();
        if sum.abs() > 1e-10 * scale.max(1.0) {
            return Err(Error::NonZeroSum { sum });
        }
        if scale == 0.0 {
            return Ok(vec![0.0; self.order]);
        }
        let mut x = match &self.backend {
            Backend::Trivial => vec![0.0; self.order],
            Backend::Dense(chol) => {
                let rhs = DVector::from_column_slice(&b[..self.order - 1]);
                let mut x: Vec<f64> = chol.solve(&rhs).iter().copied().collect();
                x.push(0.0);
                x
            }
            Backend::Iterative {
                matrix,
                residual_ratio,
            } => pcg(matrix, b, *residual_ratio, self.max_iterations)?,
        };
        let mean = x.iter().sum::<f64>() / self.order as f64;
        x.iter_mut().for_each(|v| *v -= mean);
        Ok(x)
    }
}

/// Solves `L x = b` once. See [`LaplacianSolver`] for repeated solves.
pub fn solve_laplacian(
    matrix: &LaplacianMatrix,
    b: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<f64>> {
    LaplacianSolver::new(matrix, opts)?.solve(b)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Jacobi-preconditioned conjugate gradient. Restarts from the current
/// iterate when the recurrence residual drifts from the true residual.
fn pcg(matrix: &LaplacianMatrix, b: &[f64], ratio: f64, max_iterations: usize) -> Result<Vec<f64>> {
    let n = b.len();
    let target = ratio * norm(b);
    let inv_diag: Vec<f64> = matrix
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 0.0 })
        .collect();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut lp = vec![0.0; n];
    let mut iterations = 0;

    loop {
        let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, d)| a * d).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        while norm(&r) > target {
            if iterations == max_iterations {
                return Err(Error::NoConvergence {
                    iterations,
                    residual: norm(&r),
                    target,
                });
            }
            iterations += 1;
            matrix.apply(&p, &mut lp);
            let curvature = dot(&p, &lp);
            if curvature <= 0.0 {
                break;
            }
            let alpha = rz / curvature;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * lp[i];
            }
            for i in 0..n {
                z[i] = r[i] * inv_diag[i];
            }
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        matrix.apply(&x, &mut lp);
        for i in 0..n {
            r[i] = b[i] - lp[i];
        }
        let true_residual = norm(&r);
        if true_residual <= target {
            return Ok(x);
        }
        if iterations == max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                residual: true_residual,
                target,
            });
        }
    }
}
