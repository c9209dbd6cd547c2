//! Laplacian assembly, linear solves, electrical potentials and exact
//! effective resistances.

mod laplacian;
pub mod oracle;
mod potential;
mod solver;

pub use laplacian::{assemble_laplacian, LaplacianMatrix};
pub use oracle::{
    algebraic_connectivity, exact_reff, exact_resistance_diameter, exact_resistance_matrix,
    laplacian_pseudo_inverse,
};
pub(crate) use potential::potential_with;
pub use potential::{
    implied_additive_accuracy, lambda2_lower_bound, required_solver_accuracy, st_potential,
    PotentialVector, ZETA_CEILING, ZETA_FLOOR,
};
pub use solver::{
    solve_laplacian, LaplacianSolver, SolveMethod, SolverOptions, DENSE_LIMIT, RESIDUAL_FLOOR,
};
