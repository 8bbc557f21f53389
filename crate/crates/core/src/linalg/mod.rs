//! Exact arithmetic kernels: integer lattices, GF(2) and polytope bounds.

pub mod f2;
pub mod int;
pub mod polytope;

use thiserror::Error;

pub use f2::{affine_meets_subspace, gf2_solve, BitVec, F2AffineSet, F2Matrix, F2Solution, F2Solver, Subspace};
pub use int::{integer_kernel_basis, smith_normal_form, solve_integer, IntMatrix, SmithForm};
pub use polytope::{box_bounds, lattice_points, polytope_box_bounds, BoxBounds, Interval, System};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
}
