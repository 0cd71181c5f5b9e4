//! Exact scalars, dense matrices, fraction-free and sparse elimination, and the
//! coordinate system on pairs of symmetric matrices.

pub mod elimination;
mod gaussint;
pub mod matrix;
mod rational;
pub mod scalar;
pub mod sparse;
pub mod sympair;

pub use elimination::{pivot_columns, rank, solve_affine, Echelon};
pub use matrix::ExactMatrix;
pub use scalar::GaussianRational;
pub use sparse::SparseLu;
pub use sympair::{coordinate, pair_space_dim, position, vectorize_sym_pair, SymPair, Which};
