//! Lagrangian submodules over the dual numbers `K[ε]` and orthogonal Hecke
//! transformations of split orthogonal bundles over the projective line.
//!
//! Everything is exact: scalars live in `Q` or a prime field `F_p` with `p`
//! odd, and every structural claim is decided by rank computations.

pub mod dual_module;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod hecke;
pub mod lattice;
pub mod low_rank;
pub mod matrix;
pub mod quad_space;
pub mod sample;
pub mod strata;
pub mod tangent;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use matrix::ExactMatrix;
