//! Numerical library for the square-root Laplacian on R^3: explicit resolvent
//! kernels, modified Lippmann-Schwinger solvers for generalized eigenfunctions
//! of sqrt(-Laplace) + V, and verification functionals (radiation conditions,
//! symbol identities, far-field decay rates).
//!
//! The special-function and kernel layers are generic over the scalar type
//! through [`scalar::Scalar`]; the grid, operator and solver layers work on
//! the concrete [`Real`] alias.

pub mod error;
pub mod farfield;
pub mod grids;
pub mod kernels;
pub mod operators;
pub mod quad;
pub mod scalar;
pub mod solver;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};

/// Default scalar used by the grid/operator/solver layers.
pub type Real = f64;
/// Complex number over [`Real`].
pub type Cplx = num_complex::Complex<f64>;
/// Complex number over `f32` (single-precision instantiation of the generic layers).
pub type Cplx32 = num_complex::Complex<f32>;
