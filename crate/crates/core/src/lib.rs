//! Central configurations of the planar 1+N coorbital problem.
//!
//! N infinitesimal masses sit on the unit circle around one dominant mass.
//! A configuration of angles `θ` is a relative equilibrium for the mass
//! vector `m` exactly when `F m = 0`, where `F` is the antisymmetric matrix
//! of kernel-function values `f(θ_i - θ_j)`. Equivalently `θ` is a critical
//! point of the effective (Hall) potential `V`.
//!
//! The crate is organised by concern:
//!
//! - [`geometry`]: chord distances, the kernel function `f`, the potential,
//!   its gradient and Hessian, for any exponent `s >= 2` (`s = 3` Newtonian,
//!   `s = 2` point vortices).
//! - [`system`]: the mass coefficient matrix, Pfaffians, numerical kernels,
//!   positive mass cones and the reflection-symmetric families.
//! - [`stability`]: Hessian inertia, Morse index and the block reduction of
//!   the symmetric 1+5 Hessian.
//! - [`distance`]: the mutual-distance formulation, used as an independent
//!   check of the angular equations for three bodies.
//! - [`solvers`]: the 1+2+1 problem, Newton solvers, region filters and
//!   zero-curve tracing.
//! - [`certify`]: outward-rounded interval arithmetic and the computer
//!   assisted certificates built on it.

pub mod certify;
pub mod distance;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod solvers;
pub mod stability;
pub mod system;

pub use error::{Error, Result};
pub use geometry::{MassVector, PotentialExponent, RingConfiguration};
pub use system::{CoorbitalMatrix, FamilyKind, KernelBasis, SymmetricFamily};
