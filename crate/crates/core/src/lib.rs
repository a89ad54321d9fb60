//! Numerical ranges and numerical shadows of complex matrices.
//!
//! The numerical range `W(A)` of an `N x N` matrix is the set of expectation
//! values `<psi|A|psi>` over unit vectors; it coincides with the image of the
//! set of density matrices under `rho -> Tr(rho A)`, an orthogonal projection
//! onto a two-plane followed by a similarity. The numerical shadow is the
//! probability measure obtained by pushing the Fubini-Study measure on pure
//! states (or an induced measure on mixed states) through the same map.
//!
//! All matrix routines are generic over the real scalar type (`f32` or `f64`)
//! via [`Real`]; the aliases below fix the double-precision instantiation
//! used by the CLI and the statistical machinery.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod normalize;
pub mod randshadow;
pub mod range;
pub mod sampling;
pub mod scalar;
pub mod shadow;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Single-precision complex scalar.
pub type C32 = num_complex::Complex<f32>;

/// Double-precision dense complex matrix.
pub type Matrix = linalg::ComplexMatrix<f64>;
/// Single-precision dense complex matrix.
pub type Matrix32 = linalg::ComplexMatrix<f32>;

pub type EigenSystem = linalg::EigenSystem<f64>;
pub type HermitianDecomposition = linalg::HermitianDecomposition<f64>;
pub type CenteredForm = normalize::CenteredForm<f64>;
pub type RangeBoundary = range::RangeBoundary<f64>;
pub type EllipseParams = range::EllipseParams<f64>;
pub type PureState = sampling::PureState<f64>;
pub type DensityMatrix = sampling::DensityMatrix<f64>;
pub type Trajectory = dynamics::Trajectory<f64>;
pub type TrajectorySpaces = dynamics::TrajectorySpaces<f64>;
