//! Numerical stability of explicit Runge-Kutta finite-difference schemes
//! for the nonlinear Schrödinger equation.
//!
//! The crate provides, for 1/2/3-dimensional uniform grids:
//!
//! - second-order (`cd2`) and fourth-order two-step compact (`shoc4`)
//!   Laplacian stencils with Dirichlet, Laplacian-zero, modulus-squared
//!   Dirichlet, and periodic boundary handling ([`laplacian`],
//!   [`boundary`]);
//! - an RK4 method-of-lines integrator with blow-up detection and an
//!   empirical stability-threshold search ([`integrator`]);
//! - closed-form linear and linearized (Gershgorin-based) time-step bounds
//!   together with the per-scheme disk tables they come from
//!   ([`stability`]);
//! - explicit scheme matrices, disk extraction, circulant spectra, and a
//!   dense Jacobi eigenvalue oracle for verification at desk scale
//!   ([`specmat`]);
//! - the experiment presets: 1D bright soliton, 2D vortex pair, 3D kicked
//!   Gaussian ([`experiments`]).

pub mod boundary;
pub mod config;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod integrator;
pub mod laplacian;
pub mod specmat;
pub mod stability;

pub use boundary::{BoundaryCoeffs, BoundaryKind};
pub use config::{ResolvedRun, RunConfig};
pub use error::{Error, Result};
pub use grid::{classify_points, ComplexField, GridSpec, PhysParams};
pub use integrator::{find_threshold, integrate, Problem, RunRecord, StepConfig};
pub use laplacian::{cd_laplacian, shoc_laplacian, SchemeOrder};
pub use stability::{linear_bound, linearized_bound, StabilityReport};
