//! Numerical laboratory for a 1D compressible viscous gas with volume
//! diffusion (Brenner–Navier–Stokes–Fourier), written in Lagrangian mass
//! coordinates.
//!
//! The crate builds viscous shock profiles as traveling waves, evolves the
//! viscous system with a method-of-lines finite-difference scheme, evaluates
//! the weighted relative-entropy functionals that drive a shift-based
//! contraction estimate, and numerically verifies a family of self-contained
//! scalar inequalities (a degenerate-weight nonlinear Poincaré inequality, a
//! two-variable polynomial bound, and quadratic bounds for the convex
//! function Φ(z) = z − 1 − log z).
//!
//! Module map:
//! - [`gas_model`]: gas laws, relative entropy, Rankine–Hugoniot end states.
//! - [`shock_profile`]: traveling-wave profile construction and diagnostics.
//! - [`bnsf_solver`]: finite-difference evolution of the viscous system.
//! - [`contraction_monitor`]: weight, shift ODE, entropy functionals.
//! - [`inequality_verifiers`]: direct numerical checks of scalar inequalities.
//! - [`experiments`]: vanishing-viscosity sweeps and shift-control checks.

pub mod bnsf_solver;
pub mod contraction_monitor;
mod error;
pub mod experiments;
pub mod gas_model;
pub mod inequality_verifiers;
pub mod numerics;
pub mod shock_profile;

pub use error::{Error, Result};
