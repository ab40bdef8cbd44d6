//! Numerical toolkit for the Neumann problem of the damped sine-Gordon
//! equation with a small viscous term `ε u_xxt`.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: parameters, derived decay constants, grids and fields.
//! - [`spectrum`]: per-mode quantities of the linear third-order operator
//!   and the stable time kernel `H_n(t)`.
//! - [`green`]: the cosine-series Green function with certified truncation
//!   and the decay-envelope fits.
//! - [`waves`]: closed-form traveling waves of the reduced hyperbolic
//!   equation, their derivatives and residual checks.
//! - [`solver`]: θ-scheme method-of-lines solvers and the Picard iteration
//!   for the remainder `d = u_ε − U`.
//! - [`remainder`]: sup-norm curves, the Gronwall-type evaluator, the
//!   closed-form bound and the `ε^h` scaling study.
//! - [`bench`]: micro-benchmarks with a CSV baseline.
//! - [`cli`]: config parsing and the batch front end behind `sgtool`.

pub mod bench;
pub mod cli;
pub mod error;
pub mod green;
pub mod model;
pub mod remainder;
pub mod solver;
pub mod spectrum;
pub mod waves;

pub use error::{Error, Result};
pub use model::{derived_constants, DerivedConstants, Grid1D, JunctionParams, ProblemData, SpaceTimeField, TimeAxis};
pub use waves::{ASign, TravelingWave, WaveFamily};
