//! Similarity solutions for magnetohydrodynamic free convection of a
//! power-law fluid with temperature-dependent viscosity in a porous medium,
//! over a vertical plate, a horizontal cylinder or a sphere.
//!
//! The pipeline is: [`params`] validates the dimensionless groups,
//! [`closure`] gives the Darcy velocity pointwise, [`bvp`] solves the energy
//! boundary value problem for the wall gradient `θ'(0)`, [`geometry`]
//! supplies the body-shape quadratures, and [`postprocess`] turns a solution
//! into Nusselt numbers and local heat-flux curves.

pub mod bvp;
pub mod cli;
pub mod closure;
pub mod error;
pub mod format;
pub mod geometry;
pub mod ode;
pub mod params;
pub mod postprocess;

pub use bvp::{relaxation_solve, solve, SimilaritySolution, SolveOptions};
pub use error::{Error, Result};
pub use geometry::{BodyShape, SurfacePosition};

pub use params::{DimensionalContext, FluidModel, WallModel};
