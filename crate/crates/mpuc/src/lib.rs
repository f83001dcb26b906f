//! Right-hand-side multi-parametric analysis for unit-commitment /
//! economic-dispatch planning.
//!
//! The library lowers a UCED planning case into a standard matrix form whose
//! line-capacity rows carry upgrade parameters θ, solves the parametric LP
//! relaxation into critical regions with affine value functions, runs an
//! extended branch-and-bound over the commitment binaries to produce exact or
//! gap-certified piecewise-affine value functions over the parameter box, and
//! turns the result into line-upgrade rankings and budget allocations.

pub mod cases;
pub mod error;
pub mod geometry;
pub mod lp;
pub mod model;
pub mod mplp;

pub use error::{Error, Result};
