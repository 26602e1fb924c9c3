//! Lubrication forces and torques between two nearly touching rigid
//! particles in Stokes flow.
//!
//! The library builds the thin-gap velocity and pressure fields for each
//! boundary-data sub-flow, integrates their traction over the gap boundary,
//! and evaluates the closed-form blow-up expansions in the gap width `eps`
//! for comparison.

pub mod asymptotics;
pub mod dualcheck;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod jet;
pub mod quadrature;
pub mod special;
pub mod traction;

pub use asymptotics::{force_asymptotic, AsymptoticOptions, SignPolicy, TheoremResult};
pub use error::{Error, Result};
pub use fields::{boundary_target, divergence, eval_field, FieldEval, ProblemParams};
pub use geometry::{gap, surface_sample, Dimension, GapProfile, ProfileKind, Side, SurfacePoint};
pub use quadrature::{QuadResult, QuadSpec};
pub use special::{AsymptoticExpansion, AsymptoticTerm, Residual};
pub use traction::{force_numeric, total_numeric, ForceTorque};
