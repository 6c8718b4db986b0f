//! Numerical laboratory for the superintegrable Koenigs metrics.
//!
//! Five charts are covered: the trigonometric family (TrigI), the two
//! globally defined hyperbolic families (Hyp0 on ℝ², HypPlus on H²), the
//! local-only hyperbolic cousin HypMinusLocal, and the affine family. For each
//! one the crate evaluates the Hamiltonian and its quadratic integrals,
//! classifies geodesics and evaluates their closed-form curves, integrates
//! the geodesic flow as a cross-check, and, for the two closed-orbit
//! families, computes action variables and the quantum point spectrum.
//!
//! Units: ħ = 1, mass = 1, double precision throughout.

mod dual;
pub mod error;
pub mod models;
pub mod invariants;
pub mod geodesics;
pub mod ode;
pub mod flow;
pub mod quad;
pub mod actions;
pub mod quantum;
pub mod specfun;

pub use error::{Error, Result};
pub use models::{validate_model, Family, Model, PhasePoint};
