//! Quasilinear heat conduction with a finite heat-front velocity.
//!
//! The crate provides the modified flux law and its effective diffusivity
//! ([`flux_law`]), the self-similar profile ODE with front location
//! ([`similarity`]), explicit space-time solvers ([`pde`]), verification
//! harnesses ([`analysis`]) and the scenario runner behind the CLI
//! ([`scenario`]).

// `!(x > 0.0)` is used throughout so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod flux_law;
pub mod pde;
pub mod scenario;
pub mod similarity;

pub use error::{AnalysisError, ParamError, SimilarityError, SolverError};
pub use flux_law::PhysParams;
