//! Verification harnesses: the analytic linear baseline, the symmetry group
//! with a residual-based invariance check, and PDE-versus-similarity
//! cross-validation.

mod crossval;
mod oracle;
mod symmetry;

pub use crossval::{cross_validate, cross_validate_within, FRONT_FRACTION};
pub use oracle::{iterated_erfc, linear_oracle};
pub use symmetry::{
    symmetry_residual, GroupElement, ResidualWindow, SymmetryResidual, BOUNDARY_MARGIN_NODES,
};
