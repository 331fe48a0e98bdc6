//! Explicit finite-difference solvers on a uniform 1-D grid.
//!
//! Forward Euler in time, second-order central differences in space. The
//! quasilinear coefficient is evaluated pointwise from the lagged gradient;
//! because it never exceeds `D_T`, the linear stability bound
//! `dt ≤ dx² / (2 D_T)` covers both models.

mod gradient_form;
mod regime;
mod solver;
mod stencil;

use std::fmt;
use std::sync::Arc;

use crate::error::SolverError;

pub use gradient_form::{solve_gradient_form, step_gradient_form, GradientBoundary, GradientEdge};
pub use regime::{classify_regime, Regime};
pub use solver::{
    solve_linear, solve_quasilinear, step_linear, step_quasilinear, FrontSample, Model, Scheme,
    SolveReport, DEFAULT_CFL_SAFETY, FRONT_THRESHOLD_FACTOR,
};
pub use stencil::gradient_of;

/// Uniform grid: node `i` sits at `x0 + i·dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x0: f64,
    dx: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self, SolverError> {
        if !(dx.is_finite() && dx > 0.0) {
            return Err(SolverError::InvalidGrid(format!(
                "dx must be > 0, got {dx}"
            )));
        }
        if !x0.is_finite() {
            return Err(SolverError::InvalidGrid(format!(
                "x0 must be finite, got {x0}"
            )));
        }
        if n < 3 {
            return Err(SolverError::InvalidGrid(format!(
                "need at least 3 nodes, got {n}"
            )));
        }
        Ok(Self { x0, dx, n })
    }

    /// Grid on `[0, x_max]`; `x_max` is rounded to a whole number of cells.
    pub fn spanning(x_max: f64, dx: f64) -> Result<Self, SolverError> {
        if !(x_max.is_finite() && x_max > 0.0) {
            return Err(SolverError::InvalidGrid(format!(
                "x_max must be > 0, got {x_max}"
            )));
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err(SolverError::InvalidGrid(format!(
                "dx must be > 0, got {dx}"
            )));
        }
        let cells = (x_max / dx).round() as usize;
        Self::new(0.0, dx, cells + 1)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.x(i))
    }
}

/// Samples of a temperature (or gradient) field at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid1D,
    t: f64,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid1D, t: f64, values: Vec<f64>) -> Result<Self, SolverError> {
        if values.len() != grid.len() {
            return Err(SolverError::InvalidField(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if !t.is_finite() {
            return Err(SolverError::InvalidField(format!(
                "time stamp {t} is not finite"
            )));
        }
        if let Some(node) = values.iter().position(|v| !v.is_finite()) {
            return Err(SolverError::NonFiniteState { node, t });
        }
        Ok(Self { grid, t, values })
    }

    pub fn zeros(grid: Grid1D, t: f64) -> Self {
        Self {
            grid,
            t,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid1D, t: f64, f: impl Fn(f64) -> f64) -> Result<Self, SolverError> {
        Self::new(grid, t, grid.nodes().map(f).collect())
    }

    pub(crate) fn from_parts_unchecked(grid: Grid1D, t: f64, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, t, values }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Linear interpolation in `x`; `None` outside the grid.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let s = (x - self.grid.x0) / self.grid.dx;
        let last = (self.grid.n - 1) as f64;
        if !(s >= 0.0 && s <= last) {
            return None;
        }
        let i = (s.floor() as usize).min(self.grid.n - 2);
        let w = s - i as f64;
        Some((1.0 - w) * self.values[i] + w * self.values[i + 1])
    }
}

pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Dirichlet data: time-dependent value at the left node, constant at the right node.
#[derive(Clone)]
pub struct BoundarySpec {
    left: TimeFn,
    right: f64,
}

impl BoundarySpec {
    pub fn new(left: impl Fn(f64) -> f64 + Send + Sync + 'static, right: f64) -> Self {
        Self {
            left: Arc::new(left),
            right,
        }
    }

    /// `T(t, 0) = B √t`, zero at the far end.
    pub fn sqrt_ramp(b: f64) -> Self {
        Self::new(move |t: f64| b * t.max(0.0).sqrt(), 0.0)
    }

    /// Constant values at both ends.
    pub fn constant(left: f64, right: f64) -> Self {
        Self::new(move |_| left, right)
    }

    pub fn left(&self, t: f64) -> f64 {
        (self.left)(t)
    }

    pub fn right(&self) -> f64 {
        self.right
    }

    pub fn left_fn(&self) -> TimeFn {
        Arc::clone(&self.left)
    }
}

impl fmt::Debug for BoundarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundarySpec")
            .field("left(0)", &self.left(0.0))
            .field("right", &self.right)
            .finish()
    }
}

/// Step schedule from `t_start` to each output time, landing exactly on them.
///
/// Each segment between consecutive stops is split into equal steps no
/// larger than `dt_max`.
pub(crate) fn validate_times(
    t_start: f64,
    t_end: f64,
    out_times: &[f64],
) -> Result<Vec<f64>, SolverError> {
    if !(t_end.is_finite() && t_end > t_start) {
        return Err(SolverError::InvalidTimes(format!(
            "t_end={t_end} must exceed the initial time {t_start}"
        )));
    }
    let mut prev = t_start;
    for &t in out_times {
        if !(t > prev && t <= t_end) {
            return Err(SolverError::InvalidTimes(format!(
                "output time {t} must be strictly increasing within ({t_start}, {t_end}]"
            )));
        }
        prev = t;
    }
    let mut stops = out_times.to_vec();
    if stops.last() != Some(&t_end) {
        stops.push(t_end);
    }
    Ok(stops)
}
