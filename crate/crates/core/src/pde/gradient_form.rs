//! Conservative solver for the gradient `H = ∂T/∂x`.
//!
//! Differentiating the quasilinear equation in `x` gives
//! `∂H/∂t = ∂/∂x (D_T H²/(H²+a²) ∂H/∂x)`, a nonlinear diffusion equation
//! whose coefficient depends on `H` itself. Nodes are treated as cell
//! centres of width `dx`; face fluxes use the arithmetic mean of the two
//! adjacent `H` values, so with zero-flux ends `Σ H·dx` is conserved up to
//! rounding.

use super::{validate_times, Field, SolveReport, TimeFn};
use crate::error::SolverError;
use crate::flux_law::{effective_diffusivity, PhysParams};
use crate::pde::solver::{FrontSample, DEFAULT_CFL_SAFETY};

/// Treatment of one end of the gradient domain.
#[derive(Clone)]
pub enum GradientEdge {
    /// No flux through the boundary face.
    ZeroFlux,
    /// The end node is pinned to the given value.
    Dirichlet(TimeFn),
    /// Boundary flux equal to the rate of change of the given temperature
    /// trace at that end. Over a step `[t, t+dt]` the face transports exactly
    /// `trace(t+dt) − trace(t)`, so `Σ H·dx` tracks the temperature drop
    /// across the domain.
    TemperatureTrace(TimeFn),
}

impl std::fmt::Debug for GradientEdge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GradientEdge::ZeroFlux => f.write_str("ZeroFlux"),
            GradientEdge::Dirichlet(g) => write!(f, "Dirichlet(at 0: {})", g(0.0)),
            GradientEdge::TemperatureTrace(g) => write!(f, "TemperatureTrace(at 0: {})", g(0.0)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GradientBoundary {
    pub left: GradientEdge,
    pub right: GradientEdge,
}

impl GradientBoundary {
    pub fn zero_flux() -> Self {
        Self {
            left: GradientEdge::ZeroFlux,
            right: GradientEdge::ZeroFlux,
        }
    }
}

fn max_dt(dx: f64, p: &PhysParams) -> f64 {
    DEFAULT_CFL_SAFETY * dx * dx / (2.0 * p.diffusivity())
}

fn check_dt(dt: f64, dx: f64, p: &PhysParams) -> Result<(), SolverError> {
    let limit = max_dt(dx, p);
    if !(dt > 0.0 && dt <= limit * (1.0 + 1e-12)) {
        return Err(SolverError::CflViolation { dt, limit });
    }
    Ok(())
}

/// Boundary face contribution: `dt · F` at the left face (`sign = 1`) or
/// right face (`sign = -1` is applied by the caller).
fn edge_transport(edge: &GradientEdge, t: f64, dt: f64) -> f64 {
    match edge {
        GradientEdge::ZeroFlux | GradientEdge::Dirichlet(_) => 0.0,
        GradientEdge::TemperatureTrace(trace) => trace(t + dt) - trace(t),
    }
}

/// One conservative step of `src` (at time `t`) into `dst`.
fn advance(
    src: &[f64],
    dst: &mut [f64],
    t: f64,
    dt: f64,
    dx: f64,
    p: &PhysParams,
    bc: &GradientBoundary,
) -> Option<usize> {
    let n = src.len();
    let r = dt / dx;
    let inv_dx = 1.0 / dx;
    // dt·F at the left face of cell i, carried across the loop.
    let mut left_transport = edge_transport(&bc.left, t, dt);
    for i in 0..n {
        let right_transport = if i + 1 < n {
            let mean = 0.5 * (src[i] + src[i + 1]);
            r * effective_diffusivity(mean, p) * (src[i + 1] - src[i])
        } else {
            edge_transport(&bc.right, t, dt)
        };
        dst[i] = src[i] + (right_transport - left_transport) * inv_dx;
        left_transport = right_transport;
    }
    let t_next = t + dt;
    if let GradientEdge::Dirichlet(value) = &bc.left {
        dst[0] = value(t_next);
    }
    if let GradientEdge::Dirichlet(value) = &bc.right {
        dst[n - 1] = value(t_next);
    }
    dst.iter().position(|v| !v.is_finite())
}

/// One conservative update `H_i += (dt/dx)(F_{i+1/2} − F_{i−1/2})` with
/// `F_{i+1/2} = D_eff(H̄) (H_{i+1} − H_i)/dx`, `H̄` the face mean.
pub fn step_gradient_form(
    hfield: &Field,
    dt: f64,
    p: &PhysParams,
    bc: &GradientBoundary,
) -> Result<Field, SolverError> {
    let grid = *hfield.grid();
    check_dt(dt, grid.dx(), p)?;
    let mut next = vec![0.0; grid.len()];
    if let Some(node) = advance(hfield.values(), &mut next, hfield.t(), dt, grid.dx(), p, bc) {
        return Err(SolverError::NonFiniteState {
            node,
            t: hfield.t() + dt,
        });
    }
    Ok(Field::from_parts_unchecked(grid, hfield.t() + dt, next))
}

/// Evolves a gradient field to `t_end` with automatic steps, as
/// [`crate::pde::Scheme::solve`] does for temperature.
///
/// The front trajectory records the largest `x` with `|H|` above `1e-8`
/// times the largest `|H|` seen at that snapshot.
pub fn solve_gradient_form(
    init: &Field,
    bc: &GradientBoundary,
    p: &PhysParams,
    t_end: f64,
    out_times: &[f64],
) -> Result<SolveReport, SolverError> {
    let grid = *init.grid();
    let stops = validate_times(init.t(), t_end, out_times)?;
    let dt_max = max_dt(grid.dx(), p);

    let mut cur = init.values().to_vec();
    let mut next = cur.clone();
    let mut t = init.t();
    let mut snapshots = Vec::with_capacity(out_times.len());
    let mut front_trajectory = Vec::with_capacity(out_times.len());
    let mut steps_taken = 0;
    let mut dt_used: f64 = 0.0;

    let mut wanted = out_times.iter().peekable();
    for &stop in &stops {
        let span = stop - t;
        let n_steps = (span / dt_max).ceil().max(1.0) as usize;
        let h = span / n_steps as f64;
        check_dt(h, grid.dx(), p)?;
        dt_used = dt_used.max(h);
        let seg_start = t;
        for k in 1..=n_steps {
            let t_prev = t;
            let t_next = if k == n_steps {
                stop
            } else {
                seg_start + k as f64 * h
            };
            if let Some(node) = advance(&cur, &mut next, t_prev, t_next - t_prev, grid.dx(), p, bc)
            {
                return Err(SolverError::NonFiniteState { node, t: t_next });
            }
            std::mem::swap(&mut cur, &mut next);
            t = t_next;
            steps_taken += 1;
        }
        if wanted.peek() == Some(&&stop) {
            wanted.next();
            let scale = cur.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let threshold = super::FRONT_THRESHOLD_FACTOR * scale;
            let x_front = cur
                .iter()
                .rposition(|v| v.abs() > threshold)
                .map_or(grid.x0(), |i| grid.x(i));
            front_trajectory.push(FrontSample { t, x_front });
            snapshots.push(Field::from_parts_unchecked(grid, t, cur.clone()));
        }
    }

    Ok(SolveReport {
        final_field: Field::from_parts_unchecked(grid, t, cur),
        snapshots,
        front_trajectory,
        steps_taken,
        dt_used,
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::Grid1D;
    use std::sync::Arc;

    fn params() -> PhysParams {
        PhysParams::from_a_squared(1.0, 0.001).unwrap()
    }

    #[test]
    fn uniform_gradient_is_unchanged() {
        let p = params();
        let grid = Grid1D::new(0.0, 0.1, 21).unwrap();
        let h = Field::from_fn(grid, 0.0, |_| -0.4).unwrap();
        let dt = max_dt(0.1, &p);
        let out = step_gradient_form(&h, dt, &p, &GradientBoundary::zero_flux()).unwrap();
        assert_eq!(out.values(), h.values());
    }

    #[test]
    fn zero_flux_conserves_mass_per_step() {
        let p = params();
        let grid = Grid1D::new(0.0, 0.05, 81).unwrap();
        let h = Field::from_fn(grid, 0.0, |x| (-(x - 2.0).powi(2)).exp() - 0.3 * x.sin()).unwrap();
        let mass = |f: &Field| f.values().iter().sum::<f64>() * f.grid().dx();
        let m0 = mass(&h);
        let out =
            step_gradient_form(&h, max_dt(0.05, &p), &p, &GradientBoundary::zero_flux()).unwrap();
        assert!(((mass(&out) - m0) / m0).abs() <= 1e-12);
    }

    #[test]
    fn trace_boundary_transports_exact_increment() {
        let p = params();
        let grid = Grid1D::new(0.0, 0.1, 41).unwrap();
        let h = Field::zeros(grid, 0.0);
        let bc = GradientBoundary {
            left: GradientEdge::TemperatureTrace(Arc::new(|t: f64| t.sqrt())),
            right: GradientEdge::ZeroFlux,
        };
        let report = solve_gradient_form(&h, &bc, &p, 0.25, &[0.25]).unwrap();
        // Σ H dx = T(x_max) − T(0) = −√t.
        let mass: f64 = report.final_field.values().iter().sum::<f64>() * 0.1;
        assert!((mass + 0.5).abs() < 1e-12, "{mass}");
    }

    #[test]
    fn dirichlet_edges_are_pinned() {
        let p = params();
        let grid = Grid1D::new(0.0, 0.1, 11).unwrap();
        let h = Field::zeros(grid, 0.0);
        let bc = GradientBoundary {
            left: GradientEdge::Dirichlet(Arc::new(|_| -1.0)),
            right: GradientEdge::Dirichlet(Arc::new(|_| 0.5)),
        };
        let out = step_gradient_form(&h, 1e-4, &p, &bc).unwrap();
        assert_eq!(out.values()[0], -1.0);
        assert_eq!(out.values()[10], 0.5);
    }

    #[test]
    fn rejects_unstable_step() {
        let p = params();
        let grid = Grid1D::new(0.0, 0.1, 11).unwrap();
        let h = Field::zeros(grid, 0.0);
        assert!(matches!(
            step_gradient_form(&h, 0.01, &p, &GradientBoundary::zero_flux()),
            Err(SolverError::CflViolation { .. })
        ));
    }
}
