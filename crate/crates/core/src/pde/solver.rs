use super::stencil::{advance_interior, Coefficient};
use super::{validate_times, BoundarySpec, Field};
use crate::error::SolverError;
use crate::flux_law::PhysParams;

/// Fraction of the stability limit `dx²/(2 D_T)` used for the automatic step.
pub const DEFAULT_CFL_SAFETY: f64 = 0.5;

/// Front threshold as a fraction of the largest boundary magnitude seen.
pub const FRONT_THRESHOLD_FACTOR: f64 = 1e-8;

/// Relative slack on the step-size check, absorbing rounding in `span / n`.
const CFL_SLACK: f64 = 1e-12;

/// Fraction of the domain length from the far boundary that triggers a warning.
const FAR_BOUNDARY_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// `∂T/∂t = D_T ∂²T/∂x²`.
    Linear,
    /// `∂T/∂t = D_T g²/(g²+a²) ∂²T/∂x²`, `g = ∂T/∂x`.
    Quasilinear,
}

impl Model {
    fn coefficient(self) -> Coefficient {
        match self {
            Model::Linear => Coefficient::Linear,
            Model::Quasilinear => Coefficient::Quasilinear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontSample {
    pub t: f64,
    pub x_front: f64,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub final_field: Field,
    /// One field per requested output time, in order.
    pub snapshots: Vec<Field>,
    /// Largest `x` with `T` above the front threshold, at each snapshot.
    pub front_trajectory: Vec<FrontSample>,
    pub steps_taken: usize,
    /// Largest step actually taken.
    pub dt_used: f64,
    pub warnings: Vec<String>,
}

impl SolveReport {
    /// Snapshot whose time equals `t` to within `1e-12` relative.
    pub fn snapshot_at(&self, t: f64) -> Option<&Field> {
        self.snapshots
            .iter()
            .find(|s| (s.t() - t).abs() <= 1e-12 * t.abs().max(1.0))
    }
}

/// Explicit scheme for one of the two temperature models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scheme {
    model: Model,
    params: PhysParams,
    cfl_safety: f64,
}

impl Scheme {
    pub fn new(model: Model, params: PhysParams) -> Self {
        Self {
            model,
            params,
            cfl_safety: DEFAULT_CFL_SAFETY,
        }
    }

    pub fn quasilinear(params: PhysParams) -> Self {
        Self::new(Model::Quasilinear, params)
    }

    pub fn linear(params: PhysParams) -> Self {
        Self::new(Model::Linear, params)
    }

    /// `safety` must lie in `(0, 1]`.
    pub fn with_cfl_safety(mut self, safety: f64) -> Result<Self, SolverError> {
        if !(safety > 0.0 && safety <= 1.0) {
            return Err(SolverError::InvalidGrid(format!(
                "cfl_safety must be in (0, 1], got {safety}"
            )));
        }
        self.cfl_safety = safety;
        Ok(self)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn cfl_safety(&self) -> f64 {
        self.cfl_safety
    }

    /// `cfl_safety · dx² / (2 D_T)`.
    pub fn max_dt(&self, dx: f64) -> f64 {
        self.cfl_safety * dx * dx / (2.0 * self.params.diffusivity())
    }

    fn check_dt(&self, dt: f64, dx: f64) -> Result<(), SolverError> {
        let limit = self.max_dt(dx);
        if !(dt > 0.0 && dt <= limit * (1.0 + CFL_SLACK)) {
            return Err(SolverError::CflViolation { dt, limit });
        }
        Ok(())
    }

    /// One forward-Euler step. Boundary nodes take their values at `t + dt`.
    pub fn step(&self, field: &Field, dt: f64, bc: &BoundarySpec) -> Result<Field, SolverError> {
        let grid = *field.grid();
        self.check_dt(dt, grid.dx())?;
        let t_next = field.t() + dt;
        let mut next = vec![0.0; grid.len()];
        if let Some(node) = advance_interior(
            field.values(),
            &mut next,
            dt,
            grid.dx(),
            &self.params,
            self.model.coefficient(),
        ) {
            return Err(SolverError::NonFiniteState { node, t: t_next });
        }
        apply_dirichlet(&mut next, bc, t_next)
            .map_err(|node| SolverError::NonFiniteState { node, t: t_next })?;
        Ok(Field::from_parts_unchecked(grid, t_next, next))
    }

    /// Advances `init` to `t_end`, recording a snapshot at every output time.
    ///
    /// The step is chosen automatically as the largest value not exceeding
    /// [`Scheme::max_dt`] that divides each inter-output segment evenly.
    pub fn solve(
        &self,
        init: &Field,
        bc: &BoundarySpec,
        t_end: f64,
        out_times: &[f64],
    ) -> Result<SolveReport, SolverError> {
        let grid = *init.grid();
        let stops = validate_times(init.t(), t_end, out_times)?;
        let dt_max = self.max_dt(grid.dx());
        let coefficient = self.model.coefficient();

        let mut cur = init.values().to_vec();
        let mut next = cur.clone();
        let mut t = init.t();
        let mut boundary_scale = cur[0]
            .abs()
            .max(cur[grid.len() - 1].abs())
            .max(bc.right().abs());
        let mut snapshots = Vec::with_capacity(out_times.len());
        let mut front_trajectory = Vec::with_capacity(out_times.len());
        let mut warnings = Vec::new();
        let mut steps_taken = 0;
        let mut dt_used: f64 = 0.0;

        let mut wanted = out_times.iter().peekable();
        for &stop in &stops {
            let span = stop - t;
            let n_steps = (span / dt_max).ceil().max(1.0) as usize;
            let h = span / n_steps as f64;
            self.check_dt(h, grid.dx())?;
            dt_used = dt_used.max(h);
            let seg_start = t;
            for k in 1..=n_steps {
                let t_next = if k == n_steps {
                    stop
                } else {
                    seg_start + k as f64 * h
                };
                if let Some(node) =
                    advance_interior(&cur, &mut next, h, grid.dx(), &self.params, coefficient)
                {
                    return Err(SolverError::NonFiniteState { node, t: t_next });
                }
                apply_dirichlet(&mut next, bc, t_next)
                    .map_err(|node| SolverError::NonFiniteState { node, t: t_next })?;
                boundary_scale = boundary_scale.max(next[0].abs());
                std::mem::swap(&mut cur, &mut next);
                t = t_next;
                steps_taken += 1;
            }
            if wanted.peek() == Some(&&stop) {
                wanted.next();
                let snap = Field::from_parts_unchecked(grid, t, cur.clone());
                let x_front = front_position(&snap, FRONT_THRESHOLD_FACTOR * boundary_scale);
                if x_front >= grid.x_max() - FAR_BOUNDARY_MARGIN * (grid.x_max() - grid.x0()) {
                    let msg = format!(
                        "front at x={x_front} (t={t}) is within 10% of the far boundary x={}",
                        grid.x_max()
                    );
                    log::warn!("{msg}");
                    warnings.push(msg);
                }
                front_trajectory.push(FrontSample { t, x_front });
                snapshots.push(snap);
            }
        }

        Ok(SolveReport {
            final_field: Field::from_parts_unchecked(grid, t, cur),
            snapshots,
            front_trajectory,
            steps_taken,
            dt_used,
            warnings,
        })
    }
}

fn apply_dirichlet(values: &mut [f64], bc: &BoundarySpec, t: f64) -> Result<(), usize> {
    let n = values.len();
    let left = bc.left(t);
    if !left.is_finite() {
        return Err(0);
    }
    if !bc.right().is_finite() {
        return Err(n - 1);
    }
    values[0] = left;
    values[n - 1] = bc.right();
    Ok(())
}

/// Largest node coordinate with a value strictly above `threshold`; the left
/// end of the grid when there is none.
pub(crate) fn front_position(field: &Field, threshold: f64) -> f64 {
    let grid = field.grid();
    field
        .values()
        .iter()
        .rposition(|&v| v > threshold)
        .map_or(grid.x0(), |i| grid.x(i))
}

/// One quasilinear step with the default CFL safety factor.
pub fn step_quasilinear(
    field: &Field,
    dt: f64,
    bc: &BoundarySpec,
    p: &PhysParams,
) -> Result<Field, SolverError> {
    Scheme::quasilinear(*p).step(field, dt, bc)
}

/// One linear (constant-diffusivity) step with the default CFL safety factor.
pub fn step_linear(
    field: &Field,
    dt: f64,
    bc: &BoundarySpec,
    p: &PhysParams,
) -> Result<Field, SolverError> {
    Scheme::linear(*p).step(field, dt, bc)
}

pub fn solve_quasilinear(
    init: &Field,
    bc: &BoundarySpec,
    p: &PhysParams,
    t_end: f64,
    out_times: &[f64],
) -> Result<SolveReport, SolverError> {
    Scheme::quasilinear(*p).solve(init, bc, t_end, out_times)
}

pub fn solve_linear(
    init: &Field,
    bc: &BoundarySpec,
    p: &PhysParams,
    t_end: f64,
    out_times: &[f64],
) -> Result<SolveReport, SolverError> {
    Scheme::linear(*p).solve(init, bc, t_end, out_times)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::Grid1D;

    fn params() -> PhysParams {
        PhysParams::from_a_squared(1.0, 0.001).unwrap()
    }

    fn grid() -> Grid1D {
        Grid1D::new(0.0, 0.05, 41).unwrap()
    }

    #[test]
    fn uniform_field_is_unchanged() {
        let p = params();
        let f = Field::from_fn(grid(), 0.0, |_| 0.7).unwrap();
        let bc = BoundarySpec::constant(0.7, 0.7);
        let dt = Scheme::quasilinear(p).max_dt(0.05);
        let out = step_quasilinear(&f, dt, &bc, &p).unwrap();
        assert_eq!(out.values(), f.values());
        assert_eq!(out.t(), dt);
        let out = step_linear(&f, dt, &bc, &p).unwrap();
        assert_eq!(out.values(), f.values());
    }

    #[test]
    fn linear_ramp_is_unchanged_by_linear_step() {
        let p = params();
        // dx = 1/4 keeps every node and difference exact.
        let g = Grid1D::new(0.0, 0.25, 9).unwrap();
        let f = Field::from_fn(g, 0.0, |x| 1.0 - 0.125 * x).unwrap();
        let bc = BoundarySpec::constant(1.0, 0.75);
        let dt = Scheme::linear(p).max_dt(0.25);
        let out = step_linear(&f, dt, &bc, &p).unwrap();
        assert_eq!(out.values(), f.values());
        let report = solve_linear(&f, &bc, &p, 0.5, &[0.25, 0.5]).unwrap();
        assert_eq!(report.final_field.values(), f.values());
    }

    #[test]
    fn cfl_violation_is_rejected() {
        let p = params();
        let f = Field::zeros(grid(), 0.0);
        let bc = BoundarySpec::constant(0.0, 0.0);
        let limit = Scheme::quasilinear(p).max_dt(0.05);
        assert!((limit - 0.25 * 0.05 * 0.05).abs() < 1e-18);
        assert!(matches!(
            step_quasilinear(&f, 1.01 * limit, &bc, &p),
            Err(SolverError::CflViolation { .. })
        ));
        assert!(step_quasilinear(&f, -1.0, &bc, &p).is_err());
    }

    #[test]
    fn zero_data_stays_zero() {
        let p = params();
        let f = Field::zeros(grid(), 0.0);
        let bc = BoundarySpec::constant(0.0, 0.0);
        let report = solve_quasilinear(&f, &bc, &p, 0.5, &[0.1, 0.5]).unwrap();
        assert!(report.final_field.values().iter().all(|&v| v == 0.0));
        assert!(report.front_trajectory.iter().all(|s| s.x_front == 0.0));
    }

    #[test]
    fn solve_lands_on_output_times() {
        let p = params();
        let init = Field::zeros(grid(), 0.0);
        let bc = BoundarySpec::sqrt_ramp(1.0);
        let outs = [0.01, 0.0333, 0.1];
        let report = solve_quasilinear(&init, &bc, &p, 0.1, &outs).unwrap();
        let times: Vec<f64> = report.snapshots.iter().map(Field::t).collect();
        assert_eq!(times, outs);
        assert_eq!(report.final_field.t(), 0.1);
        assert!(report.dt_used <= Scheme::quasilinear(p).max_dt(0.05) * (1.0 + 1e-12));
        assert_eq!(report.final_field.values()[0], 0.1f64.sqrt());
        assert!(report
            .front_trajectory
            .windows(2)
            .all(|w| w[0].x_front <= w[1].x_front));
    }

    #[test]
    fn bad_time_requests() {
        let p = params();
        let init = Field::zeros(grid(), 0.0);
        let bc = BoundarySpec::sqrt_ramp(1.0);
        assert!(matches!(
            solve_quasilinear(&init, &bc, &p, 0.0, &[]),
            Err(SolverError::InvalidTimes(_))
        ));
        assert!(solve_quasilinear(&init, &bc, &p, 1.0, &[0.5, 0.2]).is_err());
    }

    #[test]
    fn non_finite_boundary_is_reported() {
        let p = params();
        let init = Field::zeros(grid(), 0.0);
        let bc = BoundarySpec::new(|t| if t > 0.05 { f64::NAN } else { 0.0 }, 0.0);
        assert!(matches!(
            solve_linear(&init, &bc, &p, 0.1, &[]),
            Err(SolverError::NonFiniteState { node: 0, .. })
        ));
    }

    #[test]
    fn warns_when_front_nears_far_boundary() {
        let p = params();
        let g = Grid1D::new(0.0, 0.05, 21).unwrap();
        let init = Field::zeros(g, 0.0);
        let report = solve_linear(&init, &BoundarySpec::sqrt_ramp(1.0), &p, 1.0, &[1.0]).unwrap();
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn checkerboard_with_zero_central_gradient_is_frozen() {
        // Central differences vanish at every interior node, so the
        // quasilinear coefficient is exactly zero.
        let p = params();
        let vals: Vec<f64> = (0..41)
            .map(|i| if i % 2 == 0 { 1.0 } else { 0.0 })
            .collect();
        let f = Field::new(grid(), 0.0, vals).unwrap();
        let bc = BoundarySpec::constant(1.0, 1.0);
        let dt = Scheme::quasilinear(p).max_dt(0.05);
        assert_eq!(
            step_quasilinear(&f, dt, &bc, &p).unwrap().values(),
            f.values()
        );
    }
}
