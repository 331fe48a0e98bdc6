//! Self-similar reduction of the quasilinear heat equation.
//!
//! The dilatation invariants `x/√t` and `T/√t` give the substitution
//! `z = x/√t`, `T = √t f(z)`, which turns the PDE into the second-order ODE
//!
//! ```text
//! 2 D_T f'' f'² = (f − z f') (f'² + a²)
//! ```
//!
//! Posed as an initial-value problem with `f(0) = B`, `f'(0) = C`, the zero
//! of `f` is the heat front `z₀`; in physical variables the front sits at
//! `x₀(t) = z₀ √t` and moves with speed `V₀(t) = z₀ / (2√t)`.

pub mod dopri;

use crate::error::SimilarityError;
use crate::flux_law::PhysParams;
use dopri::{DenseSolution, Settings, Termination};

/// Relative factor for the slope guard `fp_min = factor · max(|C|, a)`.
pub const SLOPE_GUARD_FACTOR: f64 = 1e-12;

/// Integration stops once `f ≤ -STOP_FRACTION · |B|`.
pub const STOP_FRACTION: f64 = 0.1;

/// Width below which a front bracket is accepted.
pub const FRONT_TOLERANCE: f64 = 1e-8;

/// Second derivative `f''` from the reduced equation.
///
/// Singular at `f' = 0`; returns [`SimilarityError::DegenerateSlope`] when
/// `|f'| ≤ fp_min`.
pub fn ode_rhs(
    z: f64,
    f: f64,
    fp: f64,
    p: &PhysParams,
    fp_min: f64,
) -> Result<f64, SimilarityError> {
    if !(fp.abs() > fp_min) {
        return Err(SimilarityError::DegenerateSlope { z, fp });
    }
    let fp2 = fp * fp;
    Ok((f - z * fp) * (fp2 + p.a_squared()) / (2.0 * p.diffusivity() * fp2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Points of the uniform output grid on `[0, z_max]`.
    pub uniform_samples: usize,
    pub max_steps: usize,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            uniform_samples: 1001,
            max_steps: 1_000_000,
        }
    }
}

type EventFn<'a> = &'a dyn Fn(f64, &[f64; 2]) -> f64;

/// How the profile integration ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopReason {
    /// Reached `z_max`.
    ReachedEnd,
    /// `f` fell to the stop level `-0.1·|B|` just past the front.
    BelowStopLevel { z: f64 },
    /// `|f'|` fell to the singularity guard.
    DegenerateSlope { z: f64 },
}

/// Sampled solution of the reduced ODE, with its continuous extension.
#[derive(Debug, Clone)]
pub struct SimilarityProfile {
    z: Vec<f64>,
    f: Vec<f64>,
    fp: Vec<f64>,
    params: PhysParams,
    boundary_value: f64,
    boundary_slope: f64,
    stop: StopReason,
    dense: Option<DenseSolution<2>>,
}

impl SimilarityProfile {
    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn fp(&self) -> &[f64] {
        &self.fp
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    /// `B = f(0)`.
    pub fn boundary_value(&self) -> f64 {
        self.boundary_value
    }

    /// `C = f'(0)`.
    pub fn boundary_slope(&self) -> f64 {
        self.boundary_slope
    }

    pub fn stop_reason(&self) -> StopReason {
        self.stop
    }

    /// Last covered coordinate.
    pub fn z_end(&self) -> f64 {
        *self.z.last().expect("profile has at least two samples")
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Index of the first sample with `f ≤ 0`. Samples from here on belong to
    /// the unphysical tail past the front.
    pub fn tail_start(&self) -> Option<usize> {
        self.f.iter().position(|&v| v <= 0.0)
    }

    /// `(f, f')` at `z` from the continuous extension; `z` is clamped to the
    /// covered interval.
    pub fn eval(&self, z: f64) -> (f64, f64) {
        match &self.dense {
            Some(d) => {
                let y = d.eval(z);
                (y[0], y[1])
            }
            None => (self.f[0], self.fp[0]),
        }
    }
}

/// Integrates the reduced equation from `z = 0` with `f(0) = B`, `f'(0) = C`.
///
/// Stops at `z_max`, when `f` reaches `-0.1·|B|`, or when `|f'|` reaches the
/// singularity guard, whichever comes first. The returned samples are the
/// accepted integrator steps merged with a uniform grid of
/// `opts.uniform_samples` points on `[0, z_max]` (truncated at the stop).
pub fn integrate_profile(
    boundary_value: f64,
    boundary_slope: f64,
    p: &PhysParams,
    z_max: f64,
    opts: &IntegrationOptions,
) -> Result<SimilarityProfile, SimilarityError> {
    if boundary_slope == 0.0 || !boundary_slope.is_finite() || !boundary_value.is_finite() {
        return Err(SimilarityError::InvalidBoundary);
    }
    if !(z_max.is_finite() && z_max > 0.0) {
        return Err(SimilarityError::InvalidRange(z_max));
    }
    let fp_min = SLOPE_GUARD_FACTOR * boundary_slope.abs().max(p.a());
    let f_stop = -STOP_FRACTION * boundary_value.abs();

    let rhs = |z: f64, y: &[f64; 2]| -> dopri::RhsResult<2> {
        ode_rhs(z, y[0], y[1], p, fp_min)
            .map(|fpp| [y[1], fpp])
            .map_err(|_| ())
    };
    let below_stop = move |_: f64, y: &[f64; 2]| y[0] - f_stop;
    let slope_guard = move |_: f64, y: &[f64; 2]| y[1].abs() - fp_min;
    let events: [EventFn; 2] = [&below_stop, &slope_guard];

    let settings = Settings {
        rtol: opts.rtol,
        atol: opts.atol,
        max_steps: opts.max_steps,
    };
    let traj = dopri::integrate(
        rhs,
        0.0,
        [boundary_value, boundary_slope],
        z_max,
        &settings,
        &events,
    );

    let stop = match traj.termination {
        Termination::Completed => StopReason::ReachedEnd,
        Termination::Event { index: 0, x } => StopReason::BelowStopLevel { z: x },
        Termination::Event { x, .. } => StopReason::DegenerateSlope { z: x },
        Termination::StepCollapse { x, h } => {
            let y = traj
                .y
                .last()
                .copied()
                .unwrap_or([boundary_value, boundary_slope]);
            return Err(SimilarityError::StepSizeCollapse {
                z: x,
                h,
                f: y[0],
                fp: y[1],
            });
        }
        Termination::MaxSteps { x } => {
            let y = traj
                .y
                .last()
                .copied()
                .unwrap_or([boundary_value, boundary_slope]);
            return Err(SimilarityError::StepSizeCollapse {
                z: x,
                h: 0.0,
                f: y[0],
                fp: y[1],
            });
        }
    };

    let dense = traj
        .dense
        .expect("at least one accepted step before any event");
    let z_end = dense.end();

    let n = opts.uniform_samples.max(2);
    let mut samples: Vec<(f64, [f64; 2])> =
        traj.x.iter().copied().zip(traj.y.iter().copied()).collect();
    samples.extend(
        (0..n)
            .map(|i| z_max * i as f64 / (n - 1) as f64)
            .filter(|&z| z > 0.0 && z < z_end)
            .map(|z| (z, dense.eval(z))),
    );
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    samples.dedup_by(|a, b| a.0 == b.0);

    let (z, rest): (Vec<f64>, Vec<[f64; 2]>) = samples.into_iter().unzip();
    let (f, fp) = rest.into_iter().map(|y| (y[0], y[1])).unzip();
    Ok(SimilarityProfile {
        z,
        f,
        fp,
        params: *p,
        boundary_value,
        boundary_slope,
        stop,
        dense: Some(dense),
    })
}

/// Heat-front location in similarity variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontInfo {
    pub z0: f64,
    /// `(z_lo, z_hi)` with `f(z_lo) > 0 ≥ f(z_hi)`. Collapses to `(0, 0)`
    /// when the boundary value is already nonpositive.
    pub bracket: (f64, f64),
}

impl FrontInfo {
    /// `x₀(t) = z₀ √t`.
    pub fn position(&self, t: f64) -> Result<f64, SimilarityError> {
        if !(t >= 0.0) {
            return Err(SimilarityError::NegativeTime(t));
        }
        Ok(self.z0 * t.sqrt())
    }

    /// `V₀(t) = z₀ / (2√t)`, singular at `t = 0`.
    pub fn velocity(&self, t: f64) -> Result<f64, SimilarityError> {
        if !(t > 0.0) {
            return Err(SimilarityError::NonpositiveTime(t));
        }
        Ok(self.z0 / (2.0 * t.sqrt()))
    }
}

/// Finds the first zero of `f` on the profile.
///
/// The sample bracket is refined by bisection on the integrator's continuous
/// extension until it is narrower than [`FRONT_TOLERANCE`] (and further, down
/// to floating-point resolution).
pub fn locate_front(profile: &SimilarityProfile) -> Result<FrontInfo, SimilarityError> {
    if profile.f[0] <= 0.0 {
        return Ok(FrontInfo {
            z0: 0.0,
            bracket: (0.0, 0.0),
        });
    }
    let Some(i) = profile.tail_start() else {
        return Err(SimilarityError::NoFront {
            z_end: profile.z_end(),
        });
    };
    let (mut lo, mut hi) = (profile.z[i - 1], profile.z[i]);
    let f_at = |z: f64| profile.eval(z).0;
    // Stop well above float resolution so the secant point below is interior.
    let resolution = 1e-12 * hi.abs().max(1.0);
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if f_at(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    debug_assert!(hi - lo <= FRONT_TOLERANCE);
    let (f_lo, f_hi) = (f_at(lo), f_at(hi));
    // Secant inside the final bracket, kept strictly interior.
    let mut z0 = if f_lo > f_hi {
        lo + (hi - lo) * f_lo / (f_lo - f_hi)
    } else {
        0.5 * (lo + hi)
    };
    if !(z0 > lo && z0 < hi) {
        z0 = 0.5 * (lo + hi);
    }
    if !(z0 > lo && z0 < hi) {
        z0 = hi;
    }
    Ok(FrontInfo {
        z0,
        bracket: (lo, hi),
    })
}

/// Convenience: integrate and locate the front in one call.
pub fn solve_front(
    boundary_value: f64,
    boundary_slope: f64,
    p: &PhysParams,
    z_max: f64,
    opts: &IntegrationOptions,
) -> Result<(SimilarityProfile, FrontInfo), SimilarityError> {
    let profile = integrate_profile(boundary_value, boundary_slope, p, z_max, opts)?;
    let front = locate_front(&profile)?;
    Ok((profile, front))
}
