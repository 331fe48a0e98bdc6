//! Point symmetries of the quasilinear equation and a numerical invariance check.
//!
//! The equation admits time translation, space translation, temperature
//! shift and the dilatation `2t∂t + x∂x + T∂T`. Exponentiated, these act as
//!
//! ```text
//! (t, x, T) ↦ (e^{2ε} t + τ, e^{ε} x + ξ, e^{ε} T + θ)
//! ```
//!
//! Applying a symmetry to a numerical solution must produce a field whose
//! discrete residual is no worse than that of the original.

use crate::error::AnalysisError;
use crate::flux_law::{effective_diffusivity, PhysParams};
use crate::pde::{Field, SolveReport};

/// Number of nodes at each end of the grid excluded from residual evaluation.
pub const BOUNDARY_MARGIN_NODES: usize = 2;

/// Element of the four-parameter group, applied as dilatation first, then translations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GroupElement {
    pub tau: f64,
    pub xi: f64,
    pub theta: f64,
    pub eps: f64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        tau: 0.0,
        xi: 0.0,
        theta: 0.0,
        eps: 0.0,
    };

    pub fn dilatation(eps: f64) -> Self {
        Self {
            eps,
            ..Self::IDENTITY
        }
    }

    pub fn time_shift(tau: f64) -> Self {
        Self {
            tau,
            ..Self::IDENTITY
        }
    }

    pub fn space_shift(xi: f64) -> Self {
        Self {
            xi,
            ..Self::IDENTITY
        }
    }

    pub fn temperature_shift(theta: f64) -> Self {
        Self {
            theta,
            ..Self::IDENTITY
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tau.is_finite()
            && self.xi.is_finite()
            && self.theta.is_finite()
            && self.eps.is_finite()
    }

    pub fn transform_point(&self, t: f64, x: f64, temp: f64) -> (f64, f64, f64) {
        let s = self.eps.exp();
        (s * s * t + self.tau, s * x + self.xi, s * temp + self.theta)
    }

    /// Preimage of `(t, x)` under the coordinate part of the map.
    pub fn pull_back(&self, t: f64, x: f64) -> (f64, f64) {
        let inv = (-self.eps).exp();
        (inv * inv * (t - self.tau), inv * (x - self.xi))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let s = self.eps.exp();
        GroupElement {
            tau: s * s * other.tau + self.tau,
            xi: s * other.xi + self.xi,
            theta: s * other.theta + self.theta,
            eps: self.eps + other.eps,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        let inv = (-self.eps).exp();
        GroupElement {
            tau: -inv * inv * self.tau,
            xi: -inv * self.xi,
            theta: -inv * self.theta,
            eps: -self.eps,
        }
    }
}

/// Rectangle of the transformed `(t, x)` plane on which the residual is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualWindow {
    pub t_min: f64,
    pub t_max: f64,
    pub x_min: f64,
    pub x_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryResidual {
    /// Sup norm of the discrete residual over the window.
    pub sup_norm: f64,
    /// Transformed coordinates where the sup is attained.
    pub at: (f64, f64),
    pub points: usize,
}

/// Bilinear lookup in `(t, x)` over a sequence of snapshots.
struct SpaceTime<'a> {
    snapshots: &'a [Field],
}

impl SpaceTime<'_> {
    fn t_range(&self) -> (f64, f64) {
        (
            self.snapshots[0].t(),
            self.snapshots[self.snapshots.len() - 1].t(),
        )
    }

    fn sample(&self, t: f64, x: f64) -> Option<f64> {
        let (t_lo, t_hi) = self.t_range();
        if !(t >= t_lo && t <= t_hi) {
            return None;
        }
        let k = self
            .snapshots
            .partition_point(|s| s.t() <= t)
            .clamp(1, self.snapshots.len().max(2) - 1);
        let (a, b) = (&self.snapshots[k - 1], &self.snapshots[k]);
        let w = ((t - a.t()) / (b.t() - a.t())).clamp(0.0, 1.0);
        let va = a.interpolate(x)?;
        if w == 0.0 {
            return Some(va);
        }
        let vb = b.interpolate(x)?;
        if w == 1.0 {
            return Some(vb);
        }
        Some((1.0 - w) * va + w * vb)
    }
}

/// Discrete residual of the quasilinear equation for the transformed solution
/// `T̃(t̃, x̃) = e^{ε} T(pull_back(t̃, x̃)) + θ`.
///
/// The stencil in transformed coordinates has spacing `e^{ε}·dx` in space and
/// `e^{2ε}·Δt` in time, where `dx` is the grid spacing and `Δt` the smallest
/// snapshot spacing of `report`, so it is the image of the solver's own
/// stencil. Evaluation points fill `window` starting at its lower corner;
/// pulled-back values come from bilinear interpolation over the snapshots.
/// Points whose pulled-back position falls within
/// [`BOUNDARY_MARGIN_NODES`] nodes of either grid end are skipped. The
/// temperature shift `θ` never enters a derivative and is dropped.
pub fn symmetry_residual(
    g: &GroupElement,
    report: &SolveReport,
    p: &PhysParams,
    window: &ResidualWindow,
) -> Result<SymmetryResidual, AnalysisError> {
    if report.snapshots.len() < 3 {
        return Err(AnalysisError::InvalidWindow(
            "at least three snapshots are required".into(),
        ));
    }
    if !g.is_finite() {
        return Err(AnalysisError::InvalidWindow(
            "group element must be finite".into(),
        ));
    }
    if !(window.t_min <= window.t_max && window.x_min <= window.x_max) {
        return Err(AnalysisError::InvalidWindow(format!("{window:?} is empty")));
    }
    let table = SpaceTime {
        snapshots: &report.snapshots,
    };
    let grid = *report.snapshots[0].grid();
    let dt_snap = report
        .snapshots
        .windows(2)
        .map(|w| w[1].t() - w[0].t())
        .fold(f64::INFINITY, f64::min);

    let scale = g.eps.exp();
    let hx = scale * grid.dx();
    let ht = scale * scale * dt_snap;
    let margin_lo = grid.x0() + BOUNDARY_MARGIN_NODES as f64 * grid.dx();
    let margin_hi = grid.x_max() - BOUNDARY_MARGIN_NODES as f64 * grid.dx();

    // Rounding slack so that evaluation points landing on the window edge count.
    let n_t = ((window.t_max - window.t_min) / ht * (1.0 + 1e-12)).floor() as usize + 1;
    let n_x = ((window.x_max - window.x_min) / hx * (1.0 + 1e-12)).floor() as usize + 1;

    let lookup = |t: f64, x: f64| -> Result<f64, AnalysisError> {
        let (tb, xb) = g.pull_back(t, x);
        table
            .sample(tb, xb)
            .ok_or(AnalysisError::WindowExceeded { t: tb, x: xb })
    };

    let mut sup = 0.0f64;
    let mut at = (window.t_min, window.x_min);
    let mut points = 0;
    for j in 0..n_t {
        let t = window.t_min + j as f64 * ht;
        for i in 0..n_x {
            let x = window.x_min + i as f64 * hx;
            let (_, xb) = g.pull_back(t, x);
            if xb < margin_lo || xb > margin_hi {
                continue;
            }
            let u = lookup(t, x)?;
            let u_xm = lookup(t, x - hx)?;
            let u_xp = lookup(t, x + hx)?;
            let u_tm = lookup(t - ht, x)?;
            let u_tp = lookup(t + ht, x)?;

            let ut = scale * (u_tp - u_tm) / (2.0 * ht);
            let ux = scale * (u_xp - u_xm) / (2.0 * hx);
            let uxx = scale * (u_xp - 2.0 * u + u_xm) / (hx * hx);
            let r = (ut - effective_diffusivity(ux, p) * uxx).abs();
            points += 1;
            if r > sup {
                sup = r;
                at = (t, x);
            }
        }
    }
    Ok(SymmetryResidual {
        sup_norm: sup,
        at,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn close_ulps(a: f64, b: f64, ulps: f64) -> bool {
        (a - b).abs() <= ulps * f64::EPSILON * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn identity_leaves_points_unchanged() {
        assert_eq!(
            GroupElement::IDENTITY.transform_point(1.3, -0.2, 7.0),
            (1.3, -0.2, 7.0)
        );
    }

    #[test]
    fn dilatation_by_ln2() {
        let (t, x, temp) = GroupElement::dilatation(LN_2).transform_point(1.0, 1.0, 1.0);
        assert!(close_ulps(t, 4.0, 1.0) && close_ulps(x, 2.0, 1.0) && close_ulps(temp, 2.0, 1.0));
    }

    #[test]
    fn time_translation() {
        assert_eq!(
            GroupElement::time_shift(5.0).transform_point(1.0, 1.0, 1.0),
            (6.0, 1.0, 1.0)
        );
    }

    #[test]
    fn composition_matches_sequential_application() {
        let g1 = GroupElement {
            tau: 0.3,
            xi: -1.1,
            theta: 2.0,
            eps: 0.25,
        };
        let g2 = GroupElement {
            tau: -0.7,
            xi: 0.4,
            theta: -0.5,
            eps: -0.6,
        };
        let point = (0.9, 1.7, -0.3);
        let (t1, x1, u1) = g2.transform_point(point.0, point.1, point.2);
        let seq = g1.transform_point(t1, x1, u1);
        let direct = g1.compose(&g2).transform_point(point.0, point.1, point.2);
        assert!(close_ulps(seq.0, direct.0, 8.0));
        assert!(close_ulps(seq.1, direct.1, 8.0));
        assert!(close_ulps(seq.2, direct.2, 8.0));
    }

    #[test]
    fn inverse_round_trip() {
        let g = GroupElement {
            tau: 0.3,
            xi: -1.1,
            theta: 2.0,
            eps: 0.25,
        };
        let (t, x, u) = g.transform_point(0.9, 1.7, -0.3);
        let back = g.inverse().transform_point(t, x, u);
        assert!(close_ulps(back.0, 0.9, 4.0));
        assert!(close_ulps(back.1, 1.7, 4.0));
        assert!(close_ulps(back.2, -0.3, 4.0));
        let pb = g.pull_back(t, x);
        assert!(close_ulps(pb.0, 0.9, 4.0) && close_ulps(pb.1, 1.7, 4.0));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn dilatation_preserves_similarity_invariants(
                eps in -2.0f64..2.0,
                t in 1e-3f64..10.0,
                x in 0.0f64..10.0,
                temp in -5.0f64..5.0,
            ) {
                let (tt, xt, ut) = GroupElement::dilatation(eps).transform_point(t, x, temp);
                let z = x / t.sqrt();
                let zt = xt / tt.sqrt();
                let w = temp / t.sqrt();
                let wt = ut / tt.sqrt();
                prop_assert!((z - zt).abs() <= 1e-12 * z.abs().max(1e-300));
                prop_assert!((w - wt).abs() <= 1e-12 * w.abs().max(1e-300));
            }
        }
    }
}
