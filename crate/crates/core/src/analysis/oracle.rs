//! Closed-form reference for the linear heat equation with `T(t,0) = B√t`.

use std::f64::consts::PI;

use crate::flux_law::PhysParams;

/// First iterated complementary error function,
/// `i¹erfc(η) = ∫_η^∞ erfc(s) ds = exp(−η²)/√π − η·erfc(η)`.
///
/// The subtraction loses about `log10(2η²)` digits for large `η`, which
/// stays below four digits until `exp(−η²)` underflows.
pub fn iterated_erfc(eta: f64) -> f64 {
    (-eta * eta).exp() / PI.sqrt() - eta * libm::erfc(eta)
}

/// Similarity solution of `∂T/∂t = D_T ∂²T/∂x²` on `x ≥ 0` with zero
/// initial data and `T(t, 0) = B√t`:
/// `T = B √t · i¹erfc(η) / i¹erfc(0)`, `η = x / (2√(D_T t))`.
///
/// Returns 0 for `t ≤ 0`.
pub fn linear_oracle(t: f64, x: f64, b: f64, p: &PhysParams) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let eta = x / (2.0 * (p.diffusivity() * t).sqrt());
    b * t.sqrt() * PI.sqrt() * iterated_erfc(eta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> PhysParams {
        PhysParams::new(1.0, 0.01).unwrap()
    }

    #[test]
    fn iterated_erfc_reference_values() {
        assert!((iterated_erfc(0.0) - 1.0 / PI.sqrt()).abs() < 1e-16);
        // Derivative of i¹erfc is −erfc; check by central differences.
        for eta in [0.1, 0.5, 1.0, 2.0, 3.0] {
            let h = 1e-5;
            let fd = (iterated_erfc(eta + h) - iterated_erfc(eta - h)) / (2.0 * h);
            assert!((fd + libm::erfc(eta)).abs() < 1e-9, "eta={eta}");
        }
        // Tail against the asymptotic series e^{−η²}/(2√π η²)(1 − 3/(2η²) + 15/(4η⁴)).
        let eta: f64 = 6.0;
        let e2 = eta * eta;
        let series = (-e2).exp() / (2.0 * PI.sqrt() * e2)
            * (1.0 - 3.0 / (2.0 * e2) + 15.0 / (4.0 * e2 * e2) - 105.0 / (8.0 * e2 * e2 * e2));
        assert!(((iterated_erfc(eta) - series) / series).abs() < 1e-4);
    }

    #[test]
    fn boundary_and_decay() {
        let p = unit();
        for t in [0.25, 1.0, 4.0] {
            assert!((linear_oracle(t, 0.0, 2.0, &p) - 2.0 * t.sqrt()).abs() < 1e-15);
        }
        assert!(linear_oracle(1.0, 40.0, 1.0, &p) < 1e-150);
        assert_eq!(linear_oracle(1.0, 100.0, 1.0, &p), 0.0);
        assert_eq!(linear_oracle(0.0, 1.0, 1.0, &p), 0.0);
    }

    #[test]
    fn satisfies_heat_equation() {
        let p = PhysParams::new(1.3, 0.01).unwrap();
        let (dx, dt) = (1e-3, 1e-6);
        for t in [0.3, 1.0] {
            for x in [0.1, 0.5, 1.0, 2.0] {
                let u = |t: f64, x: f64| linear_oracle(t, x, 1.0, &p);
                let ut = (u(t + dt, x) - u(t - dt, x)) / (2.0 * dt);
                let uxx = (u(t, x + dx) - 2.0 * u(t, x) + u(t, x - dx)) / (dx * dx);
                let residual = ut - p.diffusivity() * uxx;
                assert!(residual.abs() <= 1e-5, "t={t} x={x}: {residual:e}");
            }
        }
    }
}
