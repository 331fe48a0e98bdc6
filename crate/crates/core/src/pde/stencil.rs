use super::Field;
use crate::flux_law::{effective_diffusivity, PhysParams};

/// Discrete `∂/∂x`: central differences inside, second-order one-sided at the
/// two end nodes. Exact on quadratics.
pub fn gradient_of(field: &Field) -> Field {
    let v = field.values();
    let n = v.len();
    let inv2dx = 0.5 / field.grid().dx();
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv2dx;
    for i in 1..n - 1 {
        out[i] = (v[i + 1] - v[i - 1]) * inv2dx;
    }
    out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) * inv2dx;
    Field::from_parts_unchecked(*field.grid(), field.t(), out)
}

/// Diffusivity law applied at interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Coefficient {
    Linear,
    Quasilinear,
}

/// Forward-Euler update of the interior nodes of `src` into `dst`.
///
/// Returns the index of the first non-finite result, if any.
pub(crate) fn advance_interior(
    src: &[f64],
    dst: &mut [f64],
    dt: f64,
    dx: f64,
    p: &PhysParams,
    coefficient: Coefficient,
) -> Option<usize> {
    let inv_dx2 = 1.0 / (dx * dx);
    let inv2dx = 0.5 / dx;
    let mut finite = true;
    match coefficient {
        Coefficient::Linear => {
            let k = dt * p.diffusivity() * inv_dx2;
            for (i, w) in src.windows(3).enumerate() {
                let v = w[1] + k * (w[2] - 2.0 * w[1] + w[0]);
                finite &= v.is_finite();
                dst[i + 1] = v;
            }
        }
        Coefficient::Quasilinear => {
            for (i, w) in src.windows(3).enumerate() {
                let g = (w[2] - w[0]) * inv2dx;
                let lap = (w[2] - 2.0 * w[1] + w[0]) * inv_dx2;
                let v = w[1] + dt * effective_diffusivity(g, p) * lap;
                finite &= v.is_finite();
                dst[i + 1] = v;
            }
        }
    }
    if finite {
        None
    } else {
        dst[1..src.len() - 1]
            .iter()
            .position(|v| !v.is_finite())
            .map(|i| i + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::Grid1D;

    #[test]
    fn gradient_of_constant_is_zero() {
        let grid = Grid1D::new(0.0, 0.1, 11).unwrap();
        let f = Field::from_fn(grid, 0.0, |_| 3.5).unwrap();
        assert!(gradient_of(&f).values().iter().all(|&g| g == 0.0));
    }

    #[test]
    fn gradient_of_ramp_is_one() {
        // Integer spacing keeps every difference exact.
        let grid = Grid1D::new(0.0, 1.0, 9).unwrap();
        let f = Field::from_fn(grid, 0.0, |x| x).unwrap();
        assert!(gradient_of(&f).values().iter().all(|&g| g == 1.0));
        let grid = Grid1D::new(0.0, 0.1, 11).unwrap();
        let f = Field::from_fn(grid, 0.0, |x| x).unwrap();
        for g in gradient_of(&f).values() {
            assert!((g - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn gradient_of_quadratic_is_exact() {
        let grid = Grid1D::new(0.0, 0.1, 11).unwrap();
        let f = Field::from_fn(grid, 0.0, |x| x * x).unwrap();
        for (x, g) in grid.nodes().zip(gradient_of(&f).values()) {
            assert!((g - 2.0 * x).abs() < 1e-13, "x={x}: {g}");
        }
    }

    #[test]
    fn linear_kernel_matches_textbook_update() {
        let p = PhysParams::new(2.0, 0.1).unwrap();
        let src = [0.0, 1.0, 4.0, 9.0];
        let mut dst = [0.0; 4];
        assert_eq!(
            advance_interior(&src, &mut dst, 0.01, 0.5, &p, Coefficient::Linear),
            None
        );
        // Laplacian of x² sampled at spacing 1 in index is 2/dx² = 8.
        assert!((dst[1] - (1.0 + 0.01 * 2.0 * 8.0)).abs() < 1e-15);
        assert!((dst[2] - (4.0 + 0.01 * 2.0 * 8.0)).abs() < 1e-15);
    }

    #[test]
    fn non_finite_is_reported() {
        let p = PhysParams::new(1.0, 0.1).unwrap();
        let src = [0.0, f64::MAX, -f64::MAX, 0.0];
        let mut dst = [0.0; 4];
        assert_eq!(
            advance_interior(&src, &mut dst, 1.0, 1e-3, &p, Coefficient::Linear),
            Some(1)
        );
    }
}
