//! Pointwise constitutive relations.
//!
//! The classical Fourier flux `J = -λ g` is replaced by
//!
//! ```text
//! J = -λ (g - a·atan(g / a))
//! ```
//!
//! where `g = ∂T/∂x` and `a > 0` is a gradient scale. Combined with the energy
//! balance `cρ ∂T/∂t = -∂J/∂x` this yields a heat equation whose effective
//! diffusivity `D_T g² / (g² + a²)` vanishes with the gradient, which is what
//! gives the model a finite front speed.

use std::f64::consts::FRAC_PI_2;

use crate::error::ParamError;

/// Upper end of the gradient scale range for which the model is considered physical.
pub const PHYSICAL_A_MAX: f64 = 0.1;

/// Relative tolerance on the identity `D_T = λ / (c ρ)`.
const DIFFUSIVITY_IDENTITY_TOL: f64 = 1e-12;

/// Physical constants of the medium.
///
/// Immutable after construction; every constructor validates strict positivity
/// and the identity `D_T = λ / (c ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    diffusivity: f64,
    a: f64,
    a_squared: f64,
    lambda: f64,
    heat_capacity: f64,
    density: f64,
}

impl PhysParams {
    /// Builds a parameter set from `(D_T, a)`, back-filling `λ = D_T`, `c = ρ = 1`.
    pub fn new(diffusivity: f64, a: f64) -> Result<Self, ParamError> {
        Self::with_material(diffusivity, a, diffusivity, 1.0, 1.0)
    }

    /// Builds a parameter set from `(D_T, a²)`.
    pub fn from_a_squared(diffusivity: f64, a_squared: f64) -> Result<Self, ParamError> {
        check_positive("a_squared", a_squared)?;
        Ok(Self::new(diffusivity, a_squared.sqrt())?.keep_a_squared(a_squared))
    }

    /// Full constructor. `diffusivity` must equal `lambda / (heat_capacity * density)`.
    pub fn with_material(
        diffusivity: f64,
        a: f64,
        lambda: f64,
        heat_capacity: f64,
        density: f64,
    ) -> Result<Self, ParamError> {
        check_positive("D_T", diffusivity)?;
        check_positive("a", a)?;
        check_positive("lambda", lambda)?;
        check_positive("c", heat_capacity)?;
        check_positive("rho", density)?;
        let implied = lambda / (heat_capacity * density);
        if (diffusivity - implied).abs() > DIFFUSIVITY_IDENTITY_TOL * diffusivity {
            return Err(ParamError::InconsistentDiffusivity {
                diffusivity,
                implied,
            });
        }
        Ok(Self {
            diffusivity,
            a,
            a_squared: a * a,
            lambda,
            heat_capacity,
            density,
        })
    }

    /// Builds from `(λ, c, ρ, a)`, deriving `D_T = λ / (c ρ)`.
    pub fn from_material(
        lambda: f64,
        heat_capacity: f64,
        density: f64,
        a: f64,
    ) -> Result<Self, ParamError> {
        check_positive("lambda", lambda)?;
        check_positive("c", heat_capacity)?;
        check_positive("rho", density)?;
        Self::with_material(
            lambda / (heat_capacity * density),
            a,
            lambda,
            heat_capacity,
            density,
        )
    }

    /// Keeps a caller-supplied `a²` exactly rather than re-squaring its root.
    pub(crate) fn keep_a_squared(mut self, a_squared: f64) -> Self {
        debug_assert_eq!(self.a, a_squared.sqrt());
        self.a_squared = a_squared;
        self
    }

    pub fn diffusivity(&self) -> f64 {
        self.diffusivity
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn a_squared(&self) -> f64 {
        self.a_squared
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn heat_capacity(&self) -> f64 {
        self.heat_capacity
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    /// True when `a` lies outside `(0, 0.1]`, where the model loses physical meaning.
    pub fn is_non_physical(&self) -> bool {
        self.a > PHYSICAL_A_MAX
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ParamError::NotPositive { name, value })
    }
}

/// Fourier flux `-λ g`.
pub fn linear_flux(g: f64, p: &PhysParams) -> f64 {
    -p.lambda * g
}

/// Modified flux `-λ (g - a·atan(g/a))`.
///
/// Odd in `g`, same sign as [`linear_flux`] and never larger in magnitude.
/// For `|g/a|` beyond ~1e15 the arctangent saturates at `±π/2`, which is the
/// correct limit.
pub fn modified_flux(g: f64, p: &PhysParams) -> f64 {
    -p.lambda * p.a * excess_over_atan(g / p.a)
}

/// `u − atan(u)`, with a series near zero where the difference cancels.
fn excess_over_atan(u: f64) -> f64 {
    if u.abs() > SERIES_CUTOFF {
        return u - u.atan();
    }
    // u³/3 − u⁵/5 + u⁷/7 − …; truncation below 1 ulp for |u| ≤ 0.05.
    let u2 = u * u;
    let mut term = u * u2;
    let mut sum = 0.0;
    for k in 0..6 {
        let coef = 1.0 / (3 + 2 * k) as f64;
        sum += if k % 2 == 0 {
            coef * term
        } else {
            -coef * term
        };
        term *= u2;
    }
    sum
}

const SERIES_CUTOFF: f64 = 0.05;

/// `|linear_flux - modified_flux| = λ a |atan(g/a)|`, always below `λ a π/2`.
///
/// Evaluated in closed form; subtracting the two fluxes would cancel
/// catastrophically at large `|g|`.
pub fn flux_gap(g: f64, p: &PhysParams) -> f64 {
    p.lambda * p.a * (g / p.a).atan().abs()
}

/// Supremum of [`flux_gap`] over all gradients, `λ a π / 2`.
pub fn flux_gap_bound(p: &PhysParams) -> f64 {
    p.lambda * p.a * FRAC_PI_2
}

/// Coefficient `D_T g² / (g² + a²)` multiplying `∂²T/∂x²` in the quasilinear equation.
///
/// Lies in `[0, D_T)`, is zero only at `g = 0`, and is even and nondecreasing in `|g|`.
pub fn effective_diffusivity(g: f64, p: &PhysParams) -> f64 {
    let g2 = g * g;
    let denom = g2 + p.a_squared;
    if denom == 0.0 {
        // g² and a² both underflowed: treat as the degenerate point.
        return 0.0;
    }
    p.diffusivity * (g2 / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx_eq::assert_rel;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    mod approx_eq {
        macro_rules! assert_rel {
            ($a:expr, $b:expr, $tol:expr) => {{
                let (a, b): (f64, f64) = ($a, $b);
                let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
                assert!(
                    (a - b).abs() <= $tol * scale,
                    "{} vs {} (tol {})",
                    a,
                    b,
                    $tol
                );
            }};
        }
        pub(crate) use assert_rel;
    }

    fn params(lambda: f64) -> PhysParams {
        PhysParams::with_material(lambda, 0.2, lambda, 1.0, 1.0).unwrap()
    }

    #[test]
    fn linear_flux_examples() {
        assert_eq!(linear_flux(0.0, &params(1.0)), 0.0);
        assert_eq!(linear_flux(1.0, &params(1.0)), -1.0);
        assert_eq!(linear_flux(-2.0, &params(3.0)), 6.0);
    }

    #[test]
    fn modified_flux_examples() {
        let p = params(1.0);
        assert_eq!(modified_flux(0.0, &p), 0.0);
        assert_rel!(modified_flux(p.a(), &p), -p.a() * (1.0 - FRAC_PI_4), 1e-14);
        let g = 1e6 * p.a();
        assert!((modified_flux(g, &p) - linear_flux(g, &p)).abs() <= flux_gap_bound(&p));
    }

    #[test]
    fn flux_gap_examples() {
        let p = params(1.0);
        assert_eq!(flux_gap(0.0, &p), 0.0);
        assert_rel!(flux_gap(p.a(), &p), p.a() * FRAC_PI_4, 1e-14);
        assert_rel!(flux_gap(f64::MAX, &p), flux_gap_bound(&p), 1e-15);
        assert_rel!(flux_gap(-f64::MAX, &p), flux_gap_bound(&p), 1e-15);
        // Gradients within a few decades of `a` stay strictly below the bound.
        assert!(flux_gap(1e12 * p.a(), &p) < flux_gap_bound(&p));
    }

    #[test]
    fn relative_gap_decays_like_a_over_g() {
        // gap/|J_lin| = (a/|g|)·atan(|g|/a), which approaches π a / (2|g|) from below.
        let p = params(1.0);
        for mult in [1e3, 1e5, 1.6e5, 1e6] {
            for g in [mult * p.a(), -mult * p.a()] {
                let rel = flux_gap(g, &p) / linear_flux(g, &p).abs();
                assert!(rel <= FRAC_PI_2 / mult, "g={g}: {rel}");
                assert!(
                    rel >= FRAC_PI_2 / mult - 1.0 / (mult * mult),
                    "g={g}: {rel}"
                );
            }
        }
        assert!(flux_gap(1.6e5 * p.a(), &p) / linear_flux(1.6e5 * p.a(), &p).abs() < 1e-5);
        assert!(flux_gap(1e5 * p.a(), &p) / linear_flux(1e5 * p.a(), &p).abs() > 1e-5);
    }

    #[test]
    fn effective_diffusivity_examples() {
        let p = params(1.0);
        assert_eq!(effective_diffusivity(0.0, &p), 0.0);
        assert_rel!(effective_diffusivity(p.a(), &p), 0.5, 1e-15);
        let p3 = PhysParams::from_a_squared(1.0, 0.001).unwrap();
        assert_rel!(effective_diffusivity(1.0, &p3), 1.0 / 1.001, 1e-15);
        assert!((effective_diffusivity(1.0, &p3) - 0.999001).abs() < 1e-6);
    }

    #[test]
    fn effective_diffusivity_is_derivative_of_modified_flux() {
        // D_eff(g) = d/dg [-J(g) / (c ρ)], checked with a central difference.
        let p = PhysParams::from_material(2.0, 4.0, 0.25, 0.05).unwrap();
        for mult in [0.01, 0.1, 1.0, 10.0] {
            let g = mult * p.a();
            let h = 1e-5 * g;
            let slope = -(modified_flux(g + h, &p) - modified_flux(g - h, &p)) / (2.0 * h);
            let fd = slope / (p.heat_capacity() * p.density());
            let exact = effective_diffusivity(g, &p);
            assert!(
                ((fd - exact) / exact).abs() <= 1e-6,
                "g={g}: fd {fd} exact {exact}"
            );
        }
    }

    #[test]
    fn params_validation() {
        assert!(matches!(
            PhysParams::new(0.0, 0.1),
            Err(ParamError::NotPositive { name: "D_T", .. })
        ));
        assert!(PhysParams::from_a_squared(1.0, -1.0).is_err());
        assert!(PhysParams::new(1.0, f64::NAN).is_err());
        assert!(matches!(
            PhysParams::with_material(1.0, 0.1, 2.0, 1.0, 1.0),
            Err(ParamError::InconsistentDiffusivity { .. })
        ));
        let p = PhysParams::from_material(6.0, 2.0, 3.0, 0.05).unwrap();
        assert_eq!(p.diffusivity(), 1.0);
        assert!(!p.is_non_physical());
        assert!(PhysParams::new(1.0, 0.5).unwrap().is_non_physical());
        assert!(!PhysParams::new(1.0, 0.1).unwrap().is_non_physical());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn gradient() -> impl Strategy<Value = f64> {
            (-12.0f64..12.0, any::<bool>()).prop_map(|(e, neg)| {
                let g = 10f64.powf(e);
                if neg {
                    -g
                } else {
                    g
                }
            })
        }

        proptest! {
            #[test]
            fn modified_flux_is_odd(g in gradient(), a in 1e-3f64..1.0) {
                let p = PhysParams::new(1.7, a).unwrap();
                prop_assert_eq!(modified_flux(-g, &p), -modified_flux(g, &p));
            }

            #[test]
            fn modified_flux_never_exceeds_linear(g in gradient(), a in 1e-3f64..1.0) {
                let p = PhysParams::new(1.0, a).unwrap();
                let m = modified_flux(g, &p);
                let l = linear_flux(g, &p);
                prop_assert!(m.abs() <= l.abs());
                prop_assert!(m == 0.0 || m.signum() == l.signum());
            }

            #[test]
            fn effective_diffusivity_bounds(g in gradient(), a in 1e-3f64..1.0, d in 0.1f64..10.0) {
                let p = PhysParams::new(d, a).unwrap();
                let e = effective_diffusivity(g, &p);
                prop_assert!(e > 0.0 && e <= d);
                prop_assert_eq!(e, effective_diffusivity(-g, &p));
                prop_assert!(effective_diffusivity(2.0 * g, &p) >= e);
            }

            #[test]
            fn flux_gap_monotone(g in gradient(), a in 1e-3f64..1.0) {
                let p = PhysParams::new(1.0, a).unwrap();
                prop_assert!(flux_gap(g, &p) <= flux_gap(1.5 * g, &p));
                prop_assert!(flux_gap(g, &p) < flux_gap_bound(&p) || g.abs() / a > 1e15);
            }
        }
    }
}
