use std::sync::OnceLock;

use quasiheat::analysis::{
    cross_validate, cross_validate_within, symmetry_residual, GroupElement, ResidualWindow,
};
use quasiheat::pde::{solve_quasilinear, BoundarySpec, Field, Grid1D, SolveReport};
use quasiheat::similarity::{integrate_profile, IntegrationOptions, SimilarityProfile};
use quasiheat::{AnalysisError, PhysParams};

fn reference_params() -> PhysParams {
    PhysParams::from_a_squared(1.0, 0.001).unwrap()
}

fn pde_run(dx: f64, times: &[f64]) -> SolveReport {
    let grid = Grid1D::spanning(8.0, dx).unwrap();
    solve_quasilinear(
        &Field::zeros(grid, 0.0),
        &BoundarySpec::sqrt_ramp(1.0),
        &reference_params(),
        1.0,
        times,
    )
    .unwrap()
}

fn profile(tol: f64) -> SimilarityProfile {
    let opts = IntegrationOptions {
        rtol: tol,
        atol: tol,
        ..IntegrationOptions::default()
    };
    integrate_profile(1.0, -1.0, &reference_params(), 5.0, &opts).unwrap()
}

#[test]
fn comparison_at_the_boundary_node_is_exact() {
    let report = pde_run(1.0 / 100.0, &[0.5, 1.0]);
    let prof = profile(1e-10);
    for t in [0.5, 1.0] {
        let err = cross_validate_within(&report, &prof, t, 0.0).unwrap();
        assert!(err <= 1e-15, "t={t}: {err:e}");
    }
    assert!(matches!(
        cross_validate(&report, &prof, 0.75),
        Err(AnalysisError::MissingSnapshot(_))
    ));
}

fn refinement_errors() -> &'static (f64, f64, f64) {
    static ERRORS: OnceLock<(f64, f64, f64)> = OnceLock::new();
    ERRORS.get_or_init(|| {
        let coarse_run = pde_run(1.0 / 200.0, &[1.0]);
        let fine_run = pde_run(1.0 / 400.0, &[1.0]);
        (
            cross_validate(&coarse_run, &profile(1e-10), 1.0).unwrap(),
            cross_validate(&fine_run, &profile(1e-10), 1.0).unwrap(),
            cross_validate(&fine_run, &profile(1e-12), 1.0).unwrap(),
        )
    })
}

#[test]
fn cross_validation_does_not_grow_when_dx_halves() {
    let &(coarse, fine, _) = refinement_errors();
    assert!(
        fine <= coarse,
        "error grew from {coarse} (dx=1/200) to {fine} (dx=1/400)"
    );
}

#[test]
fn cross_validation_stable_under_joint_refinement() {
    let &(coarse, _, both) = refinement_errors();
    assert!(both <= 1.1 * coarse, "{both} vs {coarse}");
}

#[test]
fn symmetry_residual_on_a_coarse_run() {
    let p = reference_params();
    let times: Vec<f64> = (1..=60).map(|k| k as f64 / 60.0).collect();
    let report = pde_run(1.0 / 100.0, &times);
    let window = ResidualWindow {
        t_min: 0.5,
        t_max: 0.9,
        x_min: 0.25,
        x_max: 2.5,
    };
    let identity = symmetry_residual(&GroupElement::IDENTITY, &report, &p, &window).unwrap();
    assert!(identity.sup_norm > 0.0 && identity.points > 0);
    let shifted =
        symmetry_residual(&GroupElement::temperature_shift(-1.7), &report, &p, &window).unwrap();
    assert_eq!(shifted, identity);
    let dilated = symmetry_residual(&GroupElement::dilatation(0.1), &report, &p, &window).unwrap();
    assert!(dilated.sup_norm <= 3.0 * identity.sup_norm);

    // Pulling the window back before the first snapshot is reported, not extrapolated.
    let late = GroupElement::time_shift(0.6);
    assert!(matches!(
        symmetry_residual(&late, &report, &p, &window),
        Err(AnalysisError::WindowExceeded { .. })
    ));
}
