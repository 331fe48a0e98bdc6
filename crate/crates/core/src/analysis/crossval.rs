use crate::error::AnalysisError;
use crate::pde::SolveReport;
use crate::similarity::{locate_front, SimilarityProfile};

/// Fraction of the similarity front used as the comparison limit.
pub const FRONT_FRACTION: f64 = 0.9;

/// Sup-norm distance between a PDE snapshot and the similarity form
/// `√t f(x/√t)`, relative to `|B|√t`, over nodes with `x ≤ 0.9·z₀·√t`.
pub fn cross_validate(
    report: &SolveReport,
    profile: &SimilarityProfile,
    t_check: f64,
) -> Result<f64, AnalysisError> {
    let front = locate_front(profile)?;
    cross_validate_within(
        report,
        profile,
        t_check,
        FRONT_FRACTION * front.z0 * t_check.sqrt(),
    )
}

/// As [`cross_validate`] with an explicit upper limit `x_limit` on the
/// compared nodes. When `B = 0` the error is absolute.
pub fn cross_validate_within(
    report: &SolveReport,
    profile: &SimilarityProfile,
    t_check: f64,
    x_limit: f64,
) -> Result<f64, AnalysisError> {
    let snapshot = report
        .snapshot_at(t_check)
        .ok_or(AnalysisError::MissingSnapshot(t_check))?;
    let t = snapshot.t();
    let root_t = t.sqrt();
    let scale = match (profile.boundary_value() * root_t).abs() {
        s if s > 0.0 => s,
        _ => 1.0,
    };
    let grid = snapshot.grid();
    let err = snapshot
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| (grid.x(i), v))
        .take_while(|&(x, _)| x <= x_limit)
        .map(|(x, v)| {
            let reference = root_t * profile.eval(x / root_t).0;
            (v - reference).abs() / scale
        })
        .fold(0.0, f64::max);
    Ok(err)
}
