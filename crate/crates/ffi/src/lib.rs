//! C ABI over `quasiheat`.
//!
//! Every function returns a [`QhStatus`] code and writes results through out
//! pointers. Objects are opaque handles created by `qh_*_new`/`qh_*_solve`
//! and released with the matching `qh_*_free`. After a non-zero status the
//! message is available from [`qh_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quasiheat::flux_law::{effective_diffusivity, flux_gap, linear_flux, modified_flux};
use quasiheat::pde::{BoundarySpec, Field, Grid1D, Model, Scheme, SolveReport};
use quasiheat::similarity::{
    integrate_profile, locate_front, FrontInfo, IntegrationOptions, SimilarityProfile,
};
use quasiheat::{ParamError, PhysParams, SimilarityError, SolverError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericalFailure = 3,
    BufferTooSmall = 4,
    OutOfRange = 5,
    Panic = 6,
}

pub const QH_MODEL_QUASILINEAR: i32 = 0;
pub const QH_MODEL_LINEAR: i32 = 1;

/// Physical parameter set.
pub struct QhParams(PhysParams);

/// Similarity profile with its located front.
pub struct QhProfile {
    profile: SimilarityProfile,
    front: FrontInfo,
}

/// Result of a space-time solve.
pub struct QhReport(SolveReport);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: QhStatus, message: impl Into<String>) -> QhStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
    status
}

fn param_error(e: ParamError) -> QhStatus {
    fail(QhStatus::InvalidArgument, e.to_string())
}

fn similarity_error(e: SimilarityError) -> QhStatus {
    let status = match e {
        SimilarityError::InvalidBoundary
        | SimilarityError::InvalidRange(_)
        | SimilarityError::NegativeTime(_)
        | SimilarityError::NonpositiveTime(_) => QhStatus::InvalidArgument,
        _ => QhStatus::NumericalFailure,
    };
    fail(status, e.to_string())
}

fn solver_error(e: SolverError) -> QhStatus {
    let status = match e {
        SolverError::InvalidGrid(_)
        | SolverError::InvalidField(_)
        | SolverError::InvalidTimes(_) => QhStatus::InvalidArgument,
        SolverError::CflViolation { .. } | SolverError::NonFiniteState { .. } => {
            QhStatus::NumericalFailure
        }
    };
    fail(status, e.to_string())
}

/// Runs `f`, converting a panic into [`QhStatus::Panic`].
fn guarded(f: impl FnOnce() -> QhStatus) -> QhStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(QhStatus::Panic, "internal panic"))
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(QhStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

/// Copies the calling thread's last error message into `buf` as a
/// NUL-terminated string, truncating to `len - 1` bytes. Returns the full
/// message length in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn qh_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Creates a parameter set from `D_T` and `a²`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qh_params_new(
    diffusivity: f64,
    a_squared: f64,
    out: *mut *mut QhParams,
) -> QhStatus {
    non_null!(out);
    guarded(
        || match PhysParams::from_a_squared(diffusivity, a_squared) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(QhParams(p)));
                QhStatus::Ok
            }
            Err(e) => param_error(e),
        },
    )
}

/// Creates a parameter set from material constants `λ, c, ρ` and `a`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qh_params_from_material(
    lambda: f64,
    heat_capacity: f64,
    density: f64,
    a: f64,
    out: *mut *mut QhParams,
) -> QhStatus {
    non_null!(out);
    guarded(
        || match PhysParams::from_material(lambda, heat_capacity, density, a) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(QhParams(p)));
                QhStatus::Ok
            }
            Err(e) => param_error(e),
        },
    )
}

/// # Safety
/// `params` must be null or a handle from `qh_params_new`/`qh_params_from_material` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qh_params_free(params: *mut QhParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

unsafe fn flux_call(
    params: *const QhParams,
    g: f64,
    out: *mut f64,
    f: fn(f64, &PhysParams) -> f64,
) -> QhStatus {
    non_null!(params, out);
    if g.is_nan() {
        return fail(QhStatus::InvalidArgument, "gradient is NaN");
    }
    guarded(|| {
        *out = f(g, &(*params).0);
        QhStatus::Ok
    })
}

/// Classical Fourier flux `-λ g`.
///
/// # Safety
/// `params` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_linear_flux(
    params: *const QhParams,
    g: f64,
    out: *mut f64,
) -> QhStatus {
    flux_call(params, g, out, linear_flux)
}

/// Modified flux `-λ (g - a·atan(g/a))`.
///
/// # Safety
/// `params` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_modified_flux(
    params: *const QhParams,
    g: f64,
    out: *mut f64,
) -> QhStatus {
    flux_call(params, g, out, modified_flux)
}

/// `|J_linear - J_modified|`.
///
/// # Safety
/// `params` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_flux_gap(params: *const QhParams, g: f64, out: *mut f64) -> QhStatus {
    flux_call(params, g, out, flux_gap)
}

/// `D_T g² / (g² + a²)`.
///
/// # Safety
/// `params` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_effective_diffusivity(
    params: *const QhParams,
    g: f64,
    out: *mut f64,
) -> QhStatus {
    flux_call(params, g, out, effective_diffusivity)
}

/// Integrates the similarity profile with `f(0) = b`, `f'(0) = c` on
/// `[0, z_max]` and locates its front. Non-positive tolerances select the
/// defaults (`1e-10`).
///
/// # Safety
/// `params` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_similarity_solve(
    params: *const QhParams,
    b: f64,
    c: f64,
    z_max: f64,
    rtol: f64,
    atol: f64,
    out: *mut *mut QhProfile,
) -> QhStatus {
    non_null!(params, out);
    guarded(|| {
        let mut opts = IntegrationOptions::default();
        if rtol > 0.0 {
            opts.rtol = rtol;
        }
        if atol > 0.0 {
            opts.atol = atol;
        }
        let profile = match integrate_profile(b, c, &(*params).0, z_max, &opts) {
            Ok(p) => p,
            Err(e) => return similarity_error(e),
        };
        let front = match locate_front(&profile) {
            Ok(f) => f,
            Err(e) => return similarity_error(e),
        };
        *out = Box::into_raw(Box::new(QhProfile { profile, front }));
        QhStatus::Ok
    })
}

/// # Safety
/// `profile` must be null or a handle from `qh_similarity_solve` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qh_profile_free(profile: *mut QhProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// Number of samples in the profile.
///
/// # Safety
/// `profile` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_profile_len(profile: *const QhProfile, out: *mut usize) -> QhStatus {
    non_null!(profile, out);
    *out = (*profile).profile.len();
    QhStatus::Ok
}

/// Copies the samples `z`, `f`, `f'` into caller buffers of length `len`,
/// which must be at least [`qh_profile_len`]. Any of the three may be null
/// to skip that column.
///
/// # Safety
/// `profile` must be a live handle; non-null buffers must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qh_profile_copy(
    profile: *const QhProfile,
    z: *mut f64,
    f: *mut f64,
    fp: *mut f64,
    len: usize,
) -> QhStatus {
    non_null!(profile);
    let p = &(*profile).profile;
    if len < p.len() {
        return fail(
            QhStatus::BufferTooSmall,
            format!("need {} samples, got {len}", p.len()),
        );
    }
    for (dst, src) in [(z, p.z()), (f, p.f()), (fp, p.fp())] {
        if !dst.is_null() {
            ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
        }
    }
    QhStatus::Ok
}

/// Front location `z₀` in similarity variables.
///
/// # Safety
/// `profile` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_profile_front(profile: *const QhProfile, out: *mut f64) -> QhStatus {
    non_null!(profile, out);
    *out = (*profile).front.z0;
    QhStatus::Ok
}

/// Front velocity `z₀ / (2√t)`; `t` must be positive.
///
/// # Safety
/// `profile` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_profile_front_velocity(
    profile: *const QhProfile,
    t: f64,
    out: *mut f64,
) -> QhStatus {
    non_null!(profile, out);
    match (*profile).front.velocity(t) {
        Ok(v) => {
            *out = v;
            QhStatus::Ok
        }
        Err(e) => similarity_error(e),
    }
}

/// Solves the temperature equation on `[0, x_max]` from zero initial data
/// with `T(t,0) = b√t` and `T(t,x_max) = 0`, recording a snapshot at each of
/// the `n_times` increasing output times. `model` is
/// [`QH_MODEL_QUASILINEAR`] or [`QH_MODEL_LINEAR`].
///
/// # Safety
/// `params` must be a live handle, `out_times` must point to `n_times`
/// doubles and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qh_pde_solve(
    params: *const QhParams,
    model: i32,
    b: f64,
    x_max: f64,
    dx: f64,
    t_end: f64,
    out_times: *const f64,
    n_times: usize,
    out: *mut *mut QhReport,
) -> QhStatus {
    non_null!(params, out_times, out);
    let model = match model {
        QH_MODEL_QUASILINEAR => Model::Quasilinear,
        QH_MODEL_LINEAR => Model::Linear,
        other => return fail(QhStatus::InvalidArgument, format!("unknown model {other}")),
    };
    let times = std::slice::from_raw_parts(out_times, n_times).to_vec();
    guarded(|| {
        let grid = match Grid1D::spanning(x_max, dx) {
            Ok(g) => g,
            Err(e) => return solver_error(e),
        };
        let scheme = Scheme::new(model, (*params).0);
        match scheme.solve(
            &Field::zeros(grid, 0.0),
            &BoundarySpec::sqrt_ramp(b),
            t_end,
            &times,
        ) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(QhReport(r)));
                QhStatus::Ok
            }
            Err(e) => solver_error(e),
        }
    })
}

/// # Safety
/// `report` must be null or a handle from `qh_pde_solve` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qh_report_free(report: *mut QhReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Number of snapshots and grid nodes per snapshot.
///
/// # Safety
/// `report` must be a live handle; `snapshots` and `nodes` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qh_report_shape(
    report: *const QhReport,
    snapshots: *mut usize,
    nodes: *mut usize,
) -> QhStatus {
    non_null!(report, snapshots, nodes);
    let r = &(*report).0;
    *snapshots = r.snapshots.len();
    *nodes = r.final_field.grid().len();
    QhStatus::Ok
}

/// Copies snapshot `index`: its time into `t` and its values into `values`
/// (length `len`, at least the node count).
///
/// # Safety
/// `report` must be a live handle, `t` a valid pointer and `values` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qh_report_snapshot(
    report: *const QhReport,
    index: usize,
    t: *mut f64,
    values: *mut f64,
    len: usize,
) -> QhStatus {
    non_null!(report, t, values);
    let r = &(*report).0;
    let Some(snap) = r.snapshots.get(index) else {
        return fail(
            QhStatus::OutOfRange,
            format!("snapshot {index} of {}", r.snapshots.len()),
        );
    };
    if len < snap.values().len() {
        return fail(
            QhStatus::BufferTooSmall,
            format!("need {} values, got {len}", snap.values().len()),
        );
    }
    *t = snap.t();
    ptr::copy_nonoverlapping(snap.values().as_ptr(), values, snap.values().len());
    QhStatus::Ok
}

/// Discrete front position at snapshot `index`.
///
/// # Safety
/// `report` must be a live handle; `t` and `x_front` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qh_report_front(
    report: *const QhReport,
    index: usize,
    t: *mut f64,
    x_front: *mut f64,
) -> QhStatus {
    non_null!(report, t, x_front);
    let r = &(*report).0;
    let Some(s) = r.front_trajectory.get(index) else {
        return fail(
            QhStatus::OutOfRange,
            format!("front sample {index} of {}", r.front_trajectory.len()),
        );
    };
    *t = s.t;
    *x_front = s.x_front;
    QhStatus::Ok
}
