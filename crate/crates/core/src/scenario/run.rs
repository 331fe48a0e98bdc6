use std::path::PathBuf;
use std::sync::Arc;

use crate::analysis::{cross_validate, symmetry_residual, GroupElement};
use crate::flux_law::{effective_diffusivity, flux_gap, linear_flux, modified_flux};
use crate::pde::{
    solve_gradient_form, BoundarySpec, Field, GradientBoundary, GradientEdge, Grid1D, Model,
    Scheme, SolveReport, DEFAULT_CFL_SAFETY,
};
use crate::scenario::output::{output_path, write_table};
use crate::scenario::{CsvTable, Mode, ScenarioConfig, ScenarioError};
use crate::similarity::{integrate_profile, locate_front, IntegrationOptions};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSummary {
    /// Files written, in order.
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Executes a validated scenario, writing its CSV files under `prefix`.
pub fn run(cfg: &ScenarioConfig, prefix: &str) -> Result<RunSummary, ScenarioError> {
    let mut out = Writer {
        prefix,
        comment: cfg.describe(),
        summary: RunSummary {
            files: Vec::new(),
            warnings: cfg.warnings.clone(),
        },
    };
    match cfg.mode {
        Mode::Similarity => similarity(cfg, &mut out)?,
        Mode::Pde => temperature(cfg, Model::Quasilinear, &mut out)?,
        Mode::Linear => temperature(cfg, Model::Linear, &mut out)?,
        Mode::GradientForm => gradient_form(cfg, &mut out)?,
        Mode::Compare => compare(cfg, &mut out)?,
        Mode::Symmetry => symmetry(cfg, &mut out)?,
        Mode::FluxTable => flux_table(cfg, &mut out)?,
    }
    for w in &out.summary.warnings {
        log::warn!("{w}");
    }
    Ok(out.summary)
}

struct Writer<'a> {
    prefix: &'a str,
    comment: String,
    summary: RunSummary,
}

impl Writer<'_> {
    fn table(&self, header: &[&str]) -> CsvTable {
        CsvTable::new(self.comment.clone(), header)
    }

    fn write(&mut self, name: &str, table: &CsvTable) -> Result<(), ScenarioError> {
        let path = output_path(self.prefix, name);
        write_table(&path, table)?;
        log::info!("wrote {} ({} rows)", path.display(), table.len());
        self.summary.files.push(path);
        Ok(())
    }
}

fn integration_options(cfg: &ScenarioConfig) -> IntegrationOptions {
    IntegrationOptions {
        rtol: cfg.rtol,
        atol: cfg.atol,
        ..IntegrationOptions::default()
    }
}

fn similarity(cfg: &ScenarioConfig, out: &mut Writer) -> Result<(), ScenarioError> {
    let profile = integrate_profile(
        cfg.b,
        cfg.c,
        &cfg.params,
        cfg.z_max,
        &integration_options(cfg),
    )?;
    let front = locate_front(&profile)?;

    let mut table = out.table(&["z", "f", "fp"]);
    if let Some(i) = profile.tail_start() {
        // Rows from this z on have f <= 0 and are not physical.
        table = CsvTable::new(
            format!("{} tail_from_z={:?}", out.comment, profile.z()[i]),
            &["z", "f", "fp"],
        );
    }
    for ((&z, &f), &fp) in profile.z().iter().zip(profile.f()).zip(profile.fp()) {
        table.push(&[z, f, fp]);
    }
    out.write("profile.csv", &table)?;

    let mut fronts = out.table(&["t", "z0", "x0", "V0"]);
    for &t in &cfg.output_times {
        fronts.push(&[t, front.z0, front.position(t)?, front.velocity(t)?]);
    }
    out.write("front.csv", &fronts)
}

fn grid(cfg: &ScenarioConfig) -> Result<Grid1D, ScenarioError> {
    Ok(Grid1D::spanning(cfg.x_max, cfg.dx)?)
}

fn solve_temperature(
    cfg: &ScenarioConfig,
    model: Model,
    out_times: &[f64],
) -> Result<SolveReport, ScenarioError> {
    let scheme = Scheme::new(model, cfg.params).with_cfl_safety(cfg.cfl_safety)?;
    let init = Field::zeros(grid(cfg)?, 0.0);
    Ok(scheme.solve(&init, &BoundarySpec::sqrt_ramp(cfg.b), cfg.t_end, out_times)?)
}

fn write_snapshots(
    report: &SolveReport,
    column: &str,
    out: &mut Writer,
) -> Result<(), ScenarioError> {
    for snap in &report.snapshots {
        let mut table = out.table(&["x", column]);
        for (x, &v) in snap.grid().nodes().zip(snap.values()) {
            table.push(&[x, v]);
        }
        out.write(&format!("snapshot_{:?}.csv", snap.t()), &table)?;
    }
    let mut traj = out.table(&["t", "x_front", "V_estimate"]);
    for s in &report.front_trajectory {
        // Self-similar growth x = z√t gives V = x/(2t).
        traj.push(&[s.t, s.x_front, s.x_front / (2.0 * s.t)]);
    }
    out.write("front_trajectory.csv", &traj)?;
    out.summary.warnings.extend(report.warnings.iter().cloned());
    Ok(())
}

fn temperature(cfg: &ScenarioConfig, model: Model, out: &mut Writer) -> Result<(), ScenarioError> {
    let report = solve_temperature(cfg, model, &cfg.output_times)?;
    write_snapshots(&report, "T", out)
}

fn gradient_form(cfg: &ScenarioConfig, out: &mut Writer) -> Result<(), ScenarioError> {
    if cfg.cfl_safety != DEFAULT_CFL_SAFETY {
        out.summary.warnings.push(format!(
            "gradient-form runs use cfl_safety={DEFAULT_CFL_SAFETY}; ignoring {}",
            cfg.cfl_safety
        ));
    }
    let b = cfg.b;
    let bc = GradientBoundary {
        left: GradientEdge::TemperatureTrace(Arc::new(move |t: f64| b * t.max(0.0).sqrt())),
        right: GradientEdge::ZeroFlux,
    };
    let init = Field::zeros(grid(cfg)?, 0.0);
    let report = solve_gradient_form(&init, &bc, &cfg.params, cfg.t_end, &cfg.output_times)?;
    write_snapshots(&report, "H", out)
}

fn compare(cfg: &ScenarioConfig, out: &mut Writer) -> Result<(), ScenarioError> {
    let profile = integrate_profile(
        cfg.b,
        cfg.c,
        &cfg.params,
        cfg.z_max,
        &integration_options(cfg),
    )?;
    let report = solve_temperature(cfg, Model::Quasilinear, &cfg.output_times)?;
    let mut table = out.table(&["t", "error"]);
    for &t in &cfg.output_times {
        table.push(&[t, cross_validate(&report, &profile, t)?]);
    }
    out.summary.warnings.extend(report.warnings.iter().cloned());
    out.write("crossval.csv", &table)
}

fn symmetry(cfg: &ScenarioConfig, out: &mut Writer) -> Result<(), ScenarioError> {
    let n = cfg.snapshots;
    let times: Vec<f64> = (1..=n).map(|k| cfg.t_end * k as f64 / n as f64).collect();
    let report = solve_temperature(cfg, Model::Quasilinear, &times)?;
    let g = cfg.element;
    let elements = [
        ("identity", GroupElement::IDENTITY),
        ("time_shift", GroupElement::time_shift(g.tau)),
        ("space_shift", GroupElement::space_shift(g.xi)),
        (
            "temperature_shift",
            GroupElement::temperature_shift(g.theta),
        ),
        ("dilatation", GroupElement::dilatation(g.eps)),
        ("combined", g),
    ];
    let base = symmetry_residual(&GroupElement::IDENTITY, &report, &cfg.params, &cfg.window)?;
    let mut table = out.table(&[
        "element", "tau", "xi", "theta", "eps", "residual", "ratio", "points",
    ]);
    for (label, e) in elements {
        let r = symmetry_residual(&e, &report, &cfg.params, &cfg.window)?;
        let ratio = if base.sup_norm > 0.0 {
            r.sup_norm / base.sup_norm
        } else {
            f64::NAN
        };
        table.push_labelled(
            label,
            &[
                e.tau,
                e.xi,
                e.theta,
                e.eps,
                r.sup_norm,
                ratio,
                r.points as f64,
            ],
        );
    }
    out.summary.warnings.extend(report.warnings.iter().cloned());
    out.write("symmetry.csv", &table)
}

fn flux_table(cfg: &ScenarioConfig, out: &mut Writer) -> Result<(), ScenarioError> {
    let p = &cfg.params;
    let mut table = out.table(&["g", "J_linear", "J_modified", "gap", "D_eff"]);
    for &g in &cfg.gradients {
        table.push(&[
            g,
            linear_flux(g, p),
            modified_flux(g, p),
            flux_gap(g, p),
            effective_diffusivity(g, p),
        ]);
    }
    out.write("flux_table.csv", &table)
}
