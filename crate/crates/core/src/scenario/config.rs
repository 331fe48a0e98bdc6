//! Flat `key = value` scenario files.
//!
//! One assignment per line, `#` starts a comment, keys are case-sensitive and
//! may appear once. Numbers accept plain decimal/exponent notation and simple
//! fractions such as `1/400`; lists are comma-separated.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::analysis::{GroupElement, ResidualWindow};
use crate::flux_law::PhysParams;
use crate::pde::DEFAULT_CFL_SAFETY;
use crate::scenario::ScenarioError;

pub const KNOWN_KEYS: &[&str] = &[
    "mode",
    "D_T",
    "a",
    "a_squared",
    "lambda",
    "c",
    "rho",
    "B",
    "C",
    "z_max",
    "x_max",
    "dx",
    "t_end",
    "output_times",
    "rtol",
    "atol",
    "cfl_safety",
    "snapshots",
    "eps",
    "tau",
    "xi",
    "theta",
    "window_t_min",
    "window_t_max",
    "window_x_min",
    "window_x_max",
    "gradients",
    "g_count",
    "output",
];

/// Minimum number of uniform snapshots behind a symmetry check.
pub const MIN_SYMMETRY_SNAPSHOTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Similarity,
    Pde,
    Linear,
    GradientForm,
    Compare,
    Symmetry,
    FluxTable,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Similarity => "similarity",
            Mode::Pde => "pde",
            Mode::Linear => "linear",
            Mode::GradientForm => "gradient-form",
            Mode::Compare => "compare",
            Mode::Symmetry => "symmetry",
            Mode::FluxTable => "flux-table",
        }
    }

    fn needs_grid(self) -> bool {
        !matches!(self, Mode::Similarity | Mode::FluxTable)
    }

    fn needs_profile(self) -> bool {
        matches!(self, Mode::Similarity | Mode::Compare)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "similarity" => Mode::Similarity,
            "pde" => Mode::Pde,
            "linear" => Mode::Linear,
            "gradient-form" => Mode::GradientForm,
            "compare" => Mode::Compare,
            "symmetry" => Mode::Symmetry,
            "flux-table" => Mode::FluxTable,
            other => return Err(format!("unknown mode `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub mode: Mode,
    pub params: PhysParams,
    /// Boundary value `B` (`T(t,0) = B√t`, `f(0) = B`).
    pub b: f64,
    /// Boundary slope `C = f'(0)`.
    pub c: f64,
    pub z_max: f64,
    pub x_max: f64,
    pub dx: f64,
    pub t_end: f64,
    pub output_times: Vec<f64>,
    pub rtol: f64,
    pub atol: f64,
    pub cfl_safety: f64,
    pub snapshots: usize,
    pub element: GroupElement,
    pub window: ResidualWindow,
    pub gradients: Vec<f64>,
    pub output: Option<String>,
    pub warnings: Vec<String>,
}

/// Raw assignments with the line each came from (0 for overrides).
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let mut entries = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ScenarioError::Parse {
                    line: line_no,
                    key: None,
                    message: format!("expected `key = value`, got `{content}`"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(ScenarioError::Parse {
                    line: line_no,
                    key: None,
                    message: "empty key".into(),
                });
            }
            if !KNOWN_KEYS.contains(&key) {
                return Err(ScenarioError::Parse {
                    line: line_no,
                    key: Some(key.into()),
                    message: "unknown key".into(),
                });
            }
            if let Some((first, _)) = entries.get(key) {
                return Err(ScenarioError::Parse {
                    line: line_no,
                    key: Some(key.into()),
                    message: format!("duplicate key (first set on line {first})"),
                });
            }
            entries.insert(key.to_string(), (line_no, value.to_string()));
        }
        Ok(Self { entries })
    }

    /// Applies a `key=value` override; the override wins over the file.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ScenarioError> {
        let Some((key, value)) = assignment.split_once('=') else {
            return Err(ScenarioError::Parse {
                line: 0,
                key: None,
                message: format!("override `{assignment}` is not `key=value`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if !KNOWN_KEYS.contains(&key) {
            return Err(ScenarioError::Parse {
                line: 0,
                key: Some(key.into()),
                message: "unknown key in override".into(),
            });
        }
        if let Some((line, old)) = self.entries.get(key) {
            log::info!("override {key}: `{old}` (line {line}) -> `{value}`");
        }
        self.entries.insert(key.to_string(), (0, value.to_string()));
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&(usize, String)> {
        self.entries.get(key)
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ScenarioError> {
        self.get(key)
            .map(|(line, v)| parse_number(v).map_err(|m| parse_err(*line, key, m)))
            .transpose()
    }

    fn number_or(&self, key: &str, default: f64) -> Result<f64, ScenarioError> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>, ScenarioError> {
        self.get(key)
            .map(|(line, v)| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(parse_number)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|m| parse_err(*line, key, m))
            })
            .transpose()
    }

    fn count(&self, key: &str, default: usize) -> Result<usize, ScenarioError> {
        match self.get(key) {
            None => Ok(default),
            Some((line, v)) => v
                .parse::<usize>()
                .map_err(|e| parse_err(*line, key, format!("`{v}`: {e}"))),
        }
    }
}

fn parse_err(line: usize, key: &str, message: String) -> ScenarioError {
    ScenarioError::Parse {
        line,
        key: Some(key.into()),
        message,
    }
}

fn invalid(key: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation {
        key: key.into(),
        message: message.into(),
    }
}

/// Decimal number or `p/q` fraction.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| format!("`{s}` is not a number: {e}"))
    };
    let v = match s.split_once('/') {
        Some((num, den)) => parse(num)? / parse(den)?,
        None => parse(s)?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Parses and validates a scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    ScenarioConfig::from_raw(&RawConfig::parse(text)?)
}

impl ScenarioConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, ScenarioError> {
        let mode = match raw.get("mode") {
            None => return Err(invalid("mode", "mode is required")),
            Some((line, v)) => v.parse::<Mode>().map_err(|m| parse_err(*line, "mode", m))?,
        };

        let params = resolve_params(raw)?;
        let mut warnings = Vec::new();
        if params.is_non_physical() {
            warnings.push(format!(
                "a={} lies outside the physical range 0 < a <= 0.1",
                params.a()
            ));
        }

        let b = raw.number_or("B", 1.0)?;
        let c = raw.number_or("C", -1.0)?;
        let z_max = raw.number_or("z_max", 5.0)?;
        let x_max = raw.number_or("x_max", 8.0)?;
        let dx = raw.number_or("dx", 1.0 / 400.0)?;
        let t_end = raw.number_or("t_end", 1.0)?;
        let rtol = raw.number_or("rtol", 1e-10)?;
        let atol = raw.number_or("atol", 1e-10)?;
        let cfl_safety = raw.number_or("cfl_safety", DEFAULT_CFL_SAFETY)?;
        let snapshots = raw.count("snapshots", 100)?;
        let output_times = raw.list("output_times")?.unwrap_or_else(|| vec![t_end]);

        if !(t_end > 0.0) {
            return Err(invalid("t_end", format!("t_end must be > 0, got {t_end}")));
        }
        if output_times.is_empty() {
            return Err(invalid(
                "output_times",
                "at least one output time is required",
            ));
        }
        let mut prev = 0.0;
        for &t in &output_times {
            if !(t > prev) {
                return Err(invalid(
                    "output_times",
                    format!("output times must be > 0 and strictly increasing (at {t})"),
                ));
            }
            if mode.needs_grid() && t > t_end {
                return Err(invalid(
                    "output_times",
                    format!("output time {t} exceeds t_end={t_end}"),
                ));
            }
            prev = t;
        }
        if !(rtol > 0.0 && atol > 0.0) {
            return Err(invalid("rtol", "integrator tolerances must be > 0"));
        }
        if mode.needs_profile() {
            if c == 0.0 {
                return Err(invalid("C", "boundary slope C must be nonzero"));
            }
            if !(z_max > 0.0) {
                return Err(invalid("z_max", format!("z_max must be > 0, got {z_max}")));
            }
        }
        if mode.needs_grid() {
            if !(dx > 0.0) {
                return Err(invalid("dx", format!("dx must be > 0, got {dx}")));
            }
            if !(x_max > 0.0) || x_max / dx < 2.0 {
                return Err(invalid(
                    "x_max",
                    format!("x_max={x_max} must span at least 2 cells of dx={dx}"),
                ));
            }
            if !(cfl_safety > 0.0 && cfl_safety <= 1.0) {
                return Err(invalid(
                    "cfl_safety",
                    format!("cfl_safety must be in (0, 1], got {cfl_safety}"),
                ));
            }
        }
        if mode == Mode::Symmetry && snapshots < MIN_SYMMETRY_SNAPSHOTS {
            return Err(invalid(
                "snapshots",
                format!("symmetry checks need at least {MIN_SYMMETRY_SNAPSHOTS} snapshots, got {snapshots}"),
            ));
        }

        let element = GroupElement {
            tau: raw.number_or("tau", 0.05 * t_end)?,
            xi: raw.number_or("xi", 0.0125 * x_max)?,
            theta: raw.number_or("theta", 0.2 * b.abs().max(1.0))?,
            eps: raw.number_or("eps", 0.1)?,
        };
        let window = ResidualWindow {
            t_min: raw.number_or("window_t_min", 0.5 * t_end)?,
            t_max: raw.number_or("window_t_max", 0.9 * t_end)?,
            x_min: raw.number_or("window_x_min", 0.03125 * x_max)?,
            x_max: raw.number_or("window_x_max", 0.375 * x_max)?,
        };
        if mode == Mode::Symmetry && !(window.t_min <= window.t_max && window.x_min <= window.x_max)
        {
            return Err(invalid(
                "window_t_min",
                format!("empty residual window {window:?}"),
            ));
        }

        let gradients = match raw.list("gradients")? {
            Some(g) => g,
            None => default_gradients(params.a(), raw.count("g_count", 25)?),
        };

        Ok(Self {
            mode,
            params,
            b,
            c,
            z_max,
            x_max,
            dx,
            t_end,
            output_times,
            rtol,
            atol,
            cfl_safety,
            snapshots,
            element,
            window,
            gradients,
            output: raw.get("output").map(|(_, v)| v.clone()),
            warnings,
        })
    }

    /// One-line `key=value` rendering of the resolved parameter set.
    pub fn describe(&self) -> String {
        let p = &self.params;
        let times: Vec<String> = self.output_times.iter().map(|t| format!("{t:?}")).collect();
        let mut s = format!(
            "mode={} D_T={:?} a={:?} a_squared={:?} lambda={:?} c={:?} rho={:?} B={:?} C={:?}",
            self.mode,
            p.diffusivity(),
            p.a(),
            p.a_squared(),
            p.lambda(),
            p.heat_capacity(),
            p.density(),
            self.b,
            self.c
        );
        match self.mode {
            Mode::Similarity => {
                s += &format!(
                    " z_max={:?} rtol={:?} atol={:?}",
                    self.z_max, self.rtol, self.atol
                );
            }
            Mode::FluxTable => {}
            _ => {
                s += &format!(
                    " x_max={:?} dx={:?} t_end={:?} cfl_safety={:?}",
                    self.x_max, self.dx, self.t_end, self.cfl_safety
                );
                if self.mode == Mode::Compare {
                    s += &format!(
                        " z_max={:?} rtol={:?} atol={:?}",
                        self.z_max, self.rtol, self.atol
                    );
                }
                if self.mode == Mode::Symmetry {
                    let w = &self.window;
                    s += &format!(
                        " snapshots={} window_t=[{:?},{:?}] window_x=[{:?},{:?}]",
                        self.snapshots, w.t_min, w.t_max, w.x_min, w.x_max
                    );
                }
            }
        }
        if self.mode != Mode::FluxTable {
            s += &format!(" output_times=[{}]", times.join(","));
        }
        s
    }
}

fn resolve_params(raw: &RawConfig) -> Result<PhysParams, ScenarioError> {
    let (a, exact_a_squared) = match (raw.number("a")?, raw.number("a_squared")?) {
        (Some(_), Some(_)) => return Err(invalid("a", "give either `a` or `a_squared`, not both")),
        (Some(a), None) => (a, None),
        (None, Some(a2)) => {
            if !(a2 > 0.0) {
                return Err(invalid(
                    "a_squared",
                    format!("a > 0 required, got a_squared={a2}"),
                ));
            }
            (a2.sqrt(), Some(a2))
        }
        (None, None) => return Err(invalid("a", "one of `a` or `a_squared` is required")),
    };
    if !(a > 0.0) {
        return Err(invalid("a", format!("a > 0 required, got {a}")));
    }
    let material = (raw.number("lambda")?, raw.number("c")?, raw.number("rho")?);
    let diffusivity = raw.number("D_T")?;
    let result = match material {
        (None, None, None) => PhysParams::new(diffusivity.unwrap_or(1.0), a),
        (Some(l), Some(c), Some(r)) => match diffusivity {
            Some(d) => PhysParams::with_material(d, a, l, c, r),
            None => PhysParams::from_material(l, c, r, a),
        },
        _ => {
            return Err(invalid(
                "lambda",
                "`lambda`, `c` and `rho` must be given together",
            ))
        }
    };
    let params = result.map_err(|e| invalid("D_T", e.to_string()))?;
    Ok(match exact_a_squared {
        Some(a2) => params.keep_a_squared(a2),
        None => params,
    })
}

/// Zero followed by `count` log-spaced gradients on `[1e-3·a, 1e3·a]`.
fn default_gradients(a: f64, count: usize) -> Vec<f64> {
    let mut g = vec![0.0];
    if count == 1 {
        g.push(a);
    } else if count > 1 {
        g.extend((0..count).map(|i| a * 10f64.powf(-3.0 + 6.0 * i as f64 / (count - 1) as f64)));
    }
    g
}
