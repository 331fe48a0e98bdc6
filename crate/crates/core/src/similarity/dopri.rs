//! Dormand–Prince 5(4) with step-size control, continuous extension and
//! terminal events, for small fixed-size systems.

/// Outcome of evaluating the right-hand side at one stage.
///
/// `Err(())` marks a point where the system is not defined; the step is
/// rejected and retried with a smaller size.
pub type RhsResult<const N: usize> = Result<[f64; N], ()>;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

/// Continuous extension of one accepted step over `[x, x + h]`.
#[derive(Debug, Clone)]
pub struct DenseStep<const N: usize> {
    x: f64,
    h: f64,
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    pub fn start(&self) -> f64 {
        self.x
    }

    pub fn end(&self) -> f64 {
        self.x + self.h
    }

    pub fn eval(&self, x: f64) -> [f64; N] {
        let s = (x - self.x) / self.h;
        let s1 = 1.0 - s;
        let c = &self.cont;
        std::array::from_fn(|i| {
            c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * c[4][i])))
        })
    }
}

/// Piecewise continuous solution assembled from accepted steps.
#[derive(Debug, Clone)]
pub struct DenseSolution<const N: usize> {
    steps: Vec<DenseStep<N>>,
    end: f64,
}

impl<const N: usize> DenseSolution<N> {
    pub fn start(&self) -> f64 {
        self.steps.first().map_or(self.end, DenseStep::start)
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    /// Evaluates the interpolant; `x` is clamped to the covered interval.
    pub fn eval(&self, x: f64) -> [f64; N] {
        let x = x.clamp(self.start(), self.end);
        let idx = self
            .steps
            .partition_point(|s| s.end() < x)
            .min(self.steps.len() - 1);
        self.steps[idx].eval(x)
    }
}

/// Why the integration ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// Reached the requested end point.
    Completed,
    /// Event function `index` crossed from positive to nonpositive at `x`.
    Event { index: usize, x: f64 },
    /// Step size fell below the representable resolution at `x`.
    StepCollapse { x: f64, h: f64 },
    /// Step budget exhausted.
    MaxSteps { x: f64 },
}

#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    /// Accepted mesh points, starting with the initial point.
    pub x: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub dense: Option<DenseSolution<N>>,
    pub termination: Termination,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn error_norm<const N: usize>(
    err: &[f64; N],
    y0: &[f64; N],
    y1: &[f64; N],
    settings: &Settings,
) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| {
            let sc = settings.atol + settings.rtol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (sum / N as f64).sqrt()
}

/// Integrates `y' = rhs(x, y)` from `x0` to `x_end` (`x_end > x0`).
///
/// `events` are checked after every accepted step; the first one that moves
/// from positive to nonpositive is located by bisection on the continuous
/// extension, and the trajectory is truncated there. Events are not checked
/// at the initial point.
pub fn integrate<const N: usize, F, G>(
    rhs: F,
    x0: f64,
    y0: [f64; N],
    x_end: f64,
    settings: &Settings,
    events: &[G],
) -> Trajectory<N>
where
    F: Fn(f64, &[f64; N]) -> RhsResult<N>,
    G: Fn(f64, &[f64; N]) -> f64,
{
    let mut xs = vec![x0];
    let mut ys = vec![y0];
    let mut steps: Vec<DenseStep<N>> = Vec::new();

    let mut x = x0;
    let mut y = y0;
    let span = x_end - x0;
    let finish = |xs: Vec<f64>, ys: Vec<[f64; N]>, steps: Vec<DenseStep<N>>, end, termination| {
        let dense = if steps.is_empty() {
            None
        } else {
            Some(DenseSolution { steps, end })
        };
        Trajectory {
            x: xs,
            y: ys,
            dense,
            termination,
        }
    };

    let mut k1 = match rhs(x, &y) {
        Ok(k) => k,
        Err(()) => return finish(xs, ys, steps, x, Termination::StepCollapse { x, h: 0.0 }),
    };
    let mut h = initial_step(&k1, &y, span, settings);
    let mut prev_events: Vec<f64> = events.iter().map(|g| g(x, &y)).collect();

    for _ in 0..settings.max_steps {
        if x >= x_end {
            return finish(xs, ys, steps, x, Termination::Completed);
        }
        let min_h = 16.0 * f64::EPSILON * x.abs().max(span.abs()).max(1.0);
        if h < min_h {
            return finish(xs, ys, steps, x, Termination::StepCollapse { x, h });
        }
        let last = x + h >= x_end;
        let h_try = if last { x_end - x } else { h };

        let attempt = (|| -> Result<_, ()> {
            let k2 = rhs(x + C2 * h_try, &axpy(&y, h_try, &[(A21, &k1)]))?;
            let k3 = rhs(x + C3 * h_try, &axpy(&y, h_try, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = rhs(
                x + C4 * h_try,
                &axpy(&y, h_try, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            )?;
            let k5 = rhs(
                x + C5 * h_try,
                &axpy(&y, h_try, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = rhs(
                x + h_try,
                &axpy(
                    &y,
                    h_try,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            )?;
            let y1 = axpy(
                &y,
                h_try,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = rhs(x + h_try, &y1)?;
            Ok((k3, k4, k5, k6, k7, y1))
        })();

        let Ok((k3, k4, k5, k6, k7, y1)) = attempt else {
            h = h_try * FAC_MIN;
            continue;
        };

        let err: [f64; N] = std::array::from_fn(|i| {
            h_try * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
        });
        let en = error_norm(&err, &y, &y1, settings);
        if !en.is_finite() || en > 1.0 {
            let fac = if en.is_finite() {
                (SAFETY * en.powf(-0.2)).clamp(FAC_MIN, 1.0)
            } else {
                FAC_MIN
            };
            h = h_try * fac;
            continue;
        }

        let cont: [[f64; N]; 5] = {
            let ydiff: [f64; N] = std::array::from_fn(|i| y1[i] - y[i]);
            let bspl: [f64; N] = std::array::from_fn(|i| h_try * k1[i] - ydiff[i]);
            [
                y,
                ydiff,
                bspl,
                std::array::from_fn(|i| ydiff[i] - h_try * k7[i] - bspl[i]),
                std::array::from_fn(|i| {
                    h_try
                        * (D1 * k1[i]
                            + D3 * k3[i]
                            + D4 * k4[i]
                            + D5 * k5[i]
                            + D6 * k6[i]
                            + D7 * k7[i])
                }),
            ]
        };
        let step = DenseStep { x, h: h_try, cont };
        let x1 = if last { x_end } else { x + h_try };

        let now: Vec<f64> = events.iter().map(|g| g(x1, &y1)).collect();
        let fired = (0..events.len()).find(|&i| prev_events[i] > 0.0 && now[i] <= 0.0);
        if let Some(index) = fired {
            let xe = locate_event(&events[index], &step, x, x1);
            let ye = step.eval(xe);
            steps.push(step);
            xs.push(xe);
            ys.push(ye);
            return finish(xs, ys, steps, xe, Termination::Event { index, x: xe });
        }

        steps.push(step);
        x = x1;
        y = y1;
        xs.push(x);
        ys.push(y);
        k1 = k7;
        prev_events = now;

        let fac = (SAFETY * en.max(1e-10).powf(-0.2)).clamp(FAC_MIN, FAC_MAX);
        h = h_try * fac;
    }
    finish(xs, ys, steps, x, Termination::MaxSteps { x })
}

/// Bisection on the continuous extension. Returns a point where the event
/// function is nonpositive, within a few ulps of the crossing.
fn locate_event<const N: usize, G>(g: &G, step: &DenseStep<N>, mut lo: f64, mut hi: f64) -> f64
where
    G: Fn(f64, &[f64; N]) -> f64,
{
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid, &step.eval(mid)) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn initial_step<const N: usize>(k1: &[f64; N], y: &[f64; N], span: f64, s: &Settings) -> f64 {
    let scale: [f64; N] = std::array::from_fn(|i| s.atol + s.rtol * y[i].abs());
    let d0 = (y
        .iter()
        .zip(&scale)
        .map(|(v, sc)| (v / sc).powi(2))
        .sum::<f64>()
        / N as f64)
        .sqrt();
    let d1 = (k1
        .iter()
        .zip(&scale)
        .map(|(v, sc)| (v / sc).powi(2))
        .sum::<f64>()
        / N as f64)
        .sqrt();
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h.min(0.1 * span.abs()).max(1e-10 * span.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    const NO_EVENTS: &[fn(f64, &[f64; 2]) -> f64] = &[];

    fn settings(tol: f64) -> Settings {
        Settings {
            rtol: tol,
            atol: tol,
            max_steps: 100_000,
        }
    }

    #[test]
    fn harmonic_oscillator() {
        let traj = integrate(
            |_, y: &[f64; 2]| Ok([y[1], -y[0]]),
            0.0,
            [0.0, 1.0],
            10.0,
            &settings(1e-10),
            NO_EVENTS,
        );
        assert_eq!(traj.termination, Termination::Completed);
        let last = traj.y.last().unwrap();
        assert!((last[0] - 10f64.sin()).abs() < 1e-8);
        assert!((last[1] - 10f64.cos()).abs() < 1e-8);
        let dense = traj.dense.unwrap();
        for x in [0.3, 2.71, 7.5, 9.99] {
            let y = dense.eval(x);
            assert!((y[0] - x.sin()).abs() < 1e-8, "dense at {x}");
        }
    }

    #[test]
    fn event_is_located_precisely() {
        // y = cos(x), first zero at π/2.
        let events = [|_: f64, y: &[f64; 2]| y[0]];
        let traj = integrate(
            |_, y: &[f64; 2]| Ok([y[1], -y[0]]),
            0.0,
            [1.0, 0.0],
            10.0,
            &settings(1e-11),
            &events,
        );
        match traj.termination {
            Termination::Event { index: 0, x } => {
                assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-9)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn undefined_region_collapses_step() {
        // y' = -1/(2y) reaches y=0 at x=1 with infinite slope.
        let traj = integrate(
            |_, y: &[f64; 1]| {
                if y[0] > 0.0 {
                    Ok([-0.5 / y[0]])
                } else {
                    Err(())
                }
            },
            0.0,
            [1.0],
            2.0,
            &Settings {
                rtol: 1e-10,
                atol: 1e-10,
                max_steps: 100_000,
            },
            &[] as &[fn(f64, &[f64; 1]) -> f64],
        );
        match traj.termination {
            Termination::StepCollapse { x, .. } => assert!((x - 1.0).abs() < 1e-6),
            other => panic!("unexpected {other:?}"),
        }
    }
}
