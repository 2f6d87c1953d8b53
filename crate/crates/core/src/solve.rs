//! Solving the free angle so the closing edge reaches its target length,
//! sweeping the angle to trace the closing length, and the calibration search
//! that fixes the orientation sign of every construction step.

use crate::construct::{Construction, ExecError, SolveTarget};
use crate::geom::{self, Turn};
use crate::graphcheck::{crossing_report, verify, CheckConfig};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bound on |closing_length - target| at the accepted root.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-12;
/// Root finding also stops once the bracket is this narrow (degrees).
pub const BRACKET_WIDTH_TOL: f64 = 1e-13;
/// Iteration cap for the root finder.
pub const MAX_ITERATIONS: usize = 200;
/// Resolution of the pre-solve scan that asserts the root is unique.
const SCAN_SAMPLES: usize = 201;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("construction declares no solve directive")]
    NoSolveDirective,
    #[error("construction declares no closing edge")]
    NoClosingEdge,
    #[error("sweep needs at least 2 steps, got {steps}")]
    TooFewSteps { steps: usize },
    #[error(
        "no sign change of the residual over [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}"
    )]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("{count} sign changes of the residual over [{lo}, {hi}]; expected exactly one root")]
    MultipleSignChanges { lo: f64, hi: f64, count: usize },
    #[error("root finder exceeded {0} iterations")]
    MaxIterations(usize),
    #[error("no orientation assignment survives the calibration search")]
    NoAssignmentFound,
    #[error(transparent)]
    Exec(#[from] ExecError),
}

/// Root of the solved parameter, in degrees, with the residual actually
/// achieved and the bracket that was searched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub param_name: String,
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
}

/// One sweep sample: the parameter value, the closing length there, the
/// clearance of the drawing, and whether any crossing violation appeared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub param_value: f64,
    pub closing_length: f64,
    pub min_clearance: f64,
    pub crossings_found: bool,
}

/// Outcome of [`find_root`] on a plain function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Closing-length residual of the construction at the given parameter value:
/// closing length minus the solve directive's target.
pub fn residual(c: &Construction, value: f64) -> Result<f64, SolveError> {
    let target = c.solve_target().ok_or(SolveError::NoSolveDirective)?;
    residual_at(c, &target, value)
}

fn residual_at(c: &Construction, target: &SolveTarget, value: f64) -> Result<f64, SolveError> {
    let e = c.execute_with(&[(target.param.as_str(), value)])?;
    let length = e.closing_length().ok_or(SolveError::NoClosingEdge)?;
    Ok(length - target.target)
}

/// Brent-style bracketed root finding: bisection with secant and inverse
/// quadratic acceleration. Stops when |f| <= `tol` or the bracket is narrower
/// than [`BRACKET_WIDTH_TOL`]; fails if `f(lo)` and `f(hi)` do not straddle
/// zero or the iteration cap is hit.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<RootResult, SolveError>
where
    F: FnMut(f64) -> Result<f64, SolveError>,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    for (x, fx) in [(a, fa), (b, fb)] {
        if fx == 0.0 {
            return Ok(RootResult {
                value: x,
                residual: fx,
                iterations: 0,
            });
        }
    }
    if fa.signum() == fb.signum() {
        return Err(SolveError::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iteration in 0..MAX_ITERATIONS {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * BRACKET_WIDTH_TOL;
        let xm = 0.5 * (c - b);
        if fb == 0.0 || fb.abs() <= tol || xm.abs() <= tol1 {
            return Ok(RootResult {
                value: b,
                residual: fb,
                iterations: iteration,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Try secant (two points) or inverse quadratic (three points).
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let t = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * t * (t - r) - (b - a) * (r - 1.0));
                q = (t - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Err(SolveError::MaxIterations(MAX_ITERATIONS))
}

/// Solves the construction's free parameter so the closing edge reaches its
/// target length, using the default residual tolerance. The bracket defaults
/// to the solve directive's.
pub fn solve_param(
    c: &Construction,
    bracket: Option<(f64, f64)>,
) -> Result<SolveResult, SolveError> {
    solve_param_with(c, bracket, DEFAULT_RESIDUAL_TOL)
}

/// [`solve_param`] with an explicit residual tolerance.
///
/// Before root finding, the residual is scanned at 201 uniform samples over
/// the bracket; zero sign changes or more than one are reported as errors, so
/// a surprising extra root cannot pass silently.
pub fn solve_param_with(
    c: &Construction,
    bracket: Option<(f64, f64)>,
    tol: f64,
) -> Result<SolveResult, SolveError> {
    let target = c.solve_target().ok_or(SolveError::NoSolveDirective)?;
    let (lo, hi) = bracket.unwrap_or(target.bracket);

    let mut signs = Vec::with_capacity(SCAN_SAMPLES);
    let mut f_lo = 0.0;
    let mut f_hi = 0.0;
    for i in 0..SCAN_SAMPLES {
        let x = sample_at(lo, hi, i, SCAN_SAMPLES);
        let r = residual_at(c, &target, x)?;
        if i == 0 {
            f_lo = r;
        }
        if i + 1 == SCAN_SAMPLES {
            f_hi = r;
        }
        signs.push(r.signum());
    }
    let changes = signs.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
        + signs.iter().filter(|s| **s == 0.0).count();
    match changes {
        0 => return Err(SolveError::NoSignChange { lo, hi, f_lo, f_hi }),
        1 => {}
        count => return Err(SolveError::MultipleSignChanges { lo, hi, count }),
    }

    let root = find_root(|x| residual_at(c, &target, x), lo, hi, tol)?;
    Ok(SolveResult {
        param_name: target.param,
        value: root.value,
        residual: root.residual,
        iterations: root.iterations,
        bracket_lo: lo,
        bracket_hi: hi,
    })
}

fn sample_at(lo: f64, hi: f64, i: usize, steps: usize) -> f64 {
    if i + 1 == steps {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (steps - 1) as f64
    }
}

/// Executes the construction at `steps` uniform parameter values across
/// `range` (endpoints included; defaults to the solve directive's bracket)
/// and records closing length, clearance, and crossings at each sample.
pub fn sweep(
    c: &Construction,
    range: Option<(f64, f64)>,
    steps: usize,
) -> Result<Vec<SweepSample>, SolveError> {
    if steps < 2 {
        return Err(SolveError::TooFewSteps { steps });
    }
    let target = c.solve_target().ok_or(SolveError::NoSolveDirective)?;
    let (lo, hi) = range.unwrap_or(target.bracket);
    let mut samples = Vec::with_capacity(steps);
    for i in 0..steps {
        let x = sample_at(lo, hi, i, steps);
        let e = c.execute_with(&[(target.param.as_str(), x)])?;
        let closing = e.closing_length().ok_or(SolveError::NoClosingEdge)?;
        let report = crossing_report(&e);
        samples.push(SweepSample {
            param_value: x,
            closing_length: closing,
            min_clearance: report.min_clearance.unwrap_or(f64::INFINITY),
            crossings_found: !report.crossings.is_empty(),
        });
    }
    Ok(samples)
}

/// Formats sweep samples as CSV with 16 significant digits per number.
pub fn sweep_to_csv(samples: &[SweepSample]) -> String {
    let mut out = String::from("mu_deg,closing_length,min_clearance,crossings\n");
    for s in samples {
        out.push_str(&format!(
            "{:.15e},{:.15e},{:.15e},{}\n",
            s.param_value, s.closing_length, s.min_clearance, s.crossings_found
        ));
    }
    out
}

/// Options for [`calibrate_orientations`].
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrateOptions {
    /// Orientation slots forced to a fixed value (slot index, turn). Pinning
    /// the first slot to `Ccw` selects one of the two mirror images.
    pub pinned: Vec<(usize, Turn)>,
    /// Partial assignments are abandoned when two placed vertices come closer
    /// than this.
    pub coincidence_floor: f64,
    /// When set, an assignment is only accepted if the solved parameter
    /// matches this value within `value_tol` degrees.
    pub expected_value: Option<f64>,
    pub value_tol: f64,
}

impl Default for CalibrateOptions {
    fn default() -> Self {
        CalibrateOptions {
            pinned: Vec::new(),
            coincidence_floor: 1e-3,
            expected_value: None,
            value_tol: 1e-6,
        }
    }
}

/// Searches every ccw/cw assignment of the construction's orientation slots
/// (angle edges and apexes, in step order) by depth-first search, pruning any
/// prefix whose partial drawing already has a crossing violation, a vertex
/// coincidence, or an infeasible step.
///
/// A surviving full assignment is accepted when the full drawing is clean
/// and, if the construction declares a solve directive, the parameter solves,
/// the solved drawing verifies, and the solution matches `expected_value`
/// (when given). Returns every accepted assignment; expect two, one per
/// global mirror image, unless pinning breaks the tie.
pub fn calibrate_orientations(
    skeleton: &Construction,
    opts: &CalibrateOptions,
) -> Result<Vec<Vec<Turn>>, SolveError> {
    let slot_steps: Vec<usize> = skeleton
        .steps
        .iter()
        .enumerate()
        .filter(|(_, s)| s.turn().is_some())
        .map(|(i, _)| i)
        .collect();
    let mut accepted = Vec::new();
    let mut turns = vec![Turn::Ccw; slot_steps.len()];
    search(skeleton, opts, &slot_steps, &mut turns, 0, &mut accepted);
    if accepted.is_empty() {
        Err(SolveError::NoAssignmentFound)
    } else {
        Ok(accepted)
    }
}

fn search(
    skeleton: &Construction,
    opts: &CalibrateOptions,
    slot_steps: &[usize],
    turns: &mut Vec<Turn>,
    depth: usize,
    accepted: &mut Vec<Vec<Turn>>,
) {
    if depth == slot_steps.len() {
        if let Some(assignment) = accept(skeleton, opts, turns) {
            accepted.push(assignment);
        }
        return;
    }
    let pinned = opts
        .pinned
        .iter()
        .find(|(slot, _)| *slot == depth)
        .map(|(_, t)| *t);
    for turn in [Turn::Ccw, Turn::Cw] {
        if pinned.is_some_and(|p| p != turn) {
            continue;
        }
        turns[depth] = turn;
        if prefix_feasible(skeleton, opts, slot_steps, turns, depth) {
            search(skeleton, opts, slot_steps, turns, depth + 1, accepted);
        }
    }
}

/// Applies the first `depth + 1` turns to the step prefix ending at that slot
/// and executes it with default parameters; false when the partial drawing
/// fails to build, collides, or crosses itself.
fn prefix_feasible(
    skeleton: &Construction,
    opts: &CalibrateOptions,
    slot_steps: &[usize],
    turns: &[Turn],
    depth: usize,
) -> bool {
    let mut prefix = skeleton.clone();
    prefix.steps.truncate(slot_steps[depth] + 1);
    let prefix = prefix.with_turns(&turns[..=depth]);
    let Ok(e) = prefix.execute_default() else {
        return false;
    };
    drawing_clean(&e, opts.coincidence_floor)
}

fn drawing_clean(e: &crate::construct::Embedding, coincidence_floor: f64) -> bool {
    let coords: Vec<_> = e.points.values().copied().collect();
    for i in 0..coords.len() {
        for j in (i + 1)..coords.len() {
            if geom::distance(coords[i], coords[j]) < coincidence_floor {
                return false;
            }
        }
    }
    crossing_report(e).crossings.is_empty()
}

fn accept(skeleton: &Construction, opts: &CalibrateOptions, turns: &[Turn]) -> Option<Vec<Turn>> {
    let full = skeleton.with_turns(turns);
    let e = full.execute_default().ok()?;
    if !drawing_clean(&e, opts.coincidence_floor) {
        return None;
    }
    if full.solve_target().is_some() {
        let solved = solve_param(&full, None).ok()?;
        if let Some(expected) = opts.expected_value {
            if (solved.value - expected).abs() > opts.value_tol {
                return None;
            }
        }
        let at_root = full
            .execute_with(&[(solved.param_name.as_str(), solved.value)])
            .ok()?;
        if !verify(&at_root, &CheckConfig::default()).passed {
            return None;
        }
    }
    Some(turns.to_vec())
}
