//! Speed-profile planning along a fixed path.
//!
//! Given [`PathBounds`], the planner computes the pointwise-largest
//! admissible squared-speed profile `w(lambda)` and the travel time it
//! implies:
//!
//! * the *forward* operator propagates the entry speed to the right,
//!   ramping at `alpha_plus` and clipping at `mu_plus`;
//! * the *backward* operator propagates the exit speed to the left,
//!   ramping at `|alpha_minus|`;
//! * their pointwise minimum (*meet*) is the fastest profile honouring
//!   both boundaries, and the plan is feasible iff that profile stays
//!   above `mu_minus` and actually attains the requested boundary speeds.
//!
//! Piecewise-constant bounds are planned exactly: profiles are piecewise
//! linear with breakpoints only where bounds change or a ramp hits a cap.
//! Jumps (cap drops, unbounded slopes) are encoded as two points sharing
//! one `lambda`. Sampled bounds fall back to a first-order grid recurrence.
//!
//! Travel time integrates `w^{-1/2}`, which has the closed form
//! `2 d / (sqrt(w0) + sqrt(w1))` on a linear piece — finite even when one
//! endpoint speed is zero, and `+inf` only when `w` vanishes on a whole
//! piece (the vehicle stalls).

use alloc::vec::Vec;

use crate::math;
use crate::path::PathBounds;

/// Tolerance for feasibility comparisons (floor and boundary attainment).
///
/// Exact-engine profiles are built from the bound values by a handful of
/// additions and multiplications, so errors are a few ulps; 1e-9 absorbs
/// them across the squared-speed magnitudes the tests exercise (up to
/// ~1e2) without masking real violations.
const FEAS_TOL: f64 = 1e-9;

/// How a profile was computed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Engine {
    /// Closed-form per constant-bound segment; exact for piecewise-constant
    /// bounds.
    Exact,
    /// First-order recurrence on a per-arc uniform grid with the given
    /// target step.
    Grid {
        /// Target spacing; each arc uses `ceil(len/step)` uniform cells.
        step: f64,
    },
}

impl Engine {
    /// Exact when the path's bounds support it, otherwise a grid fine
    /// enough to resolve every arc into at least 1000 cells.
    pub fn auto(pb: &PathBounds) -> Engine {
        if pb.is_exact() {
            Engine::Exact
        } else {
            Engine::Grid {
                step: default_grid_step(pb),
            }
        }
    }
}

/// Default grid step: the shortest positive arc divided into 1000 cells.
pub fn default_grid_step(pb: &PathBounds) -> f64 {
    let shortest = pb
        .arcs()
        .iter()
        .filter(|a| a.length > 0.0)
        .fold(f64::INFINITY, |m, a| m.min(a.length));
    if shortest.is_finite() {
        shortest / 1000.0
    } else {
        1.0
    }
}

/// A piecewise-linear squared-speed profile over `[0, len]`.
///
/// Breakpoints ascend; a repeated `lambda` encodes a jump (left value
/// first). Values are nonnegative and may be `+inf` where no bound caps
/// the speed.
#[derive(Clone, Debug, PartialEq)]
pub struct SpeedProfile {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    engine: Engine,
}

impl SpeedProfile {
    pub(crate) fn from_points(points: Vec<(f64, f64)>, engine: Engine) -> SpeedProfile {
        debug_assert!(!points.is_empty());
        debug_assert!(points.windows(2).all(|p| p[0].0 <= p[1].0));
        debug_assert!(points.iter().all(|p| !p.1.is_nan() && p.1 >= 0.0));
        let mut breakpoints = Vec::with_capacity(points.len());
        let mut values = Vec::with_capacity(points.len());
        for (x, w) in points {
            // Drop exact duplicates; keep genuine jumps (same x, new w).
            if breakpoints.last() == Some(&x) && values.last() == Some(&w) {
                continue;
            }
            breakpoints.push(x);
            values.push(w);
        }
        SpeedProfile {
            breakpoints,
            values,
            engine,
        }
    }

    /// Offsets at which the profile's value or slope may change; repeated
    /// offsets encode jumps.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Squared-speed values at the breakpoints.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Engine the profile was computed with.
    pub fn engine(&self) -> Engine {
        self.engine
    }

    /// Domain end.
    pub fn len(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// Whether the domain has zero length.
    pub fn is_empty(&self) -> bool {
        self.len() == 0.0
    }

    /// Left and right limits at `lambda` (equal except at jumps).
    pub fn value_pair_at(&self, lambda: f64) -> (f64, f64) {
        let bps = &self.breakpoints;
        let lo = bps.partition_point(|b| *b < lambda);
        let hi = bps.partition_point(|b| *b <= lambda);
        if lo == hi {
            // Not a breakpoint: interpolate within (lo-1, lo), clamping
            // outside the domain.
            if lo == 0 {
                return (self.values[0], self.values[0]);
            }
            if lo == bps.len() {
                let v = *self.values.last().unwrap();
                return (v, v);
            }
            let (x0, w0) = (bps[lo - 1], self.values[lo - 1]);
            let (x1, w1) = (bps[lo], self.values[lo]);
            let v = if w0 == w1 {
                w0
            } else {
                w0 + (w1 - w0) * ((lambda - x0) / (x1 - x0))
            };
            (v, v)
        } else {
            (self.values[lo], self.values[hi - 1])
        }
    }

    /// Right-continuous evaluation.
    pub fn value_at(&self, lambda: f64) -> f64 {
        self.value_pair_at(lambda).1
    }

    /// Time to traverse `[0, lambda]` at this profile.
    pub fn time_to(&self, lambda: f64) -> f64 {
        let mut t = 0.0;
        for i in 1..self.breakpoints.len() {
            let (x0, x1) = (self.breakpoints[i - 1], self.breakpoints[i]);
            if x0 >= lambda {
                break;
            }
            let (w0, w1) = (self.values[i - 1], self.values[i]);
            if x1 <= lambda {
                t += piece_time(x1 - x0, w0, w1);
            } else {
                let w = self.value_pair_at(lambda).0;
                t += piece_time(lambda - x0, w0, w);
                break;
            }
        }
        t
    }

    /// Pointwise minimum with `other` (same domain, same engine).
    pub fn meet(&self, other: &SpeedProfile) -> Result<SpeedProfile, PlanError> {
        meet(self, other)
    }
}

/// Requested exit condition of a plan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EndSpeed {
    /// No requirement; the profile ends as fast as the bounds allow.
    Free,
    /// The squared speed must equal this value at the path end.
    At(f64),
}

/// Outcome of [`plan_speed`].
#[derive(Clone, Debug)]
pub struct PlanResult {
    /// The fastest admissible profile (boundary-capped even when the plan
    /// is infeasible, for diagnostics).
    pub profile: SpeedProfile,
    /// Whether the profile respects `mu_minus` and attains both boundary
    /// speeds.
    pub feasible: bool,
    /// Travel time; `+inf` iff infeasible or the profile stalls at zero
    /// speed over a stretch of positive length.
    pub time: f64,
    /// First maximal stretch where the profile drops below `mu_minus` or a
    /// boundary speed is missed, when infeasible.
    pub violation: Option<(f64, f64)>,
}

/// Planning failures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PlanError {
    /// The entry squared speed exceeds the cap at the path start.
    StartAboveCap {
        /// Requested entry squared speed.
        w0: f64,
        /// Cap at the path start.
        cap: f64,
    },
    /// The requested exit squared speed exceeds the cap at the path end.
    EndAboveCap {
        /// Requested exit squared speed.
        w_end: f64,
        /// Cap at the path end.
        cap: f64,
    },
    /// Meet of profiles over different domains, grids or engines.
    Mismatch,
}

impl core::fmt::Display for PlanError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PlanError::StartAboveCap { w0, cap } => {
                write!(f, "entry squared speed {w0} exceeds cap {cap} at path start")
            }
            PlanError::EndAboveCap { w_end, cap } => {
                write!(f, "exit squared speed {w_end} exceeds cap {cap} at path end")
            }
            PlanError::Mismatch => f.write_str("profiles are not defined on the same grid"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PlanError {}

/// Time to cover `d` while `w` moves linearly from `w0` to `w1`.
pub(crate) fn piece_time(d: f64, w0: f64, w1: f64) -> f64 {
    if d <= 0.0 {
        return 0.0;
    }
    if w0 == 0.0 && w1 == 0.0 {
        return f64::INFINITY;
    }
    if w0 == w1 {
        d / math::sqrt(w0)
    } else {
        2.0 * d / (math::sqrt(w0) + math::sqrt(w1))
    }
}

/// Total travel time implied by a profile.
pub fn travel_time(p: &SpeedProfile) -> f64 {
    let mut t = 0.0;
    for i in 1..p.breakpoints.len() {
        t += piece_time(
            p.breakpoints[i] - p.breakpoints[i - 1],
            p.values[i - 1],
            p.values[i],
        );
        if t.is_infinite() {
            return f64::INFINITY;
        }
    }
    t
}

/// Largest profile starting at `w0` that honours caps and forward slopes.
pub fn forward_operator(pb: &PathBounds, w0: f64) -> Result<SpeedProfile, PlanError> {
    forward_operator_with(pb, w0, Engine::auto(pb))
}

/// [`forward_operator`] with an explicit engine.
pub fn forward_operator_with(
    pb: &PathBounds,
    w0: f64,
    engine: Engine,
) -> Result<SpeedProfile, PlanError> {
    let cap = pb.cap_at_start();
    if w0 > cap {
        return Err(PlanError::StartAboveCap { w0, cap });
    }
    match engine {
        Engine::Exact => Ok(forward_exact(pb, w0)),
        Engine::Grid { step } => Ok(forward_grid(pb, w0, step)),
    }
}

/// Largest profile ending at `w_end` that honours caps and backward slopes.
pub fn backward_operator(pb: &PathBounds, w_end: f64) -> Result<SpeedProfile, PlanError> {
    backward_operator_with(pb, w_end, Engine::auto(pb))
}

/// [`backward_operator`] with an explicit engine.
pub fn backward_operator_with(
    pb: &PathBounds,
    w_end: f64,
    engine: Engine,
) -> Result<SpeedProfile, PlanError> {
    let cap = pb.cap_at_end();
    if w_end > cap {
        return Err(PlanError::EndAboveCap { w_end, cap });
    }
    match engine {
        Engine::Exact => Ok(backward_exact(pb, w_end)),
        Engine::Grid { step } => Ok(backward_grid(pb, w_end, step)),
    }
}

fn forward_exact(pb: &PathBounds, w0: f64) -> SpeedProfile {
    let segs = pb.segments().expect("exact engine requires piecewise-constant bounds");
    let mut pts = Vec::with_capacity(2 * segs.len() + 2);
    pts.push((0.0, w0));
    let mut w = w0;
    for seg in segs {
        let (m, a, d) = (seg.mu_plus, seg.alpha_plus, seg.width());
        let entry = w.min(m);
        if entry < w {
            pts.push((seg.start, entry)); // jump down at a cap drop
        }
        w = entry;
        if a.is_infinite() {
            if m > w {
                pts.push((seg.start, m)); // jump up under unbounded slope
                w = m;
            }
            pts.push((seg.end, w));
        } else {
            let ramp = w + a * d;
            if ramp <= m {
                w = ramp;
            } else {
                pts.push((seg.start + (m - w) / a, m));
                w = m;
            }
            pts.push((seg.end, w));
        }
    }
    SpeedProfile::from_points(pts, Engine::Exact)
}

fn backward_exact(pb: &PathBounds, w_end: f64) -> SpeedProfile {
    let segs = pb.segments().expect("exact engine requires piecewise-constant bounds");
    let mut pts = Vec::with_capacity(2 * segs.len() + 2);
    pts.push((pb.len(), w_end));
    let mut w = w_end;
    for seg in segs.iter().rev() {
        let (m, a, d) = (seg.mu_plus, -seg.alpha_minus, seg.width());
        let entry = w.min(m);
        if entry < w {
            pts.push((seg.end, entry));
        }
        w = entry;
        if a.is_infinite() {
            if m > w {
                pts.push((seg.end, m));
                w = m;
            }
            pts.push((seg.start, w));
        } else {
            let ramp = w + a * d;
            if ramp <= m {
                w = ramp;
            } else {
                pts.push((seg.end - (m - w) / a, m));
                w = m;
            }
            pts.push((seg.start, w));
        }
    }
    pts.reverse();
    SpeedProfile::from_points(pts, Engine::Exact)
}

/// Per-arc uniform grid positions for `pb` (always includes junctions).
pub(crate) fn grid_lambdas(pb: &PathBounds, step: f64) -> Vec<f64> {
    let mut xs = Vec::new();
    xs.push(0.0);
    for arc in pb.arcs() {
        if arc.length > 0.0 {
            let cells = (math::ceil(arc.length / step) as usize).max(1);
            let h = arc.length / cells as f64;
            for i in 1..cells {
                xs.push(arc.offset + h * i as f64);
            }
        }
        let end = arc.offset + arc.length;
        if xs.last() != Some(&end) {
            xs.push(end);
        }
    }
    xs
}

fn forward_grid(pb: &PathBounds, w0: f64, step: f64) -> SpeedProfile {
    let xs = grid_lambdas(pb, step);
    let mut ws = Vec::with_capacity(xs.len());
    let mut w = w0;
    ws.push(w);
    for i in 1..xs.len() {
        let h = xs[i] - xs[i - 1];
        let slope = pb.alpha_plus_at(xs[i - 1]);
        let ramp = if slope.is_infinite() { f64::INFINITY } else { w + slope * h };
        w = ramp.min(pb.mu_plus_at(xs[i]));
        ws.push(w);
    }
    SpeedProfile::from_points(
        xs.into_iter().zip(ws).collect(),
        Engine::Grid { step },
    )
}

fn backward_grid(pb: &PathBounds, w_end: f64, step: f64) -> SpeedProfile {
    let xs = grid_lambdas(pb, step);
    let n = xs.len();
    let mut ws = alloc::vec![0.0; n];
    let mut w = w_end;
    ws[n - 1] = w;
    for i in (0..n - 1).rev() {
        let h = xs[i + 1] - xs[i];
        let slope = -pb.alpha_minus_at(xs[i]);
        let ramp = if slope.is_infinite() { f64::INFINITY } else { w + slope * h };
        w = ramp.min(pb.mu_plus_at(xs[i]));
        ws[i] = w;
    }
    SpeedProfile::from_points(
        xs.into_iter().zip(ws).collect(),
        Engine::Grid { step },
    )
}

/// Pointwise minimum of two profiles over the same domain.
pub fn meet(f: &SpeedProfile, b: &SpeedProfile) -> Result<SpeedProfile, PlanError> {
    match (f.engine, b.engine) {
        (Engine::Exact, Engine::Exact) => {
            if f.len() != b.len() {
                return Err(PlanError::Mismatch);
            }
            Ok(meet_exact(f, b))
        }
        (Engine::Grid { step: s1 }, Engine::Grid { step: s2 }) => {
            if s1 != s2 || f.breakpoints != b.breakpoints {
                return Err(PlanError::Mismatch);
            }
            let pts = f
                .breakpoints
                .iter()
                .zip(f.values.iter().zip(&b.values))
                .map(|(&x, (&wf, &wb))| (x, wf.min(wb)))
                .collect();
            Ok(SpeedProfile::from_points(pts, f.engine))
        }
        _ => Err(PlanError::Mismatch),
    }
}

fn meet_exact(f: &SpeedProfile, b: &SpeedProfile) -> SpeedProfile {
    let mut events: Vec<f64> = f
        .breakpoints
        .iter()
        .chain(b.breakpoints.iter())
        .copied()
        .collect();
    events.sort_by(f64::total_cmp);
    events.dedup();
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(2 * events.len());
    let mut prev: Option<(f64, f64, f64)> = None;
    for &x in &events {
        let (fl, fr) = f.value_pair_at(x);
        let (bl, br) = b.value_pair_at(x);
        if let Some((px, f0, b0)) = prev {
            // On the open interval (px, x) both profiles are linear; insert
            // the crossing if min switches sides. Infinite branches never
            // cross a finite one inside a piece.
            let (d0, d1) = (f0 - b0, fl - bl);
            if d0.is_finite() && d1.is_finite() && (d0 > 0.0) != (d1 > 0.0) && d0 != 0.0 && d1 != 0.0
            {
                let t = d0 / (d0 - d1);
                let cx = px + t * (x - px);
                let cv = f0 + t * (fl - f0);
                if cx > px && cx < x {
                    pts.push((cx, cv));
                }
            }
        }
        let lmin = fl.min(bl);
        let rmin = fr.min(br);
        pts.push((x, lmin));
        if rmin != lmin {
            pts.push((x, rmin));
        }
        prev = Some((x, fr, br));
    }
    SpeedProfile::from_points(pts, Engine::Exact)
}

/// Plans the fastest admissible profile along `pb` entering at `w0`.
pub fn plan_speed(pb: &PathBounds, w0: f64, end: EndSpeed) -> Result<PlanResult, PlanError> {
    plan_speed_with(pb, w0, end, Engine::auto(pb))
}

/// [`plan_speed`] with an explicit engine.
pub fn plan_speed_with(
    pb: &PathBounds,
    w0: f64,
    end: EndSpeed,
    engine: Engine,
) -> Result<PlanResult, PlanError> {
    let seed = match end {
        EndSpeed::Free => pb.cap_at_end(),
        EndSpeed::At(w) => w,
    };
    let fwd = forward_operator_with(pb, w0, engine)?;
    let bwd = backward_operator_with(pb, seed, engine)?;
    let profile = meet(&fwd, &bwd)?;

    let mut violation = first_floor_violation(pb, &profile);
    // Boundary attainment: the meet must actually reach the requested
    // boundary speeds, otherwise no admissible profile satisfies them.
    if violation.is_none() && profile.values[0] < w0 - FEAS_TOL {
        violation = Some((0.0, 0.0));
    }
    if violation.is_none() {
        if let EndSpeed::At(w) = end {
            if *profile.values.last().unwrap() < w - FEAS_TOL {
                violation = Some((pb.len(), pb.len()));
            }
        }
    }
    let feasible = violation.is_none();
    let time = if feasible {
        travel_time(&profile)
    } else {
        f64::INFINITY
    };
    Ok(PlanResult {
        profile,
        feasible,
        time,
        violation,
    })
}

/// First maximal interval where `profile` dips below the floor, if any.
fn first_floor_violation(pb: &PathBounds, profile: &SpeedProfile) -> Option<(f64, f64)> {
    let mut start: Option<f64> = None;
    let mut end = 0.0;
    // Check every linear piece against the (piecewise-constant) floor,
    // cutting pieces at floor knots. Floor changes only at arc bound
    // knots, all of which are profile breakpoints for the grid engine; for
    // the exact engine they are segment edges, likewise present.
    let bps = &profile.breakpoints;
    for i in 1..bps.len() {
        let (x0, x1) = (bps[i - 1], bps[i]);
        let (w0, w1) = (profile.values[i - 1], profile.values[i]);
        let floor = pb.mu_minus_at(x0);
        if x1 <= x0 {
            // A jump: both one-sided values must clear the floors in force
            // on either side.
            let bad = w1 < pb.mu_minus_at(x1) - FEAS_TOL || w0 < floor - FEAS_TOL;
            if bad && start.is_none() {
                start = Some(x0);
            }
            if bad {
                end = x1;
            } else if start.is_some() {
                break;
            }
            continue;
        }
        let lo = floor - FEAS_TOL;
        let (v0, v1) = (w0 < lo, w1 < lo);
        if !v0 && !v1 {
            if start.is_some() {
                break;
            }
            continue;
        }
        // Linear piece crossing the floor: clip to the violating part.
        let cross = |from: f64, to: f64| x0 + (x1 - x0) * ((floor - from) / (to - from));
        let (vs, ve) = match (v0, v1) {
            (true, true) => (x0, x1),
            (true, false) => (x0, cross(w0, w1)),
            (false, true) => (cross(w0, w1), x1),
            (false, false) => unreachable!(),
        };
        if start.is_none() {
            start = Some(vs);
            end = ve;
        } else if vs <= end + FEAS_TOL {
            end = ve;
        } else {
            break;
        }
    }
    start.map(|s| (s, end))
}
