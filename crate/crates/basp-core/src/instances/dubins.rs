//! Shortest bounded-curvature paths between planar poses.
//!
//! A forward-only vehicle whose turning radius is at least `r` moves
//! between two poses (position plus heading) fastest along a path made of
//! at most three segments, each either a full-lock arc (`L` left, `R`
//! right) or a straight run (`S`). Only six segment words can be optimal:
//! `LSL, RSR, LSR, RSL, RLR, LRL`. [`shortest_path`] constructs every
//! geometrically feasible candidate from tangent circles and keeps the
//! shortest.

use crate::math;

/// A planar pose: position and heading in radians, counterclockwise from
/// the positive x axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Configuration {
    /// Position, x coordinate.
    pub x: f64,
    /// Position, y coordinate.
    pub y: f64,
    /// Heading angle in radians.
    pub heading: f64,
}

impl Configuration {
    /// Builds a pose from coordinates and a heading.
    pub fn new(x: f64, y: f64, heading: f64) -> Configuration {
        Configuration { x, y, heading }
    }
}

/// The six candidate segment words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DubinsWord {
    /// Left arc, straight, left arc.
    Lsl,
    /// Right arc, straight, right arc.
    Rsr,
    /// Left arc, straight, right arc.
    Lsr,
    /// Right arc, straight, left arc.
    Rsl,
    /// Right, left, right arcs.
    Rlr,
    /// Left, right, left arcs.
    Lrl,
}

impl DubinsWord {
    /// Turn sense of each segment: `1` left, `-1` right, `0` straight.
    pub fn senses(self) -> [i8; 3] {
        match self {
            DubinsWord::Lsl => [1, 0, 1],
            DubinsWord::Rsr => [-1, 0, -1],
            DubinsWord::Lsr => [1, 0, -1],
            DubinsWord::Rsl => [-1, 0, 1],
            DubinsWord::Rlr => [-1, 1, -1],
            DubinsWord::Lrl => [1, -1, 1],
        }
    }

    /// The word as letters, e.g. `"LSR"`.
    pub fn letters(self) -> &'static str {
        match self {
            DubinsWord::Lsl => "LSL",
            DubinsWord::Rsr => "RSR",
            DubinsWord::Lsr => "LSR",
            DubinsWord::Rsl => "RSL",
            DubinsWord::Rlr => "RLR",
            DubinsWord::Lrl => "LRL",
        }
    }
}

/// A concrete three-segment path of a fixed turning radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DubinsPath {
    /// Segment word.
    pub word: DubinsWord,
    /// Arclength of each segment (arcs included), in distance units.
    pub segments: [f64; 3],
    /// Turning radius of the arc segments.
    pub radius: f64,
    /// Total arclength.
    pub length: f64,
}

impl DubinsPath {
    /// Pose after driving `s` arclength units from `from` along the path;
    /// `s` is clamped to `[0, length]`.
    pub fn pose_at(&self, from: &Configuration, s: f64) -> Configuration {
        let senses = self.word.senses();
        let mut pose = *from;
        let mut remaining = s.clamp(0.0, self.length);
        for (seg, &sense) in self.segments.iter().zip(senses.iter()) {
            let run = remaining.min(*seg);
            pose = advance(&pose, sense, run, self.radius);
            remaining -= run;
            if remaining <= 0.0 {
                break;
            }
        }
        pose
    }

    /// Pose at the end of the path.
    pub fn endpoint(&self, from: &Configuration) -> Configuration {
        self.pose_at(from, self.length)
    }

    /// Turning radius at arclength `s`: the path radius on arc segments,
    /// infinite on straight runs. Right-continuous; `s` past the end takes
    /// the final segment's value.
    pub fn curvature_radius_at(&self, s: f64) -> f64 {
        let senses = self.word.senses();
        let mut offset = 0.0;
        let mut radius = f64::INFINITY;
        for (seg, &sense) in self.segments.iter().zip(senses.iter()) {
            if *seg == 0.0 {
                continue;
            }
            radius = if sense == 0 { f64::INFINITY } else { self.radius };
            if s < offset + *seg {
                return radius;
            }
            offset += *seg;
        }
        radius
    }
}

/// Drives `run` units with turn sense `sense` (`0` straight).
fn advance(pose: &Configuration, sense: i8, run: f64, radius: f64) -> Configuration {
    if run <= 0.0 {
        return *pose;
    }
    let (x, y, h) = (pose.x, pose.y, pose.heading);
    if sense == 0 {
        return Configuration::new(x + run * math::cos(h), y + run * math::sin(h), h);
    }
    let s = f64::from(sense);
    let h2 = h + s * run / radius;
    Configuration::new(
        x + radius * s * (math::sin(h2) - math::sin(h)),
        y + radius * s * (math::cos(h) - math::cos(h2)),
        h2,
    )
}

/// `x mod 2*pi` with values within rounding noise of a full turn snapped
/// to zero, so tangent headings equal to the current heading do not cost a
/// full circle.
fn turn_amount(x: f64) -> f64 {
    let m = math::mod_tau(x);
    if m > core::f64::consts::TAU - 1e-12 {
        0.0
    } else {
        m
    }
}

/// Center of the turning circle with sense `s` at a pose.
fn turn_center(c: &Configuration, s: f64, r: f64) -> [f64; 2] {
    [
        c.x - s * r * math::sin(c.heading),
        c.y + s * r * math::cos(c.heading),
    ]
}

/// Arc-straight-arc candidate: first arc of sense `sa`, last of sense `sb`.
fn csc(
    a: &Configuration,
    b: &Configuration,
    r: f64,
    word: DubinsWord,
) -> Option<DubinsPath> {
    let senses = word.senses();
    let (sa, sb) = (f64::from(senses[0]), f64::from(senses[2]));
    let ca = turn_center(a, sa, r);
    let cb = turn_center(b, sb, r);
    let (dx, dy) = (cb[0] - ca[0], cb[1] - ca[1]);
    let d = math::hypot(dx, dy);
    let ang = math::atan2(dy, dx);
    let (p, tangent_heading) = if senses[0] == senses[2] {
        (d, ang)
    } else {
        // Inner tangent between circles of equal radius: exists only when
        // the centers are at least a diameter apart.
        let p2 = d * d - 4.0 * r * r;
        if p2 < 0.0 {
            return None;
        }
        let p = math::sqrt(p2.max(0.0));
        (p, ang + sa * math::atan2(2.0 * r, p))
    };
    let t = turn_amount(sa * (tangent_heading - a.heading));
    let q = turn_amount(sb * (b.heading - tangent_heading));
    let segments = [r * t, p, r * q];
    Some(DubinsPath {
        word,
        segments,
        radius: r,
        length: segments.iter().sum(),
    })
}

/// Three-arc candidate: outer arcs of sense `sa`, middle arc opposite.
/// `side` picks which side of the center line the middle circle sits on.
fn ccc(
    a: &Configuration,
    b: &Configuration,
    r: f64,
    word: DubinsWord,
    side: f64,
) -> Option<DubinsPath> {
    let sa = f64::from(word.senses()[0]);
    let ca = turn_center(a, sa, r);
    let cb = turn_center(b, sa, r);
    let (dx, dy) = (cb[0] - ca[0], cb[1] - ca[1]);
    let d = math::hypot(dx, dy);
    if d > 4.0 * r {
        return None;
    }
    let ang = math::atan2(dy, dx);
    // Triangle with sides 2r, 2r, d: angle at `ca` between the center line
    // and the middle circle's center.
    let gamma = math::acos((d / (4.0 * r)).clamp(-1.0, 1.0));
    let phi = ang + side * gamma;
    let c3 = [ca[0] + 2.0 * r * math::cos(phi), ca[1] + 2.0 * r * math::sin(phi)];
    let phi2 = math::atan2(cb[1] - c3[1], cb[0] - c3[0]);
    // Heading at a tangency point is perpendicular to the radius, with the
    // side fixed by the sense of the arc being driven: the first tangency
    // is left by the outer sense, the second by the middle's opposite one.
    let h1 = phi + sa * core::f64::consts::FRAC_PI_2;
    let h2 = phi2 - sa * core::f64::consts::FRAC_PI_2;
    let t = turn_amount(sa * (h1 - a.heading));
    let mid = turn_amount(sa * (phi + core::f64::consts::PI - phi2));
    let q = turn_amount(sa * (b.heading - h2));
    let segments = [r * t, r * mid, r * q];
    Some(DubinsPath {
        word,
        segments,
        radius: r,
        length: segments.iter().sum(),
    })
}

/// Shortest bounded-curvature path from `a` to `b` with turning radius
/// `radius`. Returns `None` only for non-finite inputs or a non-positive
/// radius; some word is always feasible otherwise.
pub fn shortest_path(
    a: &Configuration,
    b: &Configuration,
    radius: f64,
) -> Option<DubinsPath> {
    let finite = [a.x, a.y, a.heading, b.x, b.y, b.heading, radius]
        .iter()
        .all(|v| v.is_finite());
    if !finite || radius <= 0.0 {
        return None;
    }
    let mut best: Option<DubinsPath> = None;
    let mut consider = |cand: Option<DubinsPath>| {
        if let Some(c) = cand {
            if best.as_ref().map_or(true, |b| c.length < b.length) {
                best = Some(c);
            }
        }
    };
    consider(csc(a, b, radius, DubinsWord::Lsl));
    consider(csc(a, b, radius, DubinsWord::Rsr));
    consider(csc(a, b, radius, DubinsWord::Lsr));
    consider(csc(a, b, radius, DubinsWord::Rsl));
    for side in [1.0, -1.0] {
        consider(ccc(a, b, radius, DubinsWord::Rlr, side));
        consider(ccc(a, b, radius, DubinsWord::Lrl, side));
    }
    best
}

/// Length of the shortest bounded-curvature path, `+inf` when
/// [`shortest_path`] yields none.
pub fn dubins_length(a: &Configuration, b: &Configuration, radius: f64) -> f64 {
    shortest_path(a, b, radius).map_or(f64::INFINITY, |p| p.length)
}
