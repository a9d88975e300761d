//! Speed and acceleration envelopes attached to arcs.
//!
//! Every arc carries four bound functions of arc length `lambda`, all
//! expressed in *squared-speed* units `w = v^2`:
//!
//! * `mu_minus`, `mu_plus`: lower/upper bounds on `w` itself,
//! * `alpha_minus`, `alpha_plus`: lower/upper bounds on the spatial
//!   derivative `w' = dw/dlambda`.
//!
//! Working with `w` rather than `v` makes the planning operators piecewise
//! linear: under a constant slope bound, the fastest admissible `w` ramps
//! linearly in `lambda`.
//!
//! A bound function is either piecewise constant over explicit breakpoints
//! (evaluated exactly by the planner) or sampled at a uniform step (pushed
//! through the first-order grid engine). All evaluation is right-continuous.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Representation of a [`BoundFn`], which decides the planning engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Constant pieces over explicit breakpoints; supports exact planning.
    PiecewiseConstant,
    /// Uniform samples at a fixed step; planned on a grid.
    Sampled,
}

/// A nonnegative-length-parameterized bound function on `[0, len]`.
///
/// Values may be `+inf` (no upper bound) or `-inf` (no lower bound on a
/// slope), never NaN. Construct through [`BoundFn::constant`],
/// [`BoundFn::piecewise`] or [`BoundFn::sampled`], which validate shape
/// invariants; the fields are public for inspection and serialization.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundFn {
    /// `values[i]` holds on `[breakpoints[i], breakpoints[i+1])`, with the
    /// last piece extending to the end of the arc. `breakpoints[0] == 0`,
    /// strictly ascending.
    PiecewiseConstant {
        /// Piece start offsets, ascending from zero.
        breakpoints: Vec<f64>,
        /// One value per piece.
        values: Vec<f64>,
    },
    /// `values[i]` holds on `[i*step, (i+1)*step)`.
    Sampled {
        /// Uniform sample spacing.
        step: f64,
        /// One value per sample cell.
        values: Vec<f64>,
    },
}

/// Violations of the shape or sign invariants of bound functions.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundsError {
    /// A bound function was given no pieces or samples.
    Empty,
    /// Breakpoints must start at 0 and be finite and strictly ascending.
    BadBreakpoints,
    /// Breakpoint and value lists differ in length.
    LengthMismatch,
    /// Sample step must be finite and positive.
    BadStep,
    /// A bound value was NaN.
    NanValue,
    /// Squared-speed bounds must be nonnegative, and the floor finite.
    BadSpeedBound,
    /// `alpha_plus` must be `>= 0` and `alpha_minus` `<= 0` everywhere.
    BadSlopeSign,
    /// `mu_minus` exceeds `mu_plus` somewhere.
    FloorAboveCap,
}

impl fmt::Display for BoundsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            BoundsError::Empty => "bound function has no pieces",
            BoundsError::BadBreakpoints => {
                "breakpoints must be finite, start at 0 and strictly ascend"
            }
            BoundsError::LengthMismatch => "breakpoint and value counts differ",
            BoundsError::BadStep => "sample step must be finite and positive",
            BoundsError::NanValue => "bound value is NaN",
            BoundsError::BadSpeedBound => {
                "squared-speed bounds must be nonnegative (floor also finite)"
            }
            BoundsError::BadSlopeSign => {
                "alpha_plus must be nonnegative and alpha_minus nonpositive"
            }
            BoundsError::FloorAboveCap => "mu_minus exceeds mu_plus",
        };
        f.write_str(msg)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for BoundsError {}

impl BoundFn {
    /// A single constant piece covering the whole arc.
    pub fn constant(value: f64) -> BoundFn {
        BoundFn::PiecewiseConstant {
            breakpoints: vec![0.0],
            values: vec![value],
        }
    }

    /// Piecewise-constant bound: `values[i]` on `[breakpoints[i], next)`.
    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<BoundFn, BoundsError> {
        if breakpoints.is_empty() {
            return Err(BoundsError::Empty);
        }
        if breakpoints.len() != values.len() {
            return Err(BoundsError::LengthMismatch);
        }
        if breakpoints[0] != 0.0 || breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(BoundsError::BadBreakpoints);
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BoundsError::BadBreakpoints);
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(BoundsError::NanValue);
        }
        Ok(BoundFn::PiecewiseConstant {
            breakpoints,
            values,
        })
    }

    /// Uniformly sampled bound: `values[i]` on `[i*step, (i+1)*step)`.
    pub fn sampled(step: f64, values: Vec<f64>) -> Result<BoundFn, BoundsError> {
        if values.is_empty() {
            return Err(BoundsError::Empty);
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(BoundsError::BadStep);
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(BoundsError::NanValue);
        }
        Ok(BoundFn::Sampled { step, values })
    }

    /// Which representation this bound uses.
    pub fn kind(&self) -> BoundKind {
        match self {
            BoundFn::PiecewiseConstant { .. } => BoundKind::PiecewiseConstant,
            BoundFn::Sampled { .. } => BoundKind::Sampled,
        }
    }

    /// Right-continuous evaluation; clamps `lambda` into the covered range.
    pub fn value_at(&self, lambda: f64) -> f64 {
        match self {
            BoundFn::PiecewiseConstant {
                breakpoints,
                values,
            } => {
                let idx = breakpoints.partition_point(|b| *b <= lambda);
                values[idx.saturating_sub(1)]
            }
            BoundFn::Sampled { step, values } => {
                let idx = if lambda <= 0.0 {
                    0
                } else {
                    ((lambda / step) as usize).min(values.len() - 1)
                };
                values[idx]
            }
        }
    }

    /// Smallest value taken anywhere on the covered range.
    pub fn min_value(&self) -> f64 {
        self.values().iter().fold(f64::INFINITY, |a, v| a.min(*v))
    }

    /// Largest value taken anywhere on the covered range.
    pub fn max_value(&self) -> f64 {
        self.values()
            .iter()
            .fold(f64::NEG_INFINITY, |a, v| a.max(*v))
    }

    /// The raw piece/sample values.
    pub fn values(&self) -> &[f64] {
        match self {
            BoundFn::PiecewiseConstant { values, .. } => values,
            BoundFn::Sampled { values, .. } => values,
        }
    }

    /// Positions where a new piece or sample starts.
    pub(crate) fn knots(&self) -> Knots<'_> {
        match self {
            BoundFn::PiecewiseConstant { breakpoints, .. } => Knots::Explicit(breakpoints, 0),
            BoundFn::Sampled { step, values } => Knots::Uniform {
                step: *step,
                next: 0,
                count: values.len(),
            },
        }
    }

    /// Whether the function is defined on all of `[0, len]`.
    pub(crate) fn covers(&self, len: f64) -> bool {
        match self {
            // Trailing pieces extend indefinitely, but breakpoints at or
            // past the end of the arc would be dead weight: reject them so
            // every piece is actually exercised (zero-length arcs may only
            // carry the mandatory breakpoint at 0).
            BoundFn::PiecewiseConstant { breakpoints, .. } => {
                let last = *breakpoints.last().expect("validated non-empty");
                last < len || (len == 0.0 && breakpoints.len() == 1)
            }
            BoundFn::Sampled { step, values } => step * values.len() as f64 >= len - 1e-9,
        }
    }
}

/// Iterator over piece-start positions of a [`BoundFn`].
pub(crate) enum Knots<'a> {
    Explicit(&'a [f64], usize),
    Uniform { step: f64, next: usize, count: usize },
}

impl Iterator for Knots<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        match self {
            Knots::Explicit(bps, i) => {
                let v = bps.get(*i).copied();
                *i += 1;
                v
            }
            Knots::Uniform { step, next, count } => {
                if next < count {
                    let v = *step * *next as f64;
                    *next += 1;
                    Some(v)
                } else {
                    None
                }
            }
        }
    }
}

/// One stretch of an arc or path over which all four bounds are constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    /// Segment start offset.
    pub start: f64,
    /// Segment end offset.
    pub end: f64,
    /// Squared-speed floor on the segment.
    pub mu_minus: f64,
    /// Squared-speed cap on the segment.
    pub mu_plus: f64,
    /// Lower slope bound (nonpositive).
    pub alpha_minus: f64,
    /// Upper slope bound (nonnegative).
    pub alpha_plus: f64,
}

impl Segment {
    /// Length of the segment.
    pub fn width(&self) -> f64 {
        self.end - self.start
    }
}

/// The four bound functions of a single arc.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcBounds {
    /// Squared-speed floor.
    pub mu_minus: BoundFn,
    /// Squared-speed cap.
    pub mu_plus: BoundFn,
    /// Lower bound on the squared speed's slope (nonpositive).
    pub alpha_minus: BoundFn,
    /// Upper bound on the squared speed's slope (nonnegative).
    pub alpha_plus: BoundFn,
}

impl ArcBounds {
    /// Bundles four bound functions, checking sign conventions and that the
    /// floor never exceeds the cap.
    // Negated comparisons so NaN values fail validation alongside
    // wrong-signed ones.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(
        mu_minus: BoundFn,
        mu_plus: BoundFn,
        alpha_minus: BoundFn,
        alpha_plus: BoundFn,
    ) -> Result<ArcBounds, BoundsError> {
        if mu_minus.values().iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(BoundsError::BadSpeedBound);
        }
        if mu_plus.values().iter().any(|v| !(*v >= 0.0)) {
            return Err(BoundsError::BadSpeedBound);
        }
        if alpha_plus.values().iter().any(|v| !(*v >= 0.0)) {
            return Err(BoundsError::BadSlopeSign);
        }
        if alpha_minus.values().iter().any(|v| !(*v <= 0.0)) {
            return Err(BoundsError::BadSlopeSign);
        }
        // Both functions are piecewise constant (in either representation),
        // so comparing at every piece start of either is a full pointwise
        // check.
        let violates = |lambda: f64| mu_minus.value_at(lambda) > mu_plus.value_at(lambda);
        if mu_minus.knots().any(violates) || mu_plus.knots().any(violates) {
            return Err(BoundsError::FloorAboveCap);
        }
        Ok(ArcBounds {
            mu_minus,
            mu_plus,
            alpha_minus,
            alpha_plus,
        })
    }

    /// Constant bounds over the whole arc.
    pub fn constant(
        mu_minus: f64,
        mu_plus: f64,
        alpha_minus: f64,
        alpha_plus: f64,
    ) -> Result<ArcBounds, BoundsError> {
        ArcBounds::new(
            BoundFn::constant(mu_minus),
            BoundFn::constant(mu_plus),
            BoundFn::constant(alpha_minus),
            BoundFn::constant(alpha_plus),
        )
    }

    /// All four bounds share one breakpoint list (the on-disk layout).
    pub fn piecewise(
        breakpoints: Vec<f64>,
        mu_minus: Vec<f64>,
        mu_plus: Vec<f64>,
        alpha_minus: Vec<f64>,
        alpha_plus: Vec<f64>,
    ) -> Result<ArcBounds, BoundsError> {
        ArcBounds::new(
            BoundFn::piecewise(breakpoints.clone(), mu_minus)?,
            BoundFn::piecewise(breakpoints.clone(), mu_plus)?,
            BoundFn::piecewise(breakpoints.clone(), alpha_minus)?,
            BoundFn::piecewise(breakpoints, alpha_plus)?,
        )
    }

    /// All four bounds sampled on one uniform grid.
    pub fn sampled(
        step: f64,
        mu_minus: Vec<f64>,
        mu_plus: Vec<f64>,
        alpha_minus: Vec<f64>,
        alpha_plus: Vec<f64>,
    ) -> Result<ArcBounds, BoundsError> {
        if [&mu_plus, &alpha_minus, &alpha_plus]
            .iter()
            .any(|v| v.len() != mu_minus.len())
        {
            return Err(BoundsError::LengthMismatch);
        }
        ArcBounds::new(
            BoundFn::sampled(step, mu_minus)?,
            BoundFn::sampled(step, mu_plus)?,
            BoundFn::sampled(step, alpha_minus)?,
            BoundFn::sampled(step, alpha_plus)?,
        )
    }

    /// True when every bound is piecewise constant, enabling exact planning.
    pub fn is_exact(&self) -> bool {
        [
            &self.mu_minus,
            &self.mu_plus,
            &self.alpha_minus,
            &self.alpha_plus,
        ]
        .iter()
        .all(|b| b.kind() == BoundKind::PiecewiseConstant)
    }

    /// Whether all four functions cover `[0, len]`.
    pub(crate) fn covers(&self, len: f64) -> bool {
        self.mu_minus.covers(len)
            && self.mu_plus.covers(len)
            && self.alpha_minus.covers(len)
            && self.alpha_plus.covers(len)
    }

    /// Splits `[0, len]` into maximal stretches with constant bounds.
    /// `None` if any bound is sampled rather than piecewise constant.
    pub(crate) fn segments(&self, len: f64) -> Option<Vec<Segment>> {
        if !self.is_exact() {
            return None;
        }
        let mut cuts: Vec<f64> = Vec::new();
        for b in [
            &self.mu_minus,
            &self.mu_plus,
            &self.alpha_minus,
            &self.alpha_plus,
        ] {
            cuts.extend(b.knots().filter(|c| *c < len));
        }
        cuts.push(0.0);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut segments = Vec::with_capacity(cuts.len());
        for (i, &start) in cuts.iter().enumerate() {
            let end = cuts.get(i + 1).copied().unwrap_or(len);
            if end <= start {
                continue;
            }
            segments.push(Segment {
                start,
                end,
                mu_minus: self.mu_minus.value_at(start),
                mu_plus: self.mu_plus.value_at(start),
                alpha_minus: self.alpha_minus.value_at(start),
                alpha_plus: self.alpha_plus.value_at(start),
            });
        }
        Some(segments)
    }
}
