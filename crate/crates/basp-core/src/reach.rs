//! Reachability landmarks of a path and the suffix-window bound.
//!
//! `ell_plus` is the first position where accelerating flat-out from zero
//! squared speed has certainly met the cap: beyond it the forward operator
//! no longer depends on the entry speed. `ell_minus` is the mirrored
//! landmark for braking toward the path end. When `ell_plus <= ell_minus`
//! the path is *saturating*: any admissible profile touches the cap
//! somewhere in between, so the optimal profile of an extension splits at
//! that point and incremental costs become independent of what preceded
//! the path. The search relies on this to bound its suffix window.
//!
//! Extending a path can only move these landmarks inward: `ell_plus` never
//! grows with a suffix appended, `ell_minus` never shrinks (relative to
//! the path end). Hence once every k-node suffix in the graph saturates, a
//! window of k is provably enough.

use crate::graph::{NodeId, RoadGraph};
use crate::math;
use crate::path::PathBounds;

/// The two reachability landmarks of a path. See the module docs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReachBounds {
    /// First position where the accumulated forward slope allowance meets
    /// the cap; `+inf` if it never does.
    pub ell_plus: f64,
    /// Last position from which the accumulated backward slope allowance
    /// meets the cap; `-inf` if it never does.
    pub ell_minus: f64,
}

impl ReachBounds {
    /// Whether every admissible profile is pinned to the cap somewhere.
    pub fn saturating(&self) -> bool {
        self.ell_plus <= self.ell_minus
    }
}

/// Computes both landmarks of a path.
pub fn reach_bounds(pb: &PathBounds) -> ReachBounds {
    ReachBounds {
        ell_plus: ell_plus(pb),
        ell_minus: ell_minus(pb),
    }
}

/// First `lambda` with `integral of alpha_plus over [0, lambda] >=
/// mu_plus(lambda)`, or `+inf`.
pub fn ell_plus(pb: &PathBounds) -> f64 {
    match pb.segments() {
        Some(segs) => {
            let mut r = 0.0;
            for seg in segs {
                if r >= seg.mu_plus {
                    return seg.start;
                }
                if seg.alpha_plus.is_infinite() {
                    // The integral exceeds any cap immediately past the
                    // segment start (and matches an infinite cap too).
                    return seg.start;
                }
                if seg.mu_plus.is_finite() && seg.alpha_plus > 0.0 {
                    let cross = seg.start + (seg.mu_plus - r) / seg.alpha_plus;
                    if cross < seg.end {
                        return cross;
                    }
                }
                r += seg.alpha_plus * seg.width();
            }
            if r >= pb.mu_plus_at(pb.len()) {
                return pb.len();
            }
            f64::INFINITY
        }
        None => {
            let xs = grid(pb);
            let mut r = 0.0;
            for i in 0..xs.len() {
                if r >= pb.mu_plus_at(xs[i]) {
                    return xs[i];
                }
                if i + 1 < xs.len() {
                    r += pb.alpha_plus_at(xs[i]) * (xs[i + 1] - xs[i]);
                }
            }
            f64::INFINITY
        }
    }
}

/// Last `lambda` with `integral of |alpha_minus| over [lambda, len] >=
/// mu_plus(lambda)`, or `-inf`.
pub fn ell_minus(pb: &PathBounds) -> f64 {
    if 0.0 >= pb.mu_plus_at(pb.len()) {
        return pb.len();
    }
    match pb.segments() {
        Some(segs) => {
            let mut r = 0.0;
            for seg in segs.iter().rev() {
                if r >= seg.mu_plus {
                    return seg.end;
                }
                let a = -seg.alpha_minus;
                if a.is_infinite() {
                    return seg.end;
                }
                if seg.mu_plus.is_finite() && a > 0.0 {
                    let cross = seg.end - (seg.mu_plus - r) / a;
                    if cross >= seg.start {
                        return cross;
                    }
                }
                r += a * seg.width();
            }
            f64::NEG_INFINITY
        }
        None => {
            let xs = grid(pb);
            let mut r = 0.0;
            for i in (0..xs.len()).rev() {
                if r >= pb.mu_plus_at(xs[i]) {
                    return xs[i];
                }
                if i > 0 {
                    r += -pb.alpha_minus_at(xs[i - 1]) * (xs[i] - xs[i - 1]);
                }
            }
            f64::NEG_INFINITY
        }
    }
}

fn grid(pb: &PathBounds) -> alloc::vec::Vec<f64> {
    let step = crate::profile::default_grid_step(pb);
    crate::profile::grid_lambdas(pb, step)
}

/// Upper bound on the suffix window the search may need.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KBound {
    /// Any window of this many nodes suffices.
    Finite(usize),
    /// Some arc's cap can never be reached (infinite cap with finite
    /// slopes), so no finite window is provably enough.
    Infinite,
}

/// Why no window bound exists for a graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReachError {
    /// An arc with zero length or a vanishing slope bound never saturates,
    /// so the per-arc ratio underlying the bound is undefined.
    Unbounded {
        /// Tail of the offending arc.
        from: NodeId,
        /// Head of the offending arc.
        to: NodeId,
    },
}

impl core::fmt::Display for ReachError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ReachError::Unbounded { from, to } => write!(
                f,
                "no finite suffix bound: arc {from} -> {to} has zero length or a zero slope bound"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ReachError {}

/// `1 + ceil(2 * max over arcs of cap / (slope * length))`: how many arcs a
/// profile can span before it must touch a cap, assuming it crosses each
/// arc's worst stretch.
pub fn k_upper_bound(g: &RoadGraph) -> Result<KBound, ReachError> {
    let mut worst = 0.0f64;
    for arc in g.arcs() {
        let cap = arc.bounds.mu_plus.max_value();
        let slope = arc
            .bounds
            .alpha_plus
            .min_value()
            .min(-arc.bounds.alpha_minus.max_value());
        if arc.length == 0.0 || slope == 0.0 {
            return Err(ReachError::Unbounded {
                from: arc.from,
                to: arc.to,
            });
        }
        if slope.is_infinite() {
            continue; // saturates instantly; contributes nothing
        }
        if cap.is_infinite() {
            return Ok(KBound::Infinite);
        }
        worst = worst.max(cap / (slope * arc.length));
    }
    Ok(KBound::Finite(1 + math::ceil(2.0 * worst) as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::ArcBounds;
    use crate::instances::{chain_example, example_one};
    use crate::path::concat_bounds;
    use crate::RoadGraph;

    fn path(g: &RoadGraph, names: &[&str]) -> PathBounds {
        let word: alloc::vec::Vec<NodeId> = names
            .iter()
            .map(|s| g.node_by_name(s).expect("named node"))
            .collect();
        concat_bounds(g, &word).unwrap()
    }

    #[test]
    fn chain_landmarks_match_hand_computation() {
        let g = chain_example();
        let s1 = path(&g, &["s", "1"]);
        assert_eq!(ell_plus(&s1), 1.0);
        assert_eq!(ell_minus(&s1), 0.0);
        assert!(!reach_bounds(&s1).saturating(), "1 > 0");

        let s12 = path(&g, &["s", "1", "2"]);
        assert_eq!(ell_plus(&s12), 1.0);
        assert!((ell_minus(&s12) - 4.0 / 3.0).abs() < 1e-15);
        assert!(reach_bounds(&s12).saturating());

        let s12f = path(&g, &["s", "1", "2", "f"]);
        assert_eq!(ell_minus(&s12f), 2.0);

        let suffix_12f = path(&g, &["1", "2", "f"]);
        assert!((ell_plus(&suffix_12f) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(ell_minus(&suffix_12f), 1.0);
        assert!(reach_bounds(&suffix_12f).saturating());
    }

    #[test]
    fn direct_arc_saturates_exactly_at_its_midpoint() {
        let g = example_one();
        let sf = path(&g, &["s", "f"]);
        let rb = reach_bounds(&sf);
        assert_eq!(rb.ell_plus, 1.5);
        assert_eq!(rb.ell_minus, 1.5);
        assert!(rb.saturating(), "equality counts as saturating");
    }

    #[test]
    fn landmarks_move_inward_under_extension() {
        // Appending an arc adds slope allowance on the left of ell_minus
        // and leaves the forward integral untouched.
        let g = chain_example();
        let p = path(&g, &["s", "1", "2"]);
        let pt = path(&g, &["s", "1", "2", "f"]);
        assert!(ell_plus(&pt) <= ell_plus(&p));
        assert!(ell_minus(&pt) >= ell_minus(&p));
    }

    #[test]
    fn infinite_caps_never_saturate() {
        let mut g = RoadGraph::new(2);
        g.add_arc(
            NodeId(0),
            NodeId(1),
            5.0,
            ArcBounds::constant(0.0, f64::INFINITY, -1.0, 1.0).unwrap(),
        )
        .unwrap();
        let pb = concat_bounds(&g, &[NodeId(0), NodeId(1)]).unwrap();
        assert_eq!(ell_plus(&pb), f64::INFINITY);
        assert_eq!(ell_minus(&pb), f64::NEG_INFINITY);
        assert!(!reach_bounds(&pb).saturating());
        assert_eq!(k_upper_bound(&g), Ok(KBound::Infinite));
    }

    #[test]
    fn unbounded_slopes_saturate_instantly() {
        let mut g = RoadGraph::new(2);
        g.add_arc(
            NodeId(0),
            NodeId(1),
            2.0,
            ArcBounds::constant(0.0, f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY).unwrap(),
        )
        .unwrap();
        let pb = concat_bounds(&g, &[NodeId(0), NodeId(1)]).unwrap();
        assert_eq!(ell_plus(&pb), 0.0);
        assert_eq!(ell_minus(&pb), 2.0);
        assert!(reach_bounds(&pb).saturating());
        // Instant saturation also means any window works.
        assert_eq!(k_upper_bound(&g), Ok(KBound::Finite(1)));
    }

    #[test]
    fn zero_cap_saturates_at_the_end() {
        let mut g = RoadGraph::new(2);
        g.add_arc(NodeId(0), NodeId(1), 1.0, ArcBounds::constant(0.0, 0.0, -1.0, 1.0).unwrap())
            .unwrap();
        let pb = concat_bounds(&g, &[NodeId(0), NodeId(1)]).unwrap();
        assert_eq!(ell_plus(&pb), 0.0, "zero cap is met with zero allowance");
        assert_eq!(ell_minus(&pb), 1.0);
    }

    #[test]
    fn k_upper_bound_on_examples() {
        assert_eq!(k_upper_bound(&chain_example()), Ok(KBound::Finite(3)));
        assert_eq!(k_upper_bound(&example_one()), Ok(KBound::Finite(5)));
    }

    #[test]
    fn k_upper_bound_rejects_zero_length_and_zero_slope_arcs() {
        let mut g = RoadGraph::new(2);
        g.add_arc(NodeId(0), NodeId(1), 0.0, ArcBounds::constant(0.0, 1.0, -1.0, 1.0).unwrap())
            .unwrap();
        assert_eq!(
            k_upper_bound(&g),
            Err(ReachError::Unbounded {
                from: NodeId(0),
                to: NodeId(1)
            })
        );
        let mut g = RoadGraph::new(2);
        g.add_arc(NodeId(0), NodeId(1), 1.0, ArcBounds::constant(0.0, 1.0, 0.0, 1.0).unwrap())
            .unwrap();
        assert!(matches!(k_upper_bound(&g), Err(ReachError::Unbounded { .. })));
    }
}
