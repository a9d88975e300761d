//! Reference solvers used to cross-check the production search on small
//! instances.
//!
//! [`brute_force`] enumerates every path up to a node budget and plans each
//! one, so it is exact whenever the optimum uses at most `max_len` nodes.
//! [`pseudo_poly_dp`] solves unit instances (integer lengths, unit slope
//! bounds, constant rational caps, zero floors) by a shortest-path sweep
//! over a finite set of rational squared-speed levels; it is independent of
//! the profile planner except for the shared per-piece time formula.
//! [`best_completion_time`] gives the exact minimum remaining time from a
//! node with an unconstrained entry speed, which upper-bounds nothing and
//! lower-bounds every real continuation — the yardstick for heuristic
//! admissibility.

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::graph::{NodeId, PathWord, RoadGraph};
use crate::math;
use crate::path::{concat_bounds, PathBounds};
use crate::profile::{
    backward_operator, forward_operator, meet, piece_time, plan_speed, EndSpeed, SpeedProfile,
};

/// Default cap on the number of words the exhaustive search may enumerate.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

type R = Ratio<i64>;

/// Why a reference solver could not produce an answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The enumeration touched more words than the allowed budget.
    Budget {
        /// Number of words visited before giving up.
        enumerated: u64,
    },
    /// No feasible path with finite travel time exists within the explored
    /// length bound.
    NoPath,
    /// The instance is outside the fragment the dynamic program supports.
    Unsupported(&'static str),
}

impl core::fmt::Display for OracleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OracleError::Budget { enumerated } => {
                write!(f, "enumeration budget exhausted after {enumerated} words")
            }
            OracleError::NoPath => f.write_str("no feasible path within the length bound"),
            OracleError::Unsupported(why) => write!(f, "unsupported instance: {why}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OracleError {}

/// Optimal word found by exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct BruteResult {
    /// Node sequence of the best path (repeats allowed).
    pub word: PathWord,
    /// Its exact travel time under the query's boundary speeds.
    pub time: f64,
    /// The planned squared-speed profile along the word.
    pub profile: SpeedProfile,
}

/// Walks every word from `start` with at most `max_len` nodes, invoking
/// `visit` on each; returns the number of words enumerated.
fn enumerate_words(
    g: &RoadGraph,
    start: NodeId,
    max_len: usize,
    budget: u64,
    visit: &mut impl FnMut(&PathWord),
) -> Result<u64, OracleError> {
    fn recurse(
        g: &RoadGraph,
        word: &mut PathWord,
        max_len: usize,
        budget: u64,
        enumerated: &mut u64,
        visit: &mut impl FnMut(&PathWord),
    ) -> Result<(), OracleError> {
        *enumerated += 1;
        if *enumerated > budget {
            return Err(OracleError::Budget {
                enumerated: *enumerated,
            });
        }
        visit(word);
        if word.len() < max_len {
            let last = *word.last().expect("words are never empty");
            let heads: Vec<NodeId> = g.out_arcs(last).map(|a| a.to).collect();
            for head in heads {
                word.push(head);
                recurse(g, word, max_len, budget, enumerated, visit)?;
                word.pop();
            }
        }
        Ok(())
    }

    let mut word = vec![start];
    let mut enumerated = 0;
    recurse(g, &mut word, max_len, budget, &mut enumerated, visit)?;
    Ok(enumerated)
}

/// Exhaustive search over all paths from the query source with at most
/// `max_len` nodes, using the default enumeration budget.
///
/// Every word ending at a target is planned with the query's boundary
/// speeds; the best finite feasible candidate wins, ties broken by
/// lexicographically smaller word. Exact whenever some optimal path fits
/// in `max_len` nodes.
pub fn brute_force(g: &RoadGraph, max_len: usize) -> Result<BruteResult, OracleError> {
    brute_force_with(g, max_len, DEFAULT_BUDGET)
}

/// [`brute_force`] with an explicit enumeration budget.
pub fn brute_force_with(
    g: &RoadGraph,
    max_len: usize,
    budget: u64,
) -> Result<BruteResult, OracleError> {
    let end = match g.w_target() {
        Some(w) => EndSpeed::At(w),
        None => EndSpeed::Free,
    };
    let mut best: Option<(f64, PathWord)> = None;
    enumerate_words(g, g.source(), max_len, budget, &mut |word| {
        let last = *word.last().expect("words are never empty");
        if !g.targets().contains(&last) {
            return;
        }
        let Ok(pb) = concat_bounds(g, word) else {
            return;
        };
        let Ok(res) = plan_speed(&pb, g.w_source(), end) else {
            return;
        };
        if !res.feasible || !res.time.is_finite() {
            return;
        }
        let better = match &best {
            None => true,
            Some((t, w)) => res.time < *t || (res.time == *t && word < w),
        };
        if better {
            best = Some((res.time, word.clone()));
        }
    })?;
    let (time, word) = best.ok_or(OracleError::NoPath)?;
    let pb = concat_bounds(g, &word).expect("winning word was planned once already");
    let res = plan_speed(&pb, g.w_source(), end).expect("winning word was planned once already");
    Ok(BruteResult {
        word,
        time,
        profile: res.profile,
    })
}

/// Exact travel time along `pb` when the entry speed may be chosen freely.
///
/// The best admissible entry is the meet of the unconstrained forward pass
/// (seeded at the entry cap) with the backward pass; replanning from that
/// entry value reuses all feasibility checks.
fn free_entry_time(pb: &PathBounds, end: EndSpeed) -> Option<f64> {
    let fwd = forward_operator(pb, pb.cap_at_start()).ok()?;
    let back = match end {
        EndSpeed::At(w) => backward_operator(pb, w).ok()?,
        EndSpeed::Free => backward_operator(pb, pb.cap_at_end()).ok()?,
    };
    let best_entry = meet(&fwd, &back).ok()?.value_at(0.0);
    let res = plan_speed(pb, best_entry, end).ok()?;
    (res.feasible && res.time.is_finite()).then_some(res.time)
}

/// Minimum time to reach any target from `from` over words of at most
/// `max_len` nodes, with a free entry speed and the query's exit speed.
///
/// Lower-bounds the true remaining cost from `from` regardless of the speed
/// the search arrives with, so any admissible heuristic must not exceed it.
pub fn best_completion_time(
    g: &RoadGraph,
    from: NodeId,
    max_len: usize,
) -> Result<f64, OracleError> {
    let end = match g.w_target() {
        Some(w) => EndSpeed::At(w),
        None => EndSpeed::Free,
    };
    let mut best: Option<f64> = None;
    enumerate_words(g, from, max_len, DEFAULT_BUDGET, &mut |word| {
        let last = *word.last().expect("words are never empty");
        if !g.targets().contains(&last) {
            return;
        }
        let time = if word.len() == 1 {
            // A free entry can match any required exit speed on the spot.
            Some(0.0)
        } else {
            concat_bounds(g, word)
                .ok()
                .and_then(|pb| free_entry_time(&pb, end))
        };
        if let Some(t) = time {
            best = Some(match best {
                None => t,
                Some(b) => b.min(t),
            });
        }
    })?;
    best.ok_or(OracleError::NoPath)
}

/// Size report of a dynamic-program run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpReport {
    /// Optimal travel time.
    pub time: f64,
    /// Number of distinct rational squared-speed levels.
    pub speed_levels: usize,
    /// Number of unit-grid positions (graph nodes plus arc-interior points).
    pub positions: usize,
    /// Total state count (`positions * speed_levels`).
    pub states: usize,
}

/// Converts a dyadic `f64` into an exact small rational, refusing values
/// whose denominator exceeds 2^12 or whose magnitude is large.
fn small_rational(x: f64) -> Option<R> {
    if !x.is_finite() || math::abs(x) > 1e9 {
        return None;
    }
    let mut num = x;
    let mut den: i64 = 1;
    for _ in 0..=12 {
        if num == math::floor(num) {
            return Some(Ratio::new(num as i64, den));
        }
        num *= 2.0;
        den *= 2;
    }
    None
}

/// Fastest traversal of a unit-length cell between squared speeds `wa` and
/// `wb` under cap `cap` and slope bounds of one: ramp up to the peak,
/// cruise if the cap binds, ramp down.
fn unit_cell_time(wa: R, wb: R, cap: R) -> f64 {
    let peak_free = (wa + wb + R::one()) / 2;
    let peak = if cap < peak_free { cap } else { peak_free };
    let up = peak - wa;
    let down = peak - wb;
    let cruise = R::one() - up - down;
    debug_assert!(
        up >= R::zero() && down >= R::zero() && cruise >= R::zero(),
        "cell shape degenerate: up {up} down {down} cruise {cruise}"
    );
    let (wa, wb, peak) = (to_f64(wa), to_f64(wb), to_f64(peak));
    piece_time(to_f64(up), wa, peak)
        + piece_time(to_f64(cruise), peak, peak)
        + piece_time(to_f64(down), peak, wb)
}

fn to_f64(r: R) -> f64 {
    r.to_f64().expect("small rationals convert exactly")
}

/// Extracts the single constant value of a bound, if it is constant.
fn constant_value(b: &crate::bounds::BoundFn) -> Option<f64> {
    let vals = b.values();
    (vals.len() == 1).then(|| vals[0])
}

#[derive(Clone, Copy)]
struct DpEntry {
    dist: f64,
    pos: u32,
    lvl: u32,
}

impl PartialEq for DpEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == core::cmp::Ordering::Equal
    }
}
impl Eq for DpEntry {}
impl PartialOrd for DpEntry {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for DpEntry {
    /// Max-heap order inverted on distance, with position/level tie-breaks
    /// for determinism.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.pos.cmp(&self.pos))
            .then_with(|| other.lvl.cmp(&self.lvl))
    }
}

/// Exact solver for unit instances: every arc has a positive integer
/// length, slope bounds identically `-1`/`+1`, a constant finite cap with a
/// small dyadic value, and a zero floor; boundary speeds must be small
/// dyadic rationals as well.
///
/// At integer positions an optimal profile only takes values that are
/// integer shifts of some cap or boundary speed, so a shortest-path sweep
/// over (position, level) states with a closed-form per-cell cost is exact.
/// The level set stays polynomial in the instance size, which the returned
/// [`DpReport`] exposes for verification.
pub fn pseudo_poly_dp(g: &RoadGraph) -> Result<DpReport, OracleError> {
    // Validate the fragment and collect exact rational data.
    let mut caps = Vec::with_capacity(g.arcs().len());
    let mut lengths = Vec::with_capacity(g.arcs().len());
    for arc in g.arcs() {
        let len = arc.length;
        if len < 1.0 || len != math::floor(len) || len > 1e6 {
            return Err(OracleError::Unsupported("arc length is not a small positive integer"));
        }
        let floor = constant_value(&arc.bounds.mu_minus);
        let up = constant_value(&arc.bounds.alpha_plus);
        let down = constant_value(&arc.bounds.alpha_minus);
        if floor != Some(0.0) || up != Some(1.0) || down != Some(-1.0) {
            return Err(OracleError::Unsupported(
                "bounds are not (floor 0, slopes -1/+1)",
            ));
        }
        let cap = constant_value(&arc.bounds.mu_plus)
            .and_then(small_rational)
            .ok_or(OracleError::Unsupported("cap is not a small constant rational"))?;
        if cap < R::zero() {
            return Err(OracleError::Unsupported("negative cap"));
        }
        caps.push(cap);
        lengths.push(len as usize);
    }
    if caps.is_empty() {
        return Err(OracleError::Unsupported("graph has no arcs"));
    }
    let w_source =
        small_rational(g.w_source()).ok_or(OracleError::Unsupported("w_source is not a small rational"))?;
    let w_target = match g.w_target() {
        None => None,
        Some(w) => Some(
            small_rational(w).ok_or(OracleError::Unsupported("w_target is not a small rational"))?,
        ),
    };

    // Level set: integer shifts of every cap and boundary speed, clipped to
    // the maximum relevant squared speed.
    let mu_max = *caps.iter().max().expect("at least one arc");
    let mut hi = mu_max.max(w_source);
    if let Some(wt) = w_target {
        hi = hi.max(wt);
    }
    let mut bases: Vec<R> = caps.clone();
    bases.push(w_source);
    if let Some(wt) = w_target {
        bases.push(wt);
    }
    let mut level_set = BTreeSet::new();
    for base in bases {
        let mut v = base.fract();
        while v <= hi {
            if v >= R::zero() {
                level_set.insert(v);
            }
            v += R::one();
        }
    }
    let levels: Vec<R> = level_set.into_iter().collect();
    if w_source <= mu_max && w_target.map_or(true, |wt| wt <= mu_max) && mu_max >= R::from(4) {
        let bound = g.arcs().len() as f64 * (1.0 + to_f64(mu_max) * to_f64(mu_max) / 2.0);
        debug_assert!(
            levels.len() as f64 <= bound,
            "level count {} exceeds bound {bound}",
            levels.len()
        );
    }

    // Unit-cell adjacency over positions: graph nodes first, then interior
    // points of each arc in order.
    let mut adj: Vec<Vec<(u32, R)>> = vec![Vec::new(); g.node_count()];
    for (arc, (&cap, &len)) in g.arcs().iter().zip(caps.iter().zip(&lengths)) {
        let mut cur = arc.from.index();
        for step in 0..len {
            let next = if step + 1 == len {
                arc.to.index()
            } else {
                adj.push(Vec::new());
                adj.len() - 1
            };
            adj[cur].push((next as u32, cap));
            cur = next;
        }
    }
    let positions = adj.len();
    let n_levels = levels.len();

    // Dijkstra over (position, level).
    let level_index = |w: R| levels.binary_search(&w).ok();
    let start_lvl = level_index(w_source).expect("boundary speeds are in the level set");
    let mut dist = vec![f64::INFINITY; positions * n_levels];
    let mut heap = BinaryHeap::new();
    let start = g.source().index() * n_levels + start_lvl;
    dist[start] = 0.0;
    heap.push(DpEntry {
        dist: 0.0,
        pos: g.source().index() as u32,
        lvl: start_lvl as u32,
    });
    while let Some(DpEntry { dist: d, pos, lvl }) = heap.pop() {
        if d > dist[pos as usize * n_levels + lvl as usize] {
            continue;
        }
        let la = levels[lvl as usize];
        for &(next, cap) in &adj[pos as usize] {
            if la > cap {
                continue;
            }
            // Levels within slope reach of la and under the cap.
            let lo = levels.partition_point(|&w| w < la - R::one());
            for (j, &lb) in levels.iter().enumerate().skip(lo) {
                if lb > la + R::one() {
                    break;
                }
                if lb > cap {
                    continue;
                }
                let nd = d + unit_cell_time(la, lb, cap);
                let slot = next as usize * n_levels + j;
                if nd < dist[slot] {
                    dist[slot] = nd;
                    heap.push(DpEntry {
                        dist: nd,
                        pos: next,
                        lvl: j as u32,
                    });
                }
            }
        }
    }

    let mut best = f64::INFINITY;
    for &t in g.targets() {
        let row = t.index() * n_levels;
        best = best.min(match w_target {
            Some(wt) => {
                let j = level_index(wt).expect("boundary speeds are in the level set");
                dist[row + j]
            }
            None => dist[row..row + n_levels]
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min),
        });
    }
    if !best.is_finite() {
        return Err(OracleError::NoPath);
    }
    Ok(DpReport {
        time: best,
        speed_levels: n_levels,
        positions,
        states: positions * n_levels,
    })
}

/// Whether some subset of `weights` sums to exactly half the total.
pub fn has_perfect_partition(weights: &[u64]) -> bool {
    let total: u64 = weights.iter().sum();
    if total % 2 != 0 {
        return false;
    }
    let half = (total / 2) as usize;
    let mut reachable = vec![false; half + 1];
    reachable[0] = true;
    for &w in weights {
        let w = w as usize;
        for s in (w..=half).rev() {
            if reachable[s - w] {
                reachable[s] = true;
            }
        }
    }
    reachable[half]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::ArcBounds;
    use crate::instances::{chain_example, example_one};
    use crate::search::adaptive_astar;

    fn names(g: &RoadGraph, word: &[NodeId]) -> alloc::string::String {
        let mut s = alloc::string::String::new();
        for (i, n) in word.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&g.label(*n));
        }
        s
    }

    #[test]
    fn brute_force_matches_known_optima() {
        let g = example_one();
        let r = brute_force(&g, 4).expect("example instance has a path");
        assert_eq!(names(&g, &r.word), "s f", "momentum detour is slower here");
        assert!(
            (r.time - 2.0 * 3.0f64.sqrt()).abs() < 1e-12,
            "time {}",
            r.time
        );

        let g = chain_example();
        let r = brute_force(&g, 4).expect("chain has a path");
        assert_eq!(names(&g, &r.word), "s 1 2 f");
        let sol = adaptive_astar(&g).expect("chain solves");
        assert!(
            (r.time - sol.time).abs() < 1e-12,
            "brute {} vs search {}",
            r.time,
            sol.time
        );
    }

    #[test]
    fn brute_force_budget_is_enforced() {
        let g = example_one();
        let err = brute_force_with(&g, 8, 3).unwrap_err();
        assert!(
            matches!(err, OracleError::Budget { enumerated: 4 }),
            "got {err:?}"
        );
    }

    #[test]
    fn empty_path_wins_when_source_is_a_target() {
        let mut g = RoadGraph::new(2);
        let b = ArcBounds::constant(0.0, 4.0, -1.0, 1.0).unwrap();
        g.add_arc(NodeId(0), NodeId(1), 1.0, b.clone()).unwrap();
        g.add_arc(NodeId(1), NodeId(0), 1.0, b).unwrap();
        g.set_query(NodeId(0), &[NodeId(0)], 2.0, Some(2.0)).unwrap();
        let r = brute_force(&g, 4).expect("trivial path exists");
        assert_eq!(r.word, vec![NodeId(0)], "standing still is optimal");
        assert_eq!(r.time, 0.0);
    }

    #[test]
    fn free_entry_completion_beats_fixed_entry() {
        let g = example_one();
        let one = g.node_by_name("1").unwrap();
        // From node 1 the only continuation is the arc to f (length 2, cap
        // 4); a free entry rides the backward ramp 2 - lambda into the full
        // stop, costing 2 * sqrt(2).
        let t = best_completion_time(&g, one, 4).unwrap();
        assert!(
            (t - 2.0 * 2.0f64.sqrt()).abs() < 1e-12,
            "completion time {t}"
        );
        // At the target itself the remaining time is zero.
        let f = g.node_by_name("f").unwrap();
        assert_eq!(best_completion_time(&g, f, 4).unwrap(), 0.0);
    }

    fn unit_graph(arcs: &[(u32, u32, f64, f64)], n: usize) -> RoadGraph {
        let mut g = RoadGraph::new(n);
        for &(a, b, len, cap) in arcs {
            g.add_arc(NodeId(a), NodeId(b), len, ArcBounds::constant(0.0, cap, -1.0, 1.0).unwrap())
                .unwrap();
        }
        g
    }

    #[test]
    fn dp_agrees_with_planner_on_a_single_path() {
        let mut g = unit_graph(&[(0, 1, 2.0, 4.0), (1, 2, 2.0, 1.0)], 3);
        g.set_query(NodeId(0), &[NodeId(2)], 0.0, Some(0.0)).unwrap();
        let dp = pseudo_poly_dp(&g).unwrap();
        let brute = brute_force(&g, 3).unwrap();
        assert!(
            (dp.time - brute.time).abs() < 1e-9,
            "dp {} vs brute {}",
            dp.time,
            brute.time
        );
        assert_eq!(dp.positions, 3 + 2, "one interior point per length-2 arc");
        assert_eq!(dp.states, dp.positions * dp.speed_levels);
    }

    #[test]
    fn dp_agrees_with_brute_force_when_routes_compete() {
        // Short arc with a low cap against a longer high-cap detour.
        let mut g = unit_graph(
            &[(0, 2, 2.0, 1.0), (0, 1, 2.0, 4.0), (1, 2, 2.0, 4.0)],
            3,
        );
        g.set_query(NodeId(0), &[NodeId(2)], 0.0, Some(0.0)).unwrap();
        let dp = pseudo_poly_dp(&g).unwrap();
        let brute = brute_force(&g, 4).unwrap();
        assert!(
            (dp.time - brute.time).abs() < 1e-9,
            "dp {} vs brute {}",
            dp.time,
            brute.time
        );
    }

    #[test]
    fn dp_rejects_instances_outside_the_fragment() {
        let mut g = RoadGraph::new(2);
        g.add_arc(
            NodeId(0),
            NodeId(1),
            1.5,
            ArcBounds::constant(0.0, 4.0, -1.0, 1.0).unwrap(),
        )
        .unwrap();
        g.set_query(NodeId(0), &[NodeId(1)], 0.0, None).unwrap();
        assert!(matches!(
            pseudo_poly_dp(&g),
            Err(OracleError::Unsupported(_))
        ));

        let mut g = unit_graph(&[(0, 1, 2.0, 4.0)], 2);
        g.set_query(NodeId(0), &[NodeId(1)], 1.0 / 3.0, None).unwrap();
        assert!(matches!(
            pseudo_poly_dp(&g),
            Err(OracleError::Unsupported(_))
        ));
    }

    #[test]
    fn dp_reports_no_path_for_unattainable_exits() {
        // Cap 1 forbids ever reaching the required exit speed 4.
        let mut g = unit_graph(&[(0, 1, 3.0, 1.0)], 2);
        g.set_query(NodeId(0), &[NodeId(1)], 0.0, Some(4.0)).unwrap();
        assert_eq!(pseudo_poly_dp(&g).unwrap_err(), OracleError::NoPath);
    }

    #[test]
    fn unit_cell_time_matches_hand_values() {
        // Flat at the cap: one time unit at sqrt(4) = 2.
        assert!((unit_cell_time(R::from(4), R::from(4), R::from(4)) - 0.5).abs() < 1e-12);
        // Pure ramp 0 -> 1 without touching the cap: 2/(0 + 1) = 2.
        assert!((unit_cell_time(R::zero(), R::one(), R::from(4)) - 2.0).abs() < 1e-12);
        // Symmetric bump 0 -> 1/2 -> 0 under a high cap: each half-ramp
        // costs 2 * (1/2) / sqrt(1/2) = sqrt(2).
        let bump = unit_cell_time(R::zero(), R::zero(), R::from(4));
        assert!((bump - 2.0 * 2.0f64.sqrt()).abs() < 1e-12, "bump {bump}");
    }

    #[test]
    fn perfect_partition_detector_is_correct() {
        assert!(has_perfect_partition(&[1, 2, 3]));
        assert!(has_perfect_partition(&[2, 3, 5, 4]));
        assert!(!has_perfect_partition(&[1, 2, 4]));
        assert!(!has_perfect_partition(&[3]));
        assert!(has_perfect_partition(&[]));
    }
}
