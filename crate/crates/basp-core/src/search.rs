//! Minimum-time path search with bounded suffix states.
//!
//! Travel times are not arc-separable: the time to cross an arc depends on
//! the squared speed carried into it, which in turn depends on earlier
//! arcs. The search therefore labels states by the *suffix* of the last
//! `k` visited nodes. The incremental cost of appending node `sigma` to a
//! path with suffix `r` is `eta(r, sigma) = T(r sigma) - T(r)`: the
//! difference of optimal free-exit plan times over the suffix alone. When
//! the suffix starts at the query source and is shorter than `k` it is
//! planned from the source entry speed, otherwise conservatively from
//! zero.
//!
//! Summing `eta` along a path telescopes to a lower bound on its true
//! time, and the bound is exact once every length-`k` suffix encountered
//! is *saturating* (see [`crate::reach`]): the optimal profile then splits
//! at a cap touch inside the window, so history beyond the window cannot
//! matter. [`astar_k`] verifies this property on every length-`k` state it
//! expands and reports a violation instead of returning an unproven
//! result; [`adaptive_astar`] grows `k` until the check passes.
//!
//! Goal handling splits each target node into a pass-through state and a
//! terminal state whose last hop is planned against the required exit
//! speed, so a target may also serve as an intermediate node of the
//! optimal path.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::graph::{Arc, NodeId, PathWord, RoadGraph};
use crate::path::{concat_bounds, PathBounds};
use crate::profile::{plan_speed_with, EndSpeed, Engine, SpeedProfile};
use crate::reach::{k_upper_bound, reach_bounds, KBound};

/// Fallback escalation limit when no finite suffix bound exists for the
/// graph (infinite caps or zero-length arcs). Keeps the adaptive loop from
/// spinning forever on pathological inputs while leaving ample room for
/// structurally deep instances.
const DEFAULT_K_LIMIT: usize = 12;

/// Per-node lower bounds on the remaining travel time to any target.
#[derive(Clone, Debug)]
pub struct HeuristicTable {
    h: Vec<f64>,
}

impl HeuristicTable {
    /// Lower bound on the time from `n` to the nearest target.
    pub fn value(&self, n: NodeId) -> f64 {
        self.h[n.index()]
    }
}

/// Time to cross `arc` pinned to its speed cap, `integral of
/// mu_plus^{-1/2}`: the arc's travel time with acceleration bounds
/// relaxed away.
pub fn relaxed_arc_time(arc: &Arc) -> f64 {
    use crate::bounds::BoundFn;
    let len = arc.length;
    let mut t = 0.0;
    match &arc.bounds.mu_plus {
        BoundFn::PiecewiseConstant {
            breakpoints,
            values,
        } => {
            for (i, &start) in breakpoints.iter().enumerate() {
                let end = breakpoints.get(i + 1).copied().unwrap_or(len).min(len);
                if end > start {
                    t += (end - start) / crate::math::sqrt(values[i]);
                }
            }
        }
        BoundFn::Sampled { step, values } => {
            for (i, &v) in values.iter().enumerate() {
                let start = step * i as f64;
                if start >= len {
                    break;
                }
                let width = step.min(len - start);
                t += width / crate::math::sqrt(v);
            }
        }
    }
    t
}

/// Builds the heuristic by a reverse Dijkstra from all targets over
/// relaxed arc times. Admissible because every plan spends at least the
/// cap-pinned time on each arc; consistent because the same holds per arc.
pub fn heuristic_table(g: &RoadGraph) -> HeuristicTable {
    struct Item {
        d: f64,
        n: NodeId,
    }
    impl PartialEq for Item {
        fn eq(&self, o: &Item) -> bool {
            self.cmp(o) == Ordering::Equal
        }
    }
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, o: &Item) -> Option<Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Item {
        fn cmp(&self, o: &Item) -> Ordering {
            // Max-heap: smaller distance (then smaller id) pops first.
            o.d.total_cmp(&self.d).then(o.n.cmp(&self.n))
        }
    }
    let mut h = alloc::vec![f64::INFINITY; g.node_count()];
    let mut heap = BinaryHeap::new();
    for &t in g.targets() {
        h[t.index()] = 0.0;
        heap.push(Item { d: 0.0, n: t });
    }
    while let Some(Item { d, n }) = heap.pop() {
        if d > h[n.index()] {
            continue;
        }
        for arc in g.in_arcs(n) {
            let nd = d + relaxed_arc_time(arc);
            if nd < h[arc.from.index()] {
                h[arc.from.index()] = nd;
                heap.push(Item { d: nd, n: arc.from });
            }
        }
    }
    HeuristicTable { h }
}

/// Search effort counters.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SearchStats {
    /// States popped and expanded (stale queue entries excluded).
    pub expanded: u64,
    /// Successor states pushed onto the queue.
    pub generated: u64,
    /// Suffix window of the run that produced the answer.
    pub final_k: usize,
    /// Largest queue length observed.
    pub queue_peak: usize,
    /// Wall-clock seconds (0 without the `std` feature).
    pub wall_time: f64,
}

/// A minimum-time route.
#[derive(Clone, Debug)]
pub struct Solution {
    /// Full node sequence from source to target.
    pub path: PathWord,
    /// Optimal travel time as accumulated by the search.
    pub time: f64,
    /// Replanned profile along `path` honouring both boundary speeds.
    pub profile: SpeedProfile,
    /// Effort counters.
    pub stats: SearchStats,
}

/// A search state: a bounded suffix plus whether it is a goal candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixState {
    /// The suffix word (at most `k` nodes).
    pub word: PathWord,
    /// Terminal states plan their last hop against the exit speed.
    pub terminal: bool,
}

/// Search failures.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchError {
    /// No feasible route from the source to any target.
    NoPath,
    /// A length-`k` state failed the saturation test; the window must
    /// grow before the incremental costs are trustworthy.
    SaturationViolation(SuffixState),
    /// The adaptive escalation hit its window limit.
    KLimitExceeded {
        /// The largest window tried.
        limit: usize,
    },
}

impl core::fmt::Display for SearchError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SearchError::NoPath => f.write_str("no feasible route to any target"),
            SearchError::SaturationViolation(s) => {
                write!(f, "suffix window too short: state of {} nodes", s.word.len())
            }
            SearchError::KLimitExceeded { limit } => {
                write!(f, "suffix window limit of {limit} exceeded")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SearchError {}

/// Knobs shared by all solvers.
#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    /// Force a planning engine for suffix replans (default: exact when the
    /// bounds allow, grid otherwise).
    pub engine: Option<Engine>,
    /// Cap for the adaptive window escalation (default: the graph's
    /// provable bound, or 12 when none exists).
    pub k_limit: Option<usize>,
}

/// Last `k` nodes after appending `sigma` to a path with suffix `r`.
pub fn gamma(r: &[NodeId], sigma: NodeId, k: usize) -> PathWord {
    let mut w = Vec::with_capacity(r.len() + 1);
    w.extend_from_slice(r);
    w.push(sigma);
    let cut = w.len().saturating_sub(k);
    w.drain(..cut);
    w
}

/// Incremental cost of appending `sigma` to a path whose length-`k` suffix
/// is `r`: the increase in optimal free-exit plan time over the suffix.
/// `terminal` plans the new last hop against the query's exit speed.
/// `+inf` when the extension is infeasible or `r sigma` is not a path.
pub fn incremental_cost(
    g: &RoadGraph,
    r: &[NodeId],
    sigma: NodeId,
    terminal: bool,
    k: usize,
) -> f64 {
    let mut ctx = Ctx::new(g, SolveOptions::default());
    let zero_start = zero_start(g, r, k);
    ctx.eta(r, sigma, terminal, zero_start)
}

/// The suffix-entry speed rule: plan from the query's entry speed only
/// when the suffix provably is the whole path so far.
fn zero_start(g: &RoadGraph, r: &[NodeId], k: usize) -> bool {
    !(r.first() == Some(&g.source()) && r.len() < k)
}

/// Memoized per-graph planning context shared across search runs.
struct Ctx<'g> {
    g: &'g RoadGraph,
    opts: SolveOptions,
    words: Vec<PathWord>,
    ids: BTreeMap<PathWord, u32>,
    eta: BTreeMap<(u32, NodeId, bool, bool), f64>,
    saturating: BTreeMap<u32, bool>,
}

impl<'g> Ctx<'g> {
    fn new(g: &'g RoadGraph, opts: SolveOptions) -> Ctx<'g> {
        Ctx {
            g,
            opts,
            words: Vec::new(),
            ids: BTreeMap::new(),
            eta: BTreeMap::new(),
            saturating: BTreeMap::new(),
        }
    }

    fn intern(&mut self, w: &[NodeId]) -> u32 {
        if let Some(&id) = self.ids.get(w) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(w.to_vec());
        self.ids.insert(w.to_vec(), id);
        id
    }

    fn word(&self, id: u32) -> &[NodeId] {
        &self.words[id as usize]
    }

    fn plan_time(&self, word: &[NodeId], w0: f64, end: EndSpeed) -> f64 {
        let pb = match concat_bounds(self.g, word) {
            Ok(pb) => pb,
            Err(_) => return f64::INFINITY,
        };
        let engine = self.opts.engine.unwrap_or_else(|| Engine::auto(&pb));
        match plan_speed_with(&pb, w0, end, engine) {
            Ok(r) => r.time,
            Err(_) => f64::INFINITY,
        }
    }

    fn eta(&mut self, r: &[NodeId], sigma: NodeId, terminal: bool, zero_start: bool) -> f64 {
        let rid = self.intern(r);
        let key = (rid, sigma, terminal, zero_start);
        if let Some(&v) = self.eta.get(&key) {
            return v;
        }
        let v = if self.g.arc_between(*r.last().expect("non-empty suffix"), sigma).is_none() {
            f64::INFINITY
        } else {
            let w0 = if zero_start { 0.0 } else { self.g.w_source() };
            let t_r = self.plan_time(r, w0, EndSpeed::Free);
            let end = if terminal {
                match self.g.w_target() {
                    Some(w) => EndSpeed::At(w),
                    None => EndSpeed::Free,
                }
            } else {
                EndSpeed::Free
            };
            let mut rs = r.to_vec();
            rs.push(sigma);
            let t_rs = self.plan_time(&rs, w0, end);
            if t_rs.is_finite() && t_r.is_finite() {
                // Extensions only tighten the profile, so the difference is
                // nonnegative up to rounding.
                (t_rs - t_r).max(0.0)
            } else {
                f64::INFINITY
            }
        };
        self.eta.insert(key, v);
        v
    }

    fn is_saturating(&mut self, word: &[NodeId]) -> bool {
        let id = self.intern(word);
        if let Some(&v) = self.saturating.get(&id) {
            return v;
        }
        let v = match concat_bounds(self.g, word) {
            Ok(pb) => reach_bounds(&pb).saturating(),
            Err(_) => false,
        };
        self.saturating.insert(id, v);
        v
    }
}

/// Queue entry; ties broken toward longer, lexicographically smaller,
/// terminal-first states so runs are fully deterministic.
struct Entry {
    f: f64,
    g_cost: f64,
    id: u32,
    word: PathWord,
    terminal: bool,
}

impl PartialEq for Entry {
    fn eq(&self, o: &Entry) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Entry) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Entry {
    fn cmp(&self, o: &Entry) -> Ordering {
        o.f.total_cmp(&self.f)
            .then(self.word.len().cmp(&o.word.len()))
            .then_with(|| o.word.cmp(&self.word))
            .then(self.terminal.cmp(&o.terminal))
    }
}

struct Run<'g, 'c> {
    ctx: &'c mut Ctx<'g>,
    k: usize,
    check_saturation: bool,
    h: Option<HeuristicTable>,
    dist: BTreeMap<(u32, bool), f64>,
    closed: BTreeSet<(u32, bool)>,
    parent: BTreeMap<(u32, bool), (u32, bool)>,
    heap: BinaryHeap<Entry>,
    stats: SearchStats,
}

impl<'g, 'c> Run<'g, 'c> {
    fn h_value(&self, n: NodeId) -> f64 {
        match &self.h {
            Some(t) => t.value(n),
            None => 0.0,
        }
    }

    fn push(&mut self, word: PathWord, terminal: bool, g_cost: f64, from: Option<(u32, bool)>) {
        let f = g_cost
            + if terminal {
                0.0
            } else {
                self.h_value(*word.last().expect("non-empty word"))
            };
        if !f.is_finite() {
            return;
        }
        let id = self.ctx.intern(&word);
        let key = (id, terminal);
        if self.closed.contains(&key) {
            return;
        }
        if let Some(&d) = self.dist.get(&key) {
            if g_cost >= d {
                return;
            }
        }
        self.dist.insert(key, g_cost);
        if let Some(p) = from {
            self.parent.insert(key, p);
        }
        self.heap.push(Entry {
            f,
            g_cost,
            id,
            word,
            terminal,
        });
        self.stats.generated += 1;
        self.stats.queue_peak = self.stats.queue_peak.max(self.heap.len());
    }

    fn reconstruct(&self, goal: (u32, bool)) -> PathWord {
        let mut rev: Vec<NodeId> = Vec::new();
        let mut cur = goal;
        while let Some(&prev) = self.parent.get(&cur) {
            rev.push(*self.ctx.word(cur.0).last().expect("non-empty word"));
            cur = prev;
        }
        let mut path: PathWord = self.ctx.word(cur.0).to_vec();
        debug_assert_eq!(path.len(), 1, "search roots at the bare source");
        rev.reverse();
        path.extend(rev);
        path
    }

    fn solve(mut self, g: &RoadGraph) -> Result<Solution, SearchError> {
        #[cfg(feature = "std")]
        let t0 = std::time::Instant::now();

        let source = g.source();
        let root: PathWord = alloc::vec![source];
        self.push(root.clone(), false, 0.0, None);
        if g.is_target(source) {
            // The empty path is a candidate route when the boundary
            // speeds agree.
            let t = self.ctx.plan_time(
                &root,
                g.w_source(),
                match g.w_target() {
                    Some(w) => EndSpeed::At(w),
                    None => EndSpeed::Free,
                },
            );
            if t.is_finite() {
                self.push(root, true, t, None);
            }
        }

        while let Some(Entry {
            g_cost,
            id,
            word,
            terminal,
            ..
        }) = self.heap.pop()
        {
            let key = (id, terminal);
            if self.closed.contains(&key) {
                continue;
            }
            match self.dist.get(&key) {
                Some(&d) if g_cost > d => continue, // stale
                _ => {}
            }
            self.closed.insert(key);
            self.stats.expanded += 1;

            if self.check_saturation && word.len() == self.k && !self.ctx.is_saturating(&word) {
                return Err(SearchError::SaturationViolation(SuffixState {
                    word,
                    terminal,
                }));
            }

            if terminal {
                let path = self.reconstruct(key);
                let end = match g.w_target() {
                    Some(w) => EndSpeed::At(w),
                    None => EndSpeed::Free,
                };
                let pb = concat_bounds(g, &path).map_err(|_| SearchError::NoPath)?;
                let engine = self.ctx.opts.engine.unwrap_or_else(|| Engine::auto(&pb));
                let profile = plan_speed_with(&pb, g.w_source(), end, engine)
                    .map_err(|_| SearchError::NoPath)?
                    .profile;
                self.stats.final_k = self.k;
                #[cfg(feature = "std")]
                {
                    self.stats.wall_time = t0.elapsed().as_secs_f64();
                }
                return Ok(Solution {
                    path,
                    time: g_cost,
                    profile,
                    stats: self.stats,
                });
            }

            let last = *word.last().expect("non-empty word");
            let zero = zero_start(g, &word, self.k);
            let heads: Vec<NodeId> = g.out_arcs(last).map(|a| a.to).collect();
            for sigma in heads {
                let eta = self.ctx.eta(&word, sigma, false, zero);
                #[cfg(debug_assertions)]
                if eta.is_finite() {
                    let slack = self.h_value(last) - (eta + self.h_value(sigma));
                    debug_assert!(
                        !(slack > 1e-9),
                        "inconsistent heuristic at {last}->{sigma}: slack {slack}"
                    );
                }
                if eta.is_finite() {
                    self.push(gamma(&word, sigma, self.k), false, g_cost + eta, Some(key));
                }
                if g.is_target(sigma) {
                    let eta_t = self.ctx.eta(&word, sigma, true, zero);
                    if eta_t.is_finite() {
                        self.push(gamma(&word, sigma, self.k), true, g_cost + eta_t, Some(key));
                    }
                }
            }
        }
        Err(SearchError::NoPath)
    }
}

fn run_once(
    g: &RoadGraph,
    ctx: &mut Ctx<'_>,
    k: usize,
    check_saturation: bool,
    with_heuristic: bool,
) -> Result<Solution, SearchError> {
    Run {
        ctx,
        k,
        check_saturation,
        h: if with_heuristic {
            Some(heuristic_table(g))
        } else {
            None
        },
        dist: BTreeMap::new(),
        closed: BTreeSet::new(),
        parent: BTreeMap::new(),
        heap: BinaryHeap::new(),
        stats: SearchStats::default(),
    }
    .solve(g)
}

/// Uniform-cost search over suffix states with window `k`, without the
/// saturation check: exact whenever `k` is already large enough (for
/// example the graph's [`k_upper_bound`]).
pub fn dijkstra_extended(g: &RoadGraph, k: usize) -> Result<Solution, SearchError> {
    dijkstra_extended_opts(g, k, &SolveOptions::default())
}

/// [`dijkstra_extended`] with options.
pub fn dijkstra_extended_opts(
    g: &RoadGraph,
    k: usize,
    opts: &SolveOptions,
) -> Result<Solution, SearchError> {
    let mut ctx = Ctx::new(g, *opts);
    run_once(g, &mut ctx, k.max(1), false, false)
}

/// A* over suffix states with window `k`. Every expanded full-length state
/// must pass the saturation test, otherwise the run aborts with
/// [`SearchError::SaturationViolation`] rather than return an unproven
/// answer.
pub fn astar_k(g: &RoadGraph, k: usize) -> Result<Solution, SearchError> {
    astar_k_opts(g, k, &SolveOptions::default())
}

/// [`astar_k`] with options.
pub fn astar_k_opts(g: &RoadGraph, k: usize, opts: &SolveOptions) -> Result<Solution, SearchError> {
    let mut ctx = Ctx::new(g, *opts);
    run_once(g, &mut ctx, k.max(1), true, true)
}

/// Solves the query by A* with automatic window escalation: start at
/// `k = 2`, rerun one window larger on each saturation violation, up to
/// the graph's provable bound (or 12 when none exists). Effort counters
/// report the successful run; planning work is memoized across restarts.
pub fn adaptive_astar(g: &RoadGraph) -> Result<Solution, SearchError> {
    adaptive_astar_opts(g, &SolveOptions::default())
}

/// [`adaptive_astar`] with options.
pub fn adaptive_astar_opts(g: &RoadGraph, opts: &SolveOptions) -> Result<Solution, SearchError> {
    let limit = opts.k_limit.unwrap_or_else(|| match k_upper_bound(g) {
        Ok(KBound::Finite(kb)) => kb.max(2),
        Ok(KBound::Infinite) | Err(_) => DEFAULT_K_LIMIT,
    });
    let mut ctx = Ctx::new(g, *opts);
    for k in 2..=limit {
        match run_once(g, &mut ctx, k, true, true) {
            Err(SearchError::SaturationViolation(_)) => continue,
            outcome => return outcome,
        }
    }
    Err(SearchError::KLimitExceeded { limit })
}

/// Plain Dijkstra over relaxed arc times: the solution of the
/// acceleration-free relaxation. Its profile rides the caps exactly.
pub fn one_basp(g: &RoadGraph) -> Result<Solution, SearchError> {
    #[cfg(feature = "std")]
    let t0 = std::time::Instant::now();
    struct Item {
        d: f64,
        n: NodeId,
    }
    impl PartialEq for Item {
        fn eq(&self, o: &Item) -> bool {
            self.cmp(o) == Ordering::Equal
        }
    }
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, o: &Item) -> Option<Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Item {
        fn cmp(&self, o: &Item) -> Ordering {
            o.d.total_cmp(&self.d).then(o.n.cmp(&self.n))
        }
    }
    let mut dist = alloc::vec![f64::INFINITY; g.node_count()];
    let mut parent: Vec<Option<NodeId>> = alloc::vec![None; g.node_count()];
    let mut heap = BinaryHeap::new();
    let mut stats = SearchStats {
        final_k: 1,
        ..SearchStats::default()
    };
    dist[g.source().index()] = 0.0;
    heap.push(Item {
        d: 0.0,
        n: g.source(),
    });
    let mut goal: Option<NodeId> = None;
    while let Some(Item { d, n }) = heap.pop() {
        if d > dist[n.index()] {
            continue;
        }
        stats.expanded += 1;
        if g.is_target(n) {
            goal = Some(n);
            break;
        }
        for arc in g.out_arcs(n) {
            let nd = d + relaxed_arc_time(arc);
            if nd < dist[arc.to.index()] {
                dist[arc.to.index()] = nd;
                parent[arc.to.index()] = Some(n);
                heap.push(Item { d: nd, n: arc.to });
                stats.generated += 1;
                stats.queue_peak = stats.queue_peak.max(heap.len());
            }
        }
    }
    let goal = goal.ok_or(SearchError::NoPath)?;
    let mut path = alloc::vec![goal];
    while let Some(p) = parent[path.last().unwrap().index()] {
        path.push(p);
    }
    path.reverse();
    let pb = concat_bounds(g, &path).map_err(|_| SearchError::NoPath)?;
    let profile = cap_profile(&pb);
    #[cfg(feature = "std")]
    {
        stats.wall_time = t0.elapsed().as_secs_f64();
    }
    Ok(Solution {
        time: dist[goal.index()],
        path,
        profile,
        stats,
    })
}

/// The profile that rides `mu_plus` exactly (jumps included).
fn cap_profile(pb: &PathBounds) -> SpeedProfile {
    match pb.segments() {
        Some(segs) => {
            let mut pts = Vec::with_capacity(2 * segs.len().max(1));
            if segs.is_empty() {
                pts.push((0.0, f64::INFINITY));
            }
            for s in segs {
                pts.push((s.start, s.mu_plus));
                pts.push((s.end, s.mu_plus));
            }
            SpeedProfile::from_points(pts, Engine::Exact)
        }
        None => {
            let step = crate::profile::default_grid_step(pb);
            let pts = crate::profile::grid_lambdas(pb, step)
                .into_iter()
                .map(|x| (x, pb.mu_plus_at(x)))
                .collect();
            SpeedProfile::from_points(pts, Engine::Grid { step })
        }
    }
}
