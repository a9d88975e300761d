//! Shared fixtures for the integration suites: seeded RNG helpers, random
//! piecewise-constant instances, unit-length fragments for the reference
//! DP, a corridor-shaped performance graph, and profile comparison
//! utilities.

#![allow(dead_code)] // Each integration target uses its own subset.

use basp_core::{
    backward_operator, concat_bounds, forward_operator, plan_speed, random_instance, ArcBounds,
    BoundFn, EndSpeed, GeneratorParams, NodeId, PathBounds, RoadGraph, SpeedProfile,
};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Deterministic RNG for test instance construction.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw from `[0, 1)`.
pub fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Uniform draw from `[lo, hi)`.
pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}

/// Uniform integer from `0..n`.
pub fn index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// A random strongly-connected-ish graph with piecewise-constant bounds:
/// `n` nodes on a ring (guaranteeing source-to-target paths) plus `extra`
/// random chords. Caps are finite, floors zero, slopes symmetric. The
/// query runs from node 0 to the opposite ring node with zero entry speed
/// and a zero exit speed.
pub fn random_pwc_instance(seed: u64, n: usize, extra: usize) -> RoadGraph {
    let mut r = rng(seed);
    let mut g = RoadGraph::new(n);
    for i in 0..n {
        let from = NodeId(i as u32);
        let to = NodeId(((i + 1) % n) as u32);
        let len = uniform(&mut r, 1.0, 4.0);
        g.add_arc(from, to, len, random_pwc_bounds(&mut r, len))
            .expect("ring arcs are distinct");
    }
    let mut added = 0;
    let mut attempts = 0;
    while added < extra && attempts < 40 * extra {
        attempts += 1;
        let a = index(&mut r, n);
        let b = index(&mut r, n);
        if a == b {
            continue;
        }
        let len = uniform(&mut r, 1.0, 4.0);
        let bounds = random_pwc_bounds(&mut r, len);
        if g.add_arc(NodeId(a as u32), NodeId(b as u32), len, bounds).is_ok() {
            added += 1;
        }
    }
    g.with_query(NodeId(0), &[NodeId((n / 2) as u32)], 0.0, Some(0.0))
}

/// Piecewise-constant bounds over `[0, len]` with 1 to 3 pieces, caps in
/// `[0.5, 4]`, zero floors, and slope magnitudes in `[0.4, 1.2]`.
pub fn random_pwc_bounds(r: &mut ChaCha8Rng, len: f64) -> ArcBounds {
    let pieces = 1 + index(r, 3);
    let mut breakpoints = vec![0.0];
    for _ in 1..pieces {
        breakpoints.push(uniform(r, 0.05, 0.95) * len);
    }
    breakpoints.sort_by(f64::total_cmp);
    breakpoints.dedup();
    let k = breakpoints.len();
    let caps: Vec<f64> = (0..k).map(|_| uniform(r, 0.5, 4.0)).collect();
    let ups: Vec<f64> = (0..k).map(|_| uniform(r, 0.4, 1.2)).collect();
    let downs: Vec<f64> = ups.iter().map(|u| -u).collect();
    ArcBounds::piecewise(breakpoints, vec![0.0; k], caps, downs, ups)
        .expect("generated breakpoints are sorted and start at zero")
}

/// A random fragment satisfying the reference-DP hypotheses: every arc has
/// length 1, a constant half-integer cap, zero floor, and slope bounds
/// exactly -1/+1. The largest cap is pinned to 4 so the DP state-count
/// bound applies, boundary speeds are small integers, and half of the
/// seeds leave the exit speed free.
pub fn random_unit_instance(seed: u64) -> RoadGraph {
    let mut r = rng(seed);
    let n = 4 + index(&mut r, 4); // 4..=7 nodes, so >= 3 path arcs
    let mut g = RoadGraph::new(n);
    let cap_choices = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];
    // A path 0 -> 1 -> ... -> n-1 guarantees a route; one arc on it gets
    // the largest cap so `mu_max` is exactly 4 on every instance.
    let wide_at = index(&mut r, n - 1);
    for i in 0..n - 1 {
        let cap = if i == wide_at {
            4.0
        } else {
            cap_choices[index(&mut r, cap_choices.len())]
        };
        let b = ArcBounds::constant(0.0, cap, -1.0, 1.0).unwrap();
        g.add_arc(NodeId(i as u32), NodeId(i as u32 + 1), 1.0, b)
            .expect("path arcs are distinct");
    }
    // A few extra chords for route variety; duplicates are skipped.
    for _ in 0..n {
        let a = index(&mut r, n);
        let b = index(&mut r, n);
        if a == b {
            continue;
        }
        let cap = cap_choices[index(&mut r, cap_choices.len())];
        let bounds = ArcBounds::constant(0.0, cap, -1.0, 1.0).unwrap();
        let _ = g.add_arc(NodeId(a as u32), NodeId(b as u32), 1.0, bounds);
    }
    // Entry speed stays at or below the smallest cap choice so no query is
    // dead on arrival; zero floors make every such query feasible.
    let ws = index(&mut r, 2) as f64; // 0 or 1
    let wt = if seed.is_multiple_of(2) {
        None
    } else {
        Some(index(&mut r, 2) as f64)
    };
    g.with_query(NodeId(0), &[NodeId(n as u32 - 1)], ws, wt)
}

/// A corridor-style sparse graph: `n` nodes in a line joined both ways,
/// with a sparse set of one-way forward shortcuts. Mean degree stays under
/// 2.5. Arc lengths, caps, and slopes vary smoothly along the corridor.
pub fn corridor(n: usize, seed: u64) -> RoadGraph {
    let mut r = rng(seed);
    let mut g = RoadGraph::new(n);
    let mut lengths = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let len = uniform(&mut r, 4.0, 12.0);
        lengths.push(len);
        let cap = uniform(&mut r, 1.0, 4.0);
        let slope = uniform(&mut r, 0.3, 0.8);
        let b = ArcBounds::constant(0.0, cap, -slope, slope).unwrap();
        g.add_arc(NodeId(i as u32), NodeId(i as u32 + 1), len, b.clone())
            .unwrap();
        g.add_arc(NodeId(i as u32 + 1), NodeId(i as u32), len, b).unwrap();
    }
    // One shortcut every eight nodes: skips four corridor nodes at a small
    // length premium but often a higher cap.
    let mut i = 0;
    while i + 4 < n {
        let len: f64 = lengths[i..i + 4].iter().sum::<f64>() * 1.1;
        let cap = uniform(&mut r, 2.0, 4.0);
        let slope = uniform(&mut r, 0.3, 0.8);
        let b = ArcBounds::constant(0.0, cap, -slope, slope).unwrap();
        g.add_arc(NodeId(i as u32), NodeId(i as u32 + 4), len, b).unwrap();
        i += 8;
    }
    g.with_query(NodeId(0), &[NodeId(n as u32 - 1)], 0.0, None)
}

/// The first `count` connected generator outputs with the given `accel`
/// and node count, scanning seeds from 0. Panics if `max_seed` seeds do
/// not yield enough connected instances.
pub fn connected_instances(
    n: usize,
    accel: f64,
    count: usize,
    max_seed: u64,
) -> Vec<(u64, RoadGraph)> {
    let mut out = Vec::with_capacity(count);
    for seed in 0..max_seed {
        if out.len() == count {
            break;
        }
        let params = GeneratorParams {
            n,
            seed,
            accel,
            ..GeneratorParams::default()
        };
        if let Ok(g) = random_instance(&params) {
            out.push((seed, g));
        }
    }
    assert!(
        out.len() == count,
        "only {} of {count} connected instances found below seed {max_seed}",
        out.len()
    );
    out
}

/// Largest pointwise gap between two speed profiles. Both are piecewise
/// linear, so the maximum lies at a breakpoint of either; evaluating on
/// the union of breakpoints is exact.
pub fn sup_distance(a: &SpeedProfile, b: &SpeedProfile) -> f64 {
    let mut worst = 0.0f64;
    for &x in a.breakpoints().iter().chain(b.breakpoints()) {
        let d = (a.value_at(x) - b.value_at(x)).abs();
        worst = worst.max(d);
    }
    worst
}

/// Plans the query path of `g` along `word` and returns its bounds.
pub fn word_bounds(g: &RoadGraph, word: &[NodeId]) -> PathBounds {
    concat_bounds(g, word).expect("word follows existing arcs")
}

/// Free-exit minimal time over `pb` from entry squared speed `w0`;
/// `+inf` when infeasible.
pub fn free_exit_time(pb: &PathBounds, w0: f64) -> f64 {
    match plan_speed(pb, w0, EndSpeed::Free) {
        Ok(res) => res.time,
        Err(_) => f64::INFINITY,
    }
}

/// Minimal time over `pb` with both boundary speeds free. The best entry
/// speed is the start cap clipped by the backward envelope, which accounts
/// for lower caps ahead that a too-fast entry could not decelerate for.
pub fn free_free_time(pb: &PathBounds) -> f64 {
    let back = match backward_operator(pb, pb.cap_at_end()) {
        Ok(b) => b,
        Err(_) => return f64::INFINITY,
    };
    let w0 = pb.cap_at_start().min(back.value_at(0.0));
    free_exit_time(pb, w0)
}

/// Wall-clock seconds consumed by `f`.
pub fn secs<T>(f: impl FnOnce() -> T) -> (f64, T) {
    let start = std::time::Instant::now();
    let out = f();
    (start.elapsed().as_secs_f64(), out)
}

/// Random walk of `steps` arcs starting at the query source. The PWC
/// instances are rings with chords, so a walk always has somewhere to go.
pub fn random_walk(g: &RoadGraph, r: &mut ChaCha8Rng, steps: usize) -> Vec<NodeId> {
    let mut word = vec![g.source()];
    for _ in 0..steps {
        let cur = *word.last().unwrap();
        let outs: Vec<NodeId> = g.out_arcs(cur).map(|a| a.to).collect();
        if outs.is_empty() {
            break;
        }
        word.push(outs[index(r, outs.len())]);
    }
    word
}

/// Scales the caps and slope magnitudes of every arc by `f >= 1`,
/// producing a graph whose constraints are everywhere looser.
pub fn relax_graph(g: &RoadGraph, f: f64) -> RoadGraph {
    let scale = |b: &BoundFn, f: f64| match b {
        BoundFn::PiecewiseConstant {
            breakpoints,
            values,
        } => BoundFn::piecewise(breakpoints.clone(), values.iter().map(|v| v * f).collect())
            .unwrap(),
        BoundFn::Sampled { step, values } => {
            BoundFn::sampled(*step, values.iter().map(|v| v * f).collect()).unwrap()
        }
    };
    let mut out = RoadGraph::new(g.node_count());
    for arc in g.arcs() {
        let b = ArcBounds::new(
            arc.bounds.mu_minus.clone(),
            scale(&arc.bounds.mu_plus, f),
            scale(&arc.bounds.alpha_minus, f),
            scale(&arc.bounds.alpha_plus, f),
        )
        .unwrap();
        out.add_arc(arc.from, arc.to, arc.length, b).unwrap();
    }
    let targets: Vec<NodeId> = g.targets().iter().copied().collect();
    out.with_query(g.source(), &targets, g.w_source(), g.w_target())
}

/// Minimal free-boundary times never beat the sum of the parts when a
/// path is cut at a junction: a feasible profile on the whole restricts
/// to feasible profiles on both halves. Checks `count` random splits.
pub fn check_superadditive_splits(count: usize) {
    let mut checked = 0;
    let mut seed = 0;
    while checked < count {
        seed += 1;
        let g = random_pwc_instance(seed, 8, 6);
        let mut r = rng(seed ^ 0xab);
        let steps = 4 + index(&mut r, 4);
        let word = random_walk(&g, &mut r, steps);
        if word.len() < 3 {
            continue;
        }
        let cut = 1 + index(&mut r, word.len() - 2);
        let whole = word_bounds(&g, &word);
        let head = word_bounds(&g, &word[..=cut]);
        let tail = word_bounds(&g, &word[cut..]);
        let t_whole = free_free_time(&whole);
        let t_head = free_free_time(&head);
        let t_tail = free_free_time(&tail);
        assert!(
            t_whole >= t_head + t_tail - 1e-9,
            "seed {seed}: whole {t_whole} beats parts {t_head} + {t_tail}"
        );
        checked += 1;
    }
}

/// Loosening every cap and slope never slows the optimal plan, and the
/// relaxed forward envelope dominates pointwise. Checks `count` graphs.
pub fn check_relaxation_monotonicity(count: usize) {
    for seed in 0..count as u64 {
        let g = random_pwc_instance(seed, 8, 6);
        let relaxed = relax_graph(&g, 1.0 + unit(&mut rng(seed)) * 2.0);
        let mut r = rng(seed ^ 0x11);
        let word = random_walk(&g, &mut r, 5);
        let pb = word_bounds(&g, &word);
        let pb_relaxed = word_bounds(&relaxed, &word);
        let t = free_exit_time(&pb, 0.0);
        let t_relaxed = free_exit_time(&pb_relaxed, 0.0);
        assert!(
            t_relaxed <= t + 1e-9,
            "seed {seed}: relaxed plan {t_relaxed} slower than original {t}"
        );
        let f = forward_operator(&pb, 0.0).unwrap();
        let f_relaxed = forward_operator(&pb_relaxed, 0.0).unwrap();
        for &x in f.breakpoints() {
            assert!(
                f_relaxed.value_at(x) >= f.value_at(x) - 1e-9,
                "seed {seed}: relaxed forward envelope dips at {x}"
            );
        }
    }
}

/// The forward envelope of a path equals the envelope of its tail run
/// from the junction value (clipped to the tail's entry cap). Checks
/// `count` random splits.
pub fn check_forward_merge(count: usize) {
    for seed in 0..count as u64 {
        let g = random_pwc_instance(seed, 8, 6);
        let mut r = rng(seed ^ 0x77);
        let word = random_walk(&g, &mut r, 5);
        if word.len() < 3 {
            continue;
        }
        let cut = 1 + index(&mut r, word.len() - 2);
        let whole = word_bounds(&g, &word);
        let head = word_bounds(&g, &word[..=cut]);
        let tail = word_bounds(&g, &word[cut..]);
        let w0 = uniform(&mut r, 0.0, whole.cap_at_start());
        let f_whole = forward_operator(&whole, w0).unwrap();
        let f_head = forward_operator(&head, w0).unwrap();
        // The envelope may step down across the junction when the next cap
        // is lower; the composed run starts from the clipped value.
        let handoff = f_head.value_at(head.len()).min(tail.cap_at_start());
        let f_tail = forward_operator(&tail, handoff).unwrap();
        let off = head.len();
        // Compare at interior midpoints: the envelope may jump at its
        // breakpoints and midpoint values are unambiguous.
        let bps = f_tail.breakpoints();
        for pair in bps.windows(2) {
            if pair[1] - pair[0] <= 1e-9 {
                continue; // duplicated breakpoints mark jumps
            }
            let x = 0.5 * (pair[0] + pair[1]);
            let got = f_whole.value_at(off + x);
            let want = f_tail.value_at(x);
            assert!(
                (got - want).abs() <= 1e-9,
                "seed {seed}: forward envelope differs at {x}: {got} vs {want}"
            );
        }
    }
}

/// The planned profile dominates every feasible profile; dipping a cap
/// below it and replanning can only lower the profile and raise the
/// time. Checks `count` random dips.
pub fn check_profile_maximality(count: usize) {
    let mut tested = 0;
    let mut seed = 0;
    while tested < count {
        seed += 1;
        // Constant bounds per arc keep the dip construction simple.
        let mut r = rng(seed);
        let n = 3 + index(&mut r, 3);
        let mut g = RoadGraph::new(n + 1);
        let mut caps = Vec::new();
        for i in 0..n {
            let cap = uniform(&mut r, 1.0, 4.0);
            let slope = uniform(&mut r, 0.4, 1.0);
            caps.push(cap);
            g.add_arc(
                NodeId(i as u32),
                NodeId(i as u32 + 1),
                uniform(&mut r, 2.0, 5.0),
                ArcBounds::constant(0.0, cap, -slope, slope).unwrap(),
            )
            .unwrap();
        }
        let word: Vec<NodeId> = (0..=n as u32).map(NodeId).collect();
        let pb = word_bounds(&g, &word);
        let base = plan_speed(&pb, 0.0, EndSpeed::At(0.0)).unwrap();
        assert!(base.feasible, "zero floors leave every plan feasible");

        // Dip one arc's cap over an interior stretch and replan.
        let dip_arc = index(&mut r, n);
        let arc = &g.arcs()[dip_arc];
        let x1 = uniform(&mut r, 0.1, 0.45) * arc.length;
        let x2 = uniform(&mut r, 0.55, 0.9) * arc.length;
        let low = uniform(&mut r, 0.2, caps[dip_arc]);
        let dipped = ArcBounds::new(
            BoundFn::constant(0.0),
            BoundFn::piecewise(vec![0.0, x1, x2], vec![caps[dip_arc], low, caps[dip_arc]])
                .unwrap(),
            arc.bounds.alpha_minus.clone(),
            arc.bounds.alpha_plus.clone(),
        )
        .unwrap();
        let mut g2 = RoadGraph::new(n + 1);
        for (i, a) in g.arcs().iter().enumerate() {
            let b = if i == dip_arc {
                dipped.clone()
            } else {
                a.bounds.clone()
            };
            g2.add_arc(a.from, a.to, a.length, b).unwrap();
        }
        let pb2 = word_bounds(&g2, &word);
        let dip = plan_speed(&pb2, 0.0, EndSpeed::At(0.0)).unwrap();
        for &x in dip
            .profile
            .breakpoints()
            .iter()
            .chain(base.profile.breakpoints())
        {
            assert!(
                dip.profile.value_at(x) <= base.profile.value_at(x) + 1e-9,
                "seed {seed}: dipped profile exceeds the unconstrained one at {x}"
            );
        }
        assert!(
            dip.time >= base.time - 1e-9,
            "seed {seed}: tighter cap produced a faster plan ({} < {})",
            dip.time,
            base.time
        );
        tested += 1;
    }
}
