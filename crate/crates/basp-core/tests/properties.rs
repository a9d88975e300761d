//! Structural properties of the bound algebra, the planning operators,
//! the reach windows, and the searches, exercised on randomized instances.
//! Each property is one the solver's correctness argument leans on, so a
//! failure here localizes a bug faster than an end-to-end mismatch.

mod common;

use basp_core::instances::{chain_example, example_one};
use basp_core::{
    astar_k, backward_operator, brute_force, concat_bounds, dijkstra_extended, ell_minus,
    ell_plus, forward_operator, k_upper_bound, plan_speed, reach_bounds, shortest_path, suffix,
    ArcBounds, Configuration, EndSpeed, KBound, NodeId, PathBounds, RoadGraph, SpeedProfile,
};
use common::{
    check_forward_merge, check_profile_maximality, check_relaxation_monotonicity,
    check_superadditive_splits, index, random_pwc_instance, random_walk, rng, secs, sup_distance,
    uniform, word_bounds,
};
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Walk extended backwards from its first node along a random incoming arc.
fn prepend_step(g: &RoadGraph, r: &mut ChaCha8Rng, word: &[NodeId]) -> Option<Vec<NodeId>> {
    let first = word[0];
    let ins: Vec<NodeId> = g.in_arcs(first).map(|a| a.from).collect();
    if ins.is_empty() {
        return None;
    }
    let mut out = vec![ins[index(r, ins.len())]];
    out.extend_from_slice(word);
    Some(out)
}

#[test]
fn path_length_is_additive_over_arcs() {
    for seed in 0..20 {
        let g = random_pwc_instance(seed, 8, 6);
        let mut r = rng(seed ^ 0x5eed);
        let steps = 3 + index(&mut r, 5);
        let word = random_walk(&g, &mut r, steps);
        let pb = word_bounds(&g, &word);
        let direct: f64 = word
            .windows(2)
            .map(|w| g.arc_between(w[0], w[1]).unwrap().length)
            .sum();
        assert!(
            (pb.len() - direct).abs() <= 1e-12,
            "seed {seed}: concatenated length {} vs arc sum {direct}",
            pb.len()
        );
        assert_eq!(pb.junctions().len(), word.len(), "one junction per node");
    }
}

#[test]
fn concatenation_matches_single_arc_bounds_pointwise() {
    for seed in 0..20 {
        let g = random_pwc_instance(seed, 8, 6);
        let mut r = rng(seed ^ 0xc0ffee);
        let word = random_walk(&g, &mut r, 4);
        let pb = word_bounds(&g, &word);
        for (i, pair) in word.windows(2).enumerate() {
            let offset = pb.junctions()[i];
            let single = word_bounds(&g, pair);
            for _ in 0..20 {
                let x = uniform(&mut r, 0.0, single.len());
                let same = (pb.mu_plus_at(offset + x) - single.mu_plus_at(x)).abs() <= 1e-12
                    && (pb.alpha_plus_at(offset + x) - single.alpha_plus_at(x)).abs() <= 1e-12
                    && (pb.alpha_minus_at(offset + x) - single.alpha_minus_at(x)).abs() <= 1e-12;
                assert!(
                    same,
                    "seed {seed}, arc {i}, local position {x}: concatenated bounds drift"
                );
            }
        }
    }
}

#[test]
fn free_time_is_superadditive_under_splits() {
    check_superadditive_splits(200);
}

#[test]
fn relaxing_bounds_never_slows_a_plan() {
    check_relaxation_monotonicity(50);
}

#[test]
fn forward_operator_composes_across_a_split() {
    check_forward_merge(50);
}

#[test]
fn planned_profile_dominates_dipped_variants() {
    check_profile_maximality(100);
}

#[test]
fn reach_windows_shift_monotonically_under_prefix_growth() {
    let mut tested = 0;
    let mut seed = 0;
    while tested < 200 {
        seed += 1;
        let g = random_pwc_instance(seed, 8, 6);
        let mut r = rng(seed ^ 0x9e);
        let steps = 3 + index(&mut r, 3);
        let word = random_walk(&g, &mut r, steps);
        let Some(longer) = prepend_step(&g, &mut r, &word) else {
            continue;
        };
        let pb = word_bounds(&g, &word);
        let pb_long = word_bounds(&g, &longer);
        let off = pb_long.len() - pb.len();
        // More runway before the window can only saturate the cap sooner,
        // and leaves the backward window untouched or later.
        assert!(
            ell_plus(&pb_long) <= ell_plus(&pb) + off + 1e-9,
            "seed {seed}: forward reach grew after prepending"
        );
        assert!(
            ell_minus(&pb_long) >= ell_minus(&pb) + off - 1e-9,
            "seed {seed}: backward reach shrank after prepending"
        );
        if reach_bounds(&pb).saturating() {
            assert!(
                reach_bounds(&pb_long).saturating(),
                "seed {seed}: saturation lost after prepending"
            );
        }
        tested += 1;
    }
}

#[test]
fn window_bound_makes_search_exact() {
    // Tight caps and firm slopes keep the provable window small enough to
    // brute-force against.
    for seed in 0..20 {
        let mut r = rng(seed);
        let n = 6;
        let mut g = RoadGraph::new(n);
        for i in 0..n {
            let b = ArcBounds::constant(
                0.0,
                uniform(&mut r, 0.8, 1.5),
                -uniform(&mut r, 0.6, 1.0),
                uniform(&mut r, 0.6, 1.0),
            )
            .unwrap();
            g.add_arc(NodeId(i as u32), NodeId(((i + 1) % n) as u32), uniform(&mut r, 2.0, 4.0), b)
                .unwrap();
        }
        for _ in 0..4 {
            let a = index(&mut r, n);
            let b = index(&mut r, n);
            if a == b {
                continue;
            }
            let bounds = ArcBounds::constant(
                0.0,
                uniform(&mut r, 0.8, 1.5),
                -uniform(&mut r, 0.6, 1.0),
                uniform(&mut r, 0.6, 1.0),
            )
            .unwrap();
            let _ = g.add_arc(NodeId(a as u32), NodeId(b as u32), uniform(&mut r, 2.0, 4.0), bounds);
        }
        let g = g.with_query(NodeId(0), &[NodeId(3)], 0.0, Some(0.0));
        let KBound::Finite(kb) = k_upper_bound(&g).unwrap() else {
            panic!("finite caps and slopes must give a finite window bound");
        };
        assert!(kb <= 6, "seed {seed}: window bound {kb} larger than designed");
        let sol = astar_k(&g, kb).expect("bound window must not saturate");
        let reference = brute_force(&g, 10).unwrap();
        assert!(
            (sol.time - reference.time).abs() <= 1e-6,
            "seed {seed}: window-{kb} search {} vs brute force {}",
            sol.time,
            reference.time
        );
    }
}

#[test]
fn sampled_bounds_approach_exact_reach_windows() {
    for seed in 0..20 {
        let g = random_pwc_instance(seed, 8, 4);
        let mut r = rng(seed ^ 0x51);
        let word = random_walk(&g, &mut r, 4);
        let pb = word_bounds(&g, &word);
        let step = pb.len() / 600.0;
        let sampled = sample_path(&g, &word, step);
        let d_plus = (ell_plus(&pb) - ell_plus(&sampled)).abs();
        let d_minus = (ell_minus(&pb) - ell_minus(&sampled)).abs();
        // Window endpoints live where a ramp meets a cap; sampling moves
        // caps by at most one cell and ramps by one cell of slope error.
        let tol = 4.0 * step + 1e-9;
        assert!(
            d_plus <= tol || !ell_plus(&pb).is_finite(),
            "seed {seed}: forward window moved {d_plus} (> {tol}) under sampling"
        );
        assert!(
            d_minus <= tol || !ell_minus(&pb).is_finite(),
            "seed {seed}: backward window moved {d_minus} (> {tol}) under sampling"
        );
    }
}

/// Rebuilds the bounds of `word` as a single sampled-arc path, reading the
/// exact piecewise bounds at each cell midpoint.
fn sample_path(g: &RoadGraph, word: &[NodeId], step: f64) -> PathBounds {
    let pb = word_bounds(g, word);
    let cells = (pb.len() / step).ceil() as usize;
    let mut mu_minus = Vec::with_capacity(cells);
    let mut mu_plus = Vec::with_capacity(cells);
    let mut alpha_minus = Vec::with_capacity(cells);
    let mut alpha_plus = Vec::with_capacity(cells);
    for i in 0..cells {
        let x = ((i as f64 + 0.5) * step).min(pb.len());
        mu_minus.push(pb.mu_minus_at(x));
        mu_plus.push(pb.mu_plus_at(x));
        alpha_minus.push(pb.alpha_minus_at(x));
        alpha_plus.push(pb.alpha_plus_at(x));
    }
    let bounds = ArcBounds::sampled(step, mu_minus, mu_plus, alpha_minus, alpha_plus).unwrap();
    let mut g2 = RoadGraph::new(2);
    g2.add_arc(NodeId(0), NodeId(1), pb.len(), bounds).unwrap();
    concat_bounds(&g2, &[NodeId(0), NodeId(1)]).unwrap()
}

#[test]
fn dubins_length_is_invariant_under_rigid_motions() {
    let mut r = rng(0xd0b1);
    for case in 0..200 {
        let a = Configuration::new(uniform(&mut r, -10.0, 10.0), uniform(&mut r, -10.0, 10.0), uniform(&mut r, 0.0, core::f64::consts::TAU));
        let b = Configuration::new(uniform(&mut r, -10.0, 10.0), uniform(&mut r, -10.0, 10.0), uniform(&mut r, 0.0, core::f64::consts::TAU));
        let radius = uniform(&mut r, 0.5, 3.0);
        let theta = uniform(&mut r, 0.0, core::f64::consts::TAU);
        let (dx, dy) = (uniform(&mut r, -5.0, 5.0), uniform(&mut r, -5.0, 5.0));
        let movepose = |c: &Configuration| {
            let (s, co) = theta.sin_cos();
            Configuration::new(
                co * c.x - s * c.y + dx,
                s * c.x + co * c.y + dy,
                (c.heading + theta) % core::f64::consts::TAU,
            )
        };
        let p1 = shortest_path(&a, &b, radius).expect("planar poses are always connectable");
        let p2 = shortest_path(&movepose(&a), &movepose(&b), radius).unwrap();
        assert!(
            (p1.length - p2.length).abs() <= 1e-6,
            "case {case}: length changed under rigid motion: {} vs {}",
            p1.length,
            p2.length
        );
    }
}

#[test]
fn astar_expands_no_more_than_dijkstra() {
    // The uninformed search skips the saturation gate, so compare at the
    // window the adaptive run has already proven sufficient.
    let mut agreed = 0;
    for seed in 0..50 {
        let g = random_pwc_instance(seed, 8, 6);
        let Ok(a) = basp_core::adaptive_astar(&g) else {
            continue;
        };
        let k = a.stats.final_k;
        let d = dijkstra_extended(&g, k).expect("same window must stay solvable");
        assert!(
            (a.time - d.time).abs() <= 1e-9,
            "seed {seed}: informed {} vs uninformed {}",
            a.time,
            d.time
        );
        assert!(
            a.stats.expanded <= d.stats.expanded,
            "seed {seed}: the heuristic expanded more states ({} > {})",
            a.stats.expanded,
            d.stats.expanded
        );
        agreed += 1;
    }
    assert!(agreed >= 30, "too few solvable instances ({agreed}/50) to compare");
}

#[test]
fn brute_force_winner_replans_to_its_reported_time() {
    for seed in 0..30 {
        let g = random_pwc_instance(seed, 6, 4);
        let Ok(reference) = brute_force(&g, 8) else {
            continue;
        };
        let pb = word_bounds(&g, &reference.word);
        let end = match g.w_target() {
            Some(w) => EndSpeed::At(w),
            None => EndSpeed::Free,
        };
        let plan = plan_speed(&pb, g.w_source(), end).unwrap();
        assert!(plan.feasible, "seed {seed}: winning word must replan feasibly");
        assert!(
            (plan.time - reference.time).abs() <= 1e-9,
            "seed {seed}: replan {} vs reported {}",
            plan.time,
            reference.time
        );
    }
}

#[test]
fn meet_lies_below_both_envelopes() {
    for seed in 0..30 {
        let g = random_pwc_instance(seed, 8, 6);
        let mut r = rng(seed ^ 0x3e);
        let word = random_walk(&g, &mut r, 5);
        let pb = word_bounds(&g, &word);
        let f = forward_operator(&pb, 0.0).unwrap();
        let b = backward_operator(&pb, 0.0).unwrap();
        let m = f.meet(&b).unwrap();
        for &x in m.breakpoints() {
            let fv = f.value_at(x);
            let bv = b.value_at(x);
            let mv = m.value_at(x);
            assert!(
                mv <= fv + 1e-9 && mv <= bv + 1e-9,
                "seed {seed}: meet {mv} above an envelope ({fv}, {bv}) at {x}"
            );
            assert!(
                mv >= fv.min(bv) - 1e-9,
                "seed {seed}: meet {mv} below both envelopes at {x}"
            );
        }
    }
}

#[test]
fn fixture_times_stay_pinned() {
    // A cheap regression net over the two hand instances: the library's
    // own unit tests assert these too, but keeping them in the
    // integration tier guards the public re-exports.
    let (elapsed, ()) = secs(|| {
        let e1 = basp_core::adaptive_astar(&example_one()).unwrap();
        assert!((e1.time - 2.0 * 3.0f64.sqrt()).abs() <= 1e-9);
        let ch = basp_core::adaptive_astar(&chain_example()).unwrap();
        assert_eq!(ch.stats.final_k, 3);
    });
    assert!(elapsed < 1.0, "hand instances took {elapsed}s");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn suffix_is_idempotent_and_bounded(raw in prop::collection::vec(0u32..40, 0..12), k in 0usize..8) {
        let word: Vec<NodeId> = raw.into_iter().map(NodeId).collect();
        let s = suffix(&word, k);
        prop_assert!(s.len() <= k.min(word.len()));
        prop_assert_eq!(suffix(s, k), s, "suffix must be idempotent");
        if !word.is_empty() && k > 0 {
            prop_assert_eq!(s.last(), word.last(), "suffix must keep the tail");
        }
    }

    #[test]
    fn dubins_paths_are_no_shorter_than_straight_lines(
        ax in -10.0f64..10.0, ay in -10.0f64..10.0, ah in 0.0f64..core::f64::consts::TAU,
        bx in -10.0f64..10.0, by in -10.0f64..10.0, bh in 0.0f64..core::f64::consts::TAU,
        radius in 0.3f64..3.0,
    ) {
        let a = Configuration::new(ax, ay, ah);
        let b = Configuration::new(bx, by, bh);
        let p = shortest_path(&a, &b, radius).expect("planar poses are always connectable");
        let euclid = ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt();
        prop_assert!(p.length >= euclid - 1e-9, "length {} below chord {}", p.length, euclid);
        let end = p.endpoint(&a);
        prop_assert!((end.x - bx).abs() <= 1e-6 && (end.y - by).abs() <= 1e-6,
            "endpoint ({}, {}) missed goal ({bx}, {by})", end.x, end.y);
    }
}

/// `sup_distance` itself deserves a sanity check: identical profiles are
/// at distance zero and a known perturbation is measured exactly.
#[test]
fn profile_distance_helper_measures_known_gaps() {
    let g = random_pwc_instance(7, 8, 4);
    let mut r = rng(7);
    let word = random_walk(&g, &mut r, 4);
    let pb = word_bounds(&g, &word);
    let a = plan_speed(&pb, 0.0, EndSpeed::Free).unwrap().profile;
    assert_eq!(sup_distance(&a, &a), 0.0, "a profile is at distance zero from itself");
    let b: SpeedProfile = plan_speed(&pb, pb.cap_at_start(), EndSpeed::Free).unwrap().profile;
    let d = sup_distance(&a, &b);
    assert!(
        (d - (b.value_at(0.0) - a.value_at(0.0)).abs()) >= -1e-12,
        "distance {d} must cover the entry gap"
    );
}
