//! Built-in example instances and a random-instance generator.
//!
//! The two hand-sized examples exercise the planner's characteristic
//! behaviours: [`example_one`] has a direct arc that beats the nominally
//! faster detour once boundary speeds are accounted for, and
//! [`chain_example`] needs three nodes of history before incremental costs
//! become path-independent.
//!
//! [`random_instance`] builds Dubins-style road networks: random planar
//! poses (position + heading) joined by shortest bounded-curvature paths,
//! with speed caps tied to the turning radius. [`partition_instance`]
//! builds a layered graph whose minimum-time query encodes an even split
//! of a set of integer weights.

pub mod dubins;

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::bounds::ArcBounds;
use crate::graph::{NodeId, RoadGraph};
use crate::math;

pub use dubins::{dubins_length, shortest_path, Configuration, DubinsPath, DubinsWord};

/// Three nodes `s, 1, f`; a slow but direct arc competes with a two-arc
/// detour that allows higher speeds. With zero boundary speeds the direct
/// arc wins (time `2*sqrt(3)`), while the detour would win if speeds could
/// teleport past the acceleration bounds.
pub fn example_one() -> RoadGraph {
    let mut g = RoadGraph::new(3);
    let s = NodeId(0);
    let one = NodeId(1);
    let f = NodeId(2);
    g.set_name(s, "s").unwrap();
    g.set_name(one, "1").unwrap();
    g.set_name(f, "f").unwrap();
    let wide = || ArcBounds::constant(0.0, 4.0, -1.0, 1.0).unwrap();
    g.add_arc(s, one, 2.0, wide()).unwrap();
    g.add_arc(one, f, 2.0, wide()).unwrap();
    g.add_arc(s, f, 3.0, ArcBounds::constant(0.0, 3.0, -2.0, 2.0).unwrap())
        .unwrap();
    g.with_query(s, &[f], 0.0, Some(0.0))
}

/// Four nodes `s, 1, 2, f` in a line with caps `1, 2/3, 1` and unit slope
/// bounds. The middle arc's low cap makes the cost of arc `2 -> f` depend
/// on two arcs of history, so the adaptive search must grow its suffix
/// window to `k = 3`.
pub fn chain_example() -> RoadGraph {
    let mut g = RoadGraph::new(4);
    let s = NodeId(0);
    let one = NodeId(1);
    let two = NodeId(2);
    let f = NodeId(3);
    g.set_name(s, "s").unwrap();
    g.set_name(one, "1").unwrap();
    g.set_name(two, "2").unwrap();
    g.set_name(f, "f").unwrap();
    let arc = |cap: f64| ArcBounds::constant(0.0, cap, -1.0, 1.0).unwrap();
    g.add_arc(s, one, 1.0, arc(1.0)).unwrap();
    g.add_arc(one, two, 1.0, arc(2.0 / 3.0)).unwrap();
    g.add_arc(two, f, 1.0, arc(1.0)).unwrap();
    g.with_query(s, &[f], 0.0, Some(0.0))
}

/// Layered graph encoding an even split of integer `weights`.
///
/// Nodes are `0, 1, ..., n, n+1`; an arc runs from every node to every
/// higher-numbered node. Arcs leaving node `i >= 1` have length
/// `weights[i-1]`, arcs leaving node `0` have length zero; every arc has
/// unit slope bounds, no speed cap and a zero floor. A path therefore
/// offers exactly `sum of the visited weights` of runway, and with the
/// query `w` from `0` to half the total `W`, the minimum time is
/// `sqrt(2*W)` precisely when some subset of the weights sums to `W/2`
/// (any extra runway forces a longer, slower climb).
pub fn partition_instance(weights: &[u64]) -> RoadGraph {
    let n = weights.len();
    let mut g = RoadGraph::new(n + 2);
    let free = ArcBounds::constant(0.0, f64::INFINITY, -1.0, 1.0).unwrap();
    for i in 0..=n {
        let len = if i == 0 { 0.0 } else { weights[i - 1] as f64 };
        for j in i + 1..=n + 1 {
            g.add_arc(NodeId(i as u32), NodeId(j as u32), len, free.clone())
                .expect("layered arcs are simple and distinct");
        }
    }
    let total: u64 = weights.iter().sum();
    g.with_query(
        NodeId(0),
        &[NodeId((n + 1) as u32)],
        0.0,
        Some(total as f64 / 2.0),
    )
}

/// Tunable knobs for [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    /// Number of nodes. Nodes come in co-located pairs with opposite
    /// headings — the two travel directions of a waypoint; an odd count
    /// leaves the last waypoint one-way.
    pub n: usize,
    /// RNG seed; equal parameters produce identical instances.
    pub seed: u64,
    /// Magnitude of both squared-speed slope bounds on every arc.
    pub accel: f64,
    /// Largest turning radius a connection may assume.
    pub max_radius: f64,
    /// When set, caps are sampled along each connection from its local
    /// curvature instead of one constant per arc.
    pub curvature_caps: bool,
}

impl Default for GeneratorParams {
    fn default() -> GeneratorParams {
        GeneratorParams {
            n: 50,
            seed: 0,
            accel: 0.1,
            max_radius: 4.0,
            curvature_caps: false,
        }
    }
}

/// Why [`random_instance`] could not produce a usable query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorError {
    /// Zero nodes were requested.
    Empty,
    /// No node other than the source is reachable, so no query exists.
    Disconnected,
}

impl core::fmt::Display for GeneratorError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GeneratorError::Empty => f.write_str("instance must have at least one node"),
            GeneratorError::Disconnected => {
                f.write_str("source reaches no other node; retry with another seed")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GeneratorError {}

/// Uniform draw from `[0, 1)`.
fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Connection radius giving a mean of four nearby nodes at density one
/// node per hundred square units.
fn connection_radius() -> f64 {
    math::sqrt(400.0 / core::f64::consts::PI)
}

/// Turning radius for a connection: the radius whose shortest
/// bounded-curvature path spreads the headings' angular mismatch over its
/// own length, capped at `max_radius`. Solved as a fixed point since the
/// path length itself depends on the radius.
fn connection_turning_radius(
    a: &Configuration,
    b: &Configuration,
    gap: f64,
    max_radius: f64,
) -> f64 {
    if gap <= 1e-12 {
        return max_radius;
    }
    let mut r = max_radius;
    for _ in 0..20 {
        let next = (dubins_length(a, b, r) / gap).min(max_radius);
        if math::abs(next - r) <= 1e-9 {
            return next;
        }
        r = next;
    }
    r
}

/// Random Dubins-style road network with a farthest-reachable query.
///
/// Waypoints are sampled uniformly on a square sized so node density is
/// constant; every ordered pair of distinct waypoints within the
/// connection radius is joined by its shortest bounded-curvature path.
/// Sharper connections (large heading mismatch over a short hop) get a
/// smaller turning radius `r` and thus a lower squared-speed cap `2r`;
/// with [`GeneratorParams::curvature_caps`] the cap is sampled pointwise
/// as `min(8, 2r)` on arcs and `8` on straight runs. The query runs from
/// node `0` to the node farthest by hop count, between full stops.
pub fn random_instance(params: &GeneratorParams) -> Result<RoadGraph, GeneratorError> {
    if params.n == 0 {
        return Err(GeneratorError::Empty);
    }
    let n = params.n;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let side = 10.0 * math::sqrt(n as f64);
    let tau = core::f64::consts::TAU;

    let mut poses: Vec<Configuration> = Vec::with_capacity(n);
    while poses.len() < n {
        let x = unit(&mut rng) * side;
        let y = unit(&mut rng) * side;
        let heading = unit(&mut rng) * tau;
        poses.push(Configuration::new(x, y, heading));
        if poses.len() < n {
            poses.push(Configuration::new(x, y, math::mod_tau(heading + core::f64::consts::PI)));
        }
    }

    let mut g = RoadGraph::new(n);
    for (i, p) in poses.iter().enumerate() {
        let id = NodeId(i as u32);
        g.set_position(id, p.x, p.y).expect("node exists");
        g.set_heading(id, p.heading).expect("node exists");
    }

    let radius = connection_radius();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (&poses[i], &poses[j]);
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let dist = math::hypot(dx, dy);
            if dist < 1e-9 || dist > radius {
                continue;
            }
            let psi = math::atan2(dy, dx);
            let gap = math::angle_dist(a.heading, psi).max(math::angle_dist(b.heading, psi));
            let r = connection_turning_radius(a, b, gap, params.max_radius);
            let path = shortest_path(a, b, r).expect("finite poses and positive radius");
            let bounds = if params.curvature_caps {
                curvature_bounds(&path, params.accel)
            } else {
                ArcBounds::constant(0.0, 2.0 * r, -params.accel, params.accel)
                    .expect("constant bounds are well-formed")
            };
            g.add_arc(NodeId(i as u32), NodeId(j as u32), path.length, bounds)
                .expect("pairs are distinct and bounds cover the arc");
        }
    }

    let target = farthest_by_hops(&g, NodeId(0)).ok_or(GeneratorError::Disconnected)?;
    Ok(g.with_query(NodeId(0), &[target], 0.0, Some(0.0)))
}

/// Caps sampled from the connection's local curvature: `min(8, 2r)` on
/// arcs, `8` on straight runs, one sample per percent of arclength.
fn curvature_bounds(path: &DubinsPath, accel: f64) -> ArcBounds {
    let samples = 101;
    let step = path.length / 100.0;
    let mut mu_plus = Vec::with_capacity(samples);
    for k in 0..samples {
        let r_local = path.curvature_radius_at(k as f64 * step);
        mu_plus.push((2.0 * r_local).min(8.0));
    }
    let zeros = alloc::vec![0.0; samples];
    let down = alloc::vec![-accel; samples];
    let up = alloc::vec![accel; samples];
    ArcBounds::sampled(step, zeros, mu_plus, down, up).expect("uniform samples are well-formed")
}

/// Node with the largest BFS hop count from `start` (smallest id among
/// ties), or `None` if nothing else is reachable.
fn farthest_by_hops(g: &RoadGraph, start: NodeId) -> Option<NodeId> {
    let mut hops = alloc::vec![usize::MAX; g.node_count()];
    hops[start.index()] = 0;
    let mut queue = alloc::collections::VecDeque::new();
    queue.push_back(start);
    let mut best: Option<(usize, NodeId)> = None;
    while let Some(u) = queue.pop_front() {
        let d = hops[u.index()];
        if u != start && best.map_or(true, |(bd, _)| d > bd) {
            best = Some((d, u));
        }
        for arc in g.out_arcs(u) {
            if hops[arc.to.index()] == usize::MAX {
                hops[arc.to.index()] = d + 1;
                queue.push_back(arc.to);
            }
        }
    }
    best.map(|(_, node)| node)
}
