//! Minimum-time routing on road graphs with speed and acceleration bounds.
//!
//! Arcs of a directed graph carry pointwise bounds on squared speed
//! (`mu_minus`, `mu_plus`) and on its derivative along the arc
//! (`alpha_minus`, `alpha_plus`). The crate plans the fastest admissible
//! squared-speed profile along a fixed path and searches the graph for the
//! minimum-time path between a source and a set of targets, where the best
//! route may depend on how much momentum earlier arcs allow the vehicle to
//! carry.
//!
//! The search state extends Dijkstra/A* node states with a bounded suffix
//! of recently visited nodes: incremental costs are computed by replanning
//! the suffix, and a structural "saturation" test detects when the suffix
//! window is too short and must grow.
//!
//! ```
//! use basp_core::{instances, search};
//!
//! let g = instances::chain_example();
//! let sol = search::adaptive_astar(&g).unwrap();
//! assert!((sol.time - 5.2617).abs() < 1e-3);
//! assert_eq!(sol.stats.final_k, 3);
//! ```
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! only enables wall-clock timing in search statistics.
#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod bounds;
pub mod graph;
pub mod instances;
mod math;
pub mod oracle;
pub mod path;
pub mod profile;
pub mod reach;
pub mod search;

pub use bounds::{ArcBounds, BoundFn, BoundKind, BoundsError, Segment};
pub use graph::{suffix, Arc, GraphError, NodeId, PathWord, RoadGraph};
pub use instances::{
    chain_example, dubins_length, example_one, partition_instance, random_instance, shortest_path,
    Configuration, DubinsPath, DubinsWord, GeneratorError, GeneratorParams,
};
pub use oracle::{
    best_completion_time, brute_force, brute_force_with, has_perfect_partition, pseudo_poly_dp,
    BruteResult, DpReport, OracleError,
};
pub use path::{concat_bounds, PathBounds};
pub use profile::{
    backward_operator, forward_operator, meet, plan_speed, plan_speed_with, travel_time,
    EndSpeed, Engine, PlanError, PlanResult, SpeedProfile,
};
pub use reach::{ell_minus, ell_plus, k_upper_bound, reach_bounds, KBound, ReachBounds, ReachError};
pub use search::{
    adaptive_astar, adaptive_astar_opts, astar_k, astar_k_opts, dijkstra_extended,
    dijkstra_extended_opts, heuristic_table, one_basp, relaxed_arc_time, HeuristicTable,
    SearchError, SearchStats, Solution, SolveOptions, SuffixState,
};
