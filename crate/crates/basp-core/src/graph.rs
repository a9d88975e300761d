//! Directed road graphs, queries, and path words.
//!
//! Nodes are dense integer ids. Arcs are directed, carry a nonnegative
//! length and an [`ArcBounds`] envelope, and at most one arc may join any
//! ordered node pair (route alternatives are modelled as distinct
//! intermediate nodes). A path is therefore fully described by its *word*:
//! the sequence of nodes it visits.
//!
//! A graph also stores one routing query: a source node with a fixed entry
//! squared speed, a set of goal nodes, and an optional exact exit squared
//! speed. Geometry (positions, headings) and node names are optional
//! decorations used by generators and front ends.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::bounds::{ArcBounds, BoundsError};

/// Dense node identifier in `0..node_count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    /// The id as a `usize` index.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A path as the sequence of nodes it visits. A single node is the empty
/// path anchored at that node; consecutive entries must be joined by arcs.
pub type PathWord = Vec<NodeId>;

/// The last `min(k, |word|)` nodes of a word.
///
/// Suffixes are the search's state abstraction: two paths ending in the
/// same recent stretch are merged, so `k` controls how much history the
/// cost model can see.
#[inline]
pub fn suffix(word: &[NodeId], k: usize) -> &[NodeId] {
    &word[word.len().saturating_sub(k)..]
}

/// A directed arc with length and bound envelope.
#[derive(Clone, Debug)]
pub struct Arc {
    /// Tail node.
    pub from: NodeId,
    /// Head node.
    pub to: NodeId,
    /// Arc length (nonnegative, finite).
    pub length: f64,
    /// Speed and slope bounds along the arc.
    pub bounds: ArcBounds,
}

/// Errors raised while assembling or querying a graph.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphError {
    /// A bound function failed validation.
    Bounds(BoundsError),
    /// A node id is outside `0..node_count`.
    UnknownNode(NodeId),
    /// An arc from `from` to `to` already exists.
    ParallelArc(NodeId, NodeId),
    /// Arcs may not start and end at the same node.
    SelfLoop(NodeId),
    /// Arc length must be finite and nonnegative.
    BadLength,
    /// A bound function does not cover the whole arc.
    ShortBounds,
    /// A word is not a path of this graph.
    NotAPath,
    /// Boundary squared speeds must be finite and nonnegative.
    BadBoundarySpeed,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Bounds(e) => write!(f, "invalid bounds: {e}"),
            GraphError::UnknownNode(n) => write!(f, "unknown node {n}"),
            GraphError::ParallelArc(a, b) => write!(f, "arc {a} -> {b} already exists"),
            GraphError::SelfLoop(n) => write!(f, "self-loop at node {n}"),
            GraphError::BadLength => f.write_str("arc length must be finite and nonnegative"),
            GraphError::ShortBounds => f.write_str("bounds do not cover the arc"),
            GraphError::NotAPath => f.write_str("word is not a path of this graph"),
            GraphError::BadBoundarySpeed => {
                f.write_str("boundary squared speeds must be finite and nonnegative")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GraphError {}

impl From<BoundsError> for GraphError {
    fn from(e: BoundsError) -> GraphError {
        GraphError::Bounds(e)
    }
}

/// A directed road graph plus one routing query.
#[derive(Clone, Debug)]
pub struct RoadGraph {
    node_count: usize,
    names: Vec<Option<String>>,
    positions: Vec<Option<[f64; 2]>>,
    headings: Vec<Option<f64>>,
    arcs: Vec<Arc>,
    /// Outgoing arc indices per node, sorted by head id (deterministic
    /// expansion order).
    out: Vec<Vec<u32>>,
    /// Incoming arc indices per node (reverse traversals).
    inc: Vec<Vec<u32>>,
    by_ends: BTreeMap<(u32, u32), u32>,
    source: NodeId,
    targets: BTreeSet<NodeId>,
    w_source: f64,
    w_target: Option<f64>,
}

impl RoadGraph {
    /// An arc-free graph with `node_count` nodes and a placeholder query
    /// (source 0, no targets, zero entry speed, free exit speed).
    pub fn new(node_count: usize) -> RoadGraph {
        RoadGraph {
            node_count,
            names: alloc::vec![None; node_count],
            positions: alloc::vec![None; node_count],
            headings: alloc::vec![None; node_count],
            arcs: Vec::new(),
            out: alloc::vec![Vec::new(); node_count],
            inc: alloc::vec![Vec::new(); node_count],
            by_ends: BTreeMap::new(),
            source: NodeId(0),
            targets: BTreeSet::new(),
            w_source: 0.0,
            w_target: None,
        }
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Number of arcs.
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// All arcs in insertion order.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    fn check_node(&self, n: NodeId) -> Result<(), GraphError> {
        if n.index() < self.node_count {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(n))
        }
    }

    /// Inserts the arc `from -> to`. At most one arc per ordered pair; no
    /// self-loops; bounds must cover `[0, length]`.
    pub fn add_arc(
        &mut self,
        from: NodeId,
        to: NodeId,
        length: f64,
        bounds: ArcBounds,
    ) -> Result<(), GraphError> {
        self.check_node(from)?;
        self.check_node(to)?;
        if from == to {
            return Err(GraphError::SelfLoop(from));
        }
        if !(length.is_finite() && length >= 0.0) {
            return Err(GraphError::BadLength);
        }
        if self.by_ends.contains_key(&(from.0, to.0)) {
            return Err(GraphError::ParallelArc(from, to));
        }
        if !bounds.covers(length) {
            return Err(GraphError::ShortBounds);
        }
        let idx = self.arcs.len() as u32;
        self.arcs.push(Arc {
            from,
            to,
            length,
            bounds,
        });
        self.by_ends.insert((from.0, to.0), idx);
        let pos = self.out[from.index()]
            .partition_point(|&a| self.arcs[a as usize].to < to);
        self.out[from.index()].insert(pos, idx);
        self.inc[to.index()].push(idx);
        Ok(())
    }

    /// The arc joining `from` to `to`, if present.
    pub fn arc_between(&self, from: NodeId, to: NodeId) -> Option<&Arc> {
        self.by_ends
            .get(&(from.0, to.0))
            .map(|&i| &self.arcs[i as usize])
    }

    /// Outgoing arcs of `n`, sorted by head id.
    pub fn out_arcs(&self, n: NodeId) -> impl Iterator<Item = &Arc> + '_ {
        self.out[n.index()].iter().map(|&i| &self.arcs[i as usize])
    }

    /// Incoming arcs of `n`.
    pub fn in_arcs(&self, n: NodeId) -> impl Iterator<Item = &Arc> + '_ {
        self.inc[n.index()].iter().map(|&i| &self.arcs[i as usize])
    }

    /// Sets the routing query. `w_target = None` leaves the exit speed
    /// free; `Some(w)` requires the squared speed to be exactly `w` at the
    /// moment a target is reached.
    pub fn set_query(
        &mut self,
        source: NodeId,
        targets: &[NodeId],
        w_source: f64,
        w_target: Option<f64>,
    ) -> Result<(), GraphError> {
        self.check_node(source)?;
        for &t in targets {
            self.check_node(t)?;
        }
        if !(w_source.is_finite() && w_source >= 0.0) {
            return Err(GraphError::BadBoundarySpeed);
        }
        if let Some(w) = w_target {
            if !(w.is_finite() && w >= 0.0) {
                return Err(GraphError::BadBoundarySpeed);
            }
        }
        self.source = source;
        self.targets = targets.iter().copied().collect();
        self.w_source = w_source;
        self.w_target = w_target;
        Ok(())
    }

    /// Builder-style [`RoadGraph::set_query`].
    pub fn with_query(
        mut self,
        source: NodeId,
        targets: &[NodeId],
        w_source: f64,
        w_target: Option<f64>,
    ) -> RoadGraph {
        self.set_query(source, targets, w_source, w_target)
            .expect("invalid query");
        self
    }

    /// Query source node.
    pub fn source(&self) -> NodeId {
        self.source
    }

    /// Query target set.
    pub fn targets(&self) -> &BTreeSet<NodeId> {
        &self.targets
    }

    /// Whether `n` is a query target.
    pub fn is_target(&self, n: NodeId) -> bool {
        self.targets.contains(&n)
    }

    /// Entry squared speed at the source.
    pub fn w_source(&self) -> f64 {
        self.w_source
    }

    /// Required exit squared speed at a target, `None` when free.
    pub fn w_target(&self) -> Option<f64> {
        self.w_target
    }

    /// Assigns a display name to a node.
    pub fn set_name(&mut self, n: NodeId, name: &str) -> Result<(), GraphError> {
        self.check_node(n)?;
        self.names[n.index()] = Some(name.to_string());
        Ok(())
    }

    /// The node's assigned name, if any.
    pub fn name(&self, n: NodeId) -> Option<&str> {
        self.names[n.index()].as_deref()
    }

    /// Display label: the node's name if set, its id otherwise.
    pub fn label(&self, n: NodeId) -> String {
        match self.name(n) {
            Some(s) => s.to_string(),
            None => n.to_string(),
        }
    }

    /// Finds a node by exact name.
    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names
            .iter()
            .position(|x| x.as_deref() == Some(name))
            .map(|i| NodeId(i as u32))
    }

    /// Stores a planar position for a node (metadata only).
    pub fn set_position(&mut self, n: NodeId, x: f64, y: f64) -> Result<(), GraphError> {
        self.check_node(n)?;
        self.positions[n.index()] = Some([x, y]);
        Ok(())
    }

    /// The node's stored position, if any.
    pub fn position(&self, n: NodeId) -> Option<[f64; 2]> {
        self.positions[n.index()]
    }

    /// Stores a heading for a node (metadata only).
    pub fn set_heading(&mut self, n: NodeId, heading: f64) -> Result<(), GraphError> {
        self.check_node(n)?;
        self.headings[n.index()] = Some(heading);
        Ok(())
    }

    /// The node's stored heading, if any.
    pub fn heading(&self, n: NodeId) -> Option<f64> {
        self.headings[n.index()]
    }

    /// The arcs traversed by `word`, or `NotAPath` if some hop is missing.
    pub fn word_arcs(&self, word: &[NodeId]) -> Result<Vec<&Arc>, GraphError> {
        if word.is_empty() {
            return Err(GraphError::NotAPath);
        }
        for &n in word {
            self.check_node(n).map_err(|_| GraphError::NotAPath)?;
        }
        word.windows(2)
            .map(|w| self.arc_between(w[0], w[1]).ok_or(GraphError::NotAPath))
            .collect()
    }
}
