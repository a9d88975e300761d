//! Concatenated bounds along a path.
//!
//! Planning never looks at the graph directly: a path word is first
//! flattened into a [`PathBounds`], the four bound functions glued along
//! the path's own length parameter. Junction positions are remembered so
//! zero-length arcs keep their place and profiles can be cut back into
//! per-arc pieces.

use alloc::vec::Vec;

use crate::bounds::{ArcBounds, Segment};
use crate::graph::{GraphError, NodeId, RoadGraph};

/// Bounds of a whole path, parameterized by distance from its start.
#[derive(Clone, Debug)]
pub struct PathBounds {
    len: f64,
    /// Distance of each visited node from the path start; `word.len()`
    /// entries, first 0, last `len`.
    junctions: Vec<f64>,
    arcs: Vec<PathArc>,
    /// Maximal constant-bound stretches, present iff every arc bound is
    /// piecewise constant.
    segments: Option<Vec<Segment>>,
}

#[derive(Clone, Debug)]
pub(crate) struct PathArc {
    pub offset: f64,
    pub length: f64,
    pub bounds: ArcBounds,
}

/// Glues the bounds of `word`'s arcs into one [`PathBounds`].
///
/// A single-node word yields the empty path (length 0, no constraints).
pub fn concat_bounds(g: &RoadGraph, word: &[NodeId]) -> Result<PathBounds, GraphError> {
    let arcs = g.word_arcs(word)?;
    let mut junctions = Vec::with_capacity(word.len());
    junctions.push(0.0);
    let mut path_arcs = Vec::with_capacity(arcs.len());
    let mut segments = Some(Vec::new());
    let mut offset = 0.0;
    for arc in arcs {
        if let Some(out) = segments.as_mut() {
            match arc.bounds.segments(arc.length) {
                Some(segs) => out.extend(segs.into_iter().map(|s| Segment {
                    start: s.start + offset,
                    end: s.end + offset,
                    ..s
                })),
                None => segments = None,
            }
        }
        path_arcs.push(PathArc {
            offset,
            length: arc.length,
            bounds: arc.bounds.clone(),
        });
        offset += arc.length;
        junctions.push(offset);
    }
    Ok(PathBounds {
        len: offset,
        junctions,
        arcs: path_arcs,
        segments,
    })
}

impl PathBounds {
    /// Total path length.
    pub fn len(&self) -> f64 {
        self.len
    }

    /// True for single-node (zero-arc) paths.
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Distance of each visited node from the path start.
    pub fn junctions(&self) -> &[f64] {
        &self.junctions
    }

    /// Constant-bound stretches when all bounds are piecewise constant.
    pub fn segments(&self) -> Option<&[Segment]> {
        self.segments.as_deref()
    }

    /// Whether exact (closed-form) planning applies.
    pub fn is_exact(&self) -> bool {
        self.segments.is_some()
    }

    pub(crate) fn arcs(&self) -> &[PathArc] {
        &self.arcs
    }

    /// The arc covering `lambda` (right-continuous; the last arc covers the
    /// path end). `None` on the empty path.
    fn arc_at(&self, lambda: f64) -> Option<&PathArc> {
        if self.arcs.is_empty() {
            return None;
        }
        // Zero-length arcs occupy no half-open interval; skip them by
        // taking the last arc whose offset is <= lambda with positive
        // extent, falling back to the final arc at the path end.
        let mut idx = self
            .arcs
            .partition_point(|a| a.offset <= lambda)
            .saturating_sub(1);
        while idx + 1 < self.arcs.len()
            && self.arcs[idx].offset + self.arcs[idx].length <= lambda
        {
            idx += 1;
        }
        Some(&self.arcs[idx])
    }

    fn eval(&self, lambda: f64, pick: impl Fn(&ArcBounds) -> &crate::bounds::BoundFn, empty: f64) -> f64 {
        match self.arc_at(lambda) {
            Some(a) => pick(&a.bounds).value_at(lambda - a.offset),
            None => empty,
        }
    }

    /// Right-continuous squared-speed cap at `lambda`.
    pub fn mu_plus_at(&self, lambda: f64) -> f64 {
        self.eval(lambda, |b| &b.mu_plus, f64::INFINITY)
    }

    /// Right-continuous squared-speed floor at `lambda`.
    pub fn mu_minus_at(&self, lambda: f64) -> f64 {
        self.eval(lambda, |b| &b.mu_minus, 0.0)
    }

    /// Right-continuous forward slope bound at `lambda`.
    pub fn alpha_plus_at(&self, lambda: f64) -> f64 {
        self.eval(lambda, |b| &b.alpha_plus, 0.0)
    }

    /// Right-continuous backward slope bound at `lambda`.
    pub fn alpha_minus_at(&self, lambda: f64) -> f64 {
        self.eval(lambda, |b| &b.alpha_minus, 0.0)
    }

    /// Cap at the path start (binds the entry speed).
    pub fn cap_at_start(&self) -> f64 {
        self.mu_plus_at(0.0)
    }

    /// Cap in force at the path end (seeds free-exit planning).
    pub fn cap_at_end(&self) -> f64 {
        self.mu_plus_at(self.len)
    }
}
