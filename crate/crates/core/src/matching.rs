//! The matching itself: an ordered set of matched edges plus per-vertex mate
//! pointers.
//!
//! The edge set and the mate pointers are updated separately so that the
//! square-root engine can drop an edge from `M` while both endpoints still
//! point at each other ("deferred status"). Outside of that window
//! `mate(u) == Some(v)` iff `mate(v) == Some(u)` iff `{u, v}` is in the set.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{MatchError, Result};
use crate::graph::{log_cost, Edge, StepCounter, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Free,
    Matched,
}

#[derive(Debug, Clone)]
pub struct MatchState {
    mate: Vec<Option<VertexId>>,
    edges: BTreeSet<Edge>,
    journal: Vec<(Edge, bool)>,
    tree_cost: u64,
}

impl MatchState {
    pub fn new(n: usize) -> Self {
        MatchState {
            mate: vec![None; n],
            edges: BTreeSet::new(),
            journal: Vec::new(),
            tree_cost: log_cost(n),
        }
    }

    /// Same structure, but each change to `M` is charged one step, matching an
    /// array-plus-list representation of the matched edges.
    pub fn with_unit_cost(n: usize) -> Self {
        MatchState { tree_cost: 1, ..MatchState::new(n) }
    }

    #[inline]
    pub fn mate(&self, v: VertexId) -> Option<VertexId> {
        self.mate[v]
    }

    #[inline]
    pub fn is_free(&self, v: VertexId) -> bool {
        self.mate[v].is_none()
    }

    pub fn status(&self, v: VertexId) -> Status {
        if self.is_free(v) {
            Status::Free
        } else {
            Status::Matched
        }
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    /// Adds `{u, v}` to `M` and points the endpoints at each other.
    pub fn link(&mut self, u: VertexId, v: VertexId, counter: &mut StepCounter) {
        let e = Edge::new(u, v);
        self.edges.insert(e);
        self.mate[u] = Some(v);
        self.mate[v] = Some(u);
        self.journal.push((e, true));
        counter.charge(self.tree_cost);
    }

    /// Drops `e` from the edge set only; mate pointers are left as they are.
    pub fn drop_edge(&mut self, e: Edge, counter: &mut StepCounter) {
        let present = self.edges.remove(&e);
        debug_assert!(present, "{e} not in M");
        self.journal.push((e, false));
        counter.charge(self.tree_cost);
    }

    pub fn clear_mate(&mut self, v: VertexId) {
        self.mate[v] = None;
    }

    /// Removes `e` from `M` and frees both endpoints.
    pub fn unlink(&mut self, e: Edge, counter: &mut StepCounter) {
        self.drop_edge(e, counter);
        let (u, v) = e.endpoints();
        self.mate[u] = None;
        self.mate[v] = None;
    }

    /// Net change since the last call: (added, removed), both sorted.
    pub fn take_delta(&mut self) -> (Vec<Edge>, Vec<Edge>) {
        let mut net: BTreeMap<Edge, i32> = BTreeMap::new();
        for (e, added) in self.journal.drain(..) {
            *net.entry(e).or_default() += if added { 1 } else { -1 };
        }
        let added = net.iter().filter(|(_, &d)| d > 0).map(|(&e, _)| e).collect();
        let removed = net.iter().filter(|(_, &d)| d < 0).map(|(&e, _)| e).collect();
        (added, removed)
    }

    /// Mate pointers and the edge set agree and the edges are disjoint.
    pub fn check_consistent(&self) -> Result<()> {
        for e in &self.edges {
            let (u, v) = e.endpoints();
            if self.mate[u] != Some(v) || self.mate[v] != Some(u) {
                return Err(MatchError::Invariant(format!(
                    "matched edge {e} but mate({u}) = {:?}, mate({v}) = {:?}",
                    self.mate[u], self.mate[v]
                )));
            }
        }
        let pointed = self.mate.iter().filter(|m| m.is_some()).count();
        if pointed != 2 * self.edges.len() {
            return Err(MatchError::Invariant(format!(
                "{pointed} mate pointers for {} matched edges",
                self.edges.len()
            )));
        }
        Ok(())
    }
}
