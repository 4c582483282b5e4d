//! Undirected simple graphs under edge updates, plus the per-update
//! operation counter every engine charges its primitive steps to.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{MatchError, Result};

/// Dense vertex index in `0..n`.
pub type VertexId = usize;

/// Unordered vertex pair, stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn lo(self) -> VertexId {
        self.0
    }

    pub fn hi(self) -> VertexId {
        self.1
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.0, self.1)
    }

    /// The endpoint that is not `v`. `v` must be an endpoint.
    pub fn other(self, v: VertexId) -> VertexId {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }

    pub fn touches(self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateKind {
    Insert,
    Delete,
}

/// A single edge insertion or deletion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Update {
    pub kind: UpdateKind,
    pub edge: Edge,
}

impl Update {
    pub fn insert(u: VertexId, v: VertexId) -> Self {
        Update { kind: UpdateKind::Insert, edge: Edge::new(u, v) }
    }

    pub fn delete(u: VertexId, v: VertexId) -> Self {
        Update { kind: UpdateKind::Delete, edge: Edge::new(u, v) }
    }

    /// Range and self-loop checks that do not depend on the current graph.
    pub fn validate_shape(&self, n: usize) -> Result<()> {
        let (u, v) = self.edge.endpoints();
        if v >= n {
            return Err(MatchError::VertexOutOfRange { vertex: v, n });
        }
        if u == v {
            return Err(MatchError::SelfLoop(u));
        }
        Ok(())
    }
}

/// `⌈log2 n⌉`, at least 1. Cost weight of one balanced-tree or heap operation.
pub fn log_cost(n: usize) -> u64 {
    let bits = usize::BITS - n.saturating_sub(1).leading_zeros();
    u64::from(bits.max(1))
}

/// Charged primitive operations for the update in flight, and a history of
/// past updates.
#[derive(Debug, Clone, Default)]
pub struct StepCounter {
    ops: u64,
    history: Vec<StepRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRecord {
    pub index: usize,
    pub ops: u64,
    pub m: usize,
}

impl StepCounter {
    pub fn begin(&mut self) {
        self.ops = 0;
    }

    #[inline]
    pub fn charge(&mut self, ops: u64) {
        self.ops += ops;
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }

    /// Closes the current update and logs it; returns its op count.
    pub fn finish(&mut self, m: usize) -> u64 {
        let index = self.history.len();
        self.history.push(StepRecord { index, ops: self.ops, m });
        self.ops
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }

    pub fn total(&self) -> u64 {
        self.history.iter().map(|r| r.ops).sum()
    }

    pub fn max(&self) -> u64 {
        self.history.iter().map(|r| r.ops).max().unwrap_or(0)
    }
}

/// Adjacency held in ordered sets; "any r neighbors" means the r smallest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicGraph {
    adjacency: Vec<BTreeSet<VertexId>>,
    deg: Vec<usize>,
    m: usize,
    tree_cost: u64,
}

impl DynamicGraph {
    pub fn new(n: usize) -> Self {
        DynamicGraph {
            adjacency: vec![BTreeSet::new(); n],
            deg: vec![0; n],
            m: 0,
            tree_cost: log_cost(n),
        }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.deg[v]
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.adjacency[e.lo()].contains(&e.hi())
    }

    /// Ascending neighbor order.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[v].iter().copied()
    }

    /// Rejects updates that break simple-graph discipline without touching state.
    pub fn check_update(&self, update: &Update) -> Result<()> {
        update.validate_shape(self.n())?;
        match (update.kind, self.contains(update.edge)) {
            (UpdateKind::Insert, true) => Err(MatchError::DuplicateEdge(update.edge)),
            (UpdateKind::Delete, false) => Err(MatchError::MissingEdge(update.edge)),
            _ => Ok(()),
        }
    }

    pub fn insert(&mut self, e: Edge, counter: &mut StepCounter) {
        let (u, v) = e.endpoints();
        let fresh = self.adjacency[u].insert(v) & self.adjacency[v].insert(u);
        debug_assert!(fresh);
        self.deg[u] += 1;
        self.deg[v] += 1;
        self.m += 1;
        counter.charge(2 * self.tree_cost);
    }

    pub fn remove(&mut self, e: Edge, counter: &mut StepCounter) {
        let (u, v) = e.endpoints();
        let present = self.adjacency[u].remove(&v) & self.adjacency[v].remove(&u);
        debug_assert!(present);
        self.deg[u] -= 1;
        self.deg[v] -= 1;
        self.m -= 1;
        counter.charge(2 * self.tree_cost);
    }

    /// Sorted edge list.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.m);
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.range(u + 1..).map(|&v| Edge(u, v)));
        }
        out
    }

    /// Recounts `m` and every degree from the adjacency sets.
    pub fn check_counters(&self) -> Result<()> {
        let mut twice_m = 0;
        for (v, nbrs) in self.adjacency.iter().enumerate() {
            if nbrs.len() != self.deg[v] {
                return Err(MatchError::Invariant(format!(
                    "deg({v}) = {} but |N({v})| = {}",
                    self.deg[v],
                    nbrs.len()
                )));
            }
            for &w in nbrs {
                if !self.adjacency[w].contains(&v) {
                    return Err(MatchError::Invariant(format!("asymmetric adjacency {v} -> {w}")));
                }
            }
            twice_m += nbrs.len();
        }
        if twice_m != 2 * self.m {
            return Err(MatchError::Invariant(format!(
                "m = {} but degree sum is {twice_m}",
                self.m
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_normalized() {
        assert_eq!(Edge::new(5, 2), Edge::new(2, 5));
        assert_eq!(Edge::new(5, 2).endpoints(), (2, 5));
        assert_eq!(Edge::new(5, 2).other(5), 2);
    }

    #[test]
    fn log_cost_is_ceiling_log2() {
        assert_eq!(log_cost(1), 1);
        assert_eq!(log_cost(2), 1);
        assert_eq!(log_cost(3), 2);
        assert_eq!(log_cost(1024), 10);
        assert_eq!(log_cost(1025), 11);
    }

    #[test]
    fn graph_counters_follow_updates() {
        let mut g = DynamicGraph::new(4);
        let mut c = StepCounter::default();
        g.insert(Edge::new(0, 1), &mut c);
        g.insert(Edge::new(1, 2), &mut c);
        g.insert(Edge::new(3, 1), &mut c);
        g.remove(Edge::new(1, 2), &mut c);
        assert_eq!(g.m(), 2);
        assert_eq!(g.degree(1), 2);
        assert_eq!(g.neighbors(1).collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(g.edges(), vec![Edge::new(0, 1), Edge::new(1, 3)]);
        g.check_counters().unwrap();
    }

    #[test]
    fn illegal_updates_are_rejected() {
        let mut g = DynamicGraph::new(3);
        g.insert(Edge::new(0, 1), &mut StepCounter::default());
        assert_eq!(
            g.check_update(&Update::insert(1, 0)),
            Err(MatchError::DuplicateEdge(Edge::new(0, 1)))
        );
        assert_eq!(
            g.check_update(&Update::delete(1, 2)),
            Err(MatchError::MissingEdge(Edge::new(1, 2)))
        );
        assert_eq!(g.check_update(&Update::insert(2, 2)), Err(MatchError::SelfLoop(2)));
        assert_eq!(
            g.check_update(&Update::insert(0, 3)),
            Err(MatchError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn counter_resets_per_update() {
        let mut c = StepCounter::default();
        c.begin();
        c.charge(5);
        assert_eq!(c.finish(1), 5);
        c.begin();
        c.charge(2);
        c.finish(2);
        assert_eq!(c.total(), 7);
        assert_eq!(c.max(), 5);
        assert_eq!(c.history()[1], StepRecord { index: 1, ops: 2, m: 2 });
    }
}
