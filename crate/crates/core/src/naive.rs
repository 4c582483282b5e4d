//! Baseline engine: match both endpoints of a new edge if they are free,
//! and rescan the neighborhoods of a deleted matched edge.

use crate::engine::{EngineKind, MatchingEngine, Snapshot, UpdateReport};
use crate::error::{MatchError, Result};
use crate::graph::{DynamicGraph, StepCounter, Update, UpdateKind, VertexId};
use crate::matching::MatchState;

#[derive(Debug, Clone)]
pub struct NaiveEngine {
    graph: DynamicGraph,
    matching: MatchState,
    counter: StepCounter,
}

impl NaiveEngine {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(MatchError::NoVertices);
        }
        Ok(NaiveEngine { graph: DynamicGraph::new(n), matching: MatchState::new(n), counter: StepCounter::default() })
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    /// Matches `z` to its smallest free neighbor, if any.
    fn rematch(&mut self, z: VertexId) {
        let mut found = None;
        for w in self.graph.neighbors(z) {
            self.counter.charge(1);
            if self.matching.is_free(w) {
                found = Some(w);
                break;
            }
        }
        if let Some(w) = found {
            self.matching.link(z, w, &mut self.counter);
        }
    }
}

impl MatchingEngine for NaiveEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Naive
    }

    fn n(&self) -> usize {
        self.graph.n()
    }

    fn m(&self) -> usize {
        self.graph.m()
    }

    fn matching_size(&self) -> usize {
        self.matching.len()
    }

    fn mate(&self, v: VertexId) -> Option<VertexId> {
        self.matching.mate(v)
    }

    fn apply(&mut self, update: Update) -> Result<UpdateReport> {
        self.graph.check_update(&update)?;
        self.counter.begin();
        let e = update.edge;
        let (u, v) = e.endpoints();
        match update.kind {
            UpdateKind::Insert => {
                self.graph.insert(e, &mut self.counter);
                if self.matching.is_free(u) && self.matching.is_free(v) {
                    self.matching.link(u, v, &mut self.counter);
                }
            }
            UpdateKind::Delete => {
                self.graph.remove(e, &mut self.counter);
                if self.matching.contains(e) {
                    self.matching.unlink(e, &mut self.counter);
                    self.rematch(u);
                    if self.matching.is_free(v) {
                        self.rematch(v);
                    }
                }
            }
        }
        let (added, removed) = self.matching.take_delta();
        let ops = self.counter.finish(self.graph.m());
        Ok(UpdateReport { added, removed, ops })
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot::from_mates(self.graph.n(), self.graph.edges(), |v| self.matching.mate(v))
    }

    fn check_invariants(&self) -> Result<()> {
        self.graph.check_counters()?;
        self.matching.check_consistent()
    }

    fn counter(&self) -> &StepCounter {
        &self.counter
    }

    fn clone_box(&self) -> Box<dyn MatchingEngine> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn run(n: usize, updates: &[Update]) -> NaiveEngine {
        let mut e = NaiveEngine::new(n).unwrap();
        for &u in updates {
            e.apply(u).unwrap();
        }
        e
    }

    #[test]
    fn star_center_rematches_to_first_free_leaf() {
        let mut e = run(6, &(1..=5).map(|k| Update::insert(0, k)).collect::<Vec<_>>());
        assert_eq!(e.mate(0), Some(1));
        let report = e.apply(Update::delete(0, 1)).unwrap();
        assert_eq!(report.added, vec![Edge::new(0, 2)]);
        assert_eq!(report.removed, vec![Edge::new(0, 1)]);
    }

    #[test]
    fn insert_between_matched_vertices_is_a_no_op() {
        let mut e = run(4, &[Update::insert(0, 1), Update::insert(2, 3)]);
        let report = e.apply(Update::insert(1, 2)).unwrap();
        assert!(report.added.is_empty() && report.removed.is_empty());
        assert_eq!(e.matching_size(), 2);
    }

    #[test]
    fn insert_free_to_matched_keeps_matching() {
        let mut e = run(3, &[Update::insert(0, 1)]);
        let report = e.apply(Update::insert(2, 1)).unwrap();
        assert!(report.added.is_empty());
        assert_eq!(e.mate(2), None);
    }

    #[test]
    fn deleting_isolated_matched_edge_empties_matching() {
        let mut e = run(2, &[Update::insert(0, 1)]);
        e.apply(Update::delete(0, 1)).unwrap();
        assert_eq!(e.matching_size(), 0);
    }

    #[test]
    fn rejected_update_leaves_state_untouched() {
        let mut e = run(3, &[Update::insert(0, 1)]);
        let before = e.snapshot();
        let history = e.counter().history().len();
        assert!(e.apply(Update::insert(1, 0)).is_err());
        assert!(e.apply(Update::delete(1, 2)).is_err());
        assert_eq!(e.snapshot(), before);
        assert_eq!(e.counter().history().len(), history);
    }
}
