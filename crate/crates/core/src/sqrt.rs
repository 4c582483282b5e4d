//! Worst-case O(√(n+m)) engine that keeps the matching maximal and free of
//! length-3 augmenting paths, hence within 3/2 of a maximum matching.
//!
//! High-degree vertices are never allowed to stay free. At the end of every
//! round the following hold, with `m` the current edge count:
//!
//! 1. every free vertex has `deg² ≤ 2n + 2m`;
//! 2. every vertex that became free this round has `deg² ≤ 2m`;
//! 3. the matching is maximal and has no augmenting path of length 3.
//!
//! A free vertex whose degree exceeds `√(2m)` is *problematic*. Each round
//! corrects at most three of them: the two endpoints of the updated edge and
//! then the free vertex of largest degree.
//!
//! When a matched edge `{u, v}` is deleted, it leaves `M` immediately but `u`
//! and `v` keep pointing at each other until each is resolved. A vertex with
//! a non-empty mate pointer is never recorded in anyone's free-neighbor set,
//! so [`SqrtEngine::add`] skips the neighbor sweep for such a vertex.

use crate::engine::{EngineKind, MatchingEngine, Snapshot, UpdateReport};
use crate::error::{invariant, MatchError, Result};
use crate::free::{FreeMaxHeap, FreeNeighborSet};
use crate::graph::{DynamicGraph, Edge, StepCounter, Update, UpdateKind, VertexId};
use crate::matching::MatchState;

/// Counts of the engine's non-trivial moves, for instrumentation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SqrtStats {
    /// Length-3 augmentations applied.
    pub augmentations: u64,
    /// Surrogates taken for high-degree vertices.
    pub surrogates: u64,
    /// Problematic free vertices fixed in the end-of-round correction.
    pub corrections: u64,
}

#[derive(Debug, Clone)]
pub struct SqrtEngine {
    graph: DynamicGraph,
    matching: MatchState,
    free_nbrs: Vec<FreeNeighborSet>,
    fmax: FreeMaxHeap,
    /// Vertices whose mate pointer is stale while the current round resolves them.
    deferred: Vec<bool>,
    became_free: Vec<VertexId>,
    counter: StepCounter,
    stats: SqrtStats,
}

/// `deg > √(2m)`, in integers.
#[inline]
fn exceeds_low_threshold(deg: usize, m: usize) -> bool {
    (deg as u128) * (deg as u128) > 2 * m as u128
}

/// `⌈√x⌉`.
fn ceil_sqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

impl SqrtEngine {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(MatchError::NoVertices);
        }
        let mut fmax = FreeMaxHeap::new(n);
        let mut scratch = StepCounter::default();
        for v in 0..n {
            fmax.insert(v, 0, &mut scratch)?;
        }
        Ok(SqrtEngine {
            graph: DynamicGraph::new(n),
            matching: MatchState::new(n),
            free_nbrs: (0..n).map(|_| FreeNeighborSet::new(n)).collect(),
            fmax,
            deferred: vec![false; n],
            became_free: Vec::new(),
            counter: StepCounter::default(),
            stats: SqrtStats::default(),
        })
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn stats(&self) -> SqrtStats {
        self.stats
    }

    /// Vertices that turned free during the last completed round.
    pub fn became_free(&self) -> &[VertexId] {
        &self.became_free
    }

    pub fn free_neighbors(&self, v: VertexId) -> &FreeNeighborSet {
        &self.free_nbrs[v]
    }

    fn is_free(&self, v: VertexId) -> bool {
        self.matching.is_free(v)
    }

    fn exceeds(&self, v: VertexId) -> bool {
        exceeds_low_threshold(self.graph.degree(v), self.graph.m())
    }

    fn refresh_key(&mut self, w: VertexId) -> Result<()> {
        if self.is_free(w) {
            self.fmax.update_key(w, self.graph.degree(w), &mut self.counter)?;
        }
        Ok(())
    }

    /// Puts `{u, v}` into `M`. Endpoints that were genuinely free leave the
    /// heap and every neighbor's free set; endpoints with a stale mate were
    /// never in those structures.
    pub(crate) fn add(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        for w in [u, v] {
            if self.is_free(w) {
                self.fmax.delete(w, &mut self.counter)?;
                for x in self.graph.neighbors(w) {
                    self.counter.charge(1);
                    self.free_nbrs[x].delete(w, &mut self.counter)?;
                }
            }
        }
        self.matching.link(u, v, &mut self.counter);
        Ok(())
    }

    fn handle_addition(&mut self, e: Edge) -> Result<()> {
        let (u, v) = e.endpoints();
        self.graph.insert(e, &mut self.counter);
        self.refresh_key(u)?;
        self.refresh_key(v)?;
        // Keep F authentic right away: a free endpoint is now a free neighbor of the other.
        if self.is_free(u) {
            self.free_nbrs[v].insert(u, &mut self.counter)?;
        }
        if self.is_free(v) {
            self.free_nbrs[u].insert(v, &mut self.counter)?;
        }
        match (self.is_free(u), self.is_free(v)) {
            (true, true) => self.add(u, v),
            (true, false) => self.attach_free_endpoint(u, v),
            (false, true) => self.attach_free_endpoint(v, u),
            (false, false) => Ok(()),
        }
    }

    /// `u` free, `v` matched to `v2`: augment along `u - v = v2 - x` if `v2`
    /// has a free neighbor other than `u`.
    fn attach_free_endpoint(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        let Some(v2) = self.matching.mate(v) else {
            return Err(MatchError::Invariant(format!("{v} expected to be matched")));
        };
        // Hide u from F(v2) while testing; u need not be adjacent to v2.
        let hidden = self.free_nbrs[v2].delete_if_present(u, &mut self.counter);
        let x = if self.free_nbrs[v2].has_free(&mut self.counter) {
            Some(self.free_nbrs[v2].get_free(&mut self.counter)?)
        } else {
            None
        };
        if hidden {
            self.free_nbrs[v2].insert(u, &mut self.counter)?;
        }
        if let Some(x) = x {
            self.add(u, v)?;
            self.add(v2, x)?;
            self.matching.drop_edge(Edge::new(v, v2), &mut self.counter);
            self.stats.augmentations += 1;
        }
        Ok(())
    }

    fn handle_deletion(&mut self, e: Edge) -> Result<()> {
        let (u, v) = e.endpoints();
        let was_matched = self.matching.contains(e);
        self.graph.remove(e, &mut self.counter);
        self.refresh_key(u)?;
        self.refresh_key(v)?;
        if !was_matched {
            if self.is_free(u) {
                self.free_nbrs[v].delete(u, &mut self.counter)?;
            }
            if self.is_free(v) {
                self.free_nbrs[u].delete(v, &mut self.counter)?;
            }
            return Ok(());
        }
        self.matching.drop_edge(e, &mut self.counter);
        self.deferred[u] = true;
        self.deferred[v] = true;
        self.resolve_endpoint(u)?;
        self.resolve_endpoint(v)
    }

    /// Re-settles a vertex whose matched edge just disappeared.
    fn resolve_endpoint(&mut self, z: VertexId) -> Result<()> {
        if self.free_nbrs[z].has_free(&mut self.counter) {
            let x = self.free_nbrs[z].get_free(&mut self.counter)?;
            self.add(x, z)?;
        } else if self.exceeds(z) {
            let s = self.find_surrogate(z)?;
            self.resolve_low_degree(s)?;
        } else {
            self.find_aug_path(z)?;
        }
        self.deferred[z] = false;
        Ok(())
    }

    /// Like [`Self::resolve_endpoint`] for a vertex known to have `deg ≤ √(2m)`.
    fn resolve_low_degree(&mut self, s: VertexId) -> Result<()> {
        self.deferred[s] = true;
        if self.free_nbrs[s].has_free(&mut self.counter) {
            let x = self.free_nbrs[s].get_free(&mut self.counter)?;
            self.add(x, s)?;
        } else {
            invariant!(
                !self.exceeds(s),
                "surrogate {s} has degree {} > √(2m), m = {}",
                self.graph.degree(s),
                self.graph.m()
            );
            self.find_aug_path(s)?;
        }
        self.deferred[s] = false;
        Ok(())
    }

    /// Looks for `u - w = w2 - x` with `x` free. Augments if found, otherwise
    /// declares `u` free. `u` has no free neighbor and a stale mate pointer.
    pub(crate) fn find_aug_path(&mut self, u: VertexId) -> Result<()> {
        let mut path = None;
        for w in self.graph.neighbors(u) {
            self.counter.charge(1);
            let Some(w2) = self.matching.mate(w) else {
                return Err(MatchError::Invariant(format!("{u} has free neighbor {w} outside F({u})")));
            };
            if self.free_nbrs[w2].has_free(&mut self.counter) {
                let x = self.free_nbrs[w2].get_free(&mut self.counter)?;
                path = Some((w, w2, x));
                break;
            }
        }
        match path {
            Some((w, w2, x)) => {
                self.add(u, w)?;
                self.add(w2, x)?;
                self.matching.drop_edge(Edge::new(w, w2), &mut self.counter);
                self.stats.augmentations += 1;
            }
            None => {
                for w in self.graph.neighbors(u) {
                    self.counter.charge(1);
                    self.free_nbrs[w].insert(u, &mut self.counter)?;
                }
                self.fmax.insert(u, self.graph.degree(u), &mut self.counter)?;
                self.matching.clear_mate(u);
                self.became_free.push(u);
            }
        }
        Ok(())
    }

    /// For `u` with `deg(u) > √(2m)` and no free neighbor: takes a neighbor `w`
    /// whose mate `w2` has `deg(w2) ≤ √(2m)`, matches `u` with `w` and returns
    /// `w2`, which still points at `w` and must be resolved by the caller.
    pub(crate) fn find_surrogate(&mut self, u: VertexId) -> Result<VertexId> {
        let m = self.graph.m();
        let limit = ceil_sqrt(2 * m);
        let mut choice = None;
        for (scanned, w) in self.graph.neighbors(u).enumerate() {
            if scanned >= limit {
                break;
            }
            self.counter.charge(1);
            let Some(w2) = self.matching.mate(w) else {
                return Err(MatchError::Invariant(format!("{u} has free neighbor {w} outside F({u})")));
            };
            if !exceeds_low_threshold(self.graph.degree(w2), m) {
                choice = Some((w, w2));
                break;
            }
        }
        let Some((w, w2)) = choice else {
            return Err(MatchError::Invariant(format!(
                "no surrogate among the first {limit} neighbors of {u} (m = {m})"
            )));
        };
        self.matching.drop_edge(Edge::new(w, w2), &mut self.counter);
        self.add(u, w)?;
        self.stats.surrogates += 1;
        Ok(w2)
    }

    /// Swaps a problematic free vertex for a low-degree surrogate.
    fn correct(&mut self, x: VertexId) -> Result<()> {
        if !self.is_free(x) || !self.exceeds(x) {
            return Ok(());
        }
        invariant!(self.free_nbrs[x].is_empty(), "free vertex {x} has a free neighbor");
        let s = self.find_surrogate(x)?;
        self.resolve_low_degree(s)?;
        self.stats.corrections += 1;
        Ok(())
    }

    fn correct_problematic(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.correct(u)?;
        self.correct(v)?;
        if let Some(x) = self.fmax.find_max(&mut self.counter) {
            self.correct(x)?;
        }
        Ok(())
    }

    fn check_round_end(&self, u: VertexId, v: VertexId) -> Result<()> {
        for z in [u, v] {
            invariant!(!self.deferred[z], "{z} still has a deferred status at round end");
            if let Some(w) = self.matching.mate(z) {
                invariant!(
                    self.matching.mate(w) == Some(z) && self.matching.contains(Edge::new(z, w)),
                    "{z} points at {w} without a matched edge"
                );
            }
        }
        Ok(())
    }
}

impl MatchingEngine for SqrtEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Sqrt
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
        self.became_free.clear();
        match update.kind {
            UpdateKind::Insert => self.handle_addition(update.edge)?,
            UpdateKind::Delete => self.handle_deletion(update.edge)?,
        }
        let (u, v) = update.edge.endpoints();
        self.correct_problematic(u, v)?;
        self.check_round_end(u, v)?;
        let (added, removed) = self.matching.take_delta();
        let ops = self.counter.finish(self.graph.m());
        Ok(UpdateReport { added, removed, ops })
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot::from_mates(self.graph.n(), self.graph.edges(), |v| self.matching.mate(v))
    }

    /// Structure checks plus the two degree invariants; the matching-quality
    /// invariant is left to the oracle.
    fn check_invariants(&self) -> Result<()> {
        self.graph.check_counters()?;
        self.matching.check_consistent()?;
        let n = self.graph.n();
        let m = self.graph.m();
        for v in 0..n {
            invariant!(!self.deferred[v], "{v} left in deferred state");
            let f = &self.free_nbrs[v];
            f.check_counts()?;
            for w in f.members() {
                invariant!(self.is_free(w), "F({v}) holds matched vertex {w}");
                invariant!(self.graph.contains(Edge::new(v, w)), "F({v}) holds non-neighbor {w}");
            }
            let free_degree = self.graph.neighbors(v).filter(|&w| self.is_free(w)).count();
            invariant!(f.len() == free_degree, "F({v}) has {} members but {v} has {free_degree} free neighbors", f.len());
            let free = self.is_free(v);
            invariant!(self.fmax.contains(v) == free, "heap membership of {v} disagrees with its status");
            if free {
                let d = self.graph.degree(v);
                invariant!(self.fmax.key(v) == Some(d), "heap key of {v} is stale");
                invariant!(
                    (d as u128).pow(2) <= 2 * (n as u128 + m as u128),
                    "free vertex {v} has degree {d} > √(2n+2m) (n = {n}, m = {m})"
                );
            }
        }
        for &v in &self.became_free {
            if self.is_free(v) {
                invariant!(
                    !exceeds_low_threshold(self.graph.degree(v), m),
                    "{v} became free with degree {} > √(2m) (m = {m})",
                    self.graph.degree(v)
                );
            }
        }
        Ok(())
    }

    fn counter(&self) -> &StepCounter {
        &self.counter
    }

    fn clone_box(&self) -> Box<dyn MatchingEngine> {
        Box::new(self.clone())
    }
}
