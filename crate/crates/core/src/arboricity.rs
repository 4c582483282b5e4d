//! Amortized engine for graphs of bounded arboricity.
//!
//! The graph is kept only as a bounded out-degree orientation: `D(u)` are the
//! out-neighbors of `u`. Each vertex `u` also tracks `F(u)`, the free vertices
//! `x` with `x → u`. Membership in `F(u)` is a bit in an `n × n` table; the
//! order of insertion is a lazy list whose stale entries are only discarded
//! when a search walks over them. Every lazy removal mints one credit on the
//! list and every discarded entry spends one, so walks are paid for.
//!
//! A free vertex `u` gets a mate either from `F(u)` (a free in-neighbor) or
//! by scanning `D(u)`, which is short. When `u` stays free it announces
//! itself to every out-neighbor.

use crate::engine::{EngineKind, MatchingEngine, Snapshot, UpdateReport};
use crate::error::{invariant, MatchError, Result};
use crate::graph::{Edge, StepCounter, Update, UpdateKind, VertexId};
use crate::lazy::{LazyList, NodePool, Step};
use crate::matching::MatchState;
use crate::orientation::{DeltaProfile, Orientation, OrientationParams};

/// Largest `n` accepted; the membership table has `n²` cells.
pub const MAX_VERTICES: usize = 1 << 14;

#[derive(Debug, Clone)]
pub struct ArboricityEngine {
    n: usize,
    orientation: Orientation,
    matching: MatchState,
    member: Vec<bool>,
    lists: Vec<LazyList>,
    pool: NodePool,
    credits: Vec<i64>,
    counter: StepCounter,
}

impl ArboricityEngine {
    pub fn new(n: usize, arboricity: usize, profile: DeltaProfile) -> Result<Self> {
        if n == 0 {
            return Err(MatchError::NoVertices);
        }
        if n > MAX_VERTICES {
            return Err(MatchError::InstanceTooLarge(format!(
                "arb engine needs an n x n table; n = {n} exceeds {MAX_VERTICES}"
            )));
        }
        let params = OrientationParams::new(n, arboricity, profile);
        Ok(ArboricityEngine {
            n,
            orientation: Orientation::new(n, params),
            matching: MatchState::with_unit_cost(n),
            member: vec![false; n * n],
            lists: vec![LazyList::default(); n],
            pool: NodePool::new(),
            credits: vec![0; n],
            counter: StepCounter::default(),
        })
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    fn is_free(&self, v: VertexId) -> bool {
        self.matching.is_free(v)
    }

    /// Adds `x` to `F(u)`.
    fn f_add(&mut self, u: VertexId, x: VertexId) {
        self.counter.charge(1);
        let cell = u * self.n + x;
        if !self.member[cell] {
            self.member[cell] = true;
            self.pool.push_front(&mut self.lists[u], x);
        }
    }

    /// Removes `x` from `F(u)` lazily: the list entry stays until a walk
    /// discards it.
    fn f_remove(&mut self, u: VertexId, x: VertexId) {
        self.counter.charge(1);
        let cell = u * self.n + x;
        if self.member[cell] {
            self.member[cell] = false;
            self.credits[u] += 1;
        }
    }

    /// Some member of `F(u)`, discarding stale entries on the way.
    fn f_extract(&mut self, u: VertexId) -> Result<Option<VertexId>> {
        let n = self.n;
        let member = &self.member;
        let counter = &mut self.counter;
        let mut discarded = 0i64;
        let found = self.pool.walk(&mut self.lists[u], |x| {
            counter.charge(1);
            if member[u * n + x] {
                Step::Stop
            } else {
                discarded += 1;
                Step::Drop
            }
        });
        self.credits[u] -= discarded;
        if self.credits[u] < 0 {
            return Err(MatchError::TokenUnderflow { vertex: u, balance: self.credits[u] });
        }
        if let Some(x) = found {
            invariant!(self.is_free(x), "F({u}) holds matched vertex {x}");
            invariant!(
                self.orientation.points_to(x, u, &mut self.counter),
                "F({u}) holds {x} but {x} -> {u} is not an edge"
            );
        }
        Ok(found)
    }

    /// Matches `u` and `v` and withdraws both from the sets of their
    /// out-neighbors.
    fn match_pair(&mut self, u: VertexId, v: VertexId) {
        self.matching.link(u, v, &mut self.counter);
        for z in [u, v] {
            for i in 0..self.orientation.out_degree(z) {
                let y = self.orientation.out_neighbors(z)[i];
                self.f_remove(y, z);
            }
        }
    }

    /// `w` has just lost its mate: find a new one or announce `w` as free.
    fn rematch(&mut self, w: VertexId) -> Result<()> {
        if !self.is_free(w) {
            return Ok(());
        }
        let mut x = self.f_extract(w)?;
        if x.is_none() {
            for &y in self.orientation.out_neighbors(w) {
                self.counter.charge(1);
                if self.matching.is_free(y) {
                    x = Some(y);
                    break;
                }
            }
        }
        match x {
            Some(x) => self.match_pair(w, x),
            None => {
                for i in 0..self.orientation.out_degree(w) {
                    let y = self.orientation.out_neighbors(w)[i];
                    self.f_add(y, w);
                }
            }
        }
        Ok(())
    }

    fn insert(&mut self, e: Edge) -> Result<()> {
        let inserted = self.orientation.insert(e, &mut self.counter)?;
        if self.is_free(inserted.tail) {
            self.f_add(inserted.head, inserted.tail);
        }
        for flip in &inserted.flips {
            // Was tail → head, now head → tail.
            if self.is_free(flip.tail) {
                self.f_remove(flip.head, flip.tail);
            }
            if self.is_free(flip.head) {
                self.f_add(flip.tail, flip.head);
            }
        }
        let (u, v) = e.endpoints();
        if self.is_free(u) && self.is_free(v) {
            self.match_pair(u, v);
        }
        Ok(())
    }

    fn delete(&mut self, e: Edge) -> Result<()> {
        let (tail, head) =
            self.orientation.remove(e, &mut self.counter).ok_or(MatchError::MissingEdge(e))?;
        if self.is_free(tail) {
            self.f_remove(head, tail);
        }
        if self.matching.contains(e) {
            self.matching.unlink(e, &mut self.counter);
            let (u, v) = e.endpoints();
            self.rematch(u)?;
            self.rematch(v)?;
        }
        Ok(())
    }

    /// Physical list entries at `u` minus live members; all of them must be
    /// covered by credits.
    fn stale_entries(&self, u: VertexId) -> usize {
        let live = (0..self.n).filter(|&x| self.member[u * self.n + x]).count();
        self.lists[u].len() - live
    }
}

impl MatchingEngine for ArboricityEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Arboricity
    }

    fn n(&self) -> usize {
        self.n
    }

    fn m(&self) -> usize {
        self.orientation.m()
    }

    fn matching_size(&self) -> usize {
        self.matching.len()
    }

    fn mate(&self, v: VertexId) -> Option<VertexId> {
        self.matching.mate(v)
    }

    fn apply(&mut self, update: Update) -> Result<UpdateReport> {
        update.validate_shape(self.n)?;
        let e = update.edge;
        let mut probe = StepCounter::default();
        let present = self.orientation.direction(e, &mut probe).is_some();
        match update.kind {
            UpdateKind::Insert if present => return Err(MatchError::DuplicateEdge(e)),
            UpdateKind::Delete if !present => return Err(MatchError::MissingEdge(e)),
            _ => {}
        }
        self.counter.begin();
        match update.kind {
            UpdateKind::Insert => self.insert(e)?,
            UpdateKind::Delete => self.delete(e)?,
        }
        let (added, removed) = self.matching.take_delta();
        let ops = self.counter.finish(self.orientation.m());
        Ok(UpdateReport { added, removed, ops })
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot::from_mates(self.n, self.orientation.edges().collect(), |v| self.matching.mate(v))
    }

    fn check_invariants(&self) -> Result<()> {
        self.orientation.check()?;
        self.matching.check_consistent()?;
        let mut want = vec![false; self.n * self.n];
        for (x, heads) in (0..self.n).map(|x| (x, self.orientation.out_neighbors(x))) {
            if self.is_free(x) {
                for &u in heads {
                    want[u * self.n + x] = true;
                }
            }
        }
        for u in 0..self.n {
            for x in 0..self.n {
                let (have, need) = (self.member[u * self.n + x], want[u * self.n + x]);
                invariant!(have == need, "F({u}) membership of {x} is {have}, expected {need}");
                if have {
                    invariant!(
                        self.pool.iter(&self.lists[u]).any(|y| y == x),
                        "F({u}) member {x} missing from its list"
                    );
                }
            }
            let stale = self.stale_entries(u) as i64;
            invariant!(self.credits[u] >= stale, "F({u}) has {stale} stale entries but {} credits", self.credits[u]);
        }
        for e in self.orientation.edges() {
            let (u, v) = e.endpoints();
            invariant!(!(self.is_free(u) && self.is_free(v)), "edge {e} has two free endpoints");
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
