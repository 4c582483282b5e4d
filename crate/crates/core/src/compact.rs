//! The orientation engine in linear space.
//!
//! There is no `n × n` table. Each vertex keeps two lazy lists in a shared
//! node pool:
//!
//! * `N(u)`, every neighbor ever inserted, cleaned ("authenticated") once it
//!   holds more than `2·max(deg u, 1)` entries;
//! * `F(u)`, candidate free in-neighbors, pruned once it holds more than
//!   `3·max(deg u, 1)` entries and validated entry by entry when searched.
//!
//! Cleaning is paid for from a per-list token ledger. Each deletion mints
//! tokens on the `N` lists of both endpoints and each push onto an `F` list
//! deposits enough tokens to discard that entry later. Every cleaning pass
//! spends exactly the work it performs, and a balance below zero is
//! reported as an error.
//!
//! The arboricity bound is not supplied by the caller. It is chosen from the
//! edge count at the start of each stage as `c = 2⌈√m⌉`, and the stage ends
//! (everything is rebuilt) when `m` doubles or halves.

use crate::engine::{EngineKind, MatchingEngine, Snapshot, UpdateReport};
use crate::error::{invariant, MatchError, Result};
use crate::graph::{Edge, StepCounter, Update, UpdateKind, VertexId};
use crate::lazy::{LazyList, NodePool, Step};
use crate::matching::MatchState;
use crate::orientation::{DeltaProfile, Orientation, OrientationParams};

/// Bound on [`CompactEngine::space_census`] in units of `n + m + 1` words.
pub const SPACE_CONSTANT: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactConfig {
    /// Smallest stage arboricity bound.
    pub min_arboricity: usize,
    /// Tokens minted on each endpoint's `N` list per deletion, in units of Δ.
    pub mint_per_delete: u64,
}

impl Default for CompactConfig {
    fn default() -> Self {
        CompactConfig { min_arboricity: 2, mint_per_delete: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tag {
    InD,
    Kept,
    Rejected,
}

/// Vertex-indexed scratch marks with O(1) reset: a mark is valid only if its
/// stamp equals the current epoch.
#[derive(Debug, Clone)]
struct SmartArray {
    stamp: Vec<u32>,
    tag: Vec<Tag>,
    epoch: u32,
}

impl SmartArray {
    fn new(n: usize) -> Self {
        SmartArray { stamp: vec![0; n], tag: vec![Tag::Rejected; n], epoch: 0 }
    }

    fn begin(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
    }

    fn get(&self, v: VertexId) -> Option<Tag> {
        (self.stamp[v] == self.epoch).then_some(self.tag[v])
    }

    fn set(&mut self, v: VertexId, tag: Tag) {
        self.stamp[v] = self.epoch;
        self.tag[v] = tag;
    }
}

/// Per-list token balances.
#[derive(Debug, Clone)]
struct TokenLedger {
    balance: Vec<i64>,
}

impl TokenLedger {
    fn new(n: usize) -> Self {
        TokenLedger { balance: vec![0; n] }
    }

    fn mint(&mut self, u: VertexId, tokens: u64) {
        self.balance[u] += tokens as i64;
    }

    fn spend(&mut self, u: VertexId, tokens: u64) -> Result<()> {
        self.balance[u] -= tokens as i64;
        if self.balance[u] < 0 {
            return Err(MatchError::TokenUnderflow { vertex: u, balance: self.balance[u] });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CompactStats {
    pub stages: u64,
    pub authentications: u64,
    pub prunes: u64,
}

#[derive(Debug, Clone)]
pub struct CompactEngine {
    n: usize,
    config: CompactConfig,
    deg: Vec<usize>,
    matching: MatchState,
    orientation: Orientation,
    pool: NodePool,
    nbrs: Vec<LazyList>,
    free_in: Vec<LazyList>,
    n_tokens: TokenLedger,
    f_tokens: TokenLedger,
    smart: SmartArray,
    /// Vertices that may have edges since the last rebuild.
    touched: Vec<VertexId>,
    is_touched: Vec<bool>,
    stage_m: usize,
    stats: CompactStats,
    counter: StepCounter,
}

fn stage_params(n: usize, m: usize, config: &CompactConfig) -> OrientationParams {
    let root = (m as f64).sqrt().ceil() as usize;
    let c = (2 * root).max(config.min_arboricity).max(1);
    OrientationParams::new(n, c, DeltaProfile::FiveC)
}

impl CompactEngine {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_config(n, CompactConfig::default())
    }

    pub fn with_config(n: usize, config: CompactConfig) -> Result<Self> {
        if n == 0 {
            return Err(MatchError::NoVertices);
        }
        if n >= u32::MAX as usize {
            return Err(MatchError::InstanceTooLarge(format!("{n} vertices do not fit 32-bit list nodes")));
        }
        let params = stage_params(n, 0, &config);
        Ok(CompactEngine {
            n,
            deg: vec![0; n],
            matching: MatchState::with_unit_cost(n),
            orientation: Orientation::new(n, params),
            pool: NodePool::new(),
            nbrs: vec![LazyList::default(); n],
            free_in: vec![LazyList::default(); n],
            n_tokens: TokenLedger::new(n),
            f_tokens: TokenLedger::new(n),
            smart: SmartArray::new(n),
            touched: Vec::new(),
            is_touched: vec![false; n],
            stage_m: 0,
            stats: CompactStats::default(),
            counter: StepCounter::default(),
            config,
        })
    }

    pub fn stats(&self) -> CompactStats {
        self.stats
    }

    pub fn cap(&self) -> usize {
        self.orientation.cap()
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.deg[u]
    }

    /// Physical length of `N(u)`, stale entries included.
    pub fn neighbor_list_len(&self, u: VertexId) -> usize {
        self.nbrs[u].len()
    }

    /// Physical length of `F(u)`, stale entries included.
    pub fn free_list_len(&self, u: VertexId) -> usize {
        self.free_in[u].len()
    }

    /// Smallest token balance over all lists.
    pub fn min_balance(&self) -> i64 {
        self.n_tokens.balance.iter().chain(&self.f_tokens.balance).copied().min().unwrap_or(0)
    }

    /// Machine words held by the engine, counting allocated capacity: fixed
    /// per-vertex arrays, list nodes, out-lists and the matched-edge set.
    pub fn space_census(&self) -> usize {
        // deg, mate, two list heads with lengths, two balances, smart stamp
        // and tag, touched flag.
        const PER_VERTEX: usize = 12;
        PER_VERTEX * self.n
            + 2 * self.pool.allocated()
            + self.orientation.out_capacity_cells()
            + self.touched.capacity()
            + 2 * self.matching.len()
    }

    fn tokens_per_push(&self) -> u64 {
        self.orientation.cap() as u64 + 2
    }

    fn touch(&mut self, v: VertexId) {
        if !self.is_touched[v] {
            self.is_touched[v] = true;
            self.touched.push(v);
        }
    }

    fn push_free(&mut self, u: VertexId, x: VertexId) -> Result<()> {
        self.counter.charge(1);
        self.pool.push_front(&mut self.free_in[u], x);
        let tokens = self.tokens_per_push();
        self.f_tokens.mint(u, tokens);
        self.maybe_prune(u)
    }

    /// Rebuilds `N(u)` to hold exactly the current neighbors, once.
    fn maybe_authenticate(&mut self, u: VertexId) -> Result<()> {
        if self.nbrs[u].len() <= 2 * self.deg[u].max(1) {
            return Ok(());
        }
        self.stats.authentications += 1;
        let start = self.counter.ops();
        let Self { pool, nbrs, orientation, smart, counter, .. } = self;
        smart.begin();
        for &y in orientation.out_neighbors(u) {
            smart.set(y, Tag::InD);
        }
        counter.charge(orientation.out_degree(u) as u64 + 1);
        pool.walk(&mut nbrs[u], |w| {
            counter.charge(1);
            match smart.get(w) {
                Some(Tag::InD) => {
                    smart.set(w, Tag::Kept);
                    Step::Keep
                }
                Some(_) => Step::Drop,
                None => {
                    if orientation.points_to(w, u, counter) {
                        smart.set(w, Tag::Kept);
                        Step::Keep
                    } else {
                        smart.set(w, Tag::Rejected);
                        Step::Drop
                    }
                }
            }
        });
        let spent = self.counter.ops() - start;
        self.n_tokens.spend(u, spent)?;
        invariant!(
            self.nbrs[u].len() == self.deg[u],
            "N({u}) has {} entries after cleaning, degree {}",
            self.nbrs[u].len(),
            self.deg[u]
        );
        Ok(())
    }

    /// Drops matched, duplicate and non-adjacent entries from `F(u)` once it
    /// outgrows the degree.
    fn maybe_prune(&mut self, u: VertexId) -> Result<()> {
        if self.free_in[u].len() <= 3 * self.deg[u].max(1) {
            return Ok(());
        }
        self.maybe_authenticate(u)?;
        self.stats.prunes += 1;
        let start = self.counter.ops();
        let Self { pool, nbrs, free_in, matching, smart, counter, .. } = self;
        smart.begin();
        for w in pool.iter(&nbrs[u]) {
            smart.set(w, Tag::InD);
        }
        counter.charge(nbrs[u].len() as u64 + 1);
        pool.walk(&mut free_in[u], |x| {
            counter.charge(1);
            if !matching.is_free(x) {
                return Step::Drop;
            }
            match smart.get(x) {
                Some(Tag::InD) => {
                    smart.set(x, Tag::Kept);
                    Step::Keep
                }
                _ => Step::Drop,
            }
        });
        let spent = self.counter.ops() - start;
        self.f_tokens.spend(u, spent)
    }

    /// A free vertex `x` with `x → u`, taken from `F(u)`. Entries passed over
    /// are discarded and paid for from the list's tokens.
    fn extract_free(&mut self, u: VertexId) -> Result<Option<VertexId>> {
        let mut spent = 0u64;
        let Self { pool, free_in, matching, orientation, smart, counter, .. } = self;
        smart.begin();
        let found = pool.walk(&mut free_in[u], |x| {
            let before = counter.ops();
            counter.charge(1);
            let step = if !matching.is_free(x) || smart.get(x) == Some(Tag::Rejected) {
                Step::Drop
            } else if orientation.points_to(x, u, counter) {
                Step::Stop
            } else {
                smart.set(x, Tag::Rejected);
                Step::Drop
            };
            if step == Step::Drop {
                spent += counter.ops() - before;
            }
            step
        });
        self.f_tokens.spend(u, spent)?;
        Ok(found)
    }

    /// `w` has just lost its mate: find a new one or announce `w` as free.
    fn rematch(&mut self, w: VertexId) -> Result<()> {
        if !self.matching.is_free(w) {
            return Ok(());
        }
        let mut x = self.extract_free(w)?;
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
            Some(x) => self.matching.link(w, x, &mut self.counter),
            None => {
                for i in 0..self.orientation.out_degree(w) {
                    let y = self.orientation.out_neighbors(w)[i];
                    self.push_free(y, w)?;
                }
            }
        }
        Ok(())
    }

    fn insert(&mut self, e: Edge) -> Result<()> {
        let (u, v) = e.endpoints();
        self.deg[u] += 1;
        self.deg[v] += 1;
        self.touch(u);
        self.touch(v);
        self.pool.push_front(&mut self.nbrs[u], v);
        self.pool.push_front(&mut self.nbrs[v], u);
        self.counter.charge(2);
        let inserted = self.orientation.insert(e, &mut self.counter)?;
        self.maybe_authenticate(u)?;
        self.maybe_authenticate(v)?;
        if self.matching.is_free(inserted.tail) {
            self.push_free(inserted.head, inserted.tail)?;
        }
        for flip in &inserted.flips {
            // Was tail → head, now head → tail. Stale entries for the old
            // direction are left for the searches to discard.
            if self.matching.is_free(flip.head) {
                self.push_free(flip.tail, flip.head)?;
            }
        }
        if self.matching.is_free(u) && self.matching.is_free(v) {
            self.matching.link(u, v, &mut self.counter);
        }
        Ok(())
    }

    fn delete(&mut self, e: Edge) -> Result<()> {
        self.orientation.remove(e, &mut self.counter).ok_or(MatchError::MissingEdge(e))?;
        let (u, v) = e.endpoints();
        self.deg[u] -= 1;
        self.deg[v] -= 1;
        let mint = self.config.mint_per_delete * self.orientation.cap() as u64;
        self.n_tokens.mint(u, mint);
        self.n_tokens.mint(v, mint);
        if self.matching.contains(e) {
            self.matching.unlink(e, &mut self.counter);
            self.rematch(u)?;
            self.rematch(v)?;
        }
        for z in [u, v] {
            self.maybe_authenticate(z)?;
            self.maybe_prune(z)?;
        }
        Ok(())
    }

    fn stage_over(&self) -> bool {
        let m = self.orientation.m();
        m >= 2 * self.stage_m.max(1) || (self.stage_m > 1 && 2 * m <= self.stage_m)
    }

    /// Starts a new stage: picks the cap from the current `m`, reorients all
    /// edges and rebuilds every list exactly, with empty ledgers.
    fn new_stage(&mut self) -> Result<()> {
        self.stats.stages += 1;
        let m = self.orientation.m();
        let mut edges = Vec::with_capacity(m);
        for &v in &self.touched {
            for &w in self.orientation.out_neighbors(v) {
                edges.push(Edge::new(v, w));
            }
        }
        self.counter.charge((self.touched.len() + edges.len()) as u64);
        let params = stage_params(self.n, m, &self.config);
        let touched = std::mem::take(&mut self.touched);
        self.orientation.clear_vertices(&touched, params, &mut self.counter);
        self.pool.reset();
        for &v in &touched {
            self.nbrs[v] = LazyList::default();
            self.free_in[v] = LazyList::default();
            self.n_tokens.balance[v] = 0;
            self.f_tokens.balance[v] = 0;
            self.is_touched[v] = false;
        }
        for &v in &touched {
            if self.deg[v] > 0 {
                self.touch(v);
            }
        }
        for &e in &edges {
            let (u, v) = e.endpoints();
            self.orientation.insert(e, &mut self.counter)?;
            self.pool.push_front(&mut self.nbrs[u], v);
            self.pool.push_front(&mut self.nbrs[v], u);
            self.counter.charge(2);
        }
        for i in 0..self.touched.len() {
            let x = self.touched[i];
            if self.matching.is_free(x) {
                for j in 0..self.orientation.out_degree(x) {
                    let y = self.orientation.out_neighbors(x)[j];
                    self.push_free(y, x)?;
                }
            }
        }
        self.stage_m = m;
        Ok(())
    }
}

impl MatchingEngine for CompactEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Compact
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
        if self.stage_over() {
            self.new_stage()?;
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
        let mut deg = vec![0usize; self.n];
        let mut adjacent = vec![Vec::new(); self.n];
        for e in self.orientation.edges() {
            let (u, v) = e.endpoints();
            deg[u] += 1;
            deg[v] += 1;
            adjacent[u].push(v);
            adjacent[v].push(u);
            invariant!(
                !(self.matching.is_free(u) && self.matching.is_free(v)),
                "edge {e} has two free endpoints"
            );
        }
        invariant!(deg == self.deg, "degree counters disagree with the orientation");
        let census = self.space_census();
        let m = self.orientation.m();
        invariant!(
            census <= SPACE_CONSTANT * (self.n + m + 1),
            "space census {census} exceeds {SPACE_CONSTANT}·(n + m + 1) at n = {}, m = {m}",
            self.n
        );
        let cap = self.orientation.cap() as i64;
        let per_push = self.tokens_per_push() as i64;
        for u in 0..self.n {
            let (n_len, f_len, d) = (self.nbrs[u].len(), self.free_in[u].len(), self.deg[u]);
            invariant!(n_len <= 2 * d.max(1), "|N({u})| = {n_len} exceeds 2·max(deg, 1) for deg {d}");
            invariant!(f_len <= 3 * d.max(1) + 1, "|F({u})| = {f_len} exceeds 3·max(deg, 1) + 1 for deg {d}");
            let mut listed: Vec<VertexId> = self.pool.iter(&self.nbrs[u]).collect();
            listed.sort_unstable();
            listed.dedup();
            for &w in &adjacent[u] {
                invariant!(listed.binary_search(&w).is_ok(), "neighbor {w} missing from N({u})");
            }
            let nb = self.n_tokens.balance[u];
            let fb = self.f_tokens.balance[u];
            invariant!(nb >= 0 && fb >= 0, "negative balance at {u}: N {nb}, F {fb}");
            let stale = n_len as i64 - d as i64;
            invariant!(
                nb >= self.config.mint_per_delete as i64 * cap * stale,
                "N({u}) holds {stale} stale entries with only {nb} tokens"
            );
            invariant!(fb >= per_push * f_len as i64, "F({u}) holds {f_len} entries with only {fb} tokens");
        }
        // Every free vertex is listed in F(y) for each of its out-neighbors.
        for x in 0..self.n {
            if !self.matching.is_free(x) {
                continue;
            }
            for &y in self.orientation.out_neighbors(x) {
                invariant!(self.pool.iter(&self.free_in[y]).any(|z| z == x), "free {x} -> {y} missing from F({y})");
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
