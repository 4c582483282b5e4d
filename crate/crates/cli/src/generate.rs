//! Seeded workload generators. Every stream they produce is legal: inserts
//! never repeat a present edge and deletes only hit present edges.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use dynmatch::{Edge, Update};
use rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::stream::UpdateStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamKind {
    /// Uniform random churn around `m ≈ n·⌈√n⌉`.
    Random,
    /// A free hub wired to matched vertices while long deletion runs shrink
    /// `m` around it, so its degree grows large relative to `√m`.
    StarAdversary,
    /// A random forest: grown to a spanning tree, then edges are cut and
    /// re-hung. Arboricity 1 throughout.
    Forest,
    /// Build-up to about `4n` edges followed by deletion runs that remove
    /// most of them, repeatedly.
    DeleteHeavy,
}

impl StreamKind {
    pub const ALL: [StreamKind; 4] =
        [StreamKind::Random, StreamKind::StarAdversary, StreamKind::Forest, StreamKind::DeleteHeavy];

    pub fn name(self) -> &'static str {
        match self {
            StreamKind::Random => "random",
            StreamKind::StarAdversary => "star-adversary",
            StreamKind::Forest => "forest",
            StreamKind::DeleteHeavy => "delete-heavy",
        }
    }
}

impl fmt::Display for StreamKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StreamKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StreamKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown stream kind `{s}` (expected random, star-adversary, forest or delete-heavy)"))
    }
}

/// ChaCha8 with platform-independent range sampling.
struct Rng(ChaCha8Rng);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `0..k` by multiply-shift; `k > 0`.
    fn below(&mut self, k: usize) -> usize {
        ((self.0.next_u64() as u128 * k as u128) >> 64) as usize
    }

    /// True with probability `num / den`.
    fn chance(&mut self, num: usize, den: usize) -> bool {
        self.below(den) < num
    }
}

/// Present edges with O(1) uniform sampling.
struct EdgePool {
    list: Vec<Edge>,
    index: HashMap<Edge, usize>,
}

impl EdgePool {
    fn new() -> Self {
        EdgePool { list: Vec::new(), index: HashMap::new() }
    }

    fn len(&self) -> usize {
        self.list.len()
    }

    fn contains(&self, e: Edge) -> bool {
        self.index.contains_key(&e)
    }

    fn insert(&mut self, e: Edge) -> bool {
        if self.contains(e) {
            return false;
        }
        self.index.insert(e, self.list.len());
        self.list.push(e);
        true
    }

    fn remove(&mut self, e: Edge) -> bool {
        let Some(i) = self.index.remove(&e) else { return false };
        self.list.swap_remove(i);
        if let Some(&moved) = self.list.get(i) {
            self.index.insert(moved, i);
        }
        true
    }

    fn sample(&self, rng: &mut Rng) -> Option<Edge> {
        (!self.list.is_empty()).then(|| self.list[rng.below(self.list.len())])
    }
}

/// Collects updates and keeps the edge pool in step.
struct Builder {
    n: usize,
    len: usize,
    pool: EdgePool,
    updates: Vec<Update>,
}

impl Builder {
    fn new(n: usize, len: usize) -> Self {
        Builder { n, len, pool: EdgePool::new(), updates: Vec::with_capacity(len) }
    }

    fn full(&self) -> bool {
        self.updates.len() >= self.len
    }

    fn insert(&mut self, u: usize, v: usize) -> bool {
        if self.full() || u == v || !self.pool.insert(Edge::new(u, v)) {
            return false;
        }
        self.updates.push(Update::insert(u, v));
        true
    }

    fn delete(&mut self, e: Edge) -> bool {
        if self.full() || !self.pool.remove(e) {
            return false;
        }
        self.updates.push(Update::delete(e.lo(), e.hi()));
        true
    }

    fn delete_random(&mut self, rng: &mut Rng) -> bool {
        match self.pool.sample(rng) {
            Some(e) => self.delete(e),
            None => false,
        }
    }

    /// Inserts a uniformly random absent edge, giving up after a few tries
    /// on dense graphs.
    fn insert_random(&mut self, rng: &mut Rng) -> bool {
        for _ in 0..64 {
            let (u, v) = (rng.below(self.n), rng.below(self.n));
            if u != v && !self.pool.contains(Edge::new(u, v)) {
                return self.insert(u, v);
            }
        }
        false
    }

    fn finish(self) -> UpdateStream {
        UpdateStream { n: self.n, updates: self.updates }
    }
}

/// Edge count the random stream hovers around: `n·⌈√n⌉`, capped at half of
/// all pairs.
pub fn random_target(n: usize) -> usize {
    let root = (n as f64).sqrt().ceil() as usize;
    (n * root).min(n * n.saturating_sub(1) / 4)
}

pub fn generate(kind: StreamKind, n: usize, len: usize, seed: u64) -> UpdateStream {
    let mut rng = Rng::new(seed);
    let mut b = Builder::new(n, len);
    if n < 2 {
        return b.finish();
    }
    match kind {
        StreamKind::Random => random(&mut b, &mut rng),
        StreamKind::StarAdversary => star_adversary(&mut b, &mut rng),
        StreamKind::Forest => forest(&mut b, &mut rng),
        StreamKind::DeleteHeavy => delete_heavy(&mut b, &mut rng),
    }
    b.finish()
}

fn random(b: &mut Builder, rng: &mut Rng) {
    let target = random_target(b.n).max(1);
    while !b.full() {
        let insert_pct = if b.pool.len() < target { 90 } else { 50 };
        let done = if b.pool.len() == 0 || rng.chance(insert_pct, 100) {
            b.insert_random(rng) || b.delete_random(rng)
        } else {
            b.delete_random(rng)
        };
        if !done {
            break;
        }
    }
}

fn star_adversary(b: &mut Builder, rng: &mut Rng) {
    let n = b.n;
    if n < 4 {
        return random(b, rng);
    }
    let k = (2 * (n as f64).sqrt().ceil() as usize).min((n - 1) / 3).max(1);
    while !b.full() {
        // Distinct hub, spoke ends a_i and their partners b_i.
        let mut order: Vec<usize> = (0..n).collect();
        for i in 0..2 * k + 1 {
            let j = i + rng.below(n - i);
            order.swap(i, j);
        }
        let hub = order[0];
        let (spokes, partners) = order[1..2 * k + 1].split_at(k);
        for (&a, &c) in spokes.iter().zip(partners) {
            b.insert(a, c);
        }
        // Filler among the remaining vertices pushes m up ...
        let rest = &order[2 * k + 1..];
        let filler_goal = b.pool.len() + (2 * n).min(rest.len() * rest.len().saturating_sub(1) / 2);
        let mut tries = 0;
        while b.pool.len() < filler_goal && tries < 16 * n && !b.full() {
            tries += 1;
            b.insert(rest[rng.below(rest.len())], rest[rng.below(rest.len())]);
        }
        // ... the hub joins the matched spoke ends and stays free ...
        for &a in spokes {
            b.insert(hub, a);
        }
        // ... and a long deletion run shrinks m while the hub's degree is
        // pinned, until its degree dominates √(2m).
        let mut filler = vec![false; n];
        for &v in rest {
            filler[v] = true;
        }
        let mut misses = 0;
        while b.pool.len() > 2 * k && misses < 64 && !b.full() {
            let e = b.pool.sample(rng).expect("pool is not empty");
            if filler[e.lo()] && filler[e.hi()] {
                misses = 0;
                b.delete(e);
            } else {
                misses += 1;
            }
        }
        // Start the next round from an empty graph.
        while b.delete_random(rng) {}
    }
}

fn forest(b: &mut Builder, rng: &mut Rng) {
    let n = b.n;
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for v in 1..n {
        let p = rng.below(v);
        if b.insert(v, p) {
            parent[v] = Some(p);
        }
    }
    while !b.full() {
        let v = 1 + rng.below(n - 1);
        match parent[v] {
            Some(p) => {
                b.delete(Edge::new(v, p));
                parent[v] = None;
            }
            None => {
                let p = rng.below(v);
                b.insert(v, p);
                parent[v] = Some(p);
            }
        }
    }
}

fn delete_heavy(b: &mut Builder, rng: &mut Rng) {
    let n = b.n;
    let peak = (4 * n).min(n * (n - 1) / 2);
    while !b.full() {
        while b.pool.len() < peak && !b.full() {
            if !b.insert_random(rng) {
                break;
            }
        }
        // Mostly deletions until few edges remain.
        while b.pool.len() > n / 4 && !b.full() {
            if rng.chance(85, 100) {
                b.delete_random(rng);
            } else {
                b.insert_random(rng);
            }
        }
        if b.pool.len() == 0 && !b.insert_random(rng) {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dynmatch::UpdateKind;
    use std::collections::BTreeSet;

    fn legal(s: &UpdateStream) -> bool {
        let mut present = BTreeSet::new();
        s.updates.iter().all(|u| match u.kind {
            UpdateKind::Insert => present.insert(u.edge),
            UpdateKind::Delete => present.remove(&u.edge),
        })
    }

    #[test]
    fn streams_are_legal_and_sized() {
        for kind in StreamKind::ALL {
            for n in [2, 16, 64] {
                let s = generate(kind, n, 10 * n, 3);
                assert!(legal(&s), "{kind} n={n}");
                assert_eq!(s.n, n);
                if n >= 16 {
                    assert_eq!(s.updates.len(), 10 * n, "{kind} n={n}");
                }
            }
        }
    }

    #[test]
    fn same_seed_same_stream() {
        for kind in StreamKind::ALL {
            assert_eq!(generate(kind, 50, 400, 9), generate(kind, 50, 400, 9));
            assert_ne!(generate(kind, 50, 400, 9), generate(kind, 50, 400, 10));
        }
    }

    #[test]
    fn forest_starts_with_a_spanning_tree() {
        let s = generate(StreamKind::Forest, 10, 9, 1);
        assert_eq!(s.updates.len(), 9);
        assert!(s.updates.iter().all(|u| u.kind == UpdateKind::Insert));
        // Every vertex reached: 9 edges on 10 vertices without a cycle.
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for u in &s.updates {
            seen.insert(u.edge.lo());
            seen.insert(u.edge.hi());
        }
        assert_eq!(seen.len(), 10);
    }

    #[test]
    fn kinds_parse() {
        for kind in StreamKind::ALL {
            assert_eq!(kind.name().parse::<StreamKind>(), Ok(kind));
        }
        assert!("stars".parse::<StreamKind>().is_err());
    }

    #[test]
    fn range_sampling_is_pinned() {
        // Guards against silent changes to the generator.
        let mut rng = Rng::new(0);
        let draws: Vec<usize> = (0..5).map(|_| rng.below(1000)).collect();
        assert_eq!(draws, [709, 465, 699, 60, 879]);
    }
}
