//! Fully dynamic bounded out-degree edge orientation.
//!
//! A new edge leaves the endpoint with the smaller out-degree (smaller index
//! on ties). Whenever a vertex ends up with more than `cap` out-edges, all of
//! its out-edges are reversed, which can push neighbors over the cap in turn;
//! the cascade is processed with a LIFO worklist. For graphs whose arboricity
//! stays at most `c` and `cap ≥ 2δ > 2c` the number of reversals is amortized
//! `O(cap + log n)` per insertion. Deletions never reverse anything.

use crate::error::{MatchError, Result};
use crate::graph::{Edge, StepCounter, VertexId};

/// How the out-degree cap is derived from the arboricity bound `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaProfile {
    /// `δ = 2c`, `Δ = 5c`.
    #[default]
    FiveC,
    /// `Δ = 6c + ⌈log n / log(log n / c)⌉` (logarithms base 2), for `c` well
    /// below `log n`. Falls back to `Δ = 6c + ⌈log n⌉` when `log n ≤ 2c`.
    LogLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientationParams {
    /// Arboricity bound promised by the caller.
    pub arboricity: usize,
    /// Analysis threshold δ; kept for documentation of the valid regime.
    pub delta_threshold: usize,
    /// Out-degree cap Δ.
    pub cap: usize,
}

impl OrientationParams {
    pub fn new(n: usize, arboricity: usize, profile: DeltaProfile) -> Self {
        let c = arboricity.max(1);
        let cap = match profile {
            DeltaProfile::FiveC => 5 * c,
            DeltaProfile::LogLog => {
                let log_n = (n.max(2) as f64).log2();
                let inner = (log_n / c as f64).log2();
                let extra = if inner > 1.0 { log_n / inner } else { log_n };
                6 * c + extra.ceil() as usize
            }
        };
        OrientationParams { arboricity: c, delta_threshold: 2 * c, cap }
    }
}

/// Edge `tail → head` was reversed to `head → tail`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flip {
    pub tail: VertexId,
    pub head: VertexId,
}

/// Result of an insertion: the direction first given to the new edge, then
/// every reversal in the order it happened.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inserted {
    pub tail: VertexId,
    pub head: VertexId,
    pub flips: Vec<Flip>,
}

#[derive(Debug, Clone)]
pub struct Orientation {
    out: Vec<Vec<VertexId>>,
    params: OrientationParams,
    m: usize,
    total_flips: u64,
}

impl Orientation {
    pub fn new(n: usize, params: OrientationParams) -> Self {
        Orientation { out: vec![Vec::new(); n], params, m: 0, total_flips: 0 }
    }

    pub fn params(&self) -> OrientationParams {
        self.params
    }

    pub fn cap(&self) -> usize {
        self.params.cap
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn total_flips(&self) -> u64 {
        self.total_flips
    }

    pub fn out_neighbors(&self, u: VertexId) -> &[VertexId] {
        &self.out[u]
    }

    pub fn out_degree(&self, u: VertexId) -> usize {
        self.out[u].len()
    }

    pub fn max_out_degree(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Is `u → v` an edge? Costs `|D(u)|` probes.
    pub fn points_to(&self, u: VertexId, v: VertexId, counter: &mut StepCounter) -> bool {
        counter.charge(self.out[u].len() as u64 + 1);
        self.out[u].contains(&v)
    }

    /// Direction of `e` as `(tail, head)`, if present. Costs `O(Δ)`.
    pub fn direction(&self, e: Edge, counter: &mut StepCounter) -> Option<(VertexId, VertexId)> {
        let (u, v) = e.endpoints();
        if self.points_to(u, v, counter) {
            Some((u, v))
        } else if self.points_to(v, u, counter) {
            Some((v, u))
        } else {
            None
        }
    }

    pub fn insert(&mut self, e: Edge, counter: &mut StepCounter) -> Result<Inserted> {
        let (u, v) = e.endpoints();
        let (tail, head) = if self.out[v].len() < self.out[u].len() { (v, u) } else { (u, v) };
        self.out[tail].push(head);
        self.m += 1;
        counter.charge(1);
        let flips = self.rebalance(tail, counter)?;
        Ok(Inserted { tail, head, flips })
    }

    fn rebalance(&mut self, start: VertexId, counter: &mut StepCounter) -> Result<Vec<Flip>> {
        let mut flips = Vec::new();
        if self.out[start].len() <= self.params.cap {
            return Ok(flips);
        }
        let limit = 10 * (self.n() + self.m) as u64;
        let mut work = vec![start];
        while let Some(x) = work.pop() {
            if self.out[x].len() <= self.params.cap {
                continue;
            }
            let heads = std::mem::take(&mut self.out[x]);
            for y in heads {
                self.out[y].push(x);
                flips.push(Flip { tail: x, head: y });
                counter.charge(1);
                if self.out[y].len() > self.params.cap {
                    work.push(y);
                }
            }
            if flips.len() as u64 > limit {
                return Err(MatchError::OrientationOverflow { limit });
            }
        }
        self.total_flips += flips.len() as u64;
        Ok(flips)
    }

    /// Removes `e`; returns its `(tail, head)` or `None` if absent.
    pub fn remove(&mut self, e: Edge, counter: &mut StepCounter) -> Option<(VertexId, VertexId)> {
        let (tail, head) = self.direction(e, counter)?;
        let list = &mut self.out[tail];
        let i = list.iter().position(|&w| w == head).expect("direction just found");
        list.swap_remove(i);
        // Keep capacity proportional to the live out-degree.
        if list.capacity() > 4 * list.len() + 4 {
            list.shrink_to(2 * list.len());
        }
        self.m -= 1;
        Some((tail, head))
    }

    /// Every edge exactly once, unsorted.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.out.iter().enumerate().flat_map(|(u, heads)| heads.iter().map(move |&v| Edge::new(u, v)))
    }

    /// Clears all edges and re-inserts `edges` under a new cap.
    pub fn rebuild(&mut self, params: OrientationParams, edges: &[Edge], counter: &mut StepCounter) -> Result<()> {
        for &e in edges {
            self.out[e.lo()].clear();
            self.out[e.hi()].clear();
        }
        counter.charge(edges.len() as u64);
        self.params = params;
        self.m = 0;
        for &e in edges {
            self.insert(e, counter)?;
        }
        Ok(())
    }

    /// Empties the out-lists of `vertices`, releasing their memory, and
    /// switches to `params`. The caller guarantees no other vertex has edges.
    pub fn clear_vertices(&mut self, vertices: &[VertexId], params: OrientationParams, counter: &mut StepCounter) {
        for &v in vertices {
            self.out[v] = Vec::new();
        }
        counter.charge(vertices.len() as u64);
        self.params = params;
        self.m = 0;
    }

    pub fn out_capacity_cells(&self) -> usize {
        self.out.iter().map(Vec::capacity).sum::<usize>() + self.out.len()
    }

    pub fn check(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for (u, heads) in self.out.iter().enumerate() {
            if heads.len() > self.params.cap {
                return Err(MatchError::Invariant(format!(
                    "out-degree of {u} is {} > {}",
                    heads.len(),
                    self.params.cap
                )));
            }
            for &v in heads {
                if !seen.insert(Edge::new(u, v)) {
                    return Err(MatchError::Invariant(format!("edge {} oriented twice", Edge::new(u, v))));
                }
            }
        }
        if seen.len() != self.m {
            return Err(MatchError::Invariant(format!("{} oriented edges but m = {}", seen.len(), self.m)));
        }
        Ok(())
    }
}
