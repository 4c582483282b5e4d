//! Free-neighbor bookkeeping for the square-root engine.
//!
//! [`FreeNeighborSet`] is a boolean membership array over all `n` vertices
//! with one counter per block of `b = ⌈√n⌉` indices, so insert, delete and
//! emptiness are O(1) and finding a member costs at most `2b` probes.
//! [`FreeMaxHeap`] keeps every free vertex keyed by its degree.

use crate::error::{MatchError, Result};
use crate::graph::{log_cost, StepCounter, VertexId};

pub fn block_size(n: usize) -> usize {
    let mut b = (n as f64).sqrt() as usize;
    while b * b < n {
        b += 1;
    }
    while b > 1 && (b - 1) * (b - 1) >= n {
        b -= 1;
    }
    b.max(1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeNeighborSet {
    present: Vec<bool>,
    bucket_counts: Vec<u32>,
    block: usize,
    total: usize,
}

impl FreeNeighborSet {
    pub fn new(n: usize) -> Self {
        let block = block_size(n);
        FreeNeighborSet { present: vec![false; n], bucket_counts: vec![0; n.div_ceil(block)], block, total: 0 }
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn bucket_counts(&self) -> &[u32] {
        &self.bucket_counts
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn contains(&self, w: VertexId) -> bool {
        self.present[w]
    }

    pub fn insert(&mut self, w: VertexId, counter: &mut StepCounter) -> Result<()> {
        counter.charge(1);
        if self.present[w] {
            return Err(MatchError::Invariant(format!("{w} inserted twice into a free-neighbor set")));
        }
        self.present[w] = true;
        self.bucket_counts[w / self.block] += 1;
        self.total += 1;
        Ok(())
    }

    pub fn delete(&mut self, w: VertexId, counter: &mut StepCounter) -> Result<()> {
        counter.charge(1);
        if !self.present[w] {
            return Err(MatchError::Invariant(format!("{w} deleted from a free-neighbor set it is not in")));
        }
        self.unset(w);
        Ok(())
    }

    /// Tolerant delete; returns whether `w` was a member.
    pub fn delete_if_present(&mut self, w: VertexId, counter: &mut StepCounter) -> bool {
        counter.charge(1);
        if self.present[w] {
            self.unset(w);
            true
        } else {
            false
        }
    }

    fn unset(&mut self, w: VertexId) {
        self.present[w] = false;
        self.bucket_counts[w / self.block] -= 1;
        self.total -= 1;
    }

    pub fn has_free(&self, counter: &mut StepCounter) -> bool {
        counter.charge(1);
        self.total > 0
    }

    /// Smallest member: first non-empty bucket, then first set cell in it.
    pub fn get_free(&self, counter: &mut StepCounter) -> Result<VertexId> {
        for (j, &count) in self.bucket_counts.iter().enumerate() {
            counter.charge(1);
            if count == 0 {
                continue;
            }
            let start = j * self.block;
            let end = (start + self.block).min(self.present.len());
            for w in start..end {
                counter.charge(1);
                if self.present[w] {
                    return Ok(w);
                }
            }
            return Err(MatchError::Invariant(format!("bucket {j} counts {count} but holds no member")));
        }
        Err(MatchError::Invariant("get_free on an empty free-neighbor set".into()))
    }

    /// Recounts every bucket and the total from the membership array.
    pub fn check_counts(&self) -> Result<()> {
        let mut total = 0;
        for (j, chunk) in self.present.chunks(self.block).enumerate() {
            let count = chunk.iter().filter(|&&p| p).count();
            if count != self.bucket_counts[j] as usize {
                return Err(MatchError::Invariant(format!(
                    "bucket {j} counts {} but holds {count}",
                    self.bucket_counts[j]
                )));
            }
            total += count;
        }
        if total != self.total {
            return Err(MatchError::Invariant(format!("total {} but {total} members", self.total)));
        }
        Ok(())
    }

    pub fn members(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.present.iter().enumerate().filter(|(_, &p)| p).map(|(w, _)| w)
    }
}

/// Indexed binary max-heap of `(degree, vertex)`; ties go to the smaller vertex.
#[derive(Debug, Clone)]
pub struct FreeMaxHeap {
    heap: Vec<VertexId>,
    key: Vec<usize>,
    pos: Vec<Option<usize>>,
    op_cost: u64,
}

impl FreeMaxHeap {
    pub fn new(n: usize) -> Self {
        FreeMaxHeap { heap: Vec::new(), key: vec![0; n], pos: vec![None; n], op_cost: log_cost(n) }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.pos[v].is_some()
    }

    pub fn key(&self, v: VertexId) -> Option<usize> {
        self.pos[v].map(|_| self.key[v])
    }

    fn above(&self, a: VertexId, b: VertexId) -> bool {
        (self.key[a], std::cmp::Reverse(a)) > (self.key[b], std::cmp::Reverse(b))
    }

    pub fn insert(&mut self, v: VertexId, key: usize, counter: &mut StepCounter) -> Result<()> {
        counter.charge(self.op_cost);
        if self.pos[v].is_some() {
            return Err(MatchError::Invariant(format!("{v} inserted twice into the free heap")));
        }
        self.key[v] = key;
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.pos[v] = Some(i);
        self.sift_up(i);
        Ok(())
    }

    pub fn delete(&mut self, v: VertexId, counter: &mut StepCounter) -> Result<()> {
        counter.charge(self.op_cost);
        let Some(i) = self.pos[v] else {
            return Err(MatchError::Invariant(format!("{v} deleted from the free heap but absent")));
        };
        let last = self.heap.len() - 1;
        self.swap(i, last);
        self.heap.pop();
        self.pos[v] = None;
        if i < self.heap.len() {
            self.sift_up(i);
            self.sift_down(i);
        }
        Ok(())
    }

    pub fn update_key(&mut self, v: VertexId, key: usize, counter: &mut StepCounter) -> Result<()> {
        counter.charge(self.op_cost);
        let Some(i) = self.pos[v] else {
            return Err(MatchError::Invariant(format!("update_key on {v}, which is not in the free heap")));
        };
        self.key[v] = key;
        self.sift_up(i);
        self.sift_down(i);
        Ok(())
    }

    pub fn find_max(&self, counter: &mut StepCounter) -> Option<VertexId> {
        counter.charge(1);
        self.heap.first().copied()
    }

    pub fn members(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.heap.iter().copied()
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.heap.swap(i, j);
        self.pos[self.heap[i]] = Some(i);
        self.pos[self.heap[j]] = Some(j);
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if !self.above(self.heap[i], self.heap[parent]) {
                break;
            }
            self.swap(i, parent);
            i = parent;
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        loop {
            let mut best = i;
            for child in [2 * i + 1, 2 * i + 2] {
                if child < self.heap.len() && self.above(self.heap[child], self.heap[best]) {
                    best = child;
                }
            }
            if best == i {
                break;
            }
            self.swap(i, best);
            i = best;
        }
    }
}
