//! Slow, obviously correct checks used to validate the engines.

use std::collections::HashMap;

use crate::engine::Snapshot;
use crate::error::{MatchError, Result};
use crate::graph::{Edge, VertexId};

/// Largest connected component `exact_mcm` will solve.
pub const MAX_COMPONENT: usize = 24;

/// Every edge has a matched endpoint. On failure returns an edge with two
/// free endpoints.
pub fn check_maximal(s: &Snapshot) -> std::result::Result<(), Edge> {
    match s.edges.iter().find(|e| !s.is_matched(e.lo()) && !s.is_matched(e.hi())) {
        Some(&e) => Err(e),
        None => Ok(()),
    }
}

/// A path `f1 - a = b - f2` with `{a, b}` matched and `f1 ≠ f2` free, if one
/// exists.
pub fn find_3_aug_path(s: &Snapshot) -> Option<[VertexId; 4]> {
    let adj = adjacency(s.n, &s.edges);
    for &e in &s.matching {
        for (a, b) in [(e.lo(), e.hi()), (e.hi(), e.lo())] {
            let free_of = |x: VertexId| adj[x].iter().copied().filter(|&f| !s.is_matched(f));
            for f1 in free_of(a) {
                if let Some(f2) = free_of(b).find(|&f2| f2 != f1) {
                    return Some([f1, a, b, f2]);
                }
            }
        }
    }
    None
}

fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<VertexId>> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.lo()].push(e.hi());
        adj[e.hi()].push(e.lo());
    }
    adj
}

fn components(adj: &[Vec<VertexId>]) -> Vec<Vec<VertexId>> {
    let mut seen = vec![false; adj.len()];
    let mut comps = Vec::new();
    for s in 0..adj.len() {
        if seen[s] || adj[s].is_empty() {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            for &w in &adj[comp[i]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comps.push(comp);
    }
    comps
}

/// Size of a maximum matching. Solved per component by a memoized search
/// over vertex subsets: the lowest remaining vertex is either left unmatched
/// or matched to one of its remaining neighbors.
pub fn exact_mcm(n: usize, edges: &[Edge]) -> Result<usize> {
    let adj = adjacency(n, edges);
    let mut total = 0;
    for comp in components(&adj) {
        if comp.len() > MAX_COMPONENT {
            return Err(MatchError::InstanceTooLarge(format!(
                "component with {} vertices exceeds {MAX_COMPONENT}",
                comp.len()
            )));
        }
        let mut local = HashMap::with_capacity(comp.len());
        for (i, &v) in comp.iter().enumerate() {
            local.insert(v, i);
        }
        let nbr_masks: Vec<u32> =
            comp.iter().map(|&v| adj[v].iter().fold(0u32, |m, w| m | 1 << local[w])).collect();
        let mut memo = HashMap::new();
        total += solve((1u32 << comp.len()) - 1, &nbr_masks, &mut memo);
    }
    Ok(total)
}

fn solve(mask: u32, nbr: &[u32], memo: &mut HashMap<u32, usize>) -> usize {
    if mask.count_ones() < 2 {
        return 0;
    }
    if let Some(&r) = memo.get(&mask) {
        return r;
    }
    let v = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << v);
    let mut best = solve(rest, nbr, memo);
    let mut cand = nbr[v] & rest;
    while cand != 0 {
        let w = cand.trailing_zeros();
        cand &= cand - 1;
        best = best.max(1 + solve(rest & !(1 << w), nbr, memo));
    }
    memo.insert(mask, best);
    best
}

/// Size of a maximum matching by listing every matching. Exponential; for
/// tiny graphs only.
pub fn enumerate_mcm(n: usize, edges: &[Edge]) -> usize {
    fn go(i: usize, edges: &[Edge], used: &mut [bool], size: usize, best: &mut usize) {
        if i == edges.len() {
            *best = (*best).max(size);
            return;
        }
        go(i + 1, edges, used, size, best);
        let (u, v) = edges[i].endpoints();
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            go(i + 1, edges, used, size + 1, best);
            used[u] = false;
            used[v] = false;
        }
    }
    let mut best = 0;
    go(0, edges, &mut vec![false; n], 0, &mut best);
    best
}

/// Maximum matching size against the size of the engine's matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub mcm: usize,
    pub matched: usize,
}

impl Ratio {
    /// `mcm / matched`; 1 for two empty matchings, infinite if only the
    /// engine's is empty.
    pub fn value(self) -> f64 {
        match (self.mcm, self.matched) {
            (0, 0) => 1.0,
            (_, 0) => f64::INFINITY,
            (a, b) => a as f64 / b as f64,
        }
    }

    /// `matched ≥ ⌈2·mcm / 3⌉`.
    pub fn within_three_halves(self) -> bool {
        self.matched >= (2 * self.mcm).div_ceil(3)
    }
}

pub fn approx_ratio(s: &Snapshot) -> Result<Ratio> {
    Ok(Ratio { mcm: exact_mcm(s.n, &s.edges)?, matched: s.matching.len() })
}

/// Degeneracy (largest minimum degree over all subgraphs). The arboricity
/// lies between `degeneracy / 2` and `degeneracy`.
pub fn degeneracy(n: usize, edges: &[Edge]) -> usize {
    let adj = adjacency(n, edges);
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; n];
    let mut best = 0;
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| deg[v]).expect("a vertex remains");
        best = best.max(deg[v]);
        removed[v] = true;
        for &w in &adj[v] {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    best
}

/// The Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10, spokes.
pub fn petersen() -> Vec<Edge> {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push(Edge::new(i, (i + 1) % 5));
        edges.push(Edge::new(5 + i, 5 + (i + 2) % 5));
        edges.push(Edge::new(i, 5 + i));
    }
    edges.sort_unstable();
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::Status;

    fn snap(n: usize, edges: &[(usize, usize)], matching: &[(usize, usize)]) -> Snapshot {
        let mut mate = vec![None; n];
        for &(u, v) in matching {
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
        Snapshot::from_mates(n, edges.iter().map(|&(u, v)| Edge::new(u, v)).collect(), |v| mate[v])
    }

    #[test]
    fn maximality_witness() {
        let s = snap(4, &[(0, 1), (2, 3)], &[(0, 1)]);
        assert_eq!(check_maximal(&s), Err(Edge::new(2, 3)));
        assert_eq!(check_maximal(&snap(4, &[(0, 1), (1, 2)], &[(0, 1)])), Ok(()));
    }

    #[test]
    fn three_augmenting_path() {
        let s = snap(4, &[(0, 1), (1, 2), (2, 3)], &[(1, 2)]);
        assert_eq!(find_3_aug_path(&s), Some([0, 1, 2, 3]));
        // Both ends free but the same vertex: a triangle is not augmenting.
        let t = snap(3, &[(0, 1), (1, 2), (0, 2)], &[(1, 2)]);
        assert_eq!(find_3_aug_path(&t), None);
        assert_eq!(t.status[0], Status::Free);
    }

    #[test]
    fn petersen_has_perfect_matching() {
        let edges = petersen();
        assert_eq!(edges.len(), 15);
        assert_eq!(exact_mcm(10, &edges), Ok(5));
        assert_eq!(enumerate_mcm(10, &edges), 5);
        assert_eq!(degeneracy(10, &edges), 3);
    }

    #[test]
    fn ratio_rounding() {
        assert!(Ratio { mcm: 3, matched: 2 }.within_three_halves());
        assert!(!Ratio { mcm: 4, matched: 2 }.within_three_halves());
        assert_eq!(Ratio { mcm: 0, matched: 0 }.value(), 1.0);
        assert!(Ratio { mcm: 1, matched: 0 }.value().is_infinite());
    }

    #[test]
    fn large_components_are_refused() {
        let edges: Vec<Edge> = (0..30).map(|i| Edge::new(i, i + 1)).collect();
        assert!(matches!(exact_mcm(31, &edges), Err(MatchError::InstanceTooLarge(_))));
        let split: Vec<Edge> = (0..30).step_by(2).map(|i| Edge::new(i, i + 1)).collect();
        assert_eq!(exact_mcm(31, &split), Ok(15));
    }
}
