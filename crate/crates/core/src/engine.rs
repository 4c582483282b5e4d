//! The interface shared by all matching engines.

use std::fmt;
use std::str::FromStr;

use crate::arboricity::ArboricityEngine;
use crate::compact::{CompactConfig, CompactEngine};
use crate::error::{MatchError, Result};
use crate::graph::{Edge, StepCounter, Update, VertexId};
use crate::matching::Status;
use crate::naive::NaiveEngine;
use crate::orientation::DeltaProfile;
use crate::sqrt::SqrtEngine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EngineKind {
    /// Greedy rematching by full neighbor scans; O(n) worst case.
    Naive,
    /// Worst-case O(√(n+m)) per update, no length-3 augmenting paths.
    Sqrt,
    /// Amortized, built on a bounded out-degree orientation.
    Arboricity,
    /// The orientation engine in O(n+m) space with staged arboricity bounds.
    Compact,
}

impl EngineKind {
    pub const ALL: [EngineKind; 4] =
        [EngineKind::Naive, EngineKind::Sqrt, EngineKind::Arboricity, EngineKind::Compact];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Naive => "naive",
            EngineKind::Sqrt => "sqrt",
            EngineKind::Arboricity => "arb",
            EngineKind::Compact => "compact",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "naive" => Ok(EngineKind::Naive),
            "sqrt" => Ok(EngineKind::Sqrt),
            "arb" | "arboricity" => Ok(EngineKind::Arboricity),
            "compact" => Ok(EngineKind::Compact),
            other => Err(format!("unknown engine `{other}` (expected naive, sqrt, arb or compact)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    /// Arboricity bound `c` the caller promises for the arboricity engine.
    pub arboricity: usize,
    pub profile: DeltaProfile,
    pub compact: CompactConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { arboricity: 1, profile: DeltaProfile::FiveC, compact: CompactConfig::default() }
    }
}

/// What one update did to the matching.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UpdateReport {
    pub added: Vec<Edge>,
    pub removed: Vec<Edge>,
    pub ops: u64,
}

/// Read-only copy of an engine's graph and matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub n: usize,
    /// Sorted.
    pub edges: Vec<Edge>,
    /// Sorted.
    pub matching: Vec<Edge>,
    pub status: Vec<Status>,
}

impl Snapshot {
    pub fn from_mates(n: usize, mut edges: Vec<Edge>, mate: impl Fn(VertexId) -> Option<VertexId>) -> Self {
        edges.sort_unstable();
        let mut matching = Vec::new();
        let mut status = vec![Status::Free; n];
        for (v, s) in status.iter_mut().enumerate() {
            if let Some(w) = mate(v) {
                *s = Status::Matched;
                if v < w {
                    matching.push(Edge::new(v, w));
                }
            }
        }
        Snapshot { n, edges, matching, status }
    }

    pub fn is_matched(&self, v: VertexId) -> bool {
        self.status[v] == Status::Matched
    }

    /// Matching is a vertex-disjoint subset of the edges and statuses agree.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(MatchError::MalformedSnapshot(msg));
        if self.status.len() != self.n {
            return bad(format!("{} statuses for {} vertices", self.status.len(), self.n));
        }
        if self.edges.windows(2).any(|w| w[0] >= w[1]) {
            return bad("edge list is not sorted and duplicate-free".into());
        }
        if let Some(e) = self.edges.iter().find(|e| e.hi() >= self.n || e.lo() == e.hi()) {
            return bad(format!("edge {e} is not a proper edge on {} vertices", self.n));
        }
        let mut covered = vec![false; self.n];
        for &e in &self.matching {
            if self.edges.binary_search(&e).is_err() {
                return bad(format!("matched edge {e} is not in the graph"));
            }
            for v in [e.lo(), e.hi()] {
                if covered[v] {
                    return bad(format!("vertex {v} is covered twice"));
                }
                covered[v] = true;
            }
        }
        for v in 0..self.n {
            if covered[v] != self.is_matched(v) {
                return bad(format!("status of {v} disagrees with the matching"));
            }
        }
        Ok(())
    }
}

pub trait MatchingEngine: Send {
    fn kind(&self) -> EngineKind;

    fn n(&self) -> usize;

    fn m(&self) -> usize;

    fn matching_size(&self) -> usize;

    fn mate(&self, v: VertexId) -> Option<VertexId>;

    /// Applies one edge update. Illegal updates are rejected before any
    /// state is touched.
    fn apply(&mut self, update: Update) -> Result<UpdateReport>;

    fn snapshot(&self) -> Snapshot;

    /// Full structural self-check, O(n²) at worst. Meant for tests and
    /// periodic replay checks.
    fn check_invariants(&self) -> Result<()>;

    fn counter(&self) -> &StepCounter;

    fn clone_box(&self) -> Box<dyn MatchingEngine>;
}

impl Clone for Box<dyn MatchingEngine> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

pub fn new_engine(n: usize, kind: EngineKind, config: &EngineConfig) -> Result<Box<dyn MatchingEngine>> {
    Ok(match kind {
        EngineKind::Naive => Box::new(NaiveEngine::new(n)?),
        EngineKind::Sqrt => Box::new(SqrtEngine::new(n)?),
        EngineKind::Arboricity => Box::new(ArboricityEngine::new(n, config.arboricity, config.profile)?),
        EngineKind::Compact => Box::new(CompactEngine::with_config(n, config.compact.clone())?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vertices_rejected() {
        for kind in EngineKind::ALL {
            assert_eq!(new_engine(0, kind, &EngineConfig::default()).err(), Some(MatchError::NoVertices));
        }
    }

    #[test]
    fn fresh_engines_are_empty() {
        for kind in EngineKind::ALL {
            let e = new_engine(8, kind, &EngineConfig::default()).unwrap();
            let s = e.snapshot();
            assert_eq!(e.kind(), kind);
            assert!(s.edges.is_empty() && s.matching.is_empty());
            assert!(s.status.iter().all(|&st| st == Status::Free));
            assert_eq!(e.m(), 0);
        }
    }

    #[test]
    fn single_vertex_engine() {
        let e = new_engine(1, EngineKind::Naive, &EngineConfig::default()).unwrap();
        assert_eq!((e.n(), e.m(), e.matching_size()), (1, 0, 0));
    }

    #[test]
    fn names_round_trip() {
        for kind in EngineKind::ALL {
            assert_eq!(kind.name().parse::<EngineKind>(), Ok(kind));
        }
        assert!("blossom".parse::<EngineKind>().is_err());
    }

    #[test]
    fn malformed_snapshots() {
        let good = Snapshot {
            n: 3,
            edges: vec![Edge::new(0, 1), Edge::new(1, 2)],
            matching: vec![Edge::new(0, 1)],
            status: vec![Status::Matched, Status::Matched, Status::Free],
        };
        good.validate().unwrap();
        let mut s = good.clone();
        s.matching.push(Edge::new(1, 2));
        assert!(s.validate().is_err());
        let mut s = good.clone();
        s.matching = vec![Edge::new(0, 2)];
        assert!(s.validate().is_err());
        let mut s = good;
        s.status[2] = Status::Matched;
        assert!(s.validate().is_err());
    }
}
