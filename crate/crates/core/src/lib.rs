//! Fully dynamic maximal matching.
//!
//! Four engines maintain a maximal matching of a graph on a fixed vertex set
//! under edge insertions and deletions:
//!
//! * [`NaiveEngine`] rescans neighborhoods, O(n) per update;
//! * [`SqrtEngine`] runs in worst-case O(√(n+m)) per update and keeps the
//!   matching free of length-3 augmenting paths (so it is a 3/2-approximate
//!   maximum matching);
//! * [`ArboricityEngine`] is fast in the amortized sense when the graph keeps
//!   a small arboricity, using a bounded out-degree orientation;
//! * [`CompactEngine`] does the same in O(n+m) space without being told the
//!   arboricity.
//!
//! Every engine counts its primitive operations so running times can be
//! measured independently of the machine.

pub mod arboricity;
pub mod compact;
pub mod engine;
pub mod error;
pub mod free;
pub mod graph;
pub mod lazy;
pub mod matching;
pub mod naive;
pub mod oracle;
pub mod orientation;
pub mod sqrt;

pub use arboricity::ArboricityEngine;
pub use compact::{CompactConfig, CompactEngine};
pub use engine::{new_engine, EngineConfig, EngineKind, MatchingEngine, Snapshot, UpdateReport};
pub use error::{MatchError, Result};
pub use graph::{DynamicGraph, Edge, StepCounter, StepRecord, Update, UpdateKind, VertexId};
pub use matching::Status;
pub use naive::NaiveEngine;
pub use orientation::{DeltaProfile, Orientation, OrientationParams};
pub use sqrt::SqrtEngine;
