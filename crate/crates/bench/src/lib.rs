//! Workloads shared by the criterion benches.

use dynmatch::{new_engine, EngineConfig, EngineKind, MatchingEngine};
use dynmatch_cli::replay::stream_arboricity;
use dynmatch_cli::{generate, StreamKind, UpdateStream};

pub struct Workload {
    pub name: String,
    pub stream: UpdateStream,
    /// Arboricity bound for the arb engine, taken from the stream.
    pub arboricity: usize,
}

impl Workload {
    pub fn new(kind: StreamKind, n: usize, len: usize, seed: u64) -> Self {
        let stream = generate(kind, n, len, seed);
        let arboricity = stream_arboricity(&stream);
        Workload { name: format!("{kind}/n={n}"), stream, arboricity }
    }

    pub fn engine(&self, kind: EngineKind) -> Box<dyn MatchingEngine> {
        let config = EngineConfig { arboricity: self.arboricity, ..EngineConfig::default() };
        new_engine(self.stream.n, kind, &config).expect("workload sizes are supported")
    }

    /// Applies the whole stream to a fresh engine and returns the total op
    /// count.
    pub fn run(&self, kind: EngineKind) -> u64 {
        let mut engine = self.engine(kind);
        self.stream.updates.iter().map(|&u| engine.apply(u).expect("generated streams are legal").ops).sum()
    }
}

/// The default bench matrix: every stream kind at two sizes.
pub fn workloads() -> Vec<Workload> {
    let mut out = Vec::new();
    for kind in StreamKind::ALL {
        for n in [128, 512] {
            out.push(Workload::new(kind, n, 10 * n, 1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_engine_runs_every_workload() {
        for w in workloads().iter().filter(|w| w.stream.n == 128) {
            for kind in EngineKind::ALL {
                assert!(w.run(kind) > 0, "{} on {kind}", w.name);
            }
        }
    }
}
