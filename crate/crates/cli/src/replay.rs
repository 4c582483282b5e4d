//! Feed a stream through an engine, checking the matching along the way.

use std::fmt::Write as _;

use dynmatch::oracle::{check_maximal, degeneracy, find_3_aug_path};
use dynmatch::{new_engine, Edge, EngineConfig, EngineKind, MatchingEngine, UpdateKind};

use crate::error::CliError;
use crate::stream::UpdateStream;

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayOptions {
    pub engine: EngineKind,
    pub config: EngineConfig,
    /// Check after every `k`-th update; `None` picks 1 for `n ≤ 64`, else 32.
    /// The final state is always checked.
    pub check_every: Option<usize>,
    /// Derive the arboricity bound from the stream instead of `config`.
    pub auto_arboricity: bool,
}

impl ReplayOptions {
    pub fn new(engine: EngineKind) -> Self {
        ReplayOptions { engine, config: EngineConfig::default(), check_every: None, auto_arboricity: true }
    }
}

pub fn default_check_every(n: usize) -> usize {
    if n <= 64 {
        1
    } else {
        32
    }
}

/// Arboricity bound valid for the whole stream: the degeneracy of the union
/// of every edge ever inserted.
pub fn stream_arboricity(stream: &UpdateStream) -> usize {
    let mut edges: Vec<Edge> =
        stream.updates.iter().filter(|u| u.kind == UpdateKind::Insert).map(|u| u.edge).collect();
    edges.sort_unstable();
    edges.dedup();
    degeneracy(stream.n, &edges).max(1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    /// Number of updates applied when the check ran.
    pub after: usize,
    pub message: String,
}

/// Everything a replay observed except wall time, so two replays of the same
/// stream on the same engine produce identical reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub engine: EngineKind,
    pub n: usize,
    pub updates: usize,
    pub final_m: usize,
    pub final_matching_size: usize,
    pub total_ops: u64,
    pub max_ops: u64,
    pub checks: usize,
    pub failures: Vec<CheckFailure>,
    /// FNV-1a over every matching change, in order.
    pub digest: u64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub const CSV_HEADER: &'static str =
        "engine,n,updates,final_m,final_matching_size,total_ops,max_ops,checks,failures,digest";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{:016x}",
            self.engine,
            self.n,
            self.updates,
            self.final_m,
            self.final_matching_size,
            self.total_ops,
            self.max_ops,
            self.checks,
            self.failures.len(),
            self.digest
        )
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "engine           {}", self.engine).unwrap();
        writeln!(out, "vertices         {}", self.n).unwrap();
        writeln!(out, "updates          {}", self.updates).unwrap();
        writeln!(out, "final edges      {}", self.final_m).unwrap();
        writeln!(out, "final matching   {}", self.final_matching_size).unwrap();
        writeln!(out, "total ops        {}", self.total_ops).unwrap();
        writeln!(out, "max ops/update   {}", self.max_ops).unwrap();
        writeln!(out, "checks           {}", self.checks).unwrap();
        writeln!(out, "digest           {:016x}", self.digest).unwrap();
        if self.failures.is_empty() {
            writeln!(out, "result           ok").unwrap();
        } else {
            writeln!(out, "result           {} failed checks", self.failures.len()).unwrap();
            for f in &self.failures {
                writeln!(out, "  after update {}: {}", f.after, f.message).unwrap();
            }
        }
        out
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn feed(&mut self, x: u64) {
        for byte in x.to_le_bytes() {
            self.0 ^= u64::from(byte);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
}

/// Runs the oracle checks on the engine's current state. Returns the first
/// problem found.
pub fn check_state(engine: &dyn MatchingEngine) -> Result<(), String> {
    let s = engine.snapshot();
    s.validate().map_err(|e| e.to_string())?;
    if let Err(e) = check_maximal(&s) {
        return Err(format!("not maximal: edge {e} has two free endpoints"));
    }
    if engine.kind() == EngineKind::Sqrt {
        if let Some([f1, a, b, f2]) = find_3_aug_path(&s) {
            return Err(format!("augmenting path {f1} - {a} = {b} - {f2}"));
        }
    }
    engine.check_invariants().map_err(|e| e.to_string())
}

pub fn replay(stream: &UpdateStream, options: &ReplayOptions) -> Result<RunReport, CliError> {
    let mut config = options.config.clone();
    if options.auto_arboricity && options.engine == EngineKind::Arboricity {
        config.arboricity = stream_arboricity(stream);
    }
    let engine = new_engine(stream.n, options.engine, &config)?;
    replay_engine(engine, stream, options.check_every)
}

/// Replays on a caller-supplied engine, which may be any implementation of
/// the trait.
pub fn replay_engine(
    mut engine: Box<dyn MatchingEngine>,
    stream: &UpdateStream,
    check_every: Option<usize>,
) -> Result<RunReport, CliError> {
    let every = check_every.unwrap_or_else(|| default_check_every(stream.n)).max(1);
    let mut failures = Vec::new();
    let mut checks = 0;
    let mut digest = Fnv::new();
    let mut total_ops = 0u64;
    let mut max_ops = 0u64;
    for (i, &update) in stream.updates.iter().enumerate() {
        let report = engine.apply(update).map_err(|source| CliError::Engine {
            index: i,
            update: format!("{:?} {}", update.kind, update.edge),
            source,
        })?;
        total_ops += report.ops;
        max_ops = max_ops.max(report.ops);
        for (tag, edges) in [(1u64, &report.added), (2, &report.removed)] {
            for e in edges {
                digest.feed(tag);
                digest.feed(e.lo() as u64);
                digest.feed(e.hi() as u64);
            }
        }
        digest.feed(0);
        let applied = i + 1;
        if applied % every == 0 || applied == stream.updates.len() {
            checks += 1;
            if let Err(message) = check_state(engine.as_ref()) {
                failures.push(CheckFailure { after: applied, message });
            }
        }
    }
    if stream.updates.is_empty() {
        checks += 1;
        if let Err(message) = check_state(engine.as_ref()) {
            failures.push(CheckFailure { after: 0, message });
        }
    }
    Ok(RunReport {
        engine: engine.kind(),
        n: stream.n,
        updates: stream.updates.len(),
        final_m: engine.m(),
        final_matching_size: engine.matching_size(),
        total_ops,
        max_ops,
        checks,
        failures,
        digest: digest.0,
    })
}

/// Replays on the naive engine checking after every update.
pub fn verify(stream: &UpdateStream) -> Result<RunReport, CliError> {
    let options = ReplayOptions { check_every: Some(1), ..ReplayOptions::new(EngineKind::Naive) };
    replay(stream, &options)
}
