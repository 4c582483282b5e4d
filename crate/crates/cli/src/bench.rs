//! Timing and op-count comparison of engines on one stream. No checks run
//! here; use replay for that.

use std::fmt::Write as _;
use std::time::Instant;

use dynmatch::{new_engine, EngineKind};

use crate::error::CliError;
use crate::replay::{stream_arboricity, ReplayOptions};
use crate::stream::UpdateStream;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub engine: EngineKind,
    pub n: usize,
    pub updates: usize,
    pub max_ops_per_update: u64,
    pub amortized_ops: f64,
    pub wall_ms: f64,
    pub final_matching_size: usize,
}

pub const CSV_HEADER: &str = "engine,n,updates,max_ops_per_update,amortized_ops,wall_ms,final_matching_size";

impl BenchRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.3},{:.3},{}",
            self.engine,
            self.n,
            self.updates,
            self.max_ops_per_update,
            self.amortized_ops,
            self.wall_ms,
            self.final_matching_size
        )
    }
}

/// Runs each engine in turn over the whole stream.
pub fn bench(stream: &UpdateStream, engines: &[EngineKind], options: &ReplayOptions) -> Result<Vec<BenchRow>, CliError> {
    let mut config = options.config.clone();
    if options.auto_arboricity && engines.contains(&EngineKind::Arboricity) {
        config.arboricity = stream_arboricity(stream);
    }
    let mut rows = Vec::new();
    for &kind in engines {
        let mut engine = new_engine(stream.n, kind, &config)?;
        let start = Instant::now();
        let mut max = 0;
        let mut total = 0u64;
        for (i, &u) in stream.updates.iter().enumerate() {
            let report = engine.apply(u).map_err(|source| CliError::Engine {
                index: i,
                update: format!("{:?} {}", u.kind, u.edge),
                source,
            })?;
            max = max.max(report.ops);
            total += report.ops;
        }
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        rows.push(BenchRow {
            engine: kind,
            n: stream.n,
            updates: stream.updates.len(),
            max_ops_per_update: max,
            amortized_ops: total as f64 / stream.updates.len().max(1) as f64,
            wall_ms,
            final_matching_size: engine.matching_size(),
        });
    }
    Ok(rows)
}

pub fn render_csv(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in rows {
        writeln!(out, "{}", r.csv_row()).unwrap();
    }
    out
}

pub fn render_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{:<8} {:>7} {:>8} {:>10} {:>12} {:>10} {:>9}", "engine", "n", "updates", "max ops", "amortized", "wall ms", "matching")
        .unwrap();
    for r in rows {
        writeln!(
            out,
            "{:<8} {:>7} {:>8} {:>10} {:>12.2} {:>10.2} {:>9}",
            r.engine.name(),
            r.n,
            r.updates,
            r.max_ops_per_update,
            r.amortized_ops,
            r.wall_ms,
            r.final_matching_size
        )
        .unwrap();
    }
    out
}
