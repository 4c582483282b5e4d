//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Every threshold is pinned below.

use std::collections::{HashSet, VecDeque};
use std::time::{Duration, Instant};

use dynmatch::compact::SPACE_CONSTANT;
use dynmatch::graph::log_cost;
use dynmatch::oracle::{check_maximal, enumerate_mcm, exact_mcm, find_3_aug_path, petersen};
use dynmatch::{
    ArboricityEngine, CompactEngine, DeltaProfile, Edge, EngineKind, MatchingEngine, Orientation,
    OrientationParams, SqrtEngine, StepCounter, Update, UpdateKind,
};
use dynmatch_cli::generate::random_target;
use dynmatch_cli::replay::{replay, ReplayOptions};
use dynmatch_cli::{generate, StreamKind, UpdateStream};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Maximality sweep must finish within this wall-clock budget.
const AC1_BUDGET: Duration = Duration::from_secs(120);
/// Accepted range for the fitted cost exponent of the square-root engine.
const AC4_EXPONENT: (f64, f64) = (0.4, 0.6);
/// Frozen constant for amortized flips per insertion, in units of log2 n.
const AC5_FLIP_CONSTANT: f64 = 1.0;
/// Largest allowed ratio of arb amortized cost at n = 4096 versus n = 256.
const AC6_MAX_RATIO: f64 = 2.0;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail }
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("AC1 maximality, all engines", ac1_maximality),
        ("AC2 3/2-approximation, sqrt", ac2_three_halves),
        ("AC3 free-vertex degree bound, sqrt", ac3_free_degree),
        ("AC4 worst-case cost scaling, sqrt", ac4_scaling),
        ("AC5 orientation cap and flips", ac5_orientation),
        ("AC6 arb amortized cost", ac6_arb_cost),
        ("AC7 compact space", ac7_compact_space),
        ("AC8 oracle self-check", ac8_oracle),
        ("AC9 replay determinism", ac9_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {} ({:.1}s)", outcome.detail, start.elapsed().as_secs_f64());
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ac1_maximality() -> Outcome {
    let start = Instant::now();
    let mut streams = Vec::new();
    for kind in StreamKind::ALL {
        for n in [16, 64, 256] {
            streams.push(generate(kind, n, 10 * n, 1));
        }
        for n in [16, 64] {
            streams.push(generate(kind, n, 10 * n, 2));
        }
    }
    let mut failures = 0;
    let mut checks = 0;
    for stream in &streams {
        for kind in EngineKind::ALL {
            let options = ReplayOptions { check_every: Some(1), ..ReplayOptions::new(kind) };
            match replay(stream, &options) {
                Ok(report) => {
                    checks += report.checks;
                    failures += report.failures.len();
                }
                Err(err) => {
                    eprintln!("AC1 {kind} n={}: {err}", stream.n);
                    failures += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        failures == 0 && elapsed < AC1_BUDGET && streams.len() == 20,
        format!(
            "{} streams x 4 engines, {checks} checks, {failures} failures, {:.1}s of {}s budget",
            streams.len(),
            elapsed.as_secs_f64(),
            AC1_BUDGET.as_secs()
        ),
    )
}

/// Oracle checks for the square-root engine's current matching.
fn three_halves_ok(engine: &dyn MatchingEngine) -> bool {
    let s = engine.snapshot();
    let mcm = exact_mcm(s.n, &s.edges).expect("small instance");
    check_maximal(&s).is_ok() && find_3_aug_path(&s).is_none() && 3 * s.matching.len() >= 2 * mcm
}

fn ac2_three_halves() -> Outcome {
    // All update sequences of length ≤ 7 on 5 vertices. Engine behavior is a
    // function of (edge set, mates), so sequences reaching the same pair
    // are explored once.
    let n = 5;
    let all_edges: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| Edge::new(u, v))).collect();
    let key = |e: &SqrtEngine| {
        let mask: u16 = all_edges.iter().enumerate().filter(|(_, &x)| e.graph().contains(x)).map(|(i, _)| 1 << i).sum();
        let mates: Vec<Option<usize>> = (0..n).map(|v| e.mate(v)).collect();
        (mask, mates)
    };
    let root = SqrtEngine::new(n).unwrap();
    let mut seen = HashSet::from([key(&root)]);
    let mut frontier = VecDeque::from([(root, 0usize)]);
    let mut transitions = 0u64;
    let mut failures = 0;
    while let Some((engine, depth)) = frontier.pop_front() {
        if depth == 7 {
            continue;
        }
        for &e in &all_edges {
            let update =
                if engine.graph().contains(e) { Update::delete(e.lo(), e.hi()) } else { Update::insert(e.lo(), e.hi()) };
            let mut next = engine.clone();
            transitions += 1;
            if next.apply(update).is_err() || !three_halves_ok(&next) {
                failures += 1;
                continue;
            }
            if seen.insert(key(&next)) {
                frontier.push_back((next, depth + 1));
            }
        }
    }
    let exhaustive_states = seen.len();

    let mut random_updates = 0;
    for seed in 1..=200 {
        let stream = generate(StreamKind::Random, 8, 30, seed);
        let mut engine = SqrtEngine::new(8).unwrap();
        for &u in &stream.updates {
            random_updates += 1;
            if engine.apply(u).is_err() || !three_halves_ok(&engine) {
                failures += 1;
            }
        }
    }
    Outcome::new(
        failures == 0,
        format!(
            "{exhaustive_states} distinct states, {transitions} transitions at depth <= 7 on n=5; \
             200 random sequences ({random_updates} updates) on n=8; {failures} failures"
        ),
    )
}

fn ac3_free_degree() -> Outcome {
    let n = 64;
    let mut failures = 0;
    let mut details = Vec::new();
    let mut hard_case_everywhere = true;
    for kind in [StreamKind::DeleteHeavy, StreamKind::StarAdversary] {
        let stream = generate(kind, n, 2000, 1);
        let mut engine = SqrtEngine::new(n).unwrap();
        let mut peak = 0;
        let mut hard_rounds = 0;
        for &u in &stream.updates {
            engine.apply(u).unwrap();
            let m = engine.m();
            peak = peak.max(m);
            if peak - m > n {
                hard_rounds += 1;
            }
            let bound = 2 * n + 2 * m;
            failures += (0..n)
                .filter(|&v| engine.mate(v).is_none() && engine.graph().degree(v).pow(2) > bound)
                .count();
        }
        hard_case_everywhere &= hard_rounds > 0;
        details.push(format!(
            "{kind}: {hard_rounds} rounds with m more than n below its peak, {} corrections",
            engine.stats().corrections
        ));
    }
    Outcome::new(
        failures == 0 && hard_case_everywhere,
        format!("{}; {failures} violations", details.join("; ")),
    )
}

/// Least-squares slope of `ln y` against `ln x`.
fn fitted_exponent(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn ac4_scaling() -> Outcome {
    struct Run {
        n: usize,
        max_ops: u64,
        peak_m: usize,
        ops_and_m: Vec<(u64, usize)>,
    }
    let runs: Vec<Run> = [64usize, 256, 1024]
        .into_iter()
        .map(|n| {
            let stream = generate(StreamKind::Random, n, 3 * random_target(n), 1);
            let mut engine = SqrtEngine::new(n).unwrap();
            let ops_and_m: Vec<(u64, usize)> =
                stream.updates.iter().map(|&u| (engine.apply(u).unwrap().ops, engine.m())).collect();
            let max_ops = ops_and_m.iter().map(|p| p.0).max().unwrap_or(0);
            let peak_m = ops_and_m.iter().map(|p| p.1).max().unwrap_or(0);
            Run { n, max_ops, peak_m, ops_and_m }
        })
        .collect();
    let scale = |n: usize, m: usize| ((n + m) as f64).sqrt() + log_cost(n) as f64;
    // Calibrate on the smallest size, then freeze.
    let c = runs[0].ops_and_m.iter().map(|&(ops, m)| ops as f64 / scale(runs[0].n, m)).fold(0.0, f64::max);
    let over: usize = runs
        .iter()
        .map(|r| r.ops_and_m.iter().filter(|&&(ops, m)| ops as f64 > c * scale(r.n, m) + 1e-9).count())
        .sum();
    let points: Vec<(f64, f64)> = runs
        .iter()
        .map(|r| ((r.n + r.peak_m) as f64, (r.max_ops as f64 - c * log_cost(r.n) as f64).max(1.0)))
        .collect();
    let exponent = fitted_exponent(&points);
    let in_range = (AC4_EXPONENT.0..=AC4_EXPONENT.1).contains(&exponent);
    let sizes: Vec<String> =
        runs.iter().map(|r| format!("n={} m<={} max={}", r.n, r.peak_m, r.max_ops)).collect();
    Outcome::new(
        in_range && over == 0,
        format!(
            "{}; C = {c:.3}; {over} updates above C(sqrt(n+m) + log n); fitted exponent {exponent:.3} (required {:.1}..{:.1})",
            sizes.join(", "),
            AC4_EXPONENT.0,
            AC4_EXPONENT.1
        ),
    )
}

fn ac5_orientation() -> Outcome {
    let n = 1024;
    let full = generate(StreamKind::Forest, n, 4 * 10_000, 1);
    let mut updates = Vec::new();
    let mut inserts = 0;
    for &u in &full.updates {
        if inserts == 10_000 {
            break;
        }
        if u.kind == UpdateKind::Insert {
            inserts += 1;
        }
        updates.push(u);
    }
    let params = OrientationParams::new(n, 1, DeltaProfile::FiveC);
    let mut orientation = Orientation::new(n, params);
    let mut counter = StepCounter::default();
    let mut cap_violations = 0;
    for &u in &updates {
        match u.kind {
            UpdateKind::Insert => {
                orientation.insert(u.edge, &mut counter).unwrap();
            }
            UpdateKind::Delete => {
                orientation.remove(u.edge, &mut counter).expect("edge present");
            }
        }
        if orientation.max_out_degree() > params.cap {
            cap_violations += 1;
        }
    }
    let per_insert = orientation.total_flips() as f64 / inserts as f64;
    let bound = AC5_FLIP_CONSTANT * (n as f64).log2();

    // The cap must also hold inside the arb engine on every forest run.
    let mut engine_violations = 0;
    let mut engine_updates = 0;
    for (n, seed) in [(256, 1), (1024, 2)] {
        let stream = generate(StreamKind::Forest, n, 10 * n, seed);
        let mut engine = ArboricityEngine::new(n, 1, DeltaProfile::FiveC).unwrap();
        for &u in &stream.updates {
            engine.apply(u).unwrap();
            engine_updates += 1;
            if engine.orientation().max_out_degree() > engine.orientation().cap() {
                engine_violations += 1;
            }
        }
    }
    Outcome::new(
        cap_violations == 0 && engine_violations == 0 && inserts == 10_000 && per_insert <= bound,
        format!(
            "cap {} on {} updates ({inserts} inserts): {} flips, {per_insert:.3} per insert <= {bound:.1}; \
             cap violations {cap_violations} + {engine_violations} over {engine_updates} engine updates",
            params.cap,
            updates.len(),
            orientation.total_flips()
        ),
    )
}

fn ac6_arb_cost() -> Outcome {
    let mut amortized = Vec::new();
    let mut violations = 0;
    for n in [256usize, 1024, 4096] {
        let stream = generate(StreamKind::Forest, n, 10 * n, 1);
        let mut engine = ArboricityEngine::new(n, 1, DeltaProfile::FiveC).unwrap();
        let mut total = 0u64;
        for &u in &stream.updates {
            total += engine.apply(u).unwrap().ops;
            if engine.orientation().max_out_degree() > engine.orientation().cap() {
                violations += 1;
            }
        }
        amortized.push((n, total as f64 / stream.updates.len() as f64));
    }
    let ratio = amortized[2].1 / amortized[0].1;
    let shown: Vec<String> = amortized.iter().map(|(n, a)| format!("n={n}: {a:.3}")).collect();
    Outcome::new(
        ratio <= AC6_MAX_RATIO && violations == 0,
        format!("amortized ops {}; ratio {ratio:.3} <= {AC6_MAX_RATIO}", shown.join(", ")),
    )
}

/// Dense churn on 100 vertices: up to 2000 edges, down to 50, and back.
fn dense_stream(seed: u64) -> UpdateStream {
    let n = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut below = |k: usize| ((rng.next_u64() as u128 * k as u128) >> 64) as usize;
    let mut present: Vec<Edge> = Vec::new();
    let mut index = HashSet::new();
    let mut updates = Vec::new();
    for phase in 0..4 {
        let growing = phase % 2 == 0;
        loop {
            if (growing && present.len() >= 2000) || (!growing && present.len() <= 50) {
                break;
            }
            let insert = present.is_empty() || below(10) < if growing { 8 } else { 2 };
            if insert {
                let (u, v) = (below(n), below(n));
                let e = Edge::new(u, v);
                if u == v || !index.insert(e) {
                    continue;
                }
                present.push(e);
                updates.push(Update::insert(u, v));
            } else {
                let e = present.swap_remove(below(present.len()));
                index.remove(&e);
                updates.push(Update::delete(e.lo(), e.hi()));
            }
        }
    }
    UpdateStream { n, updates }
}

fn ac7_compact_space() -> Outcome {
    let stream = dense_stream(1);
    let n = stream.n;
    let mut engine = CompactEngine::new(n).unwrap();
    let (mut census_points, mut violations, mut worst, mut peak_m) = (0, 0, 0.0f64, 0);
    for (i, &u) in stream.updates.iter().enumerate() {
        if let Err(err) = engine.apply(u) {
            eprintln!("AC7 update {i}: {err}");
            violations += 1;
            break;
        }
        peak_m = peak_m.max(engine.m());
        if engine.min_balance() < 0 {
            violations += 1;
        }
        if (i + 1) % 32 == 0 {
            census_points += 1;
            let m = engine.m();
            let ratio = engine.space_census() as f64 / (n + m + 1) as f64;
            worst = worst.max(ratio);
            if ratio > SPACE_CONSTANT as f64 {
                violations += 1;
            }
            for v in 0..n {
                let d = engine.degree(v).max(1);
                if engine.neighbor_list_len(v) > 2 * d || engine.free_list_len(v) > 3 * d + 1 {
                    violations += 1;
                }
            }
        }
    }
    Outcome::new(
        violations == 0 && peak_m == 2000,
        format!(
            "{} updates, m up to {peak_m}, {census_points} census points, worst census {worst:.2}(n+m+1) <= {SPACE_CONSTANT}(n+m+1), \
             {} stages, {violations} violations",
            stream.updates.len(),
            engine.stats().stages
        ),
    )
}

fn ac8_oracle() -> Outcome {
    let mut graphs = 0u64;
    let mut mismatches = 0;
    for n in 1..=6usize {
        let pairs: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| Edge::new(u, v))).collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<Edge> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            graphs += 1;
            if exact_mcm(n, &edges).ok() != Some(enumerate_mcm(n, &edges)) {
                mismatches += 1;
            }
        }
    }
    let petersen_mcm = exact_mcm(10, &petersen()).ok();
    Outcome::new(
        mismatches == 0 && petersen_mcm == Some(5),
        format!("{graphs} graphs on n <= 6, {mismatches} mismatches; Petersen MCM = {petersen_mcm:?}"),
    )
}

fn ac9_determinism() -> Outcome {
    let mut fixtures: Vec<UpdateStream> = StreamKind::ALL.iter().map(|&k| generate(k, 64, 640, 7)).collect();
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
    let mut paths: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    for path in &paths {
        fixtures.push(UpdateStream::read(path).unwrap());
    }
    let mut differing = 0;
    let mut compared = 0;
    for stream in &fixtures {
        for kind in EngineKind::ALL {
            let options = ReplayOptions::new(kind);
            let a = replay(stream, &options).unwrap();
            let b = replay(stream, &options).unwrap();
            compared += 1;
            if a.render() != b.render() || a.csv_row() != b.csv_row() {
                differing += 1;
            }
        }
    }
    Outcome::new(
        differing == 0,
        format!("{} fixtures x 4 engines, {compared} report pairs, {differing} differ", fixtures.len()),
    )
}
