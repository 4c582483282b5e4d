use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use dynmatch::EngineKind;
use dynmatch_bench::workloads;

fn engines(c: &mut Criterion) {
    for w in workloads() {
        let mut group = c.benchmark_group(&w.name);
        group.sample_size(10);
        group.throughput(Throughput::Elements(w.stream.updates.len() as u64));
        for kind in EngineKind::ALL {
            group.bench_with_input(BenchmarkId::from_parameter(kind), &kind, |b, &kind| {
                b.iter(|| black_box(w.run(kind)))
            });
        }
        group.finish();
    }
}

criterion_group!(benches, engines);
criterion_main!(benches);
