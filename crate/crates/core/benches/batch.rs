//! Parallel vs sequential throughput on the data-parallel inner loops:
//! per-index distance brackets and full diagnostic traces.
//!
//! Run with `cargo bench -p sigmeas` (the `parallel` feature is required and
//! on by default).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sigmeas::diagnostics::{compute_trace, ReportConfig, SequenceSpec};
use sigmeas::generators::FamilyId;
use sigmeas::metric::almost_basic_distance;
use sigmeas::parallelism::{map_collect, map_collect_seq};
use sigmeas::scalar::Scalar;
use sigmeas::stepfn::StepFunction;
use sigmeas::SignedMeasure;

fn distance_workload() -> Vec<(StepFunction, StepFunction)> {
    let zero = StepFunction::zero();
    (1..=96u32)
        .map(|n| {
            let mu = FamilyId::Typewriter.measure_term(n).expect("n >= 1");
            (mu.cdf(), zero.clone())
        })
        .collect()
}

fn bench_distance_brackets(c: &mut Criterion) {
    let pairs = distance_workload();
    let tol = Scalar::ratio(1, 10_000);
    let mut group = c.benchmark_group("typewriter_distance_trace");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("seq", pairs.len()), |b| {
        b.iter(|| {
            map_collect_seq(&pairs, |(f, g)| {
                almost_basic_distance(f, g, &tol).expect("valid tol")
            })
        })
    });
    group.bench_function(BenchmarkId::new("par", pairs.len()), |b| {
        b.iter(|| {
            map_collect(&pairs, |(f, g)| {
                almost_basic_distance(f, g, &tol).expect("valid tol")
            })
        })
    });
    group.finish();
}

fn bench_svc_bracket_row(c: &mut Criterion) {
    let stages: Vec<StepFunction> = (0..=8u32).map(sigmeas::generators::svc_stage).collect();
    let reference = sigmeas::generators::svc_stage(9);
    let pairs: Vec<(StepFunction, StepFunction)> = stages
        .into_iter()
        .map(|s| (s, reference.clone()))
        .collect();
    let tol = Scalar::ratio(1, 10_000);
    let mut group = c.benchmark_group("svc_bracket_row");
    group.sample_size(10);
    group.bench_function("seq", |b| {
        b.iter(|| {
            map_collect_seq(&pairs, |(f, g)| {
                almost_basic_distance(f, g, &tol).expect("valid tol")
            })
        })
    });
    group.bench_function("par", |b| {
        b.iter(|| {
            map_collect(&pairs, |(f, g)| {
                almost_basic_distance(f, g, &tol).expect("valid tol")
            })
        })
    });
    group.finish();
}

fn bench_full_trace(c: &mut Criterion) {
    let (from, to) = (1, 64);
    let spec = SequenceSpec::family(FamilyId::Typewriter, from, to, SignedMeasure::zero())
        .expect("valid range");
    let config = ReportConfig::for_family(FamilyId::Typewriter, from, to);
    let mut group = c.benchmark_group("typewriter_full_trace");
    group.sample_size(10);
    group.bench_function("default_features", |b| {
        b.iter(|| compute_trace(&spec, &config).expect("valid config"))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_distance_brackets,
    bench_svc_bracket_row,
    bench_full_trace
);
criterion_main!(benches);
