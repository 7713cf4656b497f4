//! Benchmarks for the three hot paths: reading a zeta-function off a
//! normal-crossing model, exact arithmetic on factored products, and the
//! scenario parser.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use merozeta::{parse_scenario, ScenarioBody};
use merozeta_bench::{deep_product, large_model, large_scenario_text};

fn model_benches(c: &mut Criterion) {
    let mut group = c.benchmark_group("model");
    for size in [100u64, 1000, 5000] {
        let model = large_model(size, 42);
        group.bench_function(format!("zeta_zero/{size}"), |b| {
            b.iter(|| black_box(&model).zeta_zero())
        });
    }
    let model = large_model(1000, 42);
    group.bench_function("swap_pq/1000", |b| b.iter(|| black_box(&model).swap_pq()));
    group.finish();
}

fn product_benches(c: &mut Criterion) {
    let mut group = c.benchmark_group("product");
    let a = deep_product(200, 1);
    let b_side = deep_product(200, 2);
    group.bench_function("mul/200x200", |b| {
        b.iter(|| black_box(&a).mul(black_box(&b_side)))
    });
    group.bench_function("pow/200^9", |b| b.iter(|| black_box(&a).pow(9)));
    group.bench_function("degree/200", |b| b.iter(|| black_box(&a).degree()));
    // Expansion multiplies real polynomials, so keep the input small
    // enough that a run finishes in sensible time.
    let small = deep_product(12, 3);
    group.bench_function("expand/12", |b| b.iter(|| black_box(&small).expand()));
    group.finish();
}

fn parser_benches(c: &mut Criterion) {
    let mut group = c.benchmark_group("parser");
    for (values, strata) in [(10u32, 10u32), (50, 20)] {
        let text = large_scenario_text(values, strata);
        group.throughput(criterion::Throughput::Bytes(text.len() as u64));
        group.bench_function(format!("scenario/{values}x{strata}"), |b| {
            b.iter(|| parse_scenario(black_box(&text)).expect("benchmark input parses"))
        });
    }
    let text = large_scenario_text(50, 20);
    let file = parse_scenario(&text).expect("benchmark input parses");
    let ScenarioBody::Meromorphic(scn) = file.body else {
        panic!("benchmark scenario is meromorphic");
    };
    group.bench_function("report/50x20", |b| {
        b.iter_batched(
            || scn.clone(),
            |s| s.build_report().expect("consistent input"),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, model_benches, product_benches, parser_benches);
criterion_main!(benches);
