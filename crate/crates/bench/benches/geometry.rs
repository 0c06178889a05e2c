use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use graphmono::constructions::fivefold::approximant;
use graphmono::exact::rational::ratio;
use graphmono::geometry::{box_dimension, porosity_estimate, sample_graph, square_avoidance, PorosityConfig, Rect53};

fn porosity(c: &mut Criterion) {
    let f = approximant(4).unwrap().function;
    let mut g = c.benchmark_group("porosity");
    g.sample_size(10);
    for spacing in [1e-3, 1e-4] {
        let samples = sample_graph(&f, spacing);
        let centers: Vec<(f64, f64)> = samples.iter().step_by(200).copied().collect();
        let radii = [0.125, 0.0625, 0.03125];
        g.bench_with_input(BenchmarkId::from_parameter(samples.len()), &samples, |b, s| {
            b.iter(|| porosity_estimate(s, &centers, &radii, &PorosityConfig::default()).unwrap())
        });
    }
    g.finish();
}

fn boxdim(c: &mut Criterion) {
    let f = approximant(6).unwrap().function;
    let samples = sample_graph(&f, 1.0 / 16384.0);
    c.bench_function("box_dimension/f6", |b| {
        b.iter(|| box_dimension(black_box(&samples), 1.0 / 4096.0, 0.125).unwrap())
    });
}

fn avoidance(c: &mut Criterion) {
    let f = approximant(5).unwrap().function;
    let rects: Vec<Rect53> = (0..20)
        .flat_map(|i| (0..5).map(move |j| Rect53::new(ratio(i, 25), ratio(j, 10), ratio(1, 25)).unwrap()))
        .collect();
    c.bench_function("square_avoidance/f5x100", |b| {
        b.iter(|| rects.iter().filter(|r| square_avoidance(&f, r).is_some()).count())
    });
}

criterion_group!(benches, porosity, boxdim, avoidance);
criterion_main!(benches);
