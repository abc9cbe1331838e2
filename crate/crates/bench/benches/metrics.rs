use std::hint::black_box;

use anticipate_core::metrics::{build_roc, evaluate, truncated_auc};
use anticipate_core::synthetic::{
    generate_dataset, predict_dataset, PredictorKind, PredictorSpec, ScenarioConfig,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn roc(c: &mut Criterion) {
    let mut group = c.benchmark_group("roc");
    for n in [100usize, 1_000, 10_000] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let pos: Vec<f64> = (0..n).map(|_| rng.random::<f64>().sqrt()).collect();
        let neg: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        group.bench_with_input(BenchmarkId::new("build_and_truncate", n), &n, |b, _| {
            b.iter(|| {
                let curve = build_roc(black_box(&pos), black_box(&neg)).unwrap();
                truncated_auc(&curve, 0.1).unwrap()
            })
        });
    }
    group.finish();
}

fn evaluate_synthetic(c: &mut Criterion) {
    let cfg = ScenarioConfig {
        n_accident_videos: 100,
        n_safe_videos: 100,
        seed: 7,
        ..ScenarioConfig::default()
    };
    let manifest = generate_dataset(&cfg).unwrap();
    let spec = PredictorSpec::new(
        PredictorKind::NoisyDecay {
            lead_seconds: 2.0,
            noise_sigma: 0.2,
        },
        7,
    )
    .unwrap();
    let scores = predict_dataset(&spec, &manifest).unwrap();
    c.bench_function("evaluate/200_videos", |b| {
        b.iter(|| evaluate(black_box(&manifest), black_box(&scores), 0.1, 7).unwrap())
    });
}

criterion_group!(benches, roc, evaluate_synthetic);
criterion_main!(benches);
