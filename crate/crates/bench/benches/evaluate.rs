use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pmoments::evaluate::{evaluate, EvalOptions};
use pmoments::maps::MapId;
use pmoments::maps::{lambda1, phi1, reduction_map};
use pmoments::oracles::separable_sweep;
use pmoments::states::{rho_alpha, upb_tiles, werner};

fn evaluation(c: &mut Criterion) {
    let opts = EvalOptions::default();
    let w = werner(0.5).unwrap();
    let l1 = lambda1();
    c.bench_function("evaluate/werner_lambda1", |b| {
        b.iter(|| evaluate(black_box(&w), &l1, 1, &opts).unwrap())
    });
    let r = rho_alpha(3.5).unwrap();
    let p = phi1();
    c.bench_function("evaluate/rho_alpha_phi1", |b| {
        b.iter(|| evaluate(black_box(&r), &p, 0, &opts).unwrap())
    });
    let t = upb_tiles();
    let red = reduction_map(3);
    c.bench_function("evaluate/tiles_reduction", |b| {
        b.iter(|| evaluate(black_box(&t), &red, 1, &opts).unwrap())
    });
    let maps = [MapId::Transpose(None), MapId::Reduction(3), MapId::Phi1];
    c.bench_function("separable_sweep/3x3_x20", |b| {
        b.iter(|| separable_sweep(20, &[3, 3], &maps, black_box(9)).unwrap())
    });
}

criterion_group!(benches, evaluation);
criterion_main!(benches);
