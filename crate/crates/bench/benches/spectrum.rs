use aklt_bench::{homogeneous, staircase};
use aklt_core::density::{reduced_density_matrix, spectrum_by_peeling};
use aklt_core::fock::build_vbs;
use aklt_core::spectrum::closed_form_spectrum;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn closed_form(c: &mut Criterion) {
    let mut group = c.benchmark_group("closed_form_spectrum");
    let chain = homogeneous(1, 12);
    for len in [2, 6, 12] {
        let block = chain.block(1, len).unwrap();
        group.bench_with_input(BenchmarkId::new("spin-1", len), &block, |b, block| {
            b.iter(|| closed_form_spectrum(black_box(block)).unwrap())
        });
    }
    let chain = homogeneous(3, 8);
    let block = chain.block(1, 8).unwrap();
    group.bench_function("spin-3 L=8", |b| b.iter(|| closed_form_spectrum(black_box(&block)).unwrap()));
    group.finish();
}

fn brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force_spectrum");
    group.sample_size(10);
    for (label, chain, start, len) in
        [("spin-1 N=6", homogeneous(1, 6), 1, 3), ("spin-1 N=8", homogeneous(1, 8), 2, 4), ("staircase", staircase(), 1, 4)]
    {
        let block = chain.block(start, len).unwrap();
        group.bench_function(label, |b| {
            b.iter(|| {
                let rho = reduced_density_matrix(black_box(&chain), &block);
                spectrum_by_peeling(&rho, &block).unwrap()
            })
        });
    }
    group.finish();
}

fn vbs(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_vbs");
    group.sample_size(10);
    for bulk in [4, 8] {
        let chain = homogeneous(1, bulk);
        group.bench_with_input(BenchmarkId::new("spin-1", bulk), &chain, |b, chain| b.iter(|| build_vbs(black_box(chain))));
    }
    group.finish();
}

criterion_group!(benches, closed_form, brute_force, vbs);
criterion_main!(benches);
