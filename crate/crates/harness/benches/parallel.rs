//! Single-thread pool versus the default pool on the data-parallel loops:
//! tuple enumeration, exhaustive Tverberg search and Monte Carlo volume.
//! Build with `--no-default-features` to benchmark the sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;

use quantsel::ellipsoid::john_ellipsoid;
use quantsel::geom::{ConvexBody, Point};
use quantsel::num::{int, rat};
use quantsel::selection::{hit_tuples, Witness};
use quantsel::tverberg::{tverberg_points_with, Strategy};
use quantsel_harness::mc::mc_volume;

fn squares(n: i64) -> Vec<ConvexBody> {
    (0..n)
        .map(|i| {
            let (x, y) = (rat((i * 7) % 10, 10), rat((i * 3) % 10, 10));
            ConvexBody::cuboid(&[x.clone(), y.clone()], &[x + int(1), y + int(1)])
        })
        .collect()
}

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("1-thread", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("default", ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn bench(c: &mut Criterion) {
    let family = squares(14);
    let witness = Witness::Ellipsoid(john_ellipsoid(&family[0]).unwrap());
    let points: Vec<Point> = (0..9).map(|i| Point(vec![int((i * 5) % 9), int((i * i) % 7)])).collect();
    let disks = squares(3);

    let mut group = c.benchmark_group("parallel");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("tuple_enumeration", name), &pool, |b, pool| {
            b.iter(|| pool.install(|| hit_tuples(&family, &witness, 4).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("exhaustive_tverberg", name), &pool, |b, pool| {
            b.iter(|| pool.install(|| tverberg_points_with(&points, 3, Strategy::Exhaustive).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("mc_volume", name), &pool, |b, pool| {
            b.iter(|| pool.install(|| mc_volume(&disks, 400_000, 5)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
