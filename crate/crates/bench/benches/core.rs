use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treegibbs::counting::{catalan, count_full};
use treegibbs::enumerate::{enumerate_trees, par_fold_trees, DyckWalker};
use treegibbs::properties::{Property, PropertyEvaluator};
use treegibbs::series::{build_exact_tables, build_tables, WeightTriple};
use treegibbs::tree::SubtreeScan;
use num_rational::BigRational;

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumeration");
    for n in [10, 12] {
        g.throughput(Throughput::Elements(u64::try_from(catalan(n)).unwrap()));
        g.bench_with_input(BenchmarkId::new("walk", n), &n, |b, &n| {
            b.iter(|| {
                let mut w = DyckWalker::new(n);
                let mut leaves = 0usize;
                while let Some(t) = w.advance() {
                    leaves += t.leaves();
                }
                leaves
            })
        });
        g.bench_with_input(BenchmarkId::new("par_fold_path_length", n), &n, |b, &n| {
            b.iter(|| {
                par_fold_trees(
                    n,
                    || (0u64, PropertyEvaluator::new(), Vec::new()),
                    |(s, ev, buf): &mut (u64, PropertyEvaluator, Vec<f64>), t| {
                        ev.eval_f64(t, &[Property::PathLength], buf);
                        *s += buf[0] as u64;
                    },
                    |a, b| (a.0 + b.0, a.1, a.2),
                )
                .0
            })
        });
    }
    g.finish();
}

fn counting(c: &mut Criterion) {
    c.bench_function("count_full n=200 all cells", |b| {
        b.iter(|| {
            let n = 200;
            let mut nonzero = 0;
            for m in (0..n).step_by(7) {
                for k in (1..n - m).step_by(5) {
                    for r in (1..k).step_by(3) {
                        nonzero += usize::from(count_full(n, m, k, r) != 0u32.into());
                    }
                }
            }
            nonzero
        })
    });
}

fn series(c: &mut Criterion) {
    let w = WeightTriple::new(0.6, 0.4, 0.8).unwrap();
    c.bench_function("series f64 order 2000", |b| b.iter(|| build_tables(black_box(&w), 2000)));
    let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
    c.bench_function("series exact order 100", |b| b.iter(|| build_exact_tables(&r(1, 2), &r(1, 1), &r(7, 10), 100)));
}

fn sampler(c: &mut Criterion) {
    let mut g = c.benchmark_group("sampler");
    for n in [1000, 4000] {
        let s = treegibbs::sampler::Sampler::new(WeightTriple::new(0.6, 0.37, 0.5).unwrap(), n);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut out = Vec::new();
        g.throughput(Throughput::Elements(1));
        g.bench_with_input(BenchmarkId::new("tree", n), &n, |b, &n| {
            b.iter(|| {
                s.sample_into(n, &mut rng, &mut out).unwrap();
                out.len()
            })
        });
        let table = s.bounded_root_table(3, n).unwrap();
        g.bench_with_input(BenchmarkId::new("bounded_root_3", n), &n, |b, &n| {
            b.iter(|| {
                s.sample_bounded_into(&table, n, &mut rng, &mut out).unwrap();
                out.len()
            })
        });
    }
    g.finish();
}

fn scan(c: &mut Criterion) {
    let s = treegibbs::sampler::Sampler::new(WeightTriple::new(1.0, 1.0, 1.0).unwrap(), 2000);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = s.sample(2000, &mut rng).unwrap();
    let props: Vec<Property> = ["pl", "wi", "lr", "ir"].iter().map(|p| p.parse().unwrap()).collect();
    let toll: Property = "(t+1)*(n-t) + l0*L1".parse().unwrap();
    let mut ev = PropertyEvaluator::new();
    let mut buf = Vec::new();
    c.bench_function("properties pl,wi,lr,ir n=2000", |b| b.iter(|| ev.eval_f64(t.view(), &props, &mut buf)));
    c.bench_function("polynomial toll n=2000", |b| {
        b.iter(|| ev.eval_f64(t.view(), std::slice::from_ref(&toll), &mut buf))
    });
    let mut scan = SubtreeScan::new();
    c.bench_function("subtree scan n=2000", |b| {
        b.iter(|| {
            let mut depth = 0;
            scan.scan(t.view(), |r| depth += r.depth);
            depth
        })
    });
    c.bench_function("enumerate_trees n=9 collect", |b| b.iter(|| enumerate_trees(9).count()));
}

criterion_group!(benches, enumeration, counting, series, sampler, scan);
criterion_main!(benches);
