//! Sequential against rayon on the three sweeps that dominate a run.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ffmertens::chargroup::ResidueRing;
use ffmertens::lfunc::{RingLData, RootMethod};
use ffmertens::{Exec, Field, PolyRing};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn ring(q: u64, exec: Exec) -> PolyRing {
    PolyRing::new(Field::from_order(q).unwrap()).with_exec(exec)
}

fn sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "q2-deg18"), &exec, |b, &exec| {
            // a fresh ring each time, the list is cached per ring
            b.iter(|| black_box(ring(2, exec).irreducible_list(18).unwrap().len()))
        });
    }
    g.finish();
}

fn histograms(c: &mut Criterion) {
    let mut g = c.benchmark_group("prime_histogram");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "q3-t^3+2t+1-deg10"), &exec, |b, &exec| {
            b.iter(|| {
                let pr = ring(3, exec);
                let m = pr.parse_monic("t^3+2*t+1").unwrap();
                let r = ResidueRing::new(&pr, &m).unwrap();
                black_box(r.prime_histogram(10).unwrap().len())
            })
        });
    }
    g.finish();
}

fn characters(c: &mut Criterion) {
    let mut g = c.benchmark_group("l_data");
    let pr = ring(2, Exec::Sequential);
    let m = pr.parse_monic("t^7+t+1").unwrap();
    let r = ResidueRing::new(&pr, &m).unwrap();
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "q2-t^7+t+1"), &exec, |b, &exec| {
            b.iter(|| black_box(RingLData::new(&r, RootMethod::Companion, exec).unwrap().data().len()))
        });
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10).measurement_time(Duration::from_secs(5));
    targets = sieve, histograms, characters
}
criterion_main!(benches);
