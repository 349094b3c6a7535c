use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use itcx::par::Execution;
use itcx::tables::{kcross_table, single_piece_table};
use itcx::verify::oracle_agreement;
use itcx::Solver;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn single_piece(c: &mut Criterion) {
    let mut group = c.benchmark_group("single_piece_11x15");
    group.sample_size(10);
    for (name, exec) in MODES {
        // A fresh solver per iteration, so every run pays for the full table.
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| single_piece_table(&Solver::default(), 11, 15, exec))
        });
    }
    group.finish();
}

fn kcross(c: &mut Criterion) {
    let mut group = c.benchmark_group("kcross_l20_k2_13");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| kcross_table(20, 2, 13, u64::MAX, exec))
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_len10_random200");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| oracle_agreement(10, 200, 16, 1, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, single_piece, kcross, oracle);
criterion_main!(benches);
