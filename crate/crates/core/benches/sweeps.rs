use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use solvshear::corpus;
use solvshear::exterior::KForm;
use solvshear::lie::ce_differential;
use solvshear::par::{self, Execution};
use solvshear::reproduce;
use solvshear::shear::{shear, ShearData};

/// Transfer of every basis 2-form, one job per shear.
fn transfer_sweep(data: &[ShearData], exec: Execution) -> usize {
    par::map(exec, data, |d| {
        let r = shear(d).expect("valid corpus");
        let n = d.base().dim();
        let mut agree = 0;
        for i in 0..n {
            for j in i + 1..n {
                let a = KForm::basis(n, &[i, j]);
                agree += usize::from(r.transfer_d_formula(&a).unwrap() == ce_differential(&r.shear, &a));
            }
        }
        agree
    })
    .into_iter()
    .sum()
}

fn benches(c: &mut Criterion) {
    let mut rng = corpus::rng(17);
    let data: Vec<ShearData> = (0..16).map(|k| corpus::random_shear_data(&mut rng, 5 + k % 2)).collect();
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    for (name, exec) in [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)] {
        group.bench_with_input(BenchmarkId::new("reproduce_all", name), &exec, |b, &e| b.iter(|| reproduce::run_all(e)));
        group.bench_with_input(BenchmarkId::new("transfer_sweep", name), &exec, |b, &e| b.iter(|| transfer_sweep(&data, e)));
    }
    group.finish();
}

criterion_group!(sweeps, benches);
criterion_main!(sweeps);
