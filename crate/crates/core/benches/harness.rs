//! Sequential against data-parallel execution on the simulation and
//! characteristic-polynomial workloads.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use polyescape_core::decide::{Instance, Mode};
use polyescape_core::lp::Polytope;
use polyescape_core::matrix::RatMatrix;
use polyescape_core::par::{map_with, Execution};
use polyescape_core::poly::char_poly;
use polyescape_core::rational::{int, Rational};
use polyescape_core::simulate::{sample_points, SamplingPlan, Simulator};

fn rotation() -> Instance {
    let a = RatMatrix::from_rows(vec![vec![Rational::new(1.into(), 10.into()), int(-1)], vec![int(1), Rational::new(1.into(), 10.into())]]).unwrap();
    let p = Polytope::from_box(&[int(-2), int(-2)], &[int(2), int(2)]);
    Instance::new(a, p, Mode::Continuous).unwrap()
}

fn matrices(count: usize) -> Vec<RatMatrix> {
    (0..count)
        .map(|k| {
            let d = 3 + k % 3;
            let rows = (0..d).map(|i| (0..d).map(|j| Rational::new((((i * 7 + j * 3 + k) % 11) as i64 - 5).into(), (1 + ((i + j + k) % 4) as i64).into())).collect()).collect();
            RatMatrix::from_rows(rows).unwrap()
        })
        .collect()
}

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::available())]
}

fn simulation(c: &mut Criterion) {
    let inst = rotation();
    let plan = SamplingPlan { include_vertices: true, random_interior_count: 16, seed: 1 };
    let points = sample_points(&inst.polytope, &plan).unwrap();
    let horizon = int(50);
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                let sim = Simulator::new(&inst);
                black_box(map_with(exec, &points, |x| sim.run(x, &horizon, 128, false).unwrap()))
            })
        });
    }
    group.finish();
}

fn characteristic(c: &mut Criterion) {
    let mats = matrices(64);
    let mut group = c.benchmark_group("char_poly");
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(map_with(exec, &mats, |m| char_poly(m).unwrap())))
        });
    }
    group.finish();
}

criterion_group!(benches, simulation, characteristic);
criterion_main!(benches);
