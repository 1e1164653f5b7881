use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ualg_core::cube::matrix_algebra;
use ualg_core::engine::{CornerBound, Engine, Route};
use ualg_core::{corpus, CongruenceLattice, Partition};

fn ones(n: usize, k: usize) -> Vec<Partition> {
    vec![Partition::one(n); k]
}

fn lattice(c: &mut Criterion) {
    let set4 = corpus::set4();
    c.bench_function("con_lattice set4", |b| {
        b.iter(|| CongruenceLattice::compute(black_box(&set4)).unwrap())
    });
}

fn closure(c: &mut Criterion) {
    let s3 = corpus::s3();
    let l22 = corpus::l22();
    c.bench_function("matrices s3 (1,1)", |b| {
        b.iter(|| matrix_algebra(&s3, &ones(6, 2), None).unwrap())
    });
    let mut group = c.benchmark_group("slow");
    group.sample_size(10);
    group.bench_function("matrices l22 (1,1,1)", |b| {
        b.iter(|| matrix_algebra(&l22, &ones(4, 3), None).unwrap())
    });
    group.finish();
}

fn commutators(c: &mut Criterion) {
    let s3 = corpus::s3();
    c.bench_function("tc_commutator s3 (1,1,1)", |b| {
        b.iter(|| Engine::new(&s3).tc_commutator(&ones(6, 3), 2).unwrap())
    });
    c.bench_function("commutator_via_delta s3 (1,1,1)", |b| {
        b.iter(|| Engine::new(&s3).commutator_via_delta(&ones(6, 3)).unwrap())
    });
}

fn deltas(c: &mut Criterion) {
    let s3 = corpus::s3();
    let t = ones(6, 3);
    for route in [Route::Generated, Route::Closure] {
        c.bench_function(&format!("delta_ternary s3 (1,1,1) {route:?}"), |b| {
            b.iter(|| {
                Engine::new(&s3)
                    .delta_ternary(&t, [0, 1, 2], route)
                    .unwrap()
            })
        });
    }
}

fn corners(c: &mut Criterion) {
    let z4 = corpus::z4();
    let t = ones(4, 3);
    let mut group = c.benchmark_group("ctr");
    group.sample_size(10);
    group.bench_function("check_ctr z4 (1,1,1)", |b| {
        b.iter(|| {
            let e = Engine::new(&z4);
            e.check_ctr(&t, 0, &Partition::zero(4), &CornerBound::default())
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, lattice, closure, commutators, deltas, corners);
criterion_main!(benches);
