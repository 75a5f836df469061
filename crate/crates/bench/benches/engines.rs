use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use pgx_bench::{corpus, pseudo_random_matrix};
use pgx_core::exterior::miller_cover;
use pgx_core::lattice::smith_normal_form;
use pgx_core::nq::nilpotent_quotient;
use pgx_core::structure::presented_group;
use pgx_core::Limits;

fn collection(c: &mut Criterion) {
    let g = presented_group(&corpus("wreath-c9-c3.fp"), &Limits::default()).unwrap().group;
    let elems: Vec<_> = (0..g.len()).map(|i| g.generator(i)).collect();
    let x = elems.iter().fold(g.generator(0), |acc, e| g.multiply(&acc, e));
    let y = g.power_elem(&x, 5);
    c.bench_function("collect product in C9wrC3", |b| b.iter(|| g.multiply(black_box(&x), black_box(&y))));
    c.bench_function("power x^26 in C9wrC3", |b| b.iter(|| g.power_elem(black_box(&y), 26)));
}

fn smith(c: &mut Criterion) {
    for n in [8usize, 20] {
        let a = pseudo_random_matrix(n, 17);
        c.bench_function(&format!("smith form {n}x{n}"), |b| b.iter(|| smith_normal_form(black_box(&a))));
    }
}

fn quotients(c: &mut Criterion) {
    let mut group = c.benchmark_group("nilpotent quotient");
    group.sample_size(10);
    let free3 = pgx_core::parse_presentation("group \"F3\"\nprime 3\ngenerators a b c\n").unwrap();
    group.bench_function("free rank 3 to class 5", |b| b.iter(|| nilpotent_quotient(&free3, 5).unwrap()));
    let wreath = corpus("wreath-c9-c3.fp");
    group.bench_function("C9wrC3 to class 5", |b| b.iter(|| nilpotent_quotient(&wreath, 5).unwrap()));
    group.finish();
}

fn covers(c: &mut Criterion) {
    let mut group = c.benchmark_group("cover");
    group.sample_size(10);
    let limits = Limits::default();
    for file in ["heisenberg27.fp", "burnside-class2.fp", "wreath-c9-c3.fp"] {
        let fp = corpus(file);
        group.bench_function(file, |b| b.iter(|| miller_cover(&fp, None, &limits).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, collection, smith, quotients, covers);
criterion_main!(benches);
