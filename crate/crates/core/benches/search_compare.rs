//! Rayon-backed oracle searches against their sequential twins.

use criterion::{criterion_group, criterion_main, Criterion};

use tdcheck::format::parse_dba;
use tdcheck::oracle::{
    bounded_language_equal, bounded_language_equal_seq, exchange_violation_search,
    exchange_violation_search_seq,
};
use tdcheck::{associated_dta, Dba, Dta};

const ZIGZAG: &str = "\
alphabet: a/0 b/0 f/2 g/1
states: q q_a q_b p p' p_ab p_ba
final: q p p_ab p_ba
trans:
a -> q_a
b -> q_b
f(q_a,q_a) -> q
f(q_b,q_b) -> q
f(q_a,q_b) -> p_ab
f(q_b,q_a) -> p_ba
g(p_ab) -> p
g(p_ba) -> p'
g(p) -> p'
g(p') -> p
";

fn fixtures() -> (Dba, Dta) {
    let dba = parse_dba(ZIGZAG).expect("fixture parses");
    let dta = associated_dta(&dba).expect("construction fits");
    (dba, dta)
}

fn bench_bounded_equal(c: &mut Criterion) {
    let (dba, dta) = fixtures();
    let mut group = c.benchmark_group("bounded_language_equal/bound=11");
    group.bench_function("parallel", |b| {
        b.iter(|| bounded_language_equal(&dba, &dta, 11).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| bounded_language_equal_seq(&dba, &dta, 11).unwrap())
    });
    group.finish();
}

fn bench_exchange_search(c: &mut Criterion) {
    let (dba, _) = fixtures();
    let mut group = c.benchmark_group("exchange_violation_search/bound=7");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| exchange_violation_search(&dba, 7).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| exchange_violation_search_seq(&dba, 7).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_bounded_equal, bench_exchange_search);
criterion_main!(benches);
