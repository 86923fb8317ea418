//! Sequential versus parallel translation of the bundled corpus, kernel
//! referee included. A fresh translator per iteration keeps the coherence
//! cache cold.

use std::hint::black_box;

use catt_hott::corpus;
use catt_hott::surface::load;
use catt_hott::translate::Translator;
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_translate(c: &mut Criterion) {
    let env = load(corpus::BASIC).expect("corpus loads");
    let names: Vec<String> = env.names().map(str::to_owned).collect();

    let mut group = c.benchmark_group("translate_corpus");
    group
        .bench_function("sequential", |b| b.iter(|| Translator::new(&env).translate_all_sequential(black_box(&names))));
    group.bench_function("parallel", |b| b.iter(|| Translator::new(&env).translate_all(black_box(&names))));
    group.finish();
}

criterion_group!(benches, bench_translate);
criterion_main!(benches);
