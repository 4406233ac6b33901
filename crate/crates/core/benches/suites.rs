use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lofs_core::corpus::Corpus;
use lofs_core::lofs::Lofs;
use lofs_core::monad::Monad;
use lofs_core::par;
use lofs_core::presheaf::{Class, Limits, Phi};
use lofs_core::Quantale;

fn corpus(q: Quantale, max: usize) -> Corpus {
    Corpus::build(Monad::identity(Arc::new(q)), max).unwrap()
}

fn simplicity(c: &mut Criterion) {
    let mut g = c.benchmark_group("simplicity per morphism");
    g.sample_size(10);
    let lofs = Lofs::new(Phi::builtin(Class::All, Limits::default()));
    for (label, cp) in [("boolean ≤ 3", corpus(Quantale::boolean(), 3)), ("truncated_chain(2) ≤ 2", corpus(Quantale::truncated_chain(2), 2))] {
        let fs = &cp.functors;
        g.bench_with_input(BenchmarkId::new("sequential", label), fs, |b, fs| {
            b.iter(|| par::map_sequential(fs, |f| lofs.check_simplicity_at(f).passed()))
        });
        g.bench_with_input(BenchmarkId::new("rayon", label), fs, |b, fs| b.iter(|| par::map(fs, |f| lofs.check_simplicity_at(f).passed())));
    }
    g.finish();
}

fn monad_laws(c: &mut Criterion) {
    let mut g = c.benchmark_group("presheaf monad laws per object");
    g.sample_size(10);
    let phi = Phi::builtin(Class::All, Limits::default());
    let cp = corpus(Quantale::lukasiewicz_chain(2), 2);
    let xs = &cp.objects;
    g.bench_function("sequential", |b| b.iter(|| par::map_sequential(xs, |x| phi.check_monad_at(x).passed())));
    g.bench_function("rayon", |b| b.iter(|| par::map(xs, |x| phi.check_monad_at(x).passed())));
    g.finish();
}

criterion_group!(benches, simplicity, monad_laws);
criterion_main!(benches);
