use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use orthochron_core::lattice::{check_laws_with, enumerate_closed_with};
use orthochron_core::logic::{compare_laws_with, LawTemplate};
use orthochron_core::oracle::brute_force_closed_with;
use orthochron_core::{fixtures, gen_random, happened_before, Execution, Law, SemanticsKind, Trace, DEFAULT_CAP};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn traces() -> Vec<(&'static str, Trace)> {
    vec![
        ("fig7", fixtures::fig7()),
        ("2x6", gen_random(7, 2, 6, 2).unwrap()),
        ("3x5", gen_random(11, 3, 5, 4).unwrap()),
        ("1x8", gen_random(3, 1, 8, 0).unwrap()),
    ]
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_closed");
    for (name, t) in traces() {
        let cs = happened_before(&t).unwrap();
        for (mode, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(mode, name), &cs, |b, cs| {
                b.iter(|| enumerate_closed_with(black_box(cs), DEFAULT_CAP, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn brute_force(c: &mut Criterion) {
    let mut g = c.benchmark_group("brute_force_closed");
    g.sample_size(10);
    for (name, t) in traces() {
        let cs = happened_before(&t).unwrap();
        for (mode, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(mode, name), &cs, |b, cs| {
                b.iter(|| brute_force_closed_with(black_box(cs), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn laws(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_laws");
    g.sample_size(10);
    for (name, t) in traces() {
        let cs = happened_before(&t).unwrap();
        let l = enumerate_closed_with(&cs, DEFAULT_CAP, Execution::Sequential).unwrap();
        for law in [Law::OrthoLatticeAxioms, Law::Distributivity] {
            for (mode, exec) in MODES {
                let id = BenchmarkId::new(format!("{law}/{mode}"), format!("{name} ({} elements)", l.len()));
                g.bench_with_input(id, &l, |b, l| b.iter(|| check_laws_with(black_box(l), law, exec)));
            }
        }
    }
    g.finish();
}

fn atom_laws(c: &mut Criterion) {
    let mut g = c.benchmark_group("compare_laws");
    g.sample_size(10);
    let t = fixtures::fig7();
    let tpl = LawTemplate::distributivity();
    for (mode, exec) in MODES {
        g.bench_function(BenchmarkId::new(mode, "fig7 distributivity"), |b| {
            b.iter(|| compare_laws_with(Some(black_box(&t)), &tpl, SemanticsKind::Ortho, 0, 0, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, enumeration, brute_force, laws, atom_laws);
criterion_main!(benches);
