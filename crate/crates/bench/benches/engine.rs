use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use inflex_core::base::{ChowModel, Preset};
use inflex_core::jet::{self, charts};
use inflex_core::search::{self, Family};
use inflex_core::{scroll, FormalBundle, Ring, ScrollSetup, Strategy};

fn classes(c: &mut Criterion) {
    let mut g = c.benchmark_group("inflection_class");
    for (n, m, k, big_n) in [(3, 2, 2, 8), (4, 3, 2, 15), (4, 2, 3, 23)] {
        let s = ScrollSetup::new(n, m, k, big_n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(format!("{n}-{m}-{k}-{big_n}")), &s, |b, s| {
            b.iter(|| scroll::inflection_class(s).unwrap())
        });
    }
    g.finish();

    let s = ScrollSetup::with_codim(4, 3, 2, 4).unwrap();
    let data = ChowModel::preset(Preset::ProjectiveSpace(3)).data(2);
    c.bench_function("degree/P3.l4", |b| b.iter(|| scroll::degree_of_inflection(&s, &data).unwrap()));
}

fn strategies(c: &mut Criterion) {
    let ring = Ring::total_space(4, 2);
    let v = FormalBundle::from_variables(&ring, 4, 3, "V").unwrap();
    let mut g = c.benchmark_group("sym_power");
    for strategy in [Strategy::Roots, Strategy::Newton] {
        g.bench_function(format!("{strategy:?}"), |b| b.iter(|| v.sym_power_with(3, strategy).unwrap()));
    }
    g.finish();
}

fn scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("scan");
    for (family, param) in [(Family::PlaneN9, None), (Family::P3, Some(2)), (Family::Fe, Some(1)), (Family::CurveTimesLine, Some(2))] {
        let p = search::problem(family, param, Some(40)).unwrap();
        g.bench_function(p.id(), |b| b.iter(|| search::scan(&p).unwrap()));
    }
    g.finish();
}

fn jets(c: &mut Criterion) {
    let mut g = c.benchmark_group("jet");
    g.sample_size(10);
    let bordiga = charts::bordiga(2);
    g.bench_function("rank/bordiga", |b| b.iter(|| jet::generic_jet_rank(&bordiga).unwrap()));
    let ex5 = charts::example5(2, 2);
    g.bench_function("minors/example5.m2", |b| b.iter(|| jet::inflection_equations(&ex5, 9).unwrap()));
    g.bench_function("minors/bordiga", |b| b.iter(|| jet::inflection_equations(&bordiga, 9).unwrap()));
    g.finish();
}

criterion_group!(benches, classes, strategies, scans, jets);
criterion_main!(benches);
