use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use twistcalc_core::claims;
use twistcalc_core::cobordism::{self, PatternMode};
use twistcalc_core::seifert::{self, ScanOptions};
use twistcalc_core::{parse_word, Parallelism, SeifertData};

const MODES: [(&str, Parallelism); 2] = [
    ("sequential", Parallelism::Sequential),
    ("parallel", Parallelism::Parallel),
];

fn lspace(c: &mut Criterion) {
    // 2·3·5·7·7 = 1470 tuples
    let d = SeifertData::new(1, 4, vec![(1, 5), (3, 7), (2, 7)]).unwrap();
    let mut g = c.benchmark_group("lspace_check");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            let opts = ScanOptions { mode, ..ScanOptions::default() };
            b.iter(|| seifert::lspace_check(&d, &opts).unwrap())
        });
    }
    g.finish();
}

fn verify(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_paper");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| claims::verify_paper(mode).unwrap())
        });
    }
    g.finish();
}

fn gamma(c: &mut Criterion) {
    // no match, so every normalization is searched
    let w = parse_word("(a^3 b a^2 b^2)^40").unwrap();
    let mut g = c.benchmark_group("gamma_pattern");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| cobordism::gamma_pattern(&w, PatternMode::Strict, mode).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, lspace, verify, gamma);
criterion_main!(benches);
