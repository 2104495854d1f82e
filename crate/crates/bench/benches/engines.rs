use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use cosetcap::capacity::{threshold, Model, ThresholdOptions};
use cosetcap::code::registry_get;
use cosetcap::concat::{s_rb_stack_exact, CodeStack};
use cosetcap::exact::{coset_distribution, TransformEvaluator};
use cosetcap::longrep::{s_rb_estimate, LongRepConfig};
use cosetcap::rep::s_rb_rep;
use cosetcap::{hashing_point, ChannelFamily, PauliChannel};

fn depol(p: f64) -> PauliChannel {
    ChannelFamily::Depolarizing.eval(p).unwrap()
}

fn single_layer(c: &mut Criterion) {
    let ch = depol(0.063);
    let mut g = c.benchmark_group("single_layer");
    for name in ["5qubit", "steane", "shor", "13cyclic"] {
        let code = registry_get(name).unwrap();
        let mut ev = TransformEvaluator::new(&code);
        let chans = vec![ch; code.n];
        g.bench_with_input(BenchmarkId::new("transform", name), &chans, |b, chans| {
            b.iter(|| ev.s_rb(black_box(chans)))
        });
    }
    let steane = registry_get("steane").unwrap();
    g.bench_function("enumerate/steane", |b| b.iter(|| coset_distribution(&steane, &vec![ch; 7]).unwrap()));
    g.finish();
}

fn stacks(c: &mut Criterion) {
    let ch = depol(0.0635);
    let mut g = c.benchmark_group("stacks");
    g.sample_size(20);
    for spec in ["repZ(3) x repX(3)", "repZ(3) x steane", "repX(5) x 5qubit", "repZ(2) x repX(2) x repZ(3)"] {
        let st: CodeStack = spec.parse().unwrap();
        g.bench_function(spec, |b| b.iter(|| s_rb_stack_exact(&st, black_box(&ch)).unwrap()));
    }
    g.bench_function("closed repZ(5) x repX(51)", |b| b.iter(|| s_rb_rep(5, 51, black_box(&ch)).unwrap()));
    g.finish();
}

fn long_rep(c: &mut Criterion) {
    let ch = depol(0.0637);
    let cfg = LongRepConfig::default();
    let mut g = c.benchmark_group("longrep");
    g.sample_size(10);
    for m in [51, 201, 1001] {
        g.bench_with_input(BenchmarkId::new("estimate 5x", m), &m, |b, &m| b.iter(|| s_rb_estimate(5, m, &ch, &cfg)));
    }
    g.finish();
}

fn thresholds(c: &mut Criterion) {
    let mut g = c.benchmark_group("threshold");
    g.sample_size(10);
    g.bench_function("hashing depol", |b| b.iter(|| hashing_point(black_box(&ChannelFamily::Depolarizing)).unwrap()));
    for spec in ["5repZ", "steane"] {
        let model = Model::build(spec, "auto").unwrap();
        g.bench_function(spec, |b| {
            b.iter(|| threshold(&model, &ChannelFamily::Depolarizing, &ThresholdOptions::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, single_layer, stacks, long_rep, thresholds);
criterion_main!(benches);
