use criterion::{criterion_group, criterion_main, Criterion, Throughput};

use strux_bench::{indented_text, rng, run_heavy_text};
use strux_core::escapes::{compress_runs, expand_escapes};
use strux_core::indent::{decode_indent, encode_indent, IndentConfig};

fn codecs(c: &mut Criterion) {
    let cfg = IndentConfig::default();
    let text = indented_text(&mut rng(), 20_000);
    let encoded = encode_indent(&text, &cfg).unwrap();
    let mut group = c.benchmark_group("indent");
    group.throughput(Throughput::Bytes(text.len() as u64));
    group.bench_function("encode", |b| b.iter(|| encode_indent(&text, &cfg).unwrap()));
    group.bench_function("decode", |b| b.iter(|| decode_indent(&encoded, &cfg).unwrap()));
    group.finish();

    let text = run_heavy_text(&mut rng(), 1 << 20);
    let compressed = compress_runs(&text, 4);
    let mut group = c.benchmark_group("escapes");
    group.throughput(Throughput::Bytes(text.len() as u64));
    group.bench_function("compress", |b| b.iter(|| compress_runs(&text, 4)));
    group.bench_function("expand", |b| b.iter(|| expand_escapes(&compressed).unwrap()));
    group.finish();
}

criterion_group!(benches, codecs);
criterion_main!(benches);
