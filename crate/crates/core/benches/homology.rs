use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use khtor::{compute_table, ComputeOptions, Exec, LinkDiagram};

const DIAGRAMS: [(&str, &str); 3] = [
    ("4_1", "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"),
    ("8_19", "X[2,14,3,13] X[5,11,6,10] X[7,15,8,14] X[9,5,10,4] X[11,7,12,6] X[12,2,13,1] X[15,9,16,8] X[16,4,1,3]"),
    (
        "10_124",
        "X[1,9,2,8] X[3,11,4,10] X[5,13,6,12] X[7,19,8,18] X[9,3,10,2] X[11,5,12,4] X[14,20,15,19] X[16,14,17,13] X[17,7,18,6] X[20,16,1,15]",
    ),
];

fn homology(c: &mut Criterion) {
    let mut group = c.benchmark_group("compute_table");
    group.sample_size(10);
    for (name, pd) in DIAGRAMS {
        let d = LinkDiagram::parse_pd(pd).unwrap();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let opts = ComputeOptions {
                reduced: true,
                mod_primes: vec![2],
                exec,
                ..Default::default()
            };
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), name), &d, |b, d| {
                b.iter(|| compute_table(d, &opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, homology);
criterion_main!(benches);
