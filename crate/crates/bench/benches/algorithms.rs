use chatnet::centrality::{hits, HitsOptions};
use chatnet::cohesion::maximal_cliques;
use chatnet::connectivity::{articulation_points_and_blocks, gomory_hu, CapacityMode};
use chatnet::equivalence::{rege, RegeOptions};
use chatnet::skeleton::{abcd_skeleton, bowtie};
use chatnet_bench::channel_graph;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn algorithms(c: &mut Criterion) {
    let mut group = c.benchmark_group("algorithms");
    group.sample_size(10);
    for n in [300, 1200] {
        let g = channel_graph(n);
        let u = g.to_undirected();
        group.bench_with_input(BenchmarkId::new("hits", n), &g, |b, g| {
            b.iter(|| hits(g, &HitsOptions::default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bowtie_and_skeleton", n), &g, |b, g| {
            b.iter(|| (bowtie(g), abcd_skeleton(g)))
        });
        group.bench_with_input(BenchmarkId::new("maximal_cliques", n), &u, |b, u| {
            b.iter(|| maximal_cliques(u, 3).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("blocks", n), &u, |b, u| {
            b.iter(|| articulation_points_and_blocks(u))
        });
        group.bench_with_input(BenchmarkId::new("gomory_hu", n), &u, |b, u| {
            b.iter(|| gomory_hu(u, CapacityMode::Unit))
        });
        group.bench_with_input(BenchmarkId::new("rege", n), &g, |b, g| {
            b.iter(|| rege(g, &RegeOptions::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, algorithms);
criterion_main!(benches);
