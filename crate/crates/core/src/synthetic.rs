//! Seeded random graphs for tests and benchmarks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{MentionGraph, NodeId};

/// Preferential attachment with exactly `edges` directed edges. Each new
/// node links to `m` distinct earlier nodes chosen with probability
/// proportional to degree; each link points one way at random, and a random
/// subset of links is made reciprocal so the edge count comes out exact.
/// Weights are uniform in `1..=4`.
pub fn preferential_attachment(n: usize, m: usize, edges: usize, seed: u64) -> Result<MentionGraph> {
    if m == 0 || n <= m {
        return Err(Error::InvalidParameter(format!(
            "preferential attachment needs 1 <= m < n, got m = {m}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ends: Vec<NodeId> = Vec::new();
    let mut links: Vec<(NodeId, NodeId)> = Vec::new();
    for a in 0..=m {
        for b in a + 1..=m {
            ends.extend([a, b]);
            links.push((a, b));
        }
    }
    for v in m + 1..n {
        let mut targets: Vec<NodeId> = Vec::with_capacity(m);
        while targets.len() < m {
            let t = ends[rng.gen_range(0..ends.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            ends.extend([v, t]);
            links.push((v, t));
        }
    }
    if edges < links.len() || edges > 2 * links.len() {
        return Err(Error::InvalidParameter(format!(
            "{} links allow between {} and {} directed edges, asked for {edges}",
            links.len(),
            links.len(),
            2 * links.len()
        )));
    }
    let mut order: Vec<usize> = (0..links.len()).collect();
    order.shuffle(&mut rng);
    let mut reciprocal = vec![false; links.len()];
    for &i in &order[..edges - links.len()] {
        reciprocal[i] = true;
    }
    let mut weights: BTreeMap<(NodeId, NodeId), u64> = BTreeMap::new();
    for (i, &(a, b)) in links.iter().enumerate() {
        let (s, t) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        weights.insert((s, t), rng.gen_range(1..=4));
        if reciprocal[i] {
            weights.insert((t, s), rng.gen_range(1..=4));
        }
    }
    let edges: Vec<_> = weights.into_iter().map(|((a, b), w)| (a, b, w)).collect();
    MentionGraph::from_indexed(n, &edges)
}

/// Erdős–Rényi digraph: every ordered pair independently with probability
/// `p`, weights uniform in `1..=max_weight`.
pub fn random_digraph(n: usize, p: f64, max_weight: u64, rng: &mut impl Rng) -> MentionGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p) {
                edges.push((a, b, rng.gen_range(1..=max_weight)));
            }
        }
    }
    MentionGraph::from_indexed(n, &edges).expect("generator emits a valid graph")
}

/// Undirected G(n, p) as a list of `(low, high, weight)` edges.
pub fn random_undirected(n: usize, p: f64, max_weight: u64, rng: &mut impl Rng) -> Vec<(NodeId, NodeId, u64)> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b, rng.gen_range(1..=max_weight)));
            }
        }
    }
    edges
}

/// Relabels the nodes of `g` by a random permutation; returns the new graph
/// and `perm` with `perm[old] = new`.
pub fn shuffle_nodes(g: &MentionGraph, rng: &mut impl Rng) -> (MentionGraph, Vec<NodeId>) {
    let n = g.node_count();
    let mut perm: Vec<NodeId> = (0..n).collect();
    perm.shuffle(rng);
    let edges: Vec<_> = g
        .edges()
        .iter()
        .map(|e| (perm[e.source], perm[e.target], e.weight))
        .collect();
    (
        MentionGraph::from_indexed(n, &edges).expect("permutation keeps validity"),
        perm,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pa_is_seeded_and_sized() {
        let a = preferential_attachment(300, 3, 1000, 7).unwrap();
        let b = preferential_attachment(300, 3, 1000, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.node_count(), 300);
        assert_eq!(a.edge_count(), 1000);
        assert_ne!(a, preferential_attachment(300, 3, 1000, 8).unwrap());
        assert!(preferential_attachment(300, 3, 100, 7).is_err());
        assert!(preferential_attachment(3, 3, 3, 7).is_err());
    }

    #[test]
    fn random_digraph_has_no_loops() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_digraph(9, 0.5, 3, &mut rng);
        assert!(g.edges().iter().all(|e| e.source != e.target && (1..=3).contains(&e.weight)));
    }
}
