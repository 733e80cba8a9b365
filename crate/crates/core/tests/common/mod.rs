//! Brute-force reference implementations used by the integration tests.
//! Each one is exponential or cubic and only meant for tiny graphs.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use chatnet::graph::{MentionGraph, NodeId, UndirectedView};
use chatnet::skeleton::BowTieLabel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// `reach[u][v]`: a directed path (possibly empty) leads from u to v.
pub fn transitive_closure(g: &MentionGraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut r = vec![vec![false; n]; n];
    for (v, row) in r.iter_mut().enumerate() {
        row[v] = true;
    }
    for e in g.edges() {
        r[e.source][e.target] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// SCCs as mutual-reachability classes, each sorted, list sorted.
pub fn scc_oracle(g: &MentionGraph) -> Vec<Vec<NodeId>> {
    let r = transitive_closure(g);
    let n = g.node_count();
    let classes: BTreeSet<Vec<NodeId>> = (0..n)
        .map(|u| (0..n).filter(|&v| r[u][v] && r[v][u]).collect())
        .collect();
    classes.into_iter().collect()
}

/// Bow-tie labels from the literal set expressions, each row of the table
/// tried in order so that a node lands in the first set whose expression it
/// satisfies.
pub fn bowtie_oracle(g: &MentionGraph, s: &[NodeId]) -> Vec<BowTieLabel> {
    let r = transitive_closure(g);
    let n = g.node_count();
    let in_s = |v: NodeId| s.contains(&v);
    let s_reachable_from = |v: NodeId| s.iter().any(|&x| r[v][x]);
    let reachable_from_s = |v: NodeId| s.iter().any(|&x| r[x][v]);
    let in_set: Vec<NodeId> = (0..n).filter(|&v| !in_s(v) && s_reachable_from(v)).collect();
    let out_set: Vec<NodeId> = (0..n).filter(|&v| !in_s(v) && reachable_from_s(v)).collect();
    let from_in = |v: NodeId| in_set.iter().any(|&x| r[x][v]);
    let reaches_out = |v: NodeId| out_set.iter().any(|&x| r[v][x]);
    (0..n)
        .map(|v| {
            if in_s(v) {
                BowTieLabel::Scc
            } else if in_set.contains(&v) {
                BowTieLabel::In
            } else if out_set.contains(&v) {
                BowTieLabel::Out
            } else if from_in(v) && reaches_out(v) {
                BowTieLabel::Tubes
            } else if from_in(v) && !reaches_out(v) {
                BowTieLabel::InTendrils
            } else if !from_in(v) && reaches_out(v) {
                BowTieLabel::OutTendrils
            } else {
                BowTieLabel::Others
            }
        })
        .collect()
}

pub fn adjacency(u: &UndirectedView) -> Vec<Vec<bool>> {
    let n = u.node_count();
    let mut a = vec![vec![false; n]; n];
    for &(x, y, _) in u.edges() {
        a[x][y] = true;
        a[y][x] = true;
    }
    a
}

fn members(mask: u32, n: usize) -> Vec<NodeId> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Every maximal complete vertex subset of size >= `min_size`, found by
/// checking all 2^n subsets.
pub fn cliques_oracle(u: &UndirectedView, min_size: usize) -> BTreeSet<Vec<NodeId>> {
    let n = u.node_count();
    let a = adjacency(u);
    let complete = |s: &[NodeId]| s.iter().all(|&x| s.iter().all(|&y| x == y || a[x][y]));
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        let s = members(mask, n);
        if s.len() < min_size || !complete(&s) {
            continue;
        }
        let extendable = (0..n).any(|v| mask >> v & 1 == 0 && s.iter().all(|&x| a[v][x]));
        if !extendable {
            out.insert(s);
        }
    }
    out
}

/// Connected components of the view after deleting the nodes in `removed`.
pub fn component_count(u: &UndirectedView, removed: &[NodeId]) -> usize {
    let n = u.node_count();
    let a = adjacency(u);
    let mut seen: Vec<bool> = (0..n).map(|v| removed.contains(&v)).collect();
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for y in 0..n {
                if a[x][y] && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

pub fn cutpoints_oracle(u: &UndirectedView) -> Vec<NodeId> {
    let base = component_count(u, &[]);
    (0..u.node_count())
        .filter(|&v| component_count(u, &[v]) > base)
        .collect()
}

/// Blocks as maximal vertex sets whose induced subgraph is connected, has
/// at least two nodes and stays connected after removing any one node;
/// isolated nodes are added as singleton blocks.
pub fn blocks_oracle(u: &UndirectedView) -> BTreeSet<Vec<NodeId>> {
    let n = u.node_count();
    let a = adjacency(u);
    let connected = |s: &[NodeId]| -> bool {
        if s.is_empty() {
            return true;
        }
        let mut seen = vec![s[0]];
        let mut stack = vec![s[0]];
        while let Some(x) = stack.pop() {
            for &y in s {
                if a[x][y] && !seen.contains(&y) {
                    seen.push(y);
                    stack.push(y);
                }
            }
        }
        seen.len() == s.len()
    };
    let biconnected = |s: &[NodeId]| {
        s.len() >= 2
            && connected(s)
            && (s.len() == 2
                || s.iter().all(|&v| {
                    let rest: Vec<NodeId> = s.iter().copied().filter(|&x| x != v).collect();
                    connected(&rest)
                }))
    };
    let good: Vec<u32> = (1u32..(1 << n)).filter(|&m| biconnected(&members(m, n))).collect();
    let mut out: BTreeSet<Vec<NodeId>> = good
        .iter()
        .filter(|&&m| !good.iter().any(|&o| o != m && o & m == m))
        .map(|&m| members(m, n))
        .collect();
    for v in 0..n {
        if (0..n).all(|x| !a[v][x]) {
            out.insert(vec![v]);
        }
    }
    out
}

/// Minimum a-b cut by trying every 2-partition with a on one side.
pub fn min_cut_oracle(u: &UndirectedView, a: NodeId, b: NodeId, weighted: bool) -> u64 {
    let n = u.node_count();
    let mut best = u64::MAX;
    for mask in 0u32..(1 << n) {
        if mask >> a & 1 == 0 || mask >> b & 1 == 1 {
            continue;
        }
        let cut = u
            .edges()
            .iter()
            .filter(|&&(x, y, _)| (mask >> x & 1) != (mask >> y & 1))
            .map(|&(_, _, w)| if weighted { w } else { 1 })
            .sum();
        best = best.min(cut);
    }
    best
}

/// All-pairs connectivity by the cut oracle; diagonal left at 0.
pub fn lambda_matrix_oracle(u: &UndirectedView, weighted: bool) -> Vec<Vec<u64>> {
    let n = u.node_count();
    let mut m = vec![vec![0; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let c = min_cut_oracle(u, a, b, weighted);
            m[a][b] = c;
            m[b][a] = c;
        }
    }
    m
}

/// Checks `min over a != b in S of l(a,b) > max over c in S, d outside S of
/// l(c,d)`; sets of fewer than two nodes never qualify.
pub fn satisfies_lambda_inequality(l: &[Vec<u64>], s: &[NodeId]) -> bool {
    if s.len() < 2 {
        return false;
    }
    let n = l.len();
    let inside = s
        .iter()
        .flat_map(|&a| s.iter().filter(move |&&b| b != a).map(move |&b| l[a][b]))
        .min()
        .unwrap_or(0);
    let across = s
        .iter()
        .flat_map(|&c| (0..n).filter(|d| !s.contains(d)).map(move |d| l[c][d]))
        .max();
    match across {
        Some(x) => inside > x,
        None => inside > 0,
    }
}

/// Every vertex set satisfying the lambda inequality.
pub fn lambda_sets_oracle(l: &[Vec<u64>]) -> BTreeSet<Vec<NodeId>> {
    let n = l.len();
    (1u32..(1 << n))
        .map(|m| members(m, n))
        .filter(|s| satisfies_lambda_inequality(l, s))
        .collect()
}

/// Authority vector as the limit of `(A^T A)^k A^T 1`, with the product
/// matrix formed densely.
pub fn hits_authority_oracle(g: &MentionGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut a = vec![vec![0.0f64; n]; n];
    for e in g.edges() {
        a[e.source][e.target] = 1.0;
    }
    let mut m = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = (0..n).map(|k| a[k][i] * a[k][j]).sum();
        }
    }
    let norm = |v: &mut Vec<f64>| {
        let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if s > 0.0 {
            v.iter_mut().for_each(|x| *x /= s);
        }
    };
    let mut x: Vec<f64> = (0..n).map(|j| (0..n).map(|i| a[i][j]).sum()).collect();
    norm(&mut x);
    for _ in 0..200_000 {
        let mut y: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i][j] * x[j]).sum()).collect();
        norm(&mut y);
        let delta = x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        x = y;
        if delta < 1e-15 {
            break;
        }
    }
    x
}

/// REGE written straight from the update rule, over full dense matrices
/// and every ordered pair, without sharing code with the library.
pub fn rege_oracle(g: &MentionGraph, iterations: usize) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut w = vec![vec![0.0f64; n]; n];
    for e in g.edges() {
        w[e.source][e.target] = e.weight as f64;
    }
    let nb: Vec<Vec<NodeId>> = (0..n)
        .map(|i| (0..n).filter(|&k| k != i && (w[i][k] > 0.0 || w[k][i] > 0.0)).collect())
        .collect();
    let mut e = vec![vec![1.0f64; n]; n];
    for _ in 0..iterations {
        // half[i][j] = (num(i, j), den(i, j))
        let mut half = vec![vec![(0.0f64, 0.0f64); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut num = 0.0;
                let mut den = 0.0;
                for &k in &nb[i] {
                    let mut best: Option<(f64, f64)> = None;
                    for &m in &nb[j] {
                        let value = e[k][m] * (w[i][k].min(w[j][m]) + w[k][i].min(w[m][j]));
                        let norm = w[i][k].max(w[j][m]) + w[k][i].max(w[m][j]);
                        best = match best {
                            None => Some((value, norm)),
                            Some((bv, bn)) if value > bv || (value == bv && norm < bn) => Some((value, norm)),
                            keep => keep,
                        };
                    }
                    let (value, norm) = best.unwrap_or((0.0, w[i][k] + w[k][i]));
                    num += value;
                    den += norm;
                }
                half[i][j] = (num, den);
            }
        }
        let mut next = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (half[i][j], half[j][i]);
                next[i][j] = if nb[i].is_empty() && nb[j].is_empty() {
                    1.0
                } else if nb[i].is_empty() || nb[j].is_empty() {
                    0.0
                } else {
                    (a.0 + b.0) / (a.1 + b.1)
                };
            }
        }
        e = next;
    }
    e
}

/// The small weighted digraph used for the REGE cross-check.
pub fn rege_fixture() -> MentionGraph {
    MentionGraph::from_indexed(
        5,
        &[
            (0, 1, 3),
            (1, 0, 1),
            (1, 2, 2),
            (2, 3, 5),
            (3, 1, 1),
            (3, 4, 2),
            (4, 3, 4),
            (0, 4, 1),
            (2, 0, 2),
        ],
    )
    .unwrap()
}
