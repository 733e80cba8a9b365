//! Maximal cliques, clique overlap and ego networks.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, MentionGraph, NodeId, UndirectedView};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueReport {
    /// Sorted members of each clique; ordered by size (largest first), then
    /// lexicographically by members.
    pub cliques: Vec<Vec<NodeId>>,
    pub min_size: usize,
    /// Size of the largest listed clique, 0 when none are listed.
    pub max_clique_size: usize,
}

fn intersect(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn count_common(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Vertices in degeneracy order (repeatedly remove a minimum-degree vertex).
pub fn degeneracy_order(adj: &[Vec<NodeId>]) -> Vec<NodeId> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<NodeId>> = vec![Vec::new(); max_deg + 1];
    for v in (0..n).rev() {
        buckets[degree[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while order.len() < n {
        d = d.min(max_deg);
        while buckets[d].is_empty() {
            d += 1;
        }
        let v = buckets[d].pop().expect("bucket");
        // Stale entries: the vertex moved to a lower bucket or was removed.
        if removed[v] || degree[v] != d {
            continue;
        }
        removed[v] = true;
        order.push(v);
        for &u in &adj[v] {
            if !removed[u] {
                degree[u] -= 1;
                buckets[degree[u]].push(u);
                d = d.min(degree[u]);
            }
        }
    }
    order
}

struct Enumerator<'a> {
    adj: &'a [Vec<NodeId>],
    min_size: usize,
    found: Vec<Vec<NodeId>>,
}

impl Enumerator<'_> {
    /// Tomita-pivoted Bron–Kerbosch on sorted candidate (`p`) and excluded
    /// (`x`) sets.
    fn expand(&mut self, r: &mut Vec<NodeId>, mut p: Vec<NodeId>, mut x: Vec<NodeId>) {
        if p.is_empty() {
            if x.is_empty() && r.len() >= self.min_size {
                let mut clique = r.clone();
                clique.sort_unstable();
                self.found.push(clique);
            }
            return;
        }
        if r.len() + p.len() < self.min_size {
            return;
        }
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| (count_common(&p, &self.adj[u]), std::cmp::Reverse(u)))
            .expect("non-empty");
        let branch: Vec<NodeId> = p
            .iter()
            .copied()
            .filter(|v| self.adj[pivot].binary_search(v).is_err())
            .collect();
        for v in branch {
            let nv = &self.adj[v];
            r.push(v);
            self.expand(r, intersect(&p, nv), intersect(&x, nv));
            r.pop();
            let pos = p.binary_search(&v).expect("v in p");
            p.remove(pos);
            let pos = x.binary_search(&v).unwrap_err();
            x.insert(pos, v);
        }
    }
}

/// All maximal cliques with at least `min_size` members.
pub fn maximal_cliques(u: &UndirectedView, min_size: usize) -> Result<CliqueReport> {
    if min_size == 0 {
        return Err(Error::InvalidParameter("clique min_size must be >= 1".into()));
    }
    let n = u.node_count();
    let adj: Vec<Vec<NodeId>> = (0..n)
        .map(|v| u.neighbors(v).iter().map(|&(w, _)| w).collect())
        .collect();
    let order = degeneracy_order(&adj);
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }

    let mut cliques: Vec<Vec<NodeId>> = order
        .par_iter()
        .flat_map_iter(|&v| {
            let (mut p, mut x) = (Vec::new(), Vec::new());
            for &w in &adj[v] {
                if position[w] > position[v] {
                    p.push(w);
                } else {
                    x.push(w);
                }
            }
            let mut e = Enumerator {
                adj: &adj,
                min_size,
                found: Vec::new(),
            };
            e.expand(&mut vec![v], p, x);
            e.found
        })
        .collect();
    cliques.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let max_clique_size = cliques.first().map_or(0, Vec::len);
    Ok(CliqueReport {
        cliques,
        min_size,
        max_clique_size,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoMembershipMatrix {
    /// Number of cliques containing each node.
    pub diagonal: Vec<usize>,
    /// Off-diagonal counts keyed by `(low, high)`; zero pairs are absent.
    pub pairs: BTreeMap<(NodeId, NodeId), usize>,
}

impl CoMembershipMatrix {
    pub fn get(&self, a: NodeId, b: NodeId) -> usize {
        if a == b {
            return self.diagonal[a];
        }
        self.pairs
            .get(&(a.min(b), a.max(b)))
            .copied()
            .unwrap_or(0)
    }

    /// Pairs by descending count, ties by ascending pair.
    pub fn top_pairs(&self, k: usize) -> Vec<((NodeId, NodeId), usize)> {
        let mut all: Vec<_> = self.pairs.iter().map(|(&p, &c)| (p, c)).collect();
        all.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        all.truncate(k);
        all
    }

    pub fn max_pair(&self) -> Option<((NodeId, NodeId), usize)> {
        self.top_pairs(1).into_iter().next()
    }
}

pub fn clique_comembership(r: &CliqueReport, node_count: usize) -> CoMembershipMatrix {
    let mut diagonal = vec![0; node_count];
    let mut pairs = BTreeMap::new();
    for q in &r.cliques {
        for (i, &a) in q.iter().enumerate() {
            diagonal[a] += 1;
            for &b in &q[i + 1..] {
                *pairs.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    CoMembershipMatrix { diagonal, pairs }
}

/// Per-clique participation scores; nodes adjacent to no member are absent
/// and score 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Participation {
    pub scores: Vec<BTreeMap<NodeId, f64>>,
}

impl Participation {
    pub fn score(&self, node: NodeId, clique: usize) -> f64 {
        self.scores[clique].get(&node).copied().unwrap_or(0.0)
    }
}

/// For node v and clique Q: the share of Q \ {v} adjacent to v.
pub fn clique_participation(r: &CliqueReport, u: &UndirectedView) -> Participation {
    let scores = r
        .cliques
        .iter()
        .map(|q| {
            let mut adjacent: BTreeMap<NodeId, usize> = BTreeMap::new();
            for &m in q {
                for &(v, _) in u.neighbors(m) {
                    *adjacent.entry(v).or_default() += 1;
                }
            }
            let mut out: BTreeMap<NodeId, f64> = adjacent
                .into_iter()
                .filter(|(v, _)| q.binary_search(v).is_err())
                .map(|(v, c)| (v, c as f64 / q.len() as f64))
                .collect();
            for &m in q {
                out.insert(m, 1.0);
            }
            out
        })
        .collect();
    Participation { scores }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoNetwork {
    pub ego: NodeId,
    pub alters: Vec<NodeId>,
    /// Directed edges among ego and alters.
    pub edges: Vec<Edge>,
    pub size: usize,
    pub density: f64,
}

impl EgoNetwork {
    pub fn members(&self) -> Vec<NodeId> {
        let mut m = self.alters.clone();
        let pos = m.binary_search(&self.ego).unwrap_err();
        m.insert(pos, self.ego);
        m
    }

    /// The ego network as a standalone graph keeping the original nicks.
    pub fn to_graph(&self, g: &MentionGraph) -> Result<MentionGraph> {
        MentionGraph::new(
            self.members().into_iter().map(|v| g.nick(v).to_string()),
            self.edges
                .iter()
                .map(|e| (g.nick(e.source), g.nick(e.target), e.weight)),
        )
    }
}

pub fn ego_network(g: &MentionGraph, ego: &str) -> Result<EgoNetwork> {
    let id = g
        .node_id(ego)
        .ok_or_else(|| Error::UnknownNode(ego.to_string()))?;
    Ok(ego_network_of(g, id))
}

pub fn ego_network_of(g: &MentionGraph, ego: NodeId) -> EgoNetwork {
    let alters = g.neighbors(ego);
    let mut member = vec![false; g.node_count()];
    member[ego] = true;
    alters.iter().for_each(|&a| member[a] = true);
    let mut edges = Vec::new();
    for s in std::iter::once(ego).chain(alters.iter().copied()) {
        for &(t, w) in g.out_edges(s) {
            if member[t] {
                edges.push(Edge {
                    source: s,
                    target: t,
                    weight: w,
                });
            }
        }
    }
    edges.sort();
    let size = alters.len() + 1;
    let density = if size <= 1 {
        0.0
    } else {
        edges.len() as f64 / (size * (size - 1)) as f64
    };
    EgoNetwork {
        ego,
        alters,
        edges,
        size,
        density,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn view(n: usize, edges: &[(NodeId, NodeId)]) -> UndirectedView {
        let e: Vec<_> = edges.iter().map(|&(a, b)| (a, b, 1)).collect();
        UndirectedView::from_edges(n, &e).unwrap()
    }

    #[test]
    fn complete_graph_one_clique() {
        let u = view(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let r = maximal_cliques(&u, 3).unwrap();
        assert_eq!(r.cliques, vec![vec![0, 1, 2, 3]]);
        assert_eq!(r.max_clique_size, 4);
    }

    #[test]
    fn pendant_filtered_by_min_size() {
        let u = view(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        assert_eq!(maximal_cliques(&u, 3).unwrap().cliques, vec![vec![0, 1, 2]]);
        assert_eq!(
            maximal_cliques(&u, 2).unwrap().cliques,
            vec![vec![0, 1, 2], vec![2, 3]]
        );
    }

    #[test]
    fn edgeless_graph() {
        let u = view(3, &[]);
        assert_eq!(
            maximal_cliques(&u, 1).unwrap().cliques,
            vec![vec![0], vec![1], vec![2]]
        );
        assert!(maximal_cliques(&u, 2).unwrap().cliques.is_empty());
        assert!(maximal_cliques(&u, 0).is_err());
    }

    #[test]
    fn comembership_shared_edge() {
        let u = view(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]);
        let r = maximal_cliques(&u, 3).unwrap();
        let m = clique_comembership(&r, 5);
        assert_eq!(m.get(0, 1), 2);
        assert_eq!(m.get(2, 3), 0);
        assert_eq!(m.get(0, 0), 2);
        assert_eq!(m.get(4, 0), 0);
        assert_eq!(m.max_pair(), Some(((0, 1), 2)));
    }

    #[test]
    fn participation_examples() {
        // Clique {0,1,2,3}; node 4 touches 0 and 1; node 5 touches nothing.
        let u = view(
            6,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 0), (4, 1)],
        );
        let r = maximal_cliques(&u, 4).unwrap();
        let p = clique_participation(&r, &u);
        assert_eq!(p.score(0, 0), 1.0);
        assert_eq!(p.score(4, 0), 0.5);
        assert_eq!(p.score(5, 0), 0.0);
    }

    #[test]
    fn singleton_clique_participation() {
        let u = view(2, &[]);
        let r = maximal_cliques(&u, 1).unwrap();
        let p = clique_participation(&r, &u);
        assert_eq!(p.score(0, 0), 1.0);
        assert_eq!(p.score(1, 0), 0.0);
    }

    #[test]
    fn ego_of_star() {
        let g = MentionGraph::new(
            ["c", "l1", "l2", "l3"],
            [("l1", "c", 1), ("c", "l2", 1), ("l3", "c", 2)],
        )
        .unwrap();
        let e = ego_network(&g, "c").unwrap();
        assert_eq!(e.size, 4);
        assert_eq!(e.edges.len(), 3);
        assert_eq!(e.density, 3.0 / 12.0);

        let leaf = ego_network(&g, "l1").unwrap();
        assert_eq!(leaf.members(), vec![0, 1]);
        assert_eq!(leaf.edges.len(), 1);
        assert_eq!(leaf.to_graph(&g).unwrap().edge_count(), 1);

        assert!(matches!(ego_network(&g, "nobody"), Err(Error::UnknownNode(n)) if n == "nobody"));
    }

    #[test]
    fn degeneracy_order_is_permutation() {
        let u = view(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (0, 5)]);
        let adj: Vec<Vec<NodeId>> = (0..6)
            .map(|v| u.neighbors(v).iter().map(|e| e.0).collect())
            .collect();
        let mut order = degeneracy_order(&adj);
        order.sort();
        assert_eq!(order, (0..6).collect::<Vec<_>>());
    }
}
