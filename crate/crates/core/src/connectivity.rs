//! Cutpoints and blocks, pairwise edge connectivity, Gomory–Hu trees and
//! lambda sets.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, UndirectedView};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub cutpoints: Vec<NodeId>,
    /// Sorted members; blocks ordered by size (largest first) then members.
    pub blocks: Vec<Vec<NodeId>>,
    pub largest_block_size: usize,
}

const UNSEEN: usize = usize::MAX;

/// Articulation points and biconnected components from one depth-first
/// search with low points. Isolated nodes are singleton blocks.
pub fn articulation_points_and_blocks(u: &UndirectedView) -> BlockReport {
    let n = u.node_count();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut timer = 0;
    let mut edge_stack: Vec<(NodeId, NodeId)> = Vec::new();
    let mut blocks: Vec<Vec<NodeId>> = Vec::new();

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        if u.degree(root) == 0 {
            blocks.push(vec![root]);
            continue;
        }
        let mut root_children = 0;
        // (node, parent, next neighbor index)
        let mut frames: Vec<(NodeId, NodeId, usize)> = vec![(root, UNSEEN, 0)];
        while let Some(&(v, parent, i)) = frames.last() {
            if let Some(&(w, _)) = u.neighbors(v).get(i) {
                frames.last_mut().expect("frame").2 += 1;
                if disc[w] == UNSEEN {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    edge_stack.push((v, w));
                    if v == root {
                        root_children += 1;
                    }
                    frames.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }
            frames.pop();
            if parent == UNSEEN {
                continue;
            }
            low[parent] = low[parent].min(low[v]);
            if low[v] >= disc[parent] {
                if parent != root {
                    is_cut[parent] = true;
                }
                let mut block = Vec::new();
                while let Some((a, b)) = edge_stack.pop() {
                    block.push(a);
                    block.push(b);
                    if (a, b) == (parent, v) {
                        break;
                    }
                }
                block.sort_unstable();
                block.dedup();
                blocks.push(block);
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    blocks.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    BlockReport {
        cutpoints: (0..n).filter(|&v| is_cut[v]).collect(),
        largest_block_size: blocks.first().map_or(0, Vec::len),
        blocks,
    }
}

/// How edges are turned into flow capacities.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityMode {
    /// Every edge has capacity 1.
    #[default]
    Unit,
    /// Capacity = edge weight.
    Weighted,
}

/// Undirected flow network solved with Dinic's algorithm. Each undirected
/// edge becomes a pair of opposite arcs sharing residual capacity.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<NodeId>,
    initial: Vec<u64>,
    residual: Vec<u64>,
    level: Vec<usize>,
    next: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(u: &UndirectedView, mode: CapacityMode) -> Self {
        let n = u.node_count();
        let mut adj = vec![Vec::new(); n];
        let mut to = Vec::with_capacity(2 * u.edge_count());
        let mut initial = Vec::with_capacity(2 * u.edge_count());
        for &(a, b, w) in u.edges() {
            let c = match mode {
                CapacityMode::Unit => 1,
                CapacityMode::Weighted => w,
            };
            adj[a].push(to.len());
            to.push(b);
            initial.push(c);
            adj[b].push(to.len());
            to.push(a);
            initial.push(c);
        }
        FlowNetwork {
            adj,
            to,
            residual: initial.clone(),
            initial,
            level: vec![0; n],
            next: vec![0; n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn bfs(&mut self, s: NodeId, t: NodeId) -> bool {
        self.level.fill(UNSEEN);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &arc in &self.adj[v] {
                let w = self.to[arc];
                if self.residual[arc] > 0 && self.level[w] == UNSEEN {
                    self.level[w] = self.level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[t] != UNSEEN
    }

    fn dfs(&mut self, v: NodeId, t: NodeId, limit: u64) -> u64 {
        if v == t {
            return limit;
        }
        while self.next[v] < self.adj[v].len() {
            let arc = self.adj[v][self.next[v]];
            let w = self.to[arc];
            if self.residual[arc] > 0 && self.level[w] == self.level[v] + 1 {
                let pushed = self.dfs(w, t, limit.min(self.residual[arc]));
                if pushed > 0 {
                    self.residual[arc] -= pushed;
                    self.residual[arc ^ 1] += pushed;
                    return pushed;
                }
            }
            self.next[v] += 1;
        }
        0
    }

    /// Maximum s-t flow from a fresh (zero-flow) state.
    pub fn max_flow(&mut self, s: NodeId, t: NodeId) -> u64 {
        self.residual.copy_from_slice(&self.initial);
        if s == t {
            return 0;
        }
        let mut flow = 0;
        while self.bfs(s, t) {
            self.next.fill(0);
            loop {
                let pushed = self.dfs(s, t, u64::MAX);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }

    /// Nodes reachable from `s` in the residual network of the last
    /// [`max_flow`](Self::max_flow) call: the source side of a minimum cut.
    pub fn source_side(&self, s: NodeId) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &arc in &self.adj[v] {
                let w = self.to[arc];
                if self.residual[arc] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// λ(a, b): the maximum flow, equivalently the minimum cut, between a and b.
pub fn edge_connectivity(u: &UndirectedView, a: NodeId, b: NodeId, mode: CapacityMode) -> Result<u64> {
    let n = u.node_count();
    if a >= n || b >= n {
        return Err(Error::UnknownNode(format!("#{}", a.max(b))));
    }
    if a == b {
        return Err(Error::InvalidParameter(
            "edge connectivity needs two distinct nodes".into(),
        ));
    }
    Ok(FlowNetwork::new(u, mode).max_flow(a, b))
}

/// Cut tree over every connected component (a forest overall).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GomoryHuTree {
    /// Tree parent of each node; `None` for component roots.
    pub parent: Vec<Option<NodeId>>,
    /// Capacity of the edge to the parent (0 for roots).
    pub capacity: Vec<u64>,
    pub mode: CapacityMode,
}

impl GomoryHuTree {
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Tree edges as `(child, parent, capacity)`.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, u64)> {
        (0..self.node_count())
            .filter_map(|v| self.parent[v].map(|p| (v, p, self.capacity[v])))
            .collect()
    }

    fn depths(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut depth = vec![UNSEEN; n];
        for start in 0..n {
            let mut path = Vec::new();
            let mut v = start;
            while depth[v] == UNSEEN {
                path.push(v);
                match self.parent[v] {
                    Some(p) => v = p,
                    None => {
                        depth[v] = 0;
                        path.pop();
                        break;
                    }
                }
            }
            while let Some(w) = path.pop() {
                depth[w] = depth[self.parent[w].expect("non-root")] + 1;
            }
        }
        depth
    }

    /// Minimum capacity on the tree path between `a` and `b`; 0 across
    /// components. Panics if `a == b`.
    pub fn min_cut(&self, a: NodeId, b: NodeId) -> u64 {
        let depth = self.depths();
        self.min_cut_with(&depth, a, b)
    }

    fn min_cut_with(&self, depth: &[usize], mut a: NodeId, mut b: NodeId) -> u64 {
        assert_ne!(a, b, "min_cut needs two distinct nodes");
        let mut best = u64::MAX;
        while a != b {
            if depth[a] < depth[b] {
                std::mem::swap(&mut a, &mut b);
            }
            match self.parent[a] {
                Some(p) => {
                    best = best.min(self.capacity[a]);
                    a = p;
                }
                None => return 0,
            }
        }
        best
    }

    /// λ for many pairs at once.
    pub fn min_cuts(&self, pairs: &[(NodeId, NodeId)]) -> Vec<u64> {
        let depth = self.depths();
        pairs
            .iter()
            .map(|&(a, b)| self.min_cut_with(&depth, a, b))
            .collect()
    }

    /// Dense all-pairs λ matrix (diagonal 0).
    pub fn all_pairs(&self) -> Vec<Vec<u64>> {
        let n = self.node_count();
        let mut adj = vec![Vec::new(); n];
        for (c, p, cap) in self.edges() {
            adj[c].push((p, cap));
            adj[p].push((c, cap));
        }
        let mut out = vec![vec![0; n]; n];
        for s in 0..n {
            let mut stack = vec![(s, u64::MAX)];
            let mut seen = vec![false; n];
            seen[s] = true;
            while let Some((v, m)) = stack.pop() {
                if v != s {
                    out[s][v] = m;
                }
                for &(w, c) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push((w, m.min(c)));
                    }
                }
            }
        }
        out
    }
}

/// Gusfield's construction: one max-flow per non-root node, no contraction.
/// Runs independently on every connected component.
pub fn gomory_hu(u: &UndirectedView, mode: CapacityMode) -> GomoryHuTree {
    let n = u.node_count();
    let mut net = FlowNetwork::new(u, mode);
    let mut parent: Vec<Option<NodeId>> = vec![None; n];
    let mut capacity = vec![0; n];
    for comp in u.components() {
        let root = comp[0];
        for &v in &comp[1..] {
            parent[v] = Some(root);
        }
        for &s in &comp[1..] {
            let t = parent[s].expect("non-root");
            let flow = net.max_flow(s, t);
            let side = net.source_side(s);
            capacity[s] = flow;
            for &i in &comp {
                if i != s && side[i] && parent[i] == Some(t) {
                    parent[i] = Some(s);
                }
            }
            if let Some(pt) = parent[t] {
                if side[pt] {
                    parent[s] = Some(pt);
                    parent[t] = Some(s);
                    capacity[s] = capacity[t];
                    capacity[t] = flow;
                }
            }
        }
    }
    GomoryHuTree {
        parent,
        capacity,
        mode,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaLevel {
    pub lambda: u64,
    /// Sorted member lists, ordered by size (largest first) then members.
    pub sets: Vec<Vec<NodeId>>,
}

/// Lambda sets at every distinct connectivity value, strongest first. Each
/// set at one level lies inside exactly one set of every lower level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaHierarchy {
    pub levels: Vec<LambdaLevel>,
    pub mode: CapacityMode,
}

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Groups nodes by the components of the cut tree restricted to edges of
/// capacity >= k, for each distinct positive k. Those components are exactly
/// the sets whose internal connectivity exceeds their connectivity to the
/// rest of the graph.
pub fn lambda_sets_from_tree(tree: &GomoryHuTree) -> LambdaHierarchy {
    let n = tree.node_count();
    let mut edges: Vec<(NodeId, NodeId, u64)> = tree.edges().into_iter().filter(|e| e.2 > 0).collect();
    edges.sort_by(|a, b| b.2.cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    let mut dsu = DisjointSets::new(n);
    let mut levels = Vec::new();
    let mut i = 0;
    while i < edges.len() {
        let k = edges[i].2;
        while i < edges.len() && edges[i].2 == k {
            dsu.union(edges[i].0, edges[i].1);
            i += 1;
        }
        let mut groups: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for v in 0..n {
            let r = dsu.find(v);
            groups[r].push(v);
        }
        let mut sets: Vec<Vec<NodeId>> = groups.into_iter().filter(|g| g.len() >= 2).collect();
        sets.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        levels.push(LambdaLevel { lambda: k, sets });
    }
    LambdaHierarchy {
        levels,
        mode: tree.mode,
    }
}

pub fn lambda_sets(u: &UndirectedView, mode: CapacityMode) -> LambdaHierarchy {
    lambda_sets_from_tree(&gomory_hu(u, mode))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopLink {
    pub a: NodeId,
    pub b: NodeId,
    /// Weighted edge connectivity between the endpoints.
    pub score: u64,
    pub weight: u64,
}

/// Edges ranked by the weighted connectivity of their endpoints; ties go to
/// the heavier edge, then to the lexicographically smaller pair.
pub fn top_links_from_tree(u: &UndirectedView, tree: &GomoryHuTree, k: usize) -> Vec<TopLink> {
    let pairs: Vec<(NodeId, NodeId)> = u.edges().iter().map(|&(a, b, _)| (a, b)).collect();
    let scores = tree.min_cuts(&pairs);
    let mut links: Vec<TopLink> = u
        .edges()
        .iter()
        .zip(scores)
        .map(|(&(a, b, weight), score)| TopLink { a, b, score, weight })
        .collect();
    links.sort_by(|x, y| {
        y.score
            .cmp(&x.score)
            .then(y.weight.cmp(&x.weight))
            .then((x.a, x.b).cmp(&(y.a, y.b)))
    });
    links.truncate(k);
    links
}

pub fn top_links(u: &UndirectedView, k: usize) -> Result<Vec<TopLink>> {
    if k == 0 {
        return Err(Error::InvalidParameter("top_links needs k >= 1".into()));
    }
    Ok(top_links_from_tree(u, &gomory_hu(u, CapacityMode::Weighted), k))
}
