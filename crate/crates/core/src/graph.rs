//! Mention network storage, extraction and basic statistics.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{fold_nick, ChatCorpus, Roster};

/// Dense node index. Ids follow the sorted order of the canonical nicks.
pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub weight: u64,
}

/// Directed weighted graph of who addressed whom.
///
/// Nodes are kept sorted by nick, so every id-ordered traversal is also
/// nick-ordered. There are no self-loops and at most one edge per ordered
/// pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionGraph {
    nicks: Vec<String>,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<(NodeId, u64)>>,
    in_adj: Vec<Vec<(NodeId, u64)>>,
}

impl MentionGraph {
    /// Builds a graph from named nodes and named edges. Every edge endpoint
    /// must also be listed as a node.
    pub fn new<N, S, E, T>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator<Item = S>,
        S: Into<String>,
        E: IntoIterator<Item = (T, T, u64)>,
        T: AsRef<str>,
    {
        let nicks: BTreeSet<String> = nodes.into_iter().map(Into::into).collect();
        let nicks: Vec<String> = nicks.into_iter().collect();
        let id = |s: &str| {
            nicks
                .binary_search_by(|n| n.as_str().cmp(s))
                .map_err(|_| Error::UnknownNode(s.to_string()))
        };
        let mut indexed = Vec::new();
        for (s, t, w) in edges {
            indexed.push((id(s.as_ref())?, id(t.as_ref())?, w));
        }
        Self::from_parts(nicks, indexed)
    }

    /// Builds a graph on `n` anonymous nodes named `v000`, `v001`, ... so that
    /// name order matches index order.
    pub fn from_indexed(n: usize, edges: &[(NodeId, NodeId, u64)]) -> Result<Self> {
        let width = n.saturating_sub(1).to_string().len().max(3);
        let nicks = (0..n).map(|i| format!("v{i:0width$}")).collect();
        Self::from_parts(nicks, edges.to_vec())
    }

    fn from_parts(nicks: Vec<String>, raw: Vec<(NodeId, NodeId, u64)>) -> Result<Self> {
        let n = nicks.len();
        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(raw.len());
        for (s, t, w) in raw {
            if s >= n || t >= n {
                return Err(Error::InvalidGraph(format!("edge ({s}, {t}) out of range")));
            }
            if s == t {
                return Err(Error::InvalidGraph(format!("self-loop on {:?}", nicks[s])));
            }
            if w == 0 {
                return Err(Error::InvalidGraph(format!(
                    "zero weight on {:?} -> {:?}",
                    nicks[s], nicks[t]
                )));
            }
            if !seen.insert((s, t)) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {:?} -> {:?}",
                    nicks[s], nicks[t]
                )));
            }
            edges.push(Edge {
                source: s,
                target: t,
                weight: w,
            });
        }
        edges.sort();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for e in &edges {
            out_adj[e.source].push((e.target, e.weight));
            in_adj[e.target].push((e.source, e.weight));
        }
        for a in &mut in_adj {
            a.sort_unstable();
        }
        Ok(MentionGraph {
            nicks,
            edges,
            out_adj,
            in_adj,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nicks.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nicks(&self) -> &[String] {
        &self.nicks
    }

    pub fn nick(&self, id: NodeId) -> &str {
        &self.nicks[id]
    }

    pub fn node_id(&self, nick: &str) -> Option<NodeId> {
        let find = |s: &str| self.nicks.binary_search_by(|n| n.as_str().cmp(s)).ok();
        find(nick).or_else(|| find(&fold_nick(nick)))
    }

    /// Edges sorted by (source, target).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Out-neighbors of `v` with weights, sorted by id.
    pub fn out_edges(&self, v: NodeId) -> &[(NodeId, u64)] {
        &self.out_adj[v]
    }

    /// In-neighbors of `v` with weights, sorted by id.
    pub fn in_edges(&self, v: NodeId) -> &[(NodeId, u64)] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_adj[v].len()
    }

    pub fn weight(&self, source: NodeId, target: NodeId) -> Option<u64> {
        let adj = &self.out_adj[source];
        adj.binary_search_by_key(&target, |&(t, _)| t)
            .ok()
            .map(|i| adj[i].1)
    }

    /// Union of in- and out-neighbors, sorted.
    pub fn neighbors(&self, v: NodeId) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self.out_adj[v]
            .iter()
            .chain(&self.in_adj[v])
            .map(|&(u, _)| u)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Same nodes, every weight replaced by `f(weight)`.
    pub fn map_weights(&self, f: impl Fn(u64) -> u64) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| (e.source, e.target, f(e.weight)))
            .collect();
        Self::from_parts(self.nicks.clone(), edges)
    }

    /// Symmetric view with w(u,v) = w(u->v) + w(v->u).
    pub fn to_undirected(&self) -> UndirectedView {
        let mut acc: BTreeMap<(NodeId, NodeId), u64> = BTreeMap::new();
        for e in &self.edges {
            let key = (e.source.min(e.target), e.source.max(e.target));
            *acc.entry(key).or_default() += e.weight;
        }
        UndirectedView::from_sorted(self.node_count(), acc)
    }

    /// Undirected view keeping only reciprocated pairs.
    pub fn to_mutual_undirected(&self) -> UndirectedView {
        let mut acc = BTreeMap::new();
        for e in self.edges.iter().filter(|e| e.source < e.target) {
            if let Some(back) = self.weight(e.target, e.source) {
                acc.insert((e.source, e.target), e.weight + back);
            }
        }
        UndirectedView::from_sorted(self.node_count(), acc)
    }
}

/// Undirected, weighted companion of a [`MentionGraph`] on the same node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedView {
    edges: Vec<(NodeId, NodeId, u64)>,
    adj: Vec<Vec<(NodeId, u64)>>,
}

impl UndirectedView {
    /// Builds a view from arbitrary pairs; both orientations of a pair are
    /// merged by summing their weights.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId, u64)]) -> Result<Self> {
        let mut acc = BTreeMap::new();
        for &(u, v, w) in edges {
            if u >= n || v >= n || u == v || w == 0 {
                return Err(Error::InvalidGraph(format!(
                    "bad undirected edge ({u}, {v}, {w})"
                )));
            }
            *acc.entry((u.min(v), u.max(v))).or_default() += w;
        }
        Ok(Self::from_sorted(n, acc))
    }

    fn from_sorted(n: usize, acc: BTreeMap<(NodeId, NodeId), u64>) -> Self {
        let mut adj = vec![Vec::new(); n];
        let edges: Vec<_> = acc.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        for &(u, v, w) in &edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        UndirectedView { edges, adj }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(low, high, weight)`, sorted.
    pub fn edges(&self) -> &[(NodeId, NodeId, u64)] {
        &self.edges
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, u64)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<u64> {
        let adj = &self.adj[u];
        adj.binary_search_by_key(&v, |&(x, _)| x).ok().map(|i| adj[i].1)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.weight(u, v).is_some()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &(u, _) in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Options controlling which tokens count as addressing someone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractOptions {
    /// Nicks shorter than this (in characters) are never matched.
    pub min_nick_len: usize,
    /// Extra nicks excluded from matching (compared case-folded).
    pub ignore_nicks: Vec<String>,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            min_nick_len: 3,
            ignore_nicks: Vec::new(),
        }
    }
}

/// Characters that may appear inside an IRC nickname.
pub fn is_nick_char(c: char) -> bool {
    c.is_alphanumeric() || "_-[]\\`^{}|".contains(c)
}

/// Case-folded tokens of `body`, split on non-nick characters.
pub fn nick_tokens(body: &str) -> impl Iterator<Item = String> + '_ {
    body.split(|c: char| !is_nick_char(c))
        .filter(|t| !t.is_empty())
        .map(fold_nick)
}

/// Builds the mention network: for every user message, each distinct
/// roster nick appearing as a token in the body adds weight 1 to the edge
/// sender -> nick. Self-mentions are ignored.
pub fn extract_network(
    corpus: &ChatCorpus,
    roster: &Roster,
    opts: &ExtractOptions,
) -> Result<MentionGraph> {
    if roster.is_empty() {
        return Err(Error::NoParticipants);
    }
    let nicks: Vec<String> = roster.nicks().map(str::to_string).collect();
    let ids: HashMap<&str, NodeId> = nicks.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let ignored: HashSet<String> = opts.ignore_nicks.iter().map(|n| fold_nick(n)).collect();
    let matchable: HashMap<&str, NodeId> = ids
        .iter()
        .filter(|(n, _)| n.chars().count() >= opts.min_nick_len && !ignored.contains(**n))
        .map(|(n, &i)| (*n, i))
        .collect();

    let messages: Vec<_> = corpus.user_messages().collect();
    let pairs: Vec<(NodeId, NodeId)> = messages
        .par_iter()
        .flat_map_iter(|m| {
            let Some(&s) = ids.get(fold_nick(&m.nick).as_str()) else {
                return Vec::new();
            };
            let targets: BTreeSet<NodeId> = nick_tokens(&m.body)
                .filter_map(|tok| matchable.get(tok.as_str()).copied())
                .filter(|&t| t != s)
                .collect();
            targets.into_iter().map(|t| (s, t)).collect()
        })
        .collect();

    let mut weights: BTreeMap<(NodeId, NodeId), u64> = BTreeMap::new();
    for p in pairs {
        *weights.entry(p).or_default() += 1;
    }
    MentionGraph::from_parts(
        nicks,
        weights.into_iter().map(|((s, t), w)| (s, t, w)).collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub min: usize,
    pub mean: f64,
    pub max: usize,
}

impl DegreeSummary {
    fn of(degrees: impl Iterator<Item = usize>) -> Self {
        let (mut min, mut max, mut sum, mut n) = (usize::MAX, 0, 0, 0);
        for d in degrees {
            min = min.min(d);
            max = max.max(d);
            sum += d;
            n += 1;
        }
        if n == 0 {
            return DegreeSummary {
                min: 0,
                mean: 0.0,
                max: 0,
            };
        }
        DegreeSummary {
            min,
            mean: sum as f64 / n as f64,
            max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub total_weight: u64,
    pub density: f64,
    pub in_degree: DegreeSummary,
    pub out_degree: DegreeSummary,
}

pub fn stats(g: &MentionGraph) -> GraphStats {
    let n = g.node_count();
    let m = g.edge_count();
    let density = if n <= 1 {
        0.0
    } else {
        m as f64 / (n as f64 * (n - 1) as f64)
    };
    GraphStats {
        node_count: n,
        edge_count: m,
        total_weight: g.edges().iter().map(|e| e.weight).sum(),
        density,
        in_degree: DegreeSummary::of((0..n).map(|v| g.in_degree(v))),
        out_degree: DegreeSummary::of((0..n).map(|v| g.out_degree(v))),
    }
}

/// Writes the canonical `source,target,weight` edge list, sorted by nick.
/// Nodes without any edge are written as `nick,,` so the node set survives
/// a round trip.
pub fn write_csv<W: Write>(g: &MentionGraph, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut rows: Vec<(&str, &str, String)> = g
        .edges()
        .iter()
        .map(|e| (g.nick(e.source), g.nick(e.target), e.weight.to_string()))
        .collect();
    for v in 0..g.node_count() {
        if g.in_degree(v) == 0 && g.out_degree(v) == 0 {
            rows.push((g.nick(v), "", String::new()));
        }
    }
    rows.sort();
    wtr.write_record(["source", "target", "weight"])
        .map_err(csv_err)?;
    for (s, t, w) in rows {
        wtr.write_record([s, t, w.as_str()]).map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format {
            what: "graph csv",
            line: 0,
            message: format!("{other:?}"),
        },
    }
}

/// Reads a graph written by [`write_csv`].
pub fn read_csv<R: Read>(r: R) -> Result<MentionGraph> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != ["source", "target", "weight"] {
        return Err(Error::Format {
            what: "graph csv",
            line: 1,
            message: "expected header `source,target,weight`".into(),
        });
    }
    let mut nodes = BTreeSet::new();
    let mut edges = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = i + 2;
        let bad = |message: String| Error::Format {
            what: "graph csv",
            line,
            message,
        };
        if rec.len() != 3 {
            return Err(bad(format!("expected 3 fields, found {}", rec.len())));
        }
        let (s, t, w) = (&rec[0], &rec[1], &rec[2]);
        if s.is_empty() {
            return Err(bad("empty source".into()));
        }
        nodes.insert(s.to_string());
        if t.is_empty() && w.is_empty() {
            continue;
        }
        let w: u64 = w.parse().map_err(|e| bad(format!("weight {w:?}: {e}")))?;
        nodes.insert(t.to_string());
        edges.push((s.to_string(), t.to_string(), w));
    }
    MentionGraph::new(nodes, edges)
}
