//! Bow-tie decomposition and the four-part A/B/C/D network skeleton.
//!
//! Both partitions share one core: the largest strongly connected
//! component, ties going to the component holding the smallest nick.
//!
//! The A/B/C/D rule outside the core is an operational reading of the
//! four-component skeleton: C holds pure senders (no in-links, some
//! out-links), B pure receivers, and D everything else including isolates.
//! This makes C and B edgeless internally by construction.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MentionGraph, NodeId};

const UNVISITED: usize = usize::MAX;

/// Maximal strongly connected components (iterative Tarjan). Each component
/// is sorted; components are ordered by their smallest member.
pub fn strongly_connected_components(g: &MentionGraph) -> Vec<Vec<NodeId>> {
    let n = g.node_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut comps = Vec::new();
    let mut calls: Vec<(NodeId, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        calls.push((root, 0));
        while let Some(&(v, pos)) = calls.last() {
            if pos == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let out = g.out_edges(v);
            if let Some(&(w, _)) = out.get(pos) {
                calls.last_mut().expect("frame").1 += 1;
                if index[w] == UNVISITED {
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort_unstable_by_key(|c| c[0]);
    comps
}

/// Largest SCC; among equals, the one containing the smallest node id.
pub fn core_component(g: &MentionGraph) -> Vec<NodeId> {
    strongly_connected_components(g)
        .into_iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BowTieLabel {
    Scc,
    In,
    Out,
    Tubes,
    InTendrils,
    OutTendrils,
    Others,
}

impl BowTieLabel {
    pub const ALL: [BowTieLabel; 7] = [
        BowTieLabel::Scc,
        BowTieLabel::In,
        BowTieLabel::Out,
        BowTieLabel::Tubes,
        BowTieLabel::InTendrils,
        BowTieLabel::OutTendrils,
        BowTieLabel::Others,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BowTieLabel::Scc => "SCC",
            BowTieLabel::In => "IN",
            BowTieLabel::Out => "OUT",
            BowTieLabel::Tubes => "TUBES",
            BowTieLabel::InTendrils => "INTENDRILS",
            BowTieLabel::OutTendrils => "OUTTENDRILS",
            BowTieLabel::Others => "OTHERS",
        }
    }
}

impl fmt::Display for BowTieLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BowTiePartition {
    /// Indexed by node id.
    pub labels: Vec<BowTieLabel>,
    /// The SCC used as the knot, sorted.
    pub core: Vec<NodeId>,
}

/// Marks everything reachable from `sources` (inclusive), following
/// out-edges when `forward` and in-edges otherwise.
fn reach(g: &MentionGraph, sources: impl IntoIterator<Item = NodeId>, forward: bool) -> Vec<bool> {
    let mut seen = vec![false; g.node_count()];
    let mut stack: Vec<NodeId> = Vec::new();
    for s in sources {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        let next = if forward { g.out_edges(v) } else { g.in_edges(v) };
        for &(u, _) in next {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen
}

pub fn bowtie(g: &MentionGraph) -> BowTiePartition {
    let n = g.node_count();
    let core = core_component(g);
    if n == 0 {
        return BowTiePartition {
            labels: Vec::new(),
            core,
        };
    }
    let mut in_core = vec![false; n];
    core.iter().for_each(|&v| in_core[v] = true);
    let from_core = reach(g, core.iter().copied(), true);
    let to_core = reach(g, core.iter().copied(), false);

    let in_set: Vec<NodeId> = (0..n).filter(|&v| to_core[v] && !in_core[v]).collect();
    let out_set: Vec<NodeId> = (0..n).filter(|&v| from_core[v] && !in_core[v]).collect();
    let from_in = reach(g, in_set, true);
    let to_out = reach(g, out_set, false);

    let labels = (0..n)
        .map(|v| {
            if in_core[v] {
                BowTieLabel::Scc
            } else if to_core[v] {
                BowTieLabel::In
            } else if from_core[v] {
                BowTieLabel::Out
            } else {
                match (from_in[v], to_out[v]) {
                    (true, true) => BowTieLabel::Tubes,
                    (true, false) => BowTieLabel::InTendrils,
                    (false, true) => BowTieLabel::OutTendrils,
                    (false, false) => BowTieLabel::Others,
                }
            }
        })
        .collect();
    BowTiePartition { labels, core }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SkeletonLabel {
    A,
    B,
    C,
    D,
}

impl SkeletonLabel {
    pub const ALL: [SkeletonLabel; 4] = [
        SkeletonLabel::A,
        SkeletonLabel::B,
        SkeletonLabel::C,
        SkeletonLabel::D,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SkeletonLabel::A => "A",
            SkeletonLabel::B => "B",
            SkeletonLabel::C => "C",
            SkeletonLabel::D => "D",
        }
    }
}

impl fmt::Display for SkeletonLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonPartition {
    /// Indexed by node id.
    pub labels: Vec<SkeletonLabel>,
}

impl SkeletonPartition {
    pub fn members(&self, label: SkeletonLabel) -> Vec<NodeId> {
        (0..self.labels.len())
            .filter(|&v| self.labels[v] == label)
            .collect()
    }
}

/// A = core SCC; C = pure senders; B = pure receivers; D = the rest.
pub fn abcd_skeleton(g: &MentionGraph) -> SkeletonPartition {
    let n = g.node_count();
    let mut labels = vec![SkeletonLabel::D; n];
    for v in 0..n {
        let (i, o) = (g.in_degree(v), g.out_degree(v));
        if i == 0 && o > 0 {
            labels[v] = SkeletonLabel::C;
        } else if o == 0 && i > 0 {
            labels[v] = SkeletonLabel::B;
        }
    }
    for v in core_component(g) {
        labels[v] = SkeletonLabel::A;
    }
    SkeletonPartition { labels }
}

/// Inter-component link counts, rows = source component, ordered A, B, C, D.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkMatrix {
    pub counts: [[u64; 4]; 4],
    pub weighted: bool,
}

impl LinkMatrix {
    pub fn get(&self, from: SkeletonLabel, to: SkeletonLabel) -> u64 {
        self.counts[from.index()][to.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

/// Tallies edges between components; `weighted` sums edge weights instead
/// of counting edges.
pub fn link_matrix(g: &MentionGraph, p: &SkeletonPartition, weighted: bool) -> Result<LinkMatrix> {
    if p.labels.len() < g.node_count() {
        return Err(Error::MissingLabel(g.nick(p.labels.len()).to_string()));
    }
    let mut m = LinkMatrix {
        counts: [[0; 4]; 4],
        weighted,
    };
    for e in g.edges() {
        let cell = &mut m.counts[p.labels[e.source].index()][p.labels[e.target].index()];
        *cell += if weighted { e.weight } else { 1 };
    }
    Ok(m)
}

/// Share of nodes carrying one label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionEntry {
    pub label: String,
    pub nodes: usize,
    pub percent: f64,
}

pub fn composition<L: Copy + PartialEq + fmt::Display>(labels: &[L], order: &[L]) -> Vec<CompositionEntry> {
    let total = labels.len();
    order
        .iter()
        .map(|&l| {
            let nodes = labels.iter().filter(|&&x| x == l).count();
            CompositionEntry {
                label: l.to_string(),
                nodes,
                percent: if total == 0 {
                    0.0
                } else {
                    100.0 * nodes as f64 / total as f64
                },
            }
        })
        .collect()
}

/// Writes `nick,bowtie_label,skeleton_label` rows.
pub fn write_partition_csv<W: Write>(
    g: &MentionGraph,
    bowtie: &BowTiePartition,
    skeleton: &SkeletonPartition,
    w: W,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(e.into());
    wtr.write_record(["nick", "bowtie_label", "skeleton_label"]).map_err(io)?;
    for v in 0..g.node_count() {
        wtr.write_record([g.nick(v), bowtie.labels[v].as_str(), skeleton.labels[v].as_str()])
            .map_err(io)?;
    }
    wtr.flush()?;
    Ok(())
}
