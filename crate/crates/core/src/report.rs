//! The consolidated analysis report and its Markdown rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::AnalysisConfig;
use crate::connectivity::CapacityMode;
use crate::equivalence::RoleCaseReport;
use crate::graph::GraphStats;
use crate::skeleton::{CompositionEntry, SkeletonLabel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: "chatnet".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedNode {
    pub nick: String,
    pub authority: f64,
    pub hub: f64,
    pub indegree: usize,
    pub outdegree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralitySection {
    pub weighted: bool,
    pub iterations_used: usize,
    pub converged: bool,
    pub top_authorities: Vec<RankedNode>,
    pub top_hubs: Vec<RankedNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkeletonSection {
    pub core_size: usize,
    pub bowtie: Vec<CompositionEntry>,
    pub skeleton: Vec<CompositionEntry>,
    /// Row and column order of the link matrices.
    pub link_order: Vec<SkeletonLabel>,
    pub links: [[u64; 4]; 4],
    pub weighted_links: [[u64; 4]; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCount {
    pub size: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCount {
    pub a: String,
    pub b: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohesionSection {
    pub mutual_only: bool,
    pub min_size: usize,
    pub clique_count: usize,
    pub max_clique_size: usize,
    /// Largest size first.
    pub size_histogram: Vec<SizeCount>,
    pub top_comemberships: Vec<PairCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedLambdaLevel {
    pub lambda: u64,
    pub sets: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedLink {
    pub a: String,
    pub b: String,
    pub score: u64,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivitySection {
    pub cutpoint_count: usize,
    pub block_count: usize,
    pub largest_block_size: usize,
    pub cutpoints: Vec<String>,
    pub lambda_mode: CapacityMode,
    pub lambda_levels: Vec<NamedLambdaLevel>,
    pub top_links: Vec<NamedLink>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceSection {
    pub iterations: usize,
    pub binarized: bool,
    pub threshold: f64,
    pub roles: RoleCaseReport,
}

/// One optional section per analysis; disabled analyses are absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub config: AnalysisConfig,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stats: Option<GraphStats>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub centrality: Option<CentralitySection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub skeleton: Option<SkeletonSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cohesion: Option<CohesionSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub connectivity: Option<ConnectivitySection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub equivalence: Option<EquivalenceSection>,
}

impl AnalysisReport {
    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> crate::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Names of the sections present, in report order.
    pub fn sections(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.stats.is_some() {
            out.push("stats");
        }
        if self.centrality.is_some() {
            out.push("centrality");
        }
        if self.skeleton.is_some() {
            out.push("skeleton");
        }
        if self.cohesion.is_some() {
            out.push("cohesion");
        }
        if self.connectivity.is_some() {
            out.push("connectivity");
        }
        if self.equivalence.is_some() {
            out.push("equivalence");
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut md = String::new();
        let _ = writeln!(md, "# Chat network report\n");
        let _ = writeln!(md, "Generated by {} {}.\n", self.tool.name, self.tool.version);

        if let Some(s) = &self.stats {
            let _ = writeln!(md, "## Graph\n");
            let _ = writeln!(md, "| measure | value |\n|---|---|");
            let _ = writeln!(md, "| nodes | {} |", s.node_count);
            let _ = writeln!(md, "| edges | {} |", s.edge_count);
            let _ = writeln!(md, "| total weight | {} |", s.total_weight);
            let _ = writeln!(md, "| density | {:.6} |", s.density);
            let _ = writeln!(
                md,
                "| in-degree min/mean/max | {}/{:.3}/{} |",
                s.in_degree.min, s.in_degree.mean, s.in_degree.max
            );
            let _ = writeln!(
                md,
                "| out-degree min/mean/max | {}/{:.3}/{} |\n",
                s.out_degree.min, s.out_degree.mean, s.out_degree.max
            );
        }

        if let Some(c) = &self.centrality {
            let _ = writeln!(md, "## Hubs and authorities\n");
            let _ = writeln!(
                md,
                "{} iterations, converged: {}.\n",
                c.iterations_used, c.converged
            );
            for (title, rows) in [("Top authorities", &c.top_authorities), ("Top hubs", &c.top_hubs)] {
                let _ = writeln!(md, "### {title}\n");
                let _ = writeln!(md, "| nick | authority | hub | in | out |\n|---|---|---|---|---|");
                for r in rows {
                    let _ = writeln!(
                        md,
                        "| {} | {:.6} | {:.6} | {} | {} |",
                        r.nick, r.authority, r.hub, r.indegree, r.outdegree
                    );
                }
                md.push('\n');
            }
        }

        if let Some(s) = &self.skeleton {
            let _ = writeln!(md, "## Structure\n");
            let _ = writeln!(md, "Core size: {}.\n", s.core_size);
            for (title, rows) in [("Bow-tie", &s.bowtie), ("Skeleton", &s.skeleton)] {
                let _ = writeln!(md, "### {title}\n");
                let _ = writeln!(md, "| component | nodes | % |\n|---|---|---|");
                for r in rows {
                    let _ = writeln!(md, "| {} | {} | {:.2} |", r.label, r.nodes, r.percent);
                }
                md.push('\n');
            }
            for (title, m) in [("Links", &s.links), ("Weighted links", &s.weighted_links)] {
                let _ = writeln!(md, "### {title}\n");
                let _ = writeln!(md, "| from \\ to | A | B | C | D |\n|---|---|---|---|---|");
                for (label, row) in s.link_order.iter().zip(m) {
                    let _ = writeln!(md, "| {label} | {} | {} | {} | {} |", row[0], row[1], row[2], row[3]);
                }
                md.push('\n');
            }
        }

        if let Some(c) = &self.cohesion {
            let _ = writeln!(md, "## Cliques\n");
            let _ = writeln!(
                md,
                "{} maximal cliques of size >= {}, largest {}.\n",
                c.clique_count, c.min_size, c.max_clique_size
            );
            if !c.size_histogram.is_empty() {
                let _ = writeln!(md, "| size | cliques |\n|---|---|");
                for h in &c.size_histogram {
                    let _ = writeln!(md, "| {} | {} |", h.size, h.count);
                }
                md.push('\n');
            }
            if !c.top_comemberships.is_empty() {
                let _ = writeln!(md, "| pair | shared cliques |\n|---|---|");
                for p in &c.top_comemberships {
                    let _ = writeln!(md, "| {} - {} | {} |", p.a, p.b, p.count);
                }
                md.push('\n');
            }
        }

        if let Some(c) = &self.connectivity {
            let _ = writeln!(md, "## Connectivity\n");
            let _ = writeln!(
                md,
                "{} blocks and {} cutpoints; largest block has {} nodes.\n",
                c.block_count, c.cutpoint_count, c.largest_block_size
            );
            if !c.lambda_levels.is_empty() {
                let _ = writeln!(md, "| lambda | sets | largest |\n|---|---|---|");
                for l in &c.lambda_levels {
                    let largest = l.sets.iter().map(Vec::len).max().unwrap_or(0);
                    let _ = writeln!(md, "| {} | {} | {} |", l.lambda, l.sets.len(), largest);
                }
                md.push('\n');
            }
            if !c.top_links.is_empty() {
                let _ = writeln!(md, "| link | lambda | weight |\n|---|---|---|");
                for l in &c.top_links {
                    let _ = writeln!(md, "| {} - {} | {} | {} |", l.a, l.b, l.score, l.weight);
                }
                md.push('\n');
            }
        }

        if let Some(e) = &self.equivalence {
            let _ = writeln!(md, "## Roles\n");
            let _ = writeln!(
                md,
                "REGE with {} iterations, equivalence threshold {}.\n",
                e.iterations, e.threshold
            );
            let _ = writeln!(
                md,
                "| component | members | T | P | case | characteristics |\n|---|---|---|---|---|---|"
            );
            for c in &e.roles.components {
                match (c.mean_tie_fraction, c.people_fraction, c.case) {
                    (Some(t), Some(p), Some(case)) => {
                        let _ = writeln!(
                            md,
                            "| {} | {} | {:.3} | {:.3} | {:?} | {} |",
                            c.component,
                            c.members,
                            t,
                            p,
                            case,
                            c.characteristics.as_deref().unwrap_or("")
                        );
                    }
                    _ => {
                        let _ = writeln!(md, "| {} | 0 | - | - | - | empty |", c.component);
                    }
                }
            }
            md.push('\n');
        }
        md
    }
}
