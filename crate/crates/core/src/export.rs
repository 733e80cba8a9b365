//! Graph exports (DOT, GraphML, CSV) and tabular result files.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::centrality::HitsScores;
use crate::cohesion::CliqueReport;
use crate::connectivity::TopLink;
use crate::error::{Error, Result};
use crate::graph::{write_csv, MentionGraph};
use crate::skeleton::SkeletonLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    GraphMl,
    Csv,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" | "gv" => Ok(ExportFormat::Dot),
            "graphml" => Ok(ExportFormat::GraphMl),
            "csv" => Ok(ExportFormat::Csv),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

/// Optional per-node attributes, each indexed by node id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NodeAttributes {
    pub authority: Option<Vec<f64>>,
    pub hub: Option<Vec<f64>>,
    pub skeleton: Option<Vec<SkeletonLabel>>,
}

impl NodeAttributes {
    pub fn with_hits(mut self, h: &HitsScores) -> Self {
        self.authority = Some(h.authority.clone());
        self.hub = Some(h.hub.clone());
        self
    }

    pub fn with_skeleton(mut self, labels: &[SkeletonLabel]) -> Self {
        self.skeleton = Some(labels.to_vec());
        self
    }

    fn check(&self, n: usize) -> Result<()> {
        let lens = [
            self.authority.as_ref().map(Vec::len),
            self.hub.as_ref().map(Vec::len),
            self.skeleton.as_ref().map(Vec::len),
        ];
        if lens.iter().flatten().any(|&l| l != n) {
            return Err(Error::InvalidParameter(format!(
                "node attributes do not cover the {n} graph nodes"
            )));
        }
        Ok(())
    }
}

const DOT_KEYWORDS: [&str; 6] = ["node", "edge", "graph", "digraph", "subgraph", "strict"];

/// Bare identifier when DOT allows one, quoted string otherwise.
fn dot_id(s: &str) -> String {
    let mut chars = s.chars();
    let bare = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !DOT_KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(s));
    if bare {
        s.to_string()
    } else {
        format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

pub fn to_dot(g: &MentionGraph, attrs: &NodeAttributes) -> Result<String> {
    attrs.check(g.node_count())?;
    let mut out = String::from("digraph mentions {\n");
    for v in 0..g.node_count() {
        let mut a = Vec::new();
        if let Some(x) = &attrs.authority {
            a.push(format!("authority={}", x[v]));
        }
        if let Some(x) = &attrs.hub {
            a.push(format!("hub={}", x[v]));
        }
        if let Some(x) = &attrs.skeleton {
            a.push(format!("skeleton={}", x[v]));
        }
        if a.is_empty() {
            let _ = writeln!(out, "  {};", dot_id(g.nick(v)));
        } else {
            let _ = writeln!(out, "  {} [{}];", dot_id(g.nick(v)), a.join(", "));
        }
    }
    for e in g.edges() {
        let _ = writeln!(
            out,
            "  {} -> {} [weight={}];",
            dot_id(g.nick(e.source)),
            dot_id(g.nick(e.target)),
            e.weight
        );
    }
    out.push_str("}\n");
    Ok(out)
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

pub fn to_graphml(g: &MentionGraph, attrs: &NodeAttributes) -> Result<String> {
    attrs.check(g.node_count())?;
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n  \
         <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n",
    );
    if attrs.authority.is_some() {
        out.push_str("  <key id=\"authority\" for=\"node\" attr.name=\"authority\" attr.type=\"double\"/>\n");
    }
    if attrs.hub.is_some() {
        out.push_str("  <key id=\"hub\" for=\"node\" attr.name=\"hub\" attr.type=\"double\"/>\n");
    }
    if attrs.skeleton.is_some() {
        out.push_str("  <key id=\"skeleton\" for=\"node\" attr.name=\"skeleton\" attr.type=\"string\"/>\n");
    }
    out.push_str("  <graph id=\"mentions\" edgedefault=\"directed\">\n");
    for v in 0..g.node_count() {
        let id = xml_escape(g.nick(v));
        let mut data = String::new();
        if let Some(x) = &attrs.authority {
            let _ = write!(data, "<data key=\"authority\">{}</data>", x[v]);
        }
        if let Some(x) = &attrs.hub {
            let _ = write!(data, "<data key=\"hub\">{}</data>", x[v]);
        }
        if let Some(x) = &attrs.skeleton {
            let _ = write!(data, "<data key=\"skeleton\">{}</data>", x[v]);
        }
        if data.is_empty() {
            let _ = writeln!(out, "    <node id=\"{id}\"/>");
        } else {
            let _ = writeln!(out, "    <node id=\"{id}\">{data}</node>");
        }
    }
    for e in g.edges() {
        let _ = writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\"><data key=\"weight\">{}</data></edge>",
            xml_escape(g.nick(e.source)),
            xml_escape(g.nick(e.target)),
            e.weight
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    Ok(out)
}

pub fn write_graph<W: Write>(g: &MentionGraph, format: ExportFormat, attrs: &NodeAttributes, mut w: W) -> Result<()> {
    match format {
        ExportFormat::Dot => w.write_all(to_dot(g, attrs)?.as_bytes())?,
        ExportFormat::GraphMl => w.write_all(to_graphml(g, attrs)?.as_bytes())?,
        ExportFormat::Csv => write_csv(g, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `g` to `path`; CSV ignores the node attributes.
pub fn export_graph(g: &MentionGraph, format: ExportFormat, attrs: &NodeAttributes, path: &Path) -> Result<()> {
    let w = create(path)?;
    write_graph(g, format, attrs, w).map_err(|e| match e {
        Error::Io(source) => Error::Write {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(e.into())
}

/// `nick,authority,hub,indegree,outdegree`, one row per node.
pub fn write_scores_csv<W: Write>(g: &MentionGraph, h: &HitsScores, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["nick", "authority", "hub", "indegree", "outdegree"])
        .map_err(csv_io)?;
    for v in 0..g.node_count() {
        wtr.write_record([
            g.nick(v).to_string(),
            h.authority[v].to_string(),
            h.hub[v].to_string(),
            g.in_degree(v).to_string(),
            g.out_degree(v).to_string(),
        ])
        .map_err(csv_io)?;
    }
    wtr.flush()?;
    Ok(())
}

/// `node_a,node_b,score` in ranking order.
pub fn write_top_links_csv<W: Write>(g: &MentionGraph, links: &[TopLink], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["node_a", "node_b", "score"]).map_err(csv_io)?;
    for l in links {
        wtr.write_record([g.nick(l.a), g.nick(l.b), &l.score.to_string()])
            .map_err(csv_io)?;
    }
    wtr.flush()?;
    Ok(())
}

/// A JSON array of member-nick arrays, in report order.
pub fn write_cliques_json<W: Write>(g: &MentionGraph, r: &CliqueReport, mut w: W) -> Result<()> {
    let named: Vec<Vec<&str>> = r
        .cliques
        .iter()
        .map(|c| c.iter().map(|&v| g.nick(v)).collect())
        .collect();
    serde_json::to_writer_pretty(&mut w, &named)?;
    w.write_all(b"\n")?;
    Ok(())
}
