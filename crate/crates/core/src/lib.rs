//! Mention networks from IRC chat logs and the structural analyses run on
//! them: hubs and authorities, bow-tie and core/periphery skeletons,
//! cliques, blocks and cutpoints, Gomory–Hu trees with lambda sets, and
//! regular equivalence roles.
//!
//! ```
//! use chatnet::ingest::{build_roster, parse_text, ChatCorpus, SourceFile};
//! use chatnet::graph::{extract_network, ExtractOptions};
//! use chrono::NaiveDate;
//!
//! let date = NaiveDate::from_ymd_opt(2012, 3, 1).unwrap();
//! let text = "[10:00] <alice> bob: ping\n[10:01] <bob> pong\n";
//! let corpus = ChatCorpus::from_parts(
//!     vec![SourceFile::new("2012-03-01.txt", date)],
//!     vec![parse_text(text, date)],
//! );
//! let g = extract_network(&corpus, &build_roster(&corpus), &ExtractOptions::default()).unwrap();
//! assert_eq!(g.weight(g.node_id("alice").unwrap(), g.node_id("bob").unwrap()), Some(1));
//! ```

pub mod centrality;
pub mod cohesion;
pub mod config;
pub mod connectivity;
pub mod equivalence;
pub mod error;
pub mod export;
pub mod graph;
pub mod ingest;
pub mod pipeline;
pub mod report;
pub mod skeleton;
pub mod synthetic;

pub use centrality::{hits, HitsOptions, HitsScores};
pub use cohesion::{maximal_cliques, CliqueReport};
pub use config::{Analyses, AnalysisConfig};
pub use connectivity::{gomory_hu, CapacityMode, GomoryHuTree, LambdaHierarchy};
pub use equivalence::{rege, EquivalenceMatrix, RegeOptions, RoleCase};
pub use error::{Error, Result};
pub use export::{export_graph, ExportFormat, NodeAttributes};
pub use graph::{Edge, GraphStats, MentionGraph, NodeId, UndirectedView};
pub use ingest::{ChatCorpus, ChatMessage, MessageKind, Roster};
pub use pipeline::{run_analysis, run_pipeline, AnalysisRun, PipelineError, Stage};
pub use report::AnalysisReport;
pub use skeleton::{BowTieLabel, SkeletonLabel};
