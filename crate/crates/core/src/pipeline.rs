//! Stage sequencing: ingest, extract, then the enabled analyses in a fixed
//! order.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use crate::centrality::{degree_centrality, hits, rank_desc, HitsScores};
use crate::cohesion::{clique_comembership, maximal_cliques, CliqueReport};
use crate::config::AnalysisConfig;
use crate::connectivity::{
    articulation_points_and_blocks, gomory_hu, lambda_sets_from_tree, top_links_from_tree,
    BlockReport, CapacityMode, LambdaHierarchy, TopLink,
};
use crate::equivalence::{classify_roles, high_eq_tie_fraction, rege, EquivalenceMatrix};
use crate::error::Error;
use crate::graph::{extract_network, read_csv, stats, MentionGraph, NodeId};
use crate::ingest::{
    build_roster, discover_inputs, parse_corpus, read_manifest, read_ndjson, ChatCorpus, Roster,
};
use crate::report::{
    AnalysisReport, CentralitySection, CohesionSection, ConnectivitySection, EquivalenceSection,
    NamedLambdaLevel, NamedLink, PairCount, RankedNode, SizeCount, SkeletonSection, ToolInfo,
};
use crate::skeleton::{
    abcd_skeleton, bowtie, composition, link_matrix, BowTieLabel, BowTiePartition, SkeletonLabel,
    SkeletonPartition,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Ingest,
    Extract,
    Stats,
    Centrality,
    Skeleton,
    Cohesion,
    Connectivity,
    Equivalence,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Extract => "extract",
            Stage::Stats => "stats",
            Stage::Centrality => "centrality",
            Stage::Skeleton => "skeleton",
            Stage::Cohesion => "cohesion",
            Stage::Connectivity => "connectivity",
            Stage::Equivalence => "equivalence",
        })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{stage} stage failed: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

pub type PipelineResult<T> = std::result::Result<T, PipelineError>;

trait AtStage<T> {
    fn at(self, stage: Stage) -> PipelineResult<T>;
}

impl<T> AtStage<T> for crate::Result<T> {
    fn at(self, stage: Stage) -> PipelineResult<T> {
        self.map_err(|source| PipelineError { stage, source })
    }
}

/// What the configured inputs turned out to be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputKind {
    Logs,
    Corpus(PathBuf),
    Graph(PathBuf),
}

fn has_extension(p: &Path, exts: &[&str]) -> bool {
    p.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| exts.iter().any(|x| e.eq_ignore_ascii_case(x)))
}

/// A single `.csv` input is a graph, a single `.ndjson`/`.jsonl` input is a
/// parsed corpus; anything else is raw logs.
pub fn input_kind(config: &AnalysisConfig) -> InputKind {
    if config.manifest.is_none() {
        if let [only] = config.inputs.as_slice() {
            if only.is_file() && has_extension(only, &["csv"]) {
                return InputKind::Graph(only.clone());
            }
            if only.is_file() && has_extension(only, &["ndjson", "jsonl"]) {
                return InputKind::Corpus(only.clone());
            }
        }
    }
    InputKind::Logs
}

/// Reads a prior roster file: one nick per line, `#` comments.
pub fn read_roster_file(path: &Path) -> crate::Result<Roster> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Roster::from_prior_list(
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty()),
    ))
}

/// Parses the configured logs, manifest or corpus file.
pub fn load_corpus(config: &AnalysisConfig) -> crate::Result<ChatCorpus> {
    if let InputKind::Corpus(path) = input_kind(config) {
        let f = File::open(&path).map_err(|source| Error::Read {
            path: path.clone(),
            source,
        })?;
        return read_ndjson(BufReader::new(f), &path);
    }
    let mut files = match &config.manifest {
        Some(m) => read_manifest(m)?,
        None => Vec::new(),
    };
    files.extend(discover_inputs(&config.inputs)?);
    files.sort_by(|a, b| a.date.cmp(&b.date).then_with(|| a.path.cmp(&b.path)));
    parse_corpus(&files)
}

/// Builds the mention graph from a corpus, merging any prior roster.
pub fn build_graph(corpus: &ChatCorpus, config: &AnalysisConfig) -> crate::Result<MentionGraph> {
    let mut roster = build_roster(corpus);
    if let Some(path) = &config.prior_roster {
        roster.merge(&read_roster_file(path)?);
    }
    extract_network(corpus, &roster, &config.extract)
}

/// Loads the graph from whatever inputs are configured.
pub fn load_graph(config: &AnalysisConfig) -> PipelineResult<MentionGraph> {
    if let InputKind::Graph(path) = input_kind(config) {
        let f = File::open(&path)
            .map_err(|source| Error::Read {
                path: path.clone(),
                source,
            })
            .at(Stage::Ingest)?;
        return read_csv(BufReader::new(f)).at(Stage::Ingest);
    }
    let corpus = load_corpus(config).at(Stage::Ingest)?;
    build_graph(&corpus, config).at(Stage::Extract)
}

/// Intermediate results kept next to the report, for exports.
#[derive(Debug, Clone)]
pub struct AnalysisRun {
    pub graph: MentionGraph,
    pub hits: Option<HitsScores>,
    pub bowtie: Option<BowTiePartition>,
    pub skeleton: Option<SkeletonPartition>,
    pub cliques: Option<CliqueReport>,
    pub blocks: Option<BlockReport>,
    pub lambda: Option<LambdaHierarchy>,
    pub top_links: Option<Vec<TopLink>>,
    pub equivalence: Option<EquivalenceMatrix>,
    pub report: AnalysisReport,
}

fn ranked(g: &MentionGraph, h: &HitsScores, order: &[NodeId], k: usize) -> Vec<RankedNode> {
    order
        .iter()
        .take(k)
        .map(|&v| RankedNode {
            nick: g.nick(v).to_string(),
            authority: h.authority[v],
            hub: h.hub[v],
            indegree: g.in_degree(v),
            outdegree: g.out_degree(v),
        })
        .collect()
}

fn names(g: &MentionGraph, ids: &[NodeId]) -> Vec<String> {
    ids.iter().map(|&v| g.nick(v).to_string()).collect()
}

/// Runs every enabled analysis on an already loaded graph.
pub fn analyze_graph(graph: MentionGraph, config: &AnalysisConfig) -> PipelineResult<AnalysisRun> {
    config.validate().at(Stage::Config)?;
    let g = &graph;
    let on = config.analyses;
    let mut report = AnalysisReport {
        tool: ToolInfo::default(),
        config: config.clone(),
        stats: None,
        centrality: None,
        skeleton: None,
        cohesion: None,
        connectivity: None,
        equivalence: None,
    };

    if on.stats {
        report.stats = Some(stats(g));
    }

    let mut hits_scores = None;
    if on.centrality {
        let h = hits(g, &config.hits).at(Stage::Centrality)?;
        let degrees = degree_centrality(g);
        debug_assert_eq!(degrees.len(), g.node_count());
        report.centrality = Some(CentralitySection {
            weighted: config.hits.weighted,
            iterations_used: h.iterations_used,
            converged: h.converged,
            top_authorities: ranked(g, &h, &rank_desc(&h.authority), config.top_k),
            top_hubs: ranked(g, &h, &rank_desc(&h.hub), config.top_k),
        });
        hits_scores = Some(h);
    }

    // Role classification needs the skeleton even when its section is off.
    let (mut bt, mut sk) = (None, None);
    if on.skeleton || on.equivalence {
        sk = Some(abcd_skeleton(g));
    }
    if on.skeleton {
        let b = bowtie(g);
        let p = sk.as_ref().expect("skeleton computed");
        let links = link_matrix(g, p, false).at(Stage::Skeleton)?;
        let weighted = link_matrix(g, p, true).at(Stage::Skeleton)?;
        report.skeleton = Some(SkeletonSection {
            core_size: b.core.len(),
            bowtie: composition(&b.labels, &BowTieLabel::ALL),
            skeleton: composition(&p.labels, &SkeletonLabel::ALL),
            link_order: SkeletonLabel::ALL.to_vec(),
            links: links.counts,
            weighted_links: weighted.counts,
        });
        bt = Some(b);
    }

    let mut cliques = None;
    if on.cohesion {
        let u = if config.clique_mutual_only {
            g.to_mutual_undirected()
        } else {
            g.to_undirected()
        };
        let r = maximal_cliques(&u, config.clique_min_size).at(Stage::Cohesion)?;
        let co = clique_comembership(&r, g.node_count());
        let mut histogram: Vec<SizeCount> = Vec::new();
        for c in &r.cliques {
            match histogram.last_mut() {
                Some(h) if h.size == c.len() => h.count += 1,
                _ => histogram.push(SizeCount {
                    size: c.len(),
                    count: 1,
                }),
            }
        }
        report.cohesion = Some(CohesionSection {
            mutual_only: config.clique_mutual_only,
            min_size: r.min_size,
            clique_count: r.cliques.len(),
            max_clique_size: r.max_clique_size,
            size_histogram: histogram,
            top_comemberships: co
                .top_pairs(config.top_k)
                .into_iter()
                .map(|((a, b), count)| PairCount {
                    a: g.nick(a).to_string(),
                    b: g.nick(b).to_string(),
                    count,
                })
                .collect(),
        });
        cliques = Some(r);
    }

    let (mut blocks, mut lambda, mut links) = (None, None, None);
    if on.connectivity {
        let u = g.to_undirected();
        let br = articulation_points_and_blocks(&u);
        let weighted_tree = gomory_hu(&u, CapacityMode::Weighted);
        let lh = match config.lambda_mode {
            CapacityMode::Weighted => lambda_sets_from_tree(&weighted_tree),
            CapacityMode::Unit => lambda_sets_from_tree(&gomory_hu(&u, CapacityMode::Unit)),
        };
        let tl = top_links_from_tree(&u, &weighted_tree, config.top_k);
        report.connectivity = Some(ConnectivitySection {
            cutpoint_count: br.cutpoints.len(),
            block_count: br.blocks.len(),
            largest_block_size: br.largest_block_size,
            cutpoints: names(g, &br.cutpoints),
            lambda_mode: config.lambda_mode,
            lambda_levels: lh
                .levels
                .iter()
                .map(|l| NamedLambdaLevel {
                    lambda: l.lambda,
                    sets: l.sets.iter().map(|s| names(g, s)).collect(),
                })
                .collect(),
            top_links: tl
                .iter()
                .map(|l| NamedLink {
                    a: g.nick(l.a).to_string(),
                    b: g.nick(l.b).to_string(),
                    score: l.score,
                    weight: l.weight,
                })
                .collect(),
        });
        blocks = Some(br);
        lambda = Some(lh);
        links = Some(tl);
    }

    let mut eq = None;
    if on.equivalence {
        let e = rege(g, &config.rege).at(Stage::Equivalence)?;
        let fractions = high_eq_tie_fraction(g, &e, config.eq_threshold).at(Stage::Equivalence)?;
        let roles = classify_roles(
            sk.as_ref().expect("skeleton computed"),
            &fractions,
            config.tie_cutoff,
            config.people_cutoff,
        )
        .at(Stage::Equivalence)?;
        report.equivalence = Some(EquivalenceSection {
            iterations: config.rege.iterations,
            binarized: config.rege.binarize,
            threshold: config.eq_threshold,
            roles,
        });
        eq = Some(e);
    }

    Ok(AnalysisRun {
        graph,
        hits: hits_scores,
        bowtie: bt,
        skeleton: if on.skeleton || on.equivalence { sk } else { None },
        cliques,
        blocks,
        lambda,
        top_links: links,
        equivalence: eq,
        report,
    })
}

pub fn run_analysis(config: &AnalysisConfig) -> PipelineResult<AnalysisRun> {
    config.validate().at(Stage::Config)?;
    let graph = load_graph(config)?;
    analyze_graph(graph, config)
}

pub fn run_pipeline(config: &AnalysisConfig) -> PipelineResult<AnalysisReport> {
    run_analysis(config).map(|r| r.report)
}
