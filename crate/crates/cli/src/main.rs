use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use chatnet::config::AnalysisConfig;
use chatnet::export::{export_graph, write_cliques_json, write_scores_csv, write_top_links_csv};
use chatnet::ingest::{build_roster, write_ndjson};
use chatnet::pipeline::{analyze_graph, load_corpus, load_graph, read_roster_file};
use chatnet::skeleton::write_partition_csv;
use chatnet::{graph, AnalysisReport, ExportFormat, NodeAttributes};

#[derive(Parser)]
#[command(name = "chatnet", version, about = "Mention networks from IRC logs and their substructures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse logs into a newline-delimited JSON corpus.
    Ingest {
        #[command(flatten)]
        input: InputArgs,
        /// Corpus output; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the mention graph and write it as a `source,target,weight` CSV.
    Extract {
        #[command(flatten)]
        input: InputArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the enabled analyses and write report.json, report.md and result tables.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Directory receiving the outputs (created if missing).
        #[arg(short, long, default_value = "chatnet-out")]
        out_dir: PathBuf,
    },
    /// Write the mention graph (or an ego network) as DOT, GraphML or CSV.
    Export {
        #[command(flatten)]
        input: InputArgs,
        #[arg(short, long, default_value = "dot")]
        format: String,
        #[arg(short, long)]
        output: PathBuf,
        /// Attach authority and hub scores to nodes.
        #[arg(long)]
        scores: bool,
        /// Attach the A/B/C/D skeleton label to nodes.
        #[arg(long)]
        skeleton: bool,
        /// Export only this nick's ego network.
        #[arg(long)]
        ego: Option<String>,
    },
    /// Render a report.json as Markdown.
    Report {
        report: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Default)]
struct InputArgs {
    /// Log files or directories, a corpus .ndjson, or a graph .csv.
    inputs: Vec<PathBuf>,
    /// File of `YYYY-MM-DD path` lines listing the logs.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Known nicknames, one per line, added to the roster.
    #[arg(long)]
    roster: Option<PathBuf>,
    /// `key = value` configuration file; flags override it.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Extra `key=value` overrides, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    #[arg(long)]
    min_nick_len: Option<usize>,
    /// Comma-separated nicks never treated as mentions.
    #[arg(long)]
    ignore_nicks: Option<String>,
    #[arg(long)]
    hits_tolerance: Option<f64>,
    #[arg(long)]
    hits_max_iterations: Option<usize>,
    #[arg(long)]
    hits_weighted: bool,
    #[arg(long)]
    top_k: Option<usize>,
    #[arg(long)]
    clique_min_size: Option<usize>,
    /// Cliques over reciprocated ties only.
    #[arg(long)]
    clique_mutual_only: bool,
    #[arg(long)]
    rege_iterations: Option<usize>,
    #[arg(long)]
    rege_binarize: bool,
    #[arg(long)]
    eq_threshold: Option<f64>,
    #[arg(long)]
    tie_cutoff: Option<f64>,
    #[arg(long)]
    people_cutoff: Option<f64>,
    #[arg(long, value_parser = ["unit", "weighted"])]
    lambda_mode: Option<String>,
    /// Comma-separated analyses to run (stats, centrality, skeleton,
    /// cohesion, connectivity, equivalence, all).
    #[arg(long)]
    analyses: Option<String>,
    /// Comma-separated analyses to skip.
    #[arg(long)]
    disable: Option<String>,
}

impl InputArgs {
    fn config(&self) -> Result<AnalysisConfig> {
        let mut c = AnalysisConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .with_context(|| format!("config stage failed: cannot read {}", path.display()))?;
            c.apply_text(&text).context("config stage failed")?;
        }
        let mut flags: Vec<(&str, String)> = Vec::new();
        let mut opt = |key, v: Option<String>| {
            if let Some(v) = v {
                flags.push((key, v));
            }
        };
        opt("min_nick_len", self.min_nick_len.map(|v| v.to_string()));
        opt("ignore_nicks", self.ignore_nicks.clone());
        opt("hits_tolerance", self.hits_tolerance.map(|v| v.to_string()));
        opt("hits_max_iterations", self.hits_max_iterations.map(|v| v.to_string()));
        opt("hits_weighted", self.hits_weighted.then(|| "true".into()));
        opt("top_k", self.top_k.map(|v| v.to_string()));
        opt("clique_min_size", self.clique_min_size.map(|v| v.to_string()));
        opt("clique_mutual_only", self.clique_mutual_only.then(|| "true".into()));
        opt("rege_iterations", self.rege_iterations.map(|v| v.to_string()));
        opt("rege_binarize", self.rege_binarize.then(|| "true".into()));
        opt("eq_threshold", self.eq_threshold.map(|v| v.to_string()));
        opt("tie_cutoff", self.tie_cutoff.map(|v| v.to_string()));
        opt("people_cutoff", self.people_cutoff.map(|v| v.to_string()));
        opt("lambda_mode", self.lambda_mode.clone());
        opt("analyses", self.analyses.clone());
        opt("disable", self.disable.clone());
        for (key, value) in flags {
            c.set(key, &value).context("config stage failed")?;
        }
        for o in &self.overrides {
            let (key, value) = o
                .split_once('=')
                .with_context(|| format!("config stage failed: --set expects KEY=VALUE, got {o:?}"))?;
            c.set(key.trim(), value).context("config stage failed")?;
        }
        if !self.inputs.is_empty() {
            c.inputs = self.inputs.clone();
        }
        if self.manifest.is_some() {
            c.manifest = self.manifest.clone();
        }
        if self.roster.is_some() {
            c.prior_roster = self.roster.clone();
        }
        if c.inputs.is_empty() && c.manifest.is_none() {
            bail!("config stage failed: no input given (pass log files, a directory, --manifest, a corpus or a graph CSV)");
        }
        c.validate().context("config stage failed")?;
        Ok(c)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
    ))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn ingest(input: &InputArgs, output: Option<&Path>) -> Result<()> {
    let c = input.config()?;
    let corpus = load_corpus(&c).context("ingest stage failed")?;
    let mut w = sink(output)?;
    write_ndjson(&corpus, &mut w).context("ingest stage failed")?;
    w.flush()?;
    let mut roster = build_roster(&corpus);
    if let Some(p) = &c.prior_roster {
        roster.merge(&read_roster_file(p).context("ingest stage failed")?);
    }
    eprintln!(
        "{} files, {} lines, {} messages, {} skipped, {} participants",
        corpus.source_files.len(),
        corpus.total_lines,
        corpus.message_count,
        corpus.skipped_lines,
        roster.len()
    );
    Ok(())
}

fn extract(input: &InputArgs, output: Option<&Path>) -> Result<()> {
    let c = input.config()?;
    let g = load_graph(&c)?;
    let mut w = sink(output)?;
    graph::write_csv(&g, &mut w)?;
    w.flush()?;
    eprintln!("{} nodes, {} edges", g.node_count(), g.edge_count());
    Ok(())
}

fn analyze(input: &InputArgs, out_dir: &Path) -> Result<()> {
    let c = input.config()?;
    let run = analyze_graph(load_graph(&c)?, &c)?;
    fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    let g = &run.graph;
    create(&out_dir.join("report.json"))?.write_all(run.report.to_json()?.as_bytes())?;
    create(&out_dir.join("report.md"))?.write_all(run.report.to_markdown().as_bytes())?;
    graph::write_csv(g, create(&out_dir.join("graph.csv"))?)?;
    if let Some(h) = &run.hits {
        write_scores_csv(g, h, create(&out_dir.join("scores.csv"))?)?;
    }
    if let (Some(b), Some(s)) = (&run.bowtie, &run.skeleton) {
        write_partition_csv(g, b, s, create(&out_dir.join("partition.csv"))?)?;
    }
    if let Some(r) = &run.cliques {
        write_cliques_json(g, r, create(&out_dir.join("cliques.json"))?)?;
    }
    if let Some(l) = &run.top_links {
        write_top_links_csv(g, l, create(&out_dir.join("top_links.csv"))?)?;
    }
    if let Some(e) = &run.equivalence {
        e.write_csv(g, create(&out_dir.join("equivalence.csv"))?)?;
    }
    eprintln!(
        "{} nodes, {} edges; sections: {}; written to {}",
        g.node_count(),
        g.edge_count(),
        run.report.sections().join(", "),
        out_dir.display()
    );
    Ok(())
}

fn export(
    input: &InputArgs,
    format: &str,
    output: &Path,
    scores: bool,
    skeleton: bool,
    ego: Option<&str>,
) -> Result<()> {
    let format: ExportFormat = format.parse()?;
    let mut c = input.config()?;
    c.analyses = chatnet::Analyses::none();
    c.analyses.centrality = scores;
    c.analyses.skeleton = skeleton;
    let run = analyze_graph(load_graph(&c)?, &c)?;
    let mut attrs = NodeAttributes::default();
    if let Some(h) = &run.hits {
        attrs = attrs.with_hits(h);
    }
    if let Some(s) = &run.skeleton {
        attrs = attrs.with_skeleton(&s.labels);
    }
    let g = match ego {
        Some(nick) => {
            let e = chatnet::cohesion::ego_network(&run.graph, nick)?;
            let members = e.members();
            let pick = |v: &Option<Vec<f64>>| v.as_ref().map(|x| members.iter().map(|&m| x[m]).collect());
            attrs = NodeAttributes {
                authority: pick(&attrs.authority),
                hub: pick(&attrs.hub),
                skeleton: attrs
                    .skeleton
                    .as_ref()
                    .map(|x| members.iter().map(|&m| x[m]).collect()),
            };
            e.to_graph(&run.graph)?
        }
        None => run.graph,
    };
    export_graph(&g, format, &attrs, output)?;
    eprintln!("wrote {}", output.display());
    Ok(())
}

fn report(path: &Path, output: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let r: AnalysisReport =
        serde_json::from_str(&text).with_context(|| format!("{} is not a report", path.display()))?;
    let mut w = sink(output)?;
    w.write_all(r.to_markdown().as_bytes())?;
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ingest { input, output } => ingest(input, output.as_deref()),
        Command::Extract { input, output } => extract(input, output.as_deref()),
        Command::Analyze { input, out_dir } => analyze(input, out_dir),
        Command::Export {
            input,
            format,
            output,
            scores,
            skeleton,
            ego,
        } => export(input, format, output, *scores, *skeleton, ego.as_deref()),
        Command::Report { report: path, output } => report(path, output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
