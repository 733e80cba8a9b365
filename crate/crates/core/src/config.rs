//! Analysis configuration and its `key = value` text format.
//!
//! ```text
//! # comments start with '#'
//! min_nick_len = 3
//! clique_min_size = 3
//! lambda_mode = unit
//! analyses = stats, centrality, skeleton
//! ```
//!
//! Every key accepted in the file is also accepted by [`AnalysisConfig::set`],
//! which is what command-line overrides go through.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::centrality::HitsOptions;
use crate::connectivity::CapacityMode;
use crate::equivalence::RegeOptions;
use crate::error::{Error, Result};
use crate::graph::ExtractOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analyses {
    pub stats: bool,
    pub centrality: bool,
    pub skeleton: bool,
    pub cohesion: bool,
    pub connectivity: bool,
    pub equivalence: bool,
}

impl Analyses {
    pub const NAMES: [&'static str; 6] = [
        "stats",
        "centrality",
        "skeleton",
        "cohesion",
        "connectivity",
        "equivalence",
    ];

    pub fn all() -> Self {
        Analyses {
            stats: true,
            centrality: true,
            skeleton: true,
            cohesion: true,
            connectivity: true,
            equivalence: true,
        }
    }

    pub fn none() -> Self {
        Analyses {
            stats: false,
            centrality: false,
            skeleton: false,
            cohesion: false,
            connectivity: false,
            equivalence: false,
        }
    }

    fn flag(&mut self, name: &str) -> Option<&mut bool> {
        Some(match name {
            "stats" => &mut self.stats,
            "centrality" => &mut self.centrality,
            "skeleton" => &mut self.skeleton,
            "cohesion" => &mut self.cohesion,
            "connectivity" => &mut self.connectivity,
            "equivalence" => &mut self.equivalence,
            _ => return None,
        })
    }

    /// Parses a comma-separated list; `all` and `none` are accepted.
    pub fn parse_list(list: &str) -> Result<Self> {
        let mut out = Analyses::none();
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name {
                "all" => out = Analyses::all(),
                "none" => {}
                _ => {
                    *out.flag(name).ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "unknown analysis {name:?} (expected one of {})",
                            Self::NAMES.join(", ")
                        ))
                    })? = true
                }
            }
        }
        Ok(out)
    }
}

impl Default for Analyses {
    fn default() -> Self {
        Analyses::all()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    /// Log files or directories, a corpus `.ndjson`, or a graph `.csv`.
    /// Not echoed into reports.
    #[serde(skip)]
    pub inputs: Vec<PathBuf>,
    #[serde(skip)]
    pub manifest: Option<PathBuf>,
    /// Optional file of known nicknames (one per line) added to the roster.
    #[serde(skip)]
    pub prior_roster: Option<PathBuf>,
    pub extract: ExtractOptions,
    pub hits: HitsOptions,
    pub top_k: usize,
    pub clique_min_size: usize,
    pub clique_mutual_only: bool,
    pub rege: RegeOptions,
    pub eq_threshold: f64,
    pub tie_cutoff: f64,
    pub people_cutoff: f64,
    pub lambda_mode: CapacityMode,
    pub analyses: Analyses,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            inputs: Vec::new(),
            manifest: None,
            prior_roster: None,
            extract: ExtractOptions::default(),
            hits: HitsOptions::default(),
            top_k: 10,
            clique_min_size: 3,
            clique_mutual_only: false,
            rege: RegeOptions::default(),
            eq_threshold: 0.5,
            tie_cutoff: 0.30,
            people_cutoff: 0.50,
            lambda_mode: CapacityMode::Unit,
            analyses: Analyses::all(),
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::InvalidParameter(format!("{key} = {value:?}: {e}")))
}

impl AnalysisConfig {
    pub const KEYS: [&'static str; 19] = [
        "input",
        "manifest",
        "roster",
        "min_nick_len",
        "ignore_nicks",
        "hits_tolerance",
        "hits_max_iterations",
        "hits_weighted",
        "top_k",
        "clique_min_size",
        "clique_mutual_only",
        "rege_iterations",
        "rege_binarize",
        "eq_threshold",
        "tie_cutoff",
        "people_cutoff",
        "lambda_mode",
        "analyses",
        "disable",
    ];

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "input" => self.inputs.extend(
                value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(PathBuf::from),
            ),
            "manifest" => self.manifest = Some(PathBuf::from(value)),
            "roster" => self.prior_roster = Some(PathBuf::from(value)),
            "min_nick_len" => self.extract.min_nick_len = parse(key, value)?,
            "ignore_nicks" => {
                self.extract.ignore_nicks = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect()
            }
            "hits_tolerance" => self.hits.tolerance = parse(key, value)?,
            "hits_max_iterations" => self.hits.max_iterations = parse(key, value)?,
            "hits_weighted" => self.hits.weighted = parse(key, value)?,
            "top_k" => self.top_k = parse(key, value)?,
            "clique_min_size" => self.clique_min_size = parse(key, value)?,
            "clique_mutual_only" => self.clique_mutual_only = parse(key, value)?,
            "rege_iterations" => self.rege.iterations = parse(key, value)?,
            "rege_binarize" => self.rege.binarize = parse(key, value)?,
            "eq_threshold" => self.eq_threshold = parse(key, value)?,
            "tie_cutoff" => self.tie_cutoff = parse(key, value)?,
            "people_cutoff" => self.people_cutoff = parse(key, value)?,
            "lambda_mode" => {
                self.lambda_mode = match value {
                    "unit" => CapacityMode::Unit,
                    "weighted" => CapacityMode::Weighted,
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "lambda_mode = {value:?} (expected unit or weighted)"
                        )))
                    }
                }
            }
            "analyses" => self.analyses = Analyses::parse_list(value)?,
            "disable" => {
                let mut off = Analyses::parse_list(value)?;
                for name in Analyses::NAMES {
                    if *off.flag(name).expect("known name") {
                        *self.analyses.flag(name).expect("known name") = false;
                    }
                }
            }
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown configuration key {key:?}"
                )))
            }
        }
        Ok(())
    }

    /// Applies every setting in a `key = value` text, in order.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Format {
                what: "config",
                line: i + 1,
                message: format!("expected `key = value`, found {line:?}"),
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = AnalysisConfig::default();
        c.apply_text(text)?;
        c.validate()?;
        Ok(c)
    }

    /// Checks every parameter against its documented range.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.hits.tolerance > 0.0) {
            return bad(format!("hits_tolerance must be > 0, got {}", self.hits.tolerance));
        }
        if self.hits.max_iterations == 0 {
            return bad("hits_max_iterations must be >= 1".into());
        }
        if self.top_k == 0 {
            return bad("top_k must be >= 1".into());
        }
        if self.clique_min_size == 0 {
            return bad("clique_min_size must be >= 1".into());
        }
        if self.rege.iterations == 0 {
            return bad("rege_iterations must be >= 1".into());
        }
        if !(self.eq_threshold > 0.0 && self.eq_threshold < 1.0) {
            return bad(format!("eq_threshold must lie in (0, 1), got {}", self.eq_threshold));
        }
        for (name, v) in [("tie_cutoff", self.tie_cutoff), ("people_cutoff", self.people_cutoff)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        Ok(())
    }
}
