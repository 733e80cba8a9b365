//! REGE regular equivalence and component role cases.
//!
//! REGE refines a similarity matrix E, starting from all ones. Each round,
//! for every pair (i, j) and every neighbor k of i, the best-matching
//! neighbor m of j is the one maximizing
//!
//! ```text
//! E(k, m) * [min(w(i->k), w(j->m)) + min(w(k->i), w(m->j))]
//! ```
//!
//! and the matched maxima `max(w(i->k), w(j->m)) + max(w(k->i), w(m->j))`
//! form the normalizer. Matching runs in both directions and
//! `E'(i, j) = (num(i,j) + num(j,i)) / (den(i,j) + den(j,i))`.
//!
//! When several m reach the same numerator the one with the smallest
//! normalizer wins, so the result never depends on node numbering.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MentionGraph, NodeId};
use crate::skeleton::{SkeletonLabel, SkeletonPartition};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegeOptions {
    pub iterations: usize,
    /// Treat every edge as weight 1.
    pub binarize: bool,
}

impl Default for RegeOptions {
    fn default() -> Self {
        RegeOptions {
            iterations: 3,
            binarize: false,
        }
    }
}

/// Dense symmetric similarity matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceMatrix {
    n: usize,
    values: Vec<f64>,
    pub iterations: usize,
}

impl EquivalenceMatrix {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: NodeId, j: NodeId) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: NodeId) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Writes the matrix as CSV with a nick header row and column.
    pub fn write_csv<W: std::io::Write>(&self, g: &MentionGraph, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.into());
        let mut header = vec![String::new()];
        header.extend(g.nicks().iter().cloned());
        wtr.write_record(&header).map_err(io)?;
        for i in 0..self.n {
            let mut rec = vec![g.nick(i).to_string()];
            rec.extend(self.row(i).iter().map(|v| v.to_string()));
            wtr.write_record(&rec).map_err(io)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// (neighbor, w(i->k), w(k->i)) for every neighbor k of i.
type Profile = Vec<(NodeId, f64, f64)>;

fn profiles(g: &MentionGraph, binarize: bool) -> Vec<Profile> {
    let w = |x: u64| if binarize { 1.0 } else { x as f64 };
    (0..g.node_count())
        .map(|i| {
            g.neighbors(i)
                .into_iter()
                .map(|k| {
                    (
                        k,
                        g.weight(i, k).map_or(0.0, w),
                        g.weight(k, i).map_or(0.0, w),
                    )
                })
                .collect()
        })
        .collect()
}

/// One matching direction: every neighbor of i picks its best neighbor of j.
fn match_half(prev: &[f64], n: usize, pi: &Profile, pj: &Profile) -> (f64, f64) {
    let (mut num, mut den) = (0.0, 0.0);
    for &(k, ik, ki) in pi {
        let row = &prev[k * n..(k + 1) * n];
        let (mut best_num, mut best_den) = (0.0, ik + ki);
        let mut first = true;
        for &(m, jm, mj) in pj {
            let t = row[m] * (ik.min(jm) + ki.min(mj));
            let d = ik.max(jm) + ki.max(mj);
            if first || t > best_num || (t == best_num && d < best_den) {
                best_num = t;
                best_den = d;
                first = false;
            }
        }
        num += best_num;
        den += best_den;
    }
    (num, den)
}

pub fn rege(g: &MentionGraph, opts: &RegeOptions) -> Result<EquivalenceMatrix> {
    if opts.iterations == 0 {
        return Err(Error::InvalidParameter("rege iterations must be >= 1".into()));
    }
    let n = g.node_count();
    let prof = profiles(g, opts.binarize);
    let mut values = vec![1.0; n * n];
    for _ in 0..opts.iterations {
        let prev = &values;
        let upper: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (i + 1..n)
                    .map(|j| {
                        let (pi, pj) = (&prof[i], &prof[j]);
                        if pi.is_empty() || pj.is_empty() {
                            return if pi.is_empty() && pj.is_empty() { 1.0 } else { 0.0 };
                        }
                        let (nij, dij) = match_half(prev, n, pi, pj);
                        let (nji, dji) = match_half(prev, n, pj, pi);
                        (nij + nji) / (dij + dji)
                    })
                    .collect()
            })
            .collect();
        let mut next = vec![1.0; n * n];
        for (i, row) in upper.into_iter().enumerate() {
            for (off, v) in row.into_iter().enumerate() {
                let j = i + 1 + off;
                next[i * n + j] = v;
                next[j * n + i] = v;
            }
        }
        values = next;
    }
    Ok(EquivalenceMatrix {
        n,
        values,
        iterations: opts.iterations,
    })
}

/// Share of each node's neighbors (either direction) whose equivalence with
/// it exceeds `threshold`. Isolated nodes get 0.
pub fn high_eq_tie_fraction(g: &MentionGraph, e: &EquivalenceMatrix, threshold: f64) -> Result<Vec<f64>> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "equivalence threshold must lie in (0, 1), got {threshold}"
        )));
    }
    Ok((0..g.node_count())
        .map(|v| {
            let nb = g.neighbors(v);
            if nb.is_empty() {
                return 0.0;
            }
            let high = nb.iter().filter(|&&u| e.get(v, u) > threshold).count();
            high as f64 / nb.len() as f64
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RoleCase {
    Case1,
    Case2,
    Case3,
    Case4,
}

impl RoleCase {
    /// `mean_tie_fraction` above the tie cutoff means many high-equivalence
    /// ties; `people_fraction` at or above the people cutoff means many
    /// people carry them.
    pub fn classify(mean_tie_fraction: f64, people_fraction: f64, tie_cutoff: f64, people_cutoff: f64) -> Self {
        match (mean_tie_fraction > tie_cutoff, people_fraction >= people_cutoff) {
            (true, true) => RoleCase::Case1,
            (true, false) => RoleCase::Case2,
            (false, true) => RoleCase::Case3,
            (false, false) => RoleCase::Case4,
        }
    }

    pub fn characteristics(self) -> &'static str {
        match self {
            RoleCase::Case1 => "1 big role, Restricted opportunities, Most redundancy, Least chaos",
            RoleCase::Case2 => "Different roles, Greater chaos than case 1, Lesser redundancy than case 1",
            RoleCase::Case3 => "Many different roles, Least redundancy, Most chaos",
            RoleCase::Case4 => "Many different roles, Greater redundancy than case 3, Lesser chaos than case 3",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentRole {
    pub component: SkeletonLabel,
    pub members: usize,
    /// Set when the component has no members; the scores below are absent.
    pub empty: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mean_tie_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub people_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub case: Option<RoleCase>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub characteristics: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleCaseReport {
    pub tie_cutoff: f64,
    pub people_cutoff: f64,
    pub components: Vec<ComponentRole>,
}

/// Per component: T = mean member fraction, P = share of members whose
/// fraction exceeds `tie_cutoff`; the case follows from (T, P).
pub fn classify_roles(
    p: &SkeletonPartition,
    fractions: &[f64],
    tie_cutoff: f64,
    people_cutoff: f64,
) -> Result<RoleCaseReport> {
    for (name, v) in [("tie_cutoff", tie_cutoff), ("people_cutoff", people_cutoff)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {v}")));
        }
    }
    if fractions.len() != p.labels.len() {
        return Err(Error::InvalidParameter(format!(
            "{} fractions for {} labelled nodes",
            fractions.len(),
            p.labels.len()
        )));
    }
    let components = SkeletonLabel::ALL
        .iter()
        .map(|&label| {
            let members = p.members(label);
            if members.is_empty() {
                return ComponentRole {
                    component: label,
                    members: 0,
                    empty: true,
                    mean_tie_fraction: None,
                    people_fraction: None,
                    case: None,
                    characteristics: None,
                };
            }
            let count = members.len() as f64;
            let t = members.iter().map(|&v| fractions[v]).sum::<f64>() / count;
            let high = members.iter().filter(|&&v| fractions[v] > tie_cutoff).count() as f64;
            let p = high / count;
            let case = RoleCase::classify(t, p, tie_cutoff, people_cutoff);
            ComponentRole {
                component: label,
                members: members.len(),
                empty: false,
                mean_tie_fraction: Some(t),
                people_fraction: Some(p),
                case: Some(case),
                characteristics: Some(case.characteristics().to_string()),
            }
        })
        .collect();
    Ok(RoleCaseReport {
        tie_cutoff,
        people_cutoff,
        components,
    })
}
