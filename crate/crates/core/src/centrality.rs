//! HITS hub/authority scores and degree centralities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MentionGraph, NodeId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitsOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Use edge weights as link strengths instead of 0/1 adjacency.
    pub weighted: bool,
}

impl Default for HitsOptions {
    fn default() -> Self {
        HitsOptions {
            tolerance: 1e-10,
            max_iterations: 1000,
            weighted: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitsScores {
    /// Indexed by node id.
    pub authority: Vec<f64>,
    pub hub: Vec<f64>,
    pub iterations_used: usize,
    pub converged: bool,
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Mutual-reinforcement iteration: authority <- A^T hub, hub <- A authority,
/// each rescaled to unit Euclidean norm, until the largest entry change
/// drops below `tolerance`.
pub fn hits(g: &MentionGraph, opts: &HitsOptions) -> Result<HitsScores> {
    if !(opts.tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "hits tolerance must be positive, got {}",
            opts.tolerance
        )));
    }
    if opts.max_iterations == 0 {
        return Err(Error::InvalidParameter("hits max_iterations must be >= 1".into()));
    }
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Ok(HitsScores {
            authority: vec![0.0; n],
            hub: vec![0.0; n],
            iterations_used: 0,
            converged: true,
        });
    }
    let link = |w: u64| if opts.weighted { w as f64 } else { 1.0 };

    let start = 1.0 / (n as f64).sqrt();
    let mut auth = vec![start; n];
    let mut hub = vec![start; n];
    let mut next_auth = vec![0.0; n];
    let mut next_hub = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        iterations += 1;
        for v in 0..n {
            next_auth[v] = g.in_edges(v).iter().fold(0.0, |acc, &(u, w)| acc + link(w) * hub[u]);
        }
        normalize(&mut next_auth);
        for v in 0..n {
            next_hub[v] = g
                .out_edges(v)
                .iter()
                .fold(0.0, |acc, &(u, w)| acc + link(w) * next_auth[u]);
        }
        normalize(&mut next_hub);
        let delta = auth
            .iter()
            .zip(&next_auth)
            .chain(hub.iter().zip(&next_hub))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut auth, &mut next_auth);
        std::mem::swap(&mut hub, &mut next_hub);
        if delta < opts.tolerance {
            converged = true;
            break;
        }
    }
    Ok(HitsScores {
        authority: auth,
        hub,
        iterations_used: iterations,
        converged,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCentrality {
    pub indegree: usize,
    pub outdegree: usize,
    pub weighted_in: u64,
    pub weighted_out: u64,
}

pub fn degree_centrality(g: &MentionGraph) -> Vec<DegreeCentrality> {
    (0..g.node_count())
        .map(|v| DegreeCentrality {
            indegree: g.in_degree(v),
            outdegree: g.out_degree(v),
            weighted_in: g.in_edges(v).iter().map(|e| e.1).sum(),
            weighted_out: g.out_edges(v).iter().map(|e| e.1).sum(),
        })
        .collect()
}

/// Node ids sorted by descending score; ties go to the smaller nick.
pub fn rank_desc(scores: &[f64]) -> Vec<NodeId> {
    let mut ids: Vec<NodeId> = (0..scores.len()).collect();
    // Node ids are nick-ordered, so the id is the lexicographic tie-break.
    ids.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    ids
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_fixed_point() {
        let g = MentionGraph::new(["a", "b"], [("a", "b", 1)]).unwrap();
        let s = hits(&g, &HitsOptions::default()).unwrap();
        assert_eq!(s.hub, [1.0, 0.0]);
        assert_eq!(s.authority, [0.0, 1.0]);
        assert!(s.converged);
    }

    #[test]
    fn directed_cycle_is_uniform() {
        let g = MentionGraph::from_indexed(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap();
        let s = hits(&g, &HitsOptions::default()).unwrap();
        assert!(s.hub.iter().all(|&h| h == s.hub[0]));
        assert!(s.authority.iter().all(|&a| a == s.authority[0]));
        assert!((s.authority[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn edgeless_is_all_zero() {
        let g = MentionGraph::from_indexed(3, &[]).unwrap();
        let s = hits(&g, &HitsOptions::default()).unwrap();
        assert!(s.converged);
        assert_eq!(s.authority, [0.0; 3]);
        assert_eq!(s.hub, [0.0; 3]);
    }

    #[test]
    fn bad_parameters() {
        let g = MentionGraph::from_indexed(2, &[(0, 1, 1)]).unwrap();
        let zero_tol = HitsOptions {
            tolerance: 0.0,
            ..Default::default()
        };
        assert!(hits(&g, &zero_tol).is_err());
        let zero_iter = HitsOptions {
            max_iterations: 0,
            ..Default::default()
        };
        assert!(hits(&g, &zero_iter).is_err());
    }

    #[test]
    fn no_inlinks_no_authority() {
        let g = MentionGraph::from_indexed(4, &[(0, 1, 2), (1, 2, 1), (2, 1, 1), (3, 2, 5)]).unwrap();
        let opts = HitsOptions {
            max_iterations: 1,
            ..Default::default()
        };
        let s = hits(&g, &opts).unwrap();
        assert_eq!(s.authority[0], 0.0);
        assert_eq!(s.authority[3], 0.0);
    }

    #[test]
    fn scaling_weights() {
        let g = MentionGraph::from_indexed(
            5,
            &[(0, 1, 2), (1, 2, 1), (2, 0, 3), (3, 2, 5), (4, 1, 1), (0, 4, 2)],
        )
        .unwrap();
        let scaled = g.map_weights(|w| w * 7).unwrap();
        let plain = HitsOptions::default();
        assert_eq!(hits(&g, &plain).unwrap(), hits(&scaled, &plain).unwrap());
        let weighted = HitsOptions {
            weighted: true,
            ..Default::default()
        };
        let a = hits(&g, &weighted).unwrap();
        let b = hits(&scaled, &weighted).unwrap();
        assert_eq!(rank_desc(&a.authority), rank_desc(&b.authority));
        assert_eq!(rank_desc(&a.hub), rank_desc(&b.hub));
    }

    #[test]
    fn star_degrees() {
        let g = MentionGraph::new(["c", "l1", "l2", "l3", "z"], [("l1", "c", 1), ("l2", "c", 2), ("l3", "c", 1)]).unwrap();
        let d = degree_centrality(&g);
        assert_eq!((d[0].indegree, d[0].outdegree, d[0].weighted_in), (3, 0, 4));
        assert_eq!(d[4], DegreeCentrality::default());
    }

    #[test]
    fn ranking_ties_by_id() {
        assert_eq!(rank_desc(&[0.5, 0.9, 0.5, 0.1]), [1, 0, 2, 3]);
    }
}
