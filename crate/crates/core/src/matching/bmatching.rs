use std::collections::VecDeque;

use super::max_matching::{hopcroft_karp, Matching};
use crate::graph::BipartiteGraph;

/// Minimum number of matches demanded by each right node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Requirements {
    pub demands: Vec<usize>,
}

impl Requirements {
    pub fn new(demands: Vec<usize>) -> Self {
        Requirements { demands }
    }

    /// Signed demands, negative values clamped to zero.
    pub fn clamped(demands: impl IntoIterator<Item = i64>) -> Self {
        Requirements { demands: demands.into_iter().map(|d| d.max(0) as usize).collect() }
    }

    pub fn total(&self) -> usize {
        self.demands.iter().sum()
    }

    /// `b(R') = Σ_{r ∈ R'} b_r`.
    pub fn demand_of(&self, subset: &[usize]) -> usize {
        subset.iter().map(|&r| self.demands[r]).sum()
    }
}

/// A set of right nodes demanding more matches than it has neighbors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallWitness {
    pub right_subset: Vec<usize>,
    pub neighborhood: usize,
    pub demand: usize,
}

impl HallWitness {
    /// Recomputes the violation against `g` and `req`.
    pub fn certifies(&self, g: &BipartiteGraph, req: &Requirements) -> bool {
        !self.right_subset.is_empty()
            && self.demand == req.demand_of(&self.right_subset)
            && self.neighborhood == neighborhood_size(g, &self.right_subset)
            && self.demand > self.neighborhood
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BMatchingOutcome {
    Feasible(Matching),
    Infeasible(HallWitness),
}

impl BMatchingOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, BMatchingOutcome::Feasible(_))
    }

    pub fn matching(&self) -> Option<&Matching> {
        match self {
            BMatchingOutcome::Feasible(m) => Some(m),
            BMatchingOutcome::Infeasible(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&HallWitness> {
        match self {
            BMatchingOutcome::Feasible(_) => None,
            BMatchingOutcome::Infeasible(w) => Some(w),
        }
    }
}

pub(crate) fn neighborhood_size(g: &BipartiteGraph, subset: &[usize]) -> usize {
    let mut seen = vec![false; g.left_count()];
    let mut count = 0;
    for &r in subset {
        for &l in g.right_neighbors(r) {
            if !seen[l] {
                seen[l] = true;
                count += 1;
            }
        }
    }
    count
}

/// Direct Hall check: `b(R') ≤ |N(R')|` for the given subset.
pub fn hall_condition_holds(g: &BipartiteGraph, req: &Requirements, subset: &[usize]) -> bool {
    req.demand_of(subset) <= neighborhood_size(g, subset)
}

/// Decides whether every right node `r` can receive `b_r` distinct left
/// nodes, each left node used at most once.
///
/// Right node `r` is cloned into `b_r` unit-demand copies and the copies are
/// matched into the left side. On failure, each unsaturated copy seeds an
/// alternating search; the original right nodes it reaches form a set whose
/// neighborhood is exactly the reached left nodes, all saturated, so the set
/// violates the Hall condition. The smallest such set is returned.
pub fn b_matching_feasible(g: &BipartiteGraph, req: &Requirements) -> BMatchingOutcome {
    assert_eq!(req.demands.len(), g.right_count(), "one demand per right node");
    let mut copy_owner = Vec::with_capacity(req.total());
    for (r, &b) in req.demands.iter().enumerate() {
        copy_owner.extend(std::iter::repeat(r).take(b));
    }
    let adj: Vec<Vec<usize>> = copy_owner.iter().map(|&r| g.right_neighbors(r).to_vec()).collect();
    let (mate_copy, mate_left) = hopcroft_karp(&adj, g.left_count());

    let unsaturated: Vec<usize> = (0..copy_owner.len()).filter(|&c| mate_copy[c] == usize::MAX).collect();
    if unsaturated.is_empty() {
        let left_to_right = mate_left
            .iter()
            .map(|&c| (c != usize::MAX).then(|| copy_owner[c]))
            .collect();
        return BMatchingOutcome::Feasible(Matching { left_to_right });
    }

    let mut best: Option<HallWitness> = None;
    for &source in &unsaturated {
        let subset = alternating_reach(source, &copy_owner, &adj, &mate_left, g);
        let candidate = HallWitness {
            neighborhood: neighborhood_size(g, &subset),
            demand: req.demand_of(&subset),
            right_subset: subset,
        };
        debug_assert!(candidate.demand > candidate.neighborhood);
        let better = best
            .as_ref()
            .map_or(true, |b| candidate.right_subset.len() < b.right_subset.len());
        if better {
            best = Some(candidate);
        }
    }
    BMatchingOutcome::Infeasible(best.expect("at least one unsaturated copy"))
}

/// Original right nodes reachable from `source` by alternating paths
/// (copy -> any left neighbor -> that left node's matched copy).
fn alternating_reach(
    source: usize,
    copy_owner: &[usize],
    adj: &[Vec<usize>],
    mate_left: &[usize],
    g: &BipartiteGraph,
) -> Vec<usize> {
    let mut copy_seen = vec![false; copy_owner.len()];
    let mut left_seen = vec![false; g.left_count()];
    let mut right_in = vec![false; g.right_count()];
    let mut queue = VecDeque::from([source]);
    copy_seen[source] = true;
    while let Some(c) = queue.pop_front() {
        right_in[copy_owner[c]] = true;
        for &l in &adj[c] {
            if left_seen[l] {
                continue;
            }
            left_seen[l] = true;
            let next = mate_left[l];
            if next != usize::MAX && !copy_seen[next] {
                copy_seen[next] = true;
                queue.push_back(next);
            }
        }
    }
    (0..g.right_count()).filter(|&r| right_in[r]).collect()
}
