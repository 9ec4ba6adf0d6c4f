use super::bmatching::{b_matching_feasible, BMatchingOutcome, Requirements};
use super::max_matching::Matching;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::scalar::{ratio, Rational};

/// An optimal learner as a total left-to-right assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationResult {
    /// Minimal achievable `max_r (outdegree(r) - discount(r))`, floored at zero.
    pub k_star: usize,
    pub n: usize,
    /// Chosen right node for every left node (scenario).
    pub assignment: Vec<usize>,
    /// `degree(r) - (times r is chosen)`: the mistakes made when `r` is the truth.
    pub per_node_outdegree: Vec<usize>,
}

impl OrientationResult {
    /// `max_r (outdegree(r) - discount(r))` recomputed from the assignment, floored at zero.
    pub fn realized_k(&self, g: &BipartiteGraph) -> usize {
        self.per_node_outdegree
            .iter()
            .enumerate()
            .map(|(r, &out)| out.saturating_sub(g.discount(r)))
            .max()
            .unwrap_or(0)
    }
}

/// Demands `max(0, n - k - discount(r))`.
pub(crate) fn level_demands(g: &BipartiteGraph, k: usize) -> Requirements {
    Requirements::clamped((0..g.right_count()).map(|r| g.n() as i64 - k as i64 - g.discount(r) as i64))
}

/// Binary search over `k ∈ 0..=n` for the least level whose b-matching is
/// feasible, then completes the matching into a total assignment.
pub fn optimal_orientation(g: &BipartiteGraph) -> Result<OrientationResult> {
    if let Some(l) = (0..g.left_count()).find(|&l| g.left_neighbors(l).is_empty()) {
        return Err(Error::Invalid(format!("left node {l} has no neighbor")));
    }
    let solve = |k: usize| match b_matching_feasible(g, &level_demands(g, k)) {
        BMatchingOutcome::Feasible(m) => Some(m),
        BMatchingOutcome::Infeasible(_) => None,
    };
    let (mut lo, mut hi) = (0usize, g.n());
    let mut best: Matching = solve(hi).ok_or_else(|| {
        Error::Invalid("a right node has degree below n; level n is infeasible".into())
    })?;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match solve(mid) {
            Some(m) => {
                hi = mid;
                best = m;
            }
            None => lo = mid + 1,
        }
    }
    let assignment: Vec<usize> = best
        .left_to_right
        .iter()
        .enumerate()
        .map(|(l, r)| r.unwrap_or(g.left_neighbors(l)[0]))
        .collect();
    let mut hits = vec![0usize; g.right_count()];
    for &r in &assignment {
        hits[r] += 1;
    }
    let per_node_outdegree = (0..g.right_count())
        .map(|r| g.right_neighbors(r).len() - hits[r])
        .collect();
    Ok(OrientationResult { k_star: hi, n: g.n(), assignment, per_node_outdegree })
}

/// `k_star / n`.
pub fn orientation_error(result: &OrientationResult) -> Rational {
    ratio(result.k_star, result.n)
}
