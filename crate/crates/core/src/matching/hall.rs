use num_integer::Integer;
use num_traits::Zero;

use super::bmatching::{b_matching_feasible, HallWitness, Requirements};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::scalar::{ratio, Rational};

/// Walks every nonempty subset of right nodes in Gray-code order, keeping
/// `|N(R')|` and a histogram of discounts up to date incrementally.
fn for_each_right_subset(g: &BipartiteGraph, budget: &Budget, mut visit: impl FnMut(&SubsetState)) -> Result<()> {
    let m = g.right_count();
    if m > budget.subset_nodes || m >= 63 {
        return Err(Error::Capacity { what: "right nodes for subset enumeration", budget: budget.subset_nodes });
    }
    let max_discount = g.discounts().iter().copied().max().unwrap_or(0);
    let mut state = SubsetState {
        members: vec![false; m],
        neighborhood: 0,
        discount_hist: vec![0; max_discount + 1],
    };
    let mut cover = vec![0u32; g.left_count()];
    for i in 1u64..(1u64 << m) {
        let r = i.trailing_zeros() as usize;
        let d = g.discount(r);
        if state.members[r] {
            state.members[r] = false;
            state.discount_hist[d] -= 1;
            for &l in g.right_neighbors(r) {
                cover[l] -= 1;
                if cover[l] == 0 {
                    state.neighborhood -= 1;
                }
            }
        } else {
            state.members[r] = true;
            state.discount_hist[d] += 1;
            for &l in g.right_neighbors(r) {
                if cover[l] == 0 {
                    state.neighborhood += 1;
                }
                cover[l] += 1;
            }
        }
        visit(&state);
    }
    Ok(())
}

struct SubsetState {
    members: Vec<bool>,
    neighborhood: usize,
    discount_hist: Vec<usize>,
}

impl SubsetState {
    /// `Σ_{r ∈ R'} max(0, n - k - discount(r))`.
    fn demand_at(&self, n: usize, k: usize) -> usize {
        self.discount_hist
            .iter()
            .enumerate()
            .map(|(d, &c)| c * n.saturating_sub(k + d))
            .sum()
    }
}

/// The least `k` such that every right subset satisfies the Hall condition
/// at demands `max(0, n - k - discount)`, by exhaustive subset enumeration.
pub fn hall_defect(g: &BipartiteGraph, budget: &Budget) -> Result<usize> {
    let n = g.n();
    let mut k = 0usize;
    for_each_right_subset(g, budget, |s| {
        while k < n && s.demand_at(n, k) > s.neighborhood {
            k += 1;
        }
    })?;
    Ok(k)
}

/// Least error level `ε ∈ {0, 1/n, ..., 1}` at which the Hall condition
/// holds for every right subset; equals the optimal orientation error.
pub fn hall_complexity(g: &BipartiteGraph, budget: &Budget) -> Result<Rational> {
    Ok(ratio(hall_defect(g, budget)?, g.n()))
}

/// The unrounded Hall complexity: the least real `ε ≥ 0` with
/// `Σ_{r ∈ R'} max(0, (1-ε)n - discount(r)) ≤ |N(R')|` for every `R'`.
///
/// With zero discounts this is `max_{R'} (n - |N(R')|/|R'|) / n`. It lower
/// bounds [`hall_complexity`], which rounds the demanded degree to an integer.
pub fn fractional_hall_complexity(g: &BipartiteGraph, budget: &Budget) -> Result<Rational> {
    let n = g.n() as i64;
    if n == 0 {
        return Ok(Rational::zero());
    }
    let mut best = Rational::zero();
    for_each_right_subset(g, budget, |s| {
        let cap = s.neighborhood as i64;
        // Largest t ≤ n with Σ max(0, t - d_r) ≤ |N(R')|; the sum is
        // piecewise linear in t with breakpoints at the sorted discounts.
        let full: i64 = s.demand_at(g.n(), 0) as i64;
        if full <= cap {
            return;
        }
        let sorted: Vec<i64> = s
            .discount_hist
            .iter()
            .enumerate()
            .flat_map(|(d, &c)| std::iter::repeat(d as i64).take(c))
            .collect();
        let mut prefix = 0i64;
        let mut t = Rational::from_integer(n);
        for j in 1..=sorted.len() {
            prefix += sorted[j - 1];
            let cand = Rational::new(cap + prefix, j as i64);
            if j == sorted.len() || cand <= Rational::from_integer(sorted[j]) {
                t = cand;
                break;
            }
        }
        let eps = Rational::from_integer(1) - t / Rational::from_integer(n);
        if eps > best {
            best = eps;
        }
    })?;
    Ok(best)
}

/// Demands `max(0, ⌈(1-ε)n⌉ - discount(r))`.
pub fn epsilon_demands(g: &BipartiteGraph, eps: Rational) -> Requirements {
    let target = (Rational::from_integer(1) - eps) * Rational::from_integer(g.n() as i64);
    let level = Integer::div_ceil(target.numer(), target.denom());
    Requirements::clamped((0..g.right_count()).map(|r| level - g.discount(r) as i64))
}

/// Outcome of checking that ε-feasibility is decided by finite right subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactnessReport {
    pub eps: Rational,
    pub whole_feasible: bool,
    pub subsets_checked: usize,
    /// First right subset (in size-then-lexicographic order) whose induced
    /// subgraph is infeasible.
    pub first_infeasible_subset: Option<Vec<usize>>,
    /// Hall witness for the whole graph, when infeasible.
    pub witness: Option<HallWitness>,
    /// Whether the whole-graph answer equals the conjunction over the checked subsets.
    pub agrees: bool,
}

/// Compares whole-graph ε-feasibility with feasibility of every subgraph
/// induced by at most `subset_size_cap` right nodes and their neighbors.
pub fn compactness_check(g: &BipartiteGraph, eps: Rational, subset_size_cap: usize, budget: &Budget) -> Result<CompactnessReport> {
    const MAX_SUBSETS: u128 = 1 << 22;
    let m = g.right_count();
    let cap = subset_size_cap.min(m);
    let mut count: u128 = 0;
    let mut c: u128 = 1;
    for k in 1..=cap {
        c = c * (m - k + 1) as u128 / k as u128;
        count += c;
    }
    let _ = budget;
    if count > MAX_SUBSETS {
        return Err(Error::Capacity { what: "right subsets for compactness check", budget: MAX_SUBSETS as usize });
    }
    let req = epsilon_demands(g, eps);
    let whole = b_matching_feasible(g, &req);
    let mut report = CompactnessReport {
        eps,
        whole_feasible: whole.is_feasible(),
        subsets_checked: 0,
        first_infeasible_subset: None,
        witness: whole.witness().cloned(),
        agrees: false,
    };
    'sizes: for k in 1..=cap {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            report.subsets_checked += 1;
            let (sub, _) = g.induced_by_right(&subset);
            let sub_req = Requirements::new(subset.iter().map(|&r| req.demands[r]).collect());
            if !b_matching_feasible(&sub, &sub_req).is_feasible() {
                report.first_infeasible_subset = Some(subset.clone());
                break 'sizes;
            }
            if !next_combination(&mut subset, m) {
                break;
            }
        }
    }
    report.agrees = report.whole_feasible == report.first_infeasible_subset.is_none();
    Ok(report)
}

fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < m - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
