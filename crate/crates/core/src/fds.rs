//! Functional dependency structures: input variables with finite domains on
//! the left, output variables on the right, each output the average of
//! per-edge cost tables evaluated at its inputs.

use std::collections::BTreeSet;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::LabelingFamily;
use crate::graph::BipartiteGraph;
use crate::label::Point;
use crate::learners::Setting;
use crate::loss::{best_in_class_loss, LossFunction};
use crate::oig::{build_agnostic_oig, build_bipartite_oig, BipartiteOig};
use crate::scalar::{Rational, Scalar};

/// An input variable and its finite domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdsVariable {
    pub name: String,
    pub domain: Vec<String>,
}

/// Edge `(left, right)` with cost table indexed by the left domain.
#[derive(Clone, Debug, PartialEq)]
pub struct FdsEdge<T> {
    pub left: usize,
    pub right: usize,
    pub costs: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenericFds<T> {
    left: Vec<FdsVariable>,
    right: Vec<String>,
    edges: Vec<FdsEdge<T>>,
    left_edges: Vec<Vec<usize>>,
    right_edges: Vec<Vec<usize>>,
}

/// A value index into each left domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FdsAssignment {
    pub values: Vec<usize>,
}

/// Right nodes whose induced sub-structure has no ε-assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdsCertificate {
    pub right_nodes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsOutcome {
    Feasible(FdsAssignment),
    Infeasible(FdsCertificate),
}

impl EpsOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, EpsOutcome::Feasible(_))
    }

    pub fn assignment(&self) -> Option<&FdsAssignment> {
        match self {
            EpsOutcome::Feasible(u) => Some(u),
            EpsOutcome::Infeasible(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&FdsCertificate> {
        match self {
            EpsOutcome::Feasible(_) => None,
            EpsOutcome::Infeasible(c) => Some(c),
        }
    }
}

impl<T: Scalar> GenericFds<T> {
    pub fn new(left: Vec<FdsVariable>, right: Vec<String>, edges: Vec<FdsEdge<T>>) -> Result<Self> {
        let mut left_edges = vec![Vec::new(); left.len()];
        let mut right_edges = vec![Vec::new(); right.len()];
        let mut seen = BTreeSet::new();
        for (a, v) in left.iter().enumerate() {
            if v.domain.is_empty() {
                return Err(Error::Invalid(format!("left node {a} ({}) has an empty domain", v.name)));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if e.left >= left.len() || e.right >= right.len() {
                return Err(Error::Invalid(format!("edge {i} references a missing node")));
            }
            if !seen.insert((e.left, e.right)) {
                return Err(Error::Invalid(format!("duplicate edge ({}, {})", e.left, e.right)));
            }
            let dom = left[e.left].domain.len();
            if e.costs.len() != dom {
                return Err(Error::Invalid(format!(
                    "edge ({}, {}) has {} costs for a domain of size {dom}",
                    e.left,
                    e.right,
                    e.costs.len()
                )));
            }
            left_edges[e.left].push(i);
            right_edges[e.right].push(i);
        }
        if let Some(b) = right_edges.iter().position(Vec::is_empty) {
            return Err(Error::IsolatedRightNode(b));
        }
        Ok(GenericFds { left, right, edges, left_edges, right_edges })
    }

    pub fn left(&self) -> &[FdsVariable] {
        &self.left
    }

    pub fn right(&self) -> &[String] {
        &self.right
    }

    pub fn edges(&self) -> &[FdsEdge<T>] {
        &self.edges
    }

    pub fn right_degree(&self, b: usize) -> usize {
        self.right_edges[b].len()
    }

    /// `Σ_a |Z_a|`.
    pub fn domain_total(&self) -> usize {
        self.left.iter().map(|v| v.domain.len()).sum()
    }

    fn check_assignment(&self, u: &FdsAssignment) -> Result<()> {
        if u.values.len() != self.left.len() {
            return Err(Error::LengthMismatch { expected: self.left.len(), found: u.values.len() });
        }
        if let Some(a) = (0..self.left.len()).find(|&a| u.values[a] >= self.left[a].domain.len()) {
            return Err(Error::Invalid(format!("value of left node {a} is outside its domain")));
        }
        Ok(())
    }

    /// `v_b = (1/deg b) Σ_{(a,b)} f_e(u_a)`.
    pub fn evaluate_outputs(&self, u: &FdsAssignment) -> Result<Vec<T>> {
        self.check_assignment(u)?;
        Ok(self
            .right_edges
            .iter()
            .map(|es| {
                let mut total = T::zero();
                for &e in es {
                    let edge = &self.edges[e];
                    total += edge.costs[u.values[edge.left]].clone();
                }
                total / T::from_count(es.len())
            })
            .collect())
    }

    /// Largest output under `u`.
    pub fn max_output(&self, u: &FdsAssignment) -> Result<T> {
        let out = self.evaluate_outputs(u)?;
        let mut it = out.into_iter();
        let first = it.next().ok_or(Error::Empty("right nodes"))?;
        Ok(it.fold(first, |m, v| if v > m { v } else { m }))
    }

    /// Values not dominated by another value of the same variable on every
    /// incident edge. Ties keep the smaller index.
    fn reduced_domains(&self) -> Vec<Vec<usize>> {
        (0..self.left.len())
            .map(|a| {
                let size = self.left[a].domain.len();
                let es = &self.left_edges[a];
                if es.is_empty() {
                    return vec![0];
                }
                let costs = |z: usize| es.iter().map(move |&e| &self.edges[e].costs[z]);
                (0..size)
                    .filter(|&z| {
                        !(0..size).any(|w| {
                            w != z
                                && costs(w).zip(costs(z)).all(|(cw, cz)| cw <= cz)
                                && (w < z || costs(w).zip(costs(z)).any(|(cw, cz)| cw < cz))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Backtracking search for `u` with every output `≤ eps`.
    ///
    /// Variables are tried in ascending (reduced) domain size, ties by index;
    /// a branch is cut as soon as some output cannot stay below `eps` even if
    /// every unassigned incident edge takes its least cost. On failure the
    /// right nodes that caused cuts are shrunk greedily to a set whose
    /// sub-structure is still infeasible.
    pub fn epsilon_assignment(&self, eps: &T, budget: &Budget) -> Result<EpsOutcome> {
        let mut steps = 0usize;
        match self.search(eps, budget.search_steps, &mut steps)? {
            Ok(u) => Ok(EpsOutcome::Feasible(u)),
            Err(conflict) => {
                let cert = self.shrink_certificate(eps, conflict, budget)?;
                Ok(EpsOutcome::Infeasible(cert))
            }
        }
    }

    /// Feasibility only, without certificate extraction.
    pub fn is_eps_feasible(&self, eps: &T, budget: &Budget) -> Result<bool> {
        let mut steps = 0usize;
        Ok(self.search(eps, budget.search_steps, &mut steps)?.is_ok())
    }

    fn search(&self, eps: &T, limit: usize, steps: &mut usize) -> Result<std::result::Result<FdsAssignment, Vec<usize>>> {
        let domains = self.reduced_domains();
        let edge_min: Vec<T> = self
            .edges
            .iter()
            .map(|e| {
                let mut it = domains[e.left].iter().map(|&z| e.costs[z].clone());
                let first = it.next().expect("nonempty domain");
                it.fold(first, |m, c| if c < m { c } else { m })
            })
            .collect();
        let caps: Vec<T> = (0..self.right.len()).map(|b| eps.clone() * T::from_count(self.right_degree(b))).collect();
        let mut remaining: Vec<T> = self
            .right_edges
            .iter()
            .map(|es| {
                let mut s = T::zero();
                for &e in es {
                    s += edge_min[e].clone();
                }
                s
            })
            .collect();
        let initial: Vec<usize> = (0..self.right.len()).filter(|&b| remaining[b] > caps[b]).collect();
        if !initial.is_empty() {
            return Ok(Err(initial[..1].to_vec()));
        }
        let mut order: Vec<usize> = (0..self.left.len()).filter(|&a| !self.left_edges[a].is_empty()).collect();
        order.sort_by_key(|&a| (domains[a].len(), a));
        let mut state = SearchState {
            fds: self,
            domains: &domains,
            edge_min: &edge_min,
            caps: &caps,
            assigned: vec![T::zero(); self.right.len()],
            remaining: &mut remaining,
            values: (0..self.left.len()).map(|a| domains[a][0]).collect(),
            conflicts: vec![false; self.right.len()],
            steps,
            limit,
        };
        if state.dfs(&order, 0)? {
            Ok(Ok(FdsAssignment { values: state.values }))
        } else {
            Ok(Err((0..self.right.len()).filter(|&b| state.conflicts[b]).collect()))
        }
    }

    fn shrink_certificate(&self, eps: &T, conflict: Vec<usize>, budget: &Budget) -> Result<FdsCertificate> {
        let infeasible = |set: &[usize]| -> Result<bool> {
            let sub = self.finite_sub_fds(set)?;
            let mut steps = 0usize;
            Ok(sub.search(eps, budget.search_steps, &mut steps)?.is_err())
        };
        let mut set = if !conflict.is_empty() && infeasible(&conflict)? {
            conflict
        } else {
            (0..self.right.len()).collect()
        };
        let mut i = 0;
        while i < set.len() && set.len() > 1 {
            let mut trial = set.clone();
            trial.remove(i);
            match infeasible(&trial) {
                Ok(true) => set = trial,
                Ok(false) => i += 1,
                Err(Error::Capacity { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        Ok(FdsCertificate { right_nodes: set })
    }

    /// Achievable values of `v_b`: averages of one table entry per incident
    /// edge, over the undominated values.
    fn output_levels(&self, cap: usize) -> Result<Vec<T>> {
        let domains = self.reduced_domains();
        let mut levels: Vec<T> = Vec::new();
        for (b, es) in self.right_edges.iter().enumerate() {
            let mut sums = vec![T::zero()];
            for &e in es {
                let edge = &self.edges[e];
                let mut next = Vec::with_capacity(sums.len() * domains[edge.left].len());
                for s in &sums {
                    for &z in &domains[edge.left] {
                        next.push(s.clone() + edge.costs[z].clone());
                    }
                }
                sort_dedup(&mut next);
                if next.len() > cap {
                    return Err(Error::Capacity { what: "candidate output levels", budget: cap });
                }
                sums = next;
            }
            let deg = T::from_count(self.right_degree(b));
            levels.extend(sums.into_iter().map(|s| s / deg.clone()));
        }
        sort_dedup(&mut levels);
        Ok(levels)
    }

    /// `min_u max_b v_b` and a minimizing assignment, by binary search over
    /// the achievable output levels with [`GenericFds::epsilon_assignment`]
    /// as the oracle.
    pub fn min_max_value(&self, budget: &Budget) -> Result<(T, FdsAssignment)> {
        const LEVEL_CAP: usize = 1 << 16;
        if self.right.is_empty() {
            return Err(Error::Empty("right nodes"));
        }
        let levels = self.output_levels(LEVEL_CAP)?;
        let feasible = |i: usize| -> Result<Option<FdsAssignment>> {
            let mut steps = 0usize;
            Ok(self.search(&levels[i], budget.search_steps, &mut steps)?.ok())
        };
        let (mut lo, mut hi) = (0usize, levels.len() - 1);
        let mut best = feasible(hi)?.ok_or_else(|| Error::Invalid("largest output level infeasible".into()))?;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            match feasible(mid)? {
                Some(u) => {
                    hi = mid;
                    best = u;
                }
                None => lo = mid + 1,
            }
        }
        let value = self.max_output(&best)?;
        Ok((value, best))
    }

    /// The sub-structure induced by `rsub`, its incident left nodes (in
    /// original order) and their edges into `rsub`; also returns the original
    /// indices of the kept left and right nodes.
    pub fn finite_sub_fds_mapped(&self, rsub: &[usize]) -> Result<(Self, Vec<usize>, Vec<usize>)> {
        if rsub.is_empty() {
            return Err(Error::Empty("right subset"));
        }
        let rights: Vec<usize> = rsub.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if let Some(&b) = rights.iter().find(|&&b| b >= self.right.len()) {
            return Err(Error::Invalid(format!("right node {b} does not exist")));
        }
        let mut right_new = vec![usize::MAX; self.right.len()];
        for (i, &b) in rights.iter().enumerate() {
            right_new[b] = i;
        }
        let lefts: Vec<usize> = rights
            .iter()
            .flat_map(|&b| self.right_edges[b].iter().map(|&e| self.edges[e].left))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut left_new = vec![usize::MAX; self.left.len()];
        for (i, &a) in lefts.iter().enumerate() {
            left_new[a] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| right_new[e.right] != usize::MAX)
            .map(|e| FdsEdge { left: left_new[e.left], right: right_new[e.right], costs: e.costs.clone() })
            .collect();
        let sub = GenericFds::new(
            lefts.iter().map(|&a| self.left[a].clone()).collect(),
            rights.iter().map(|&b| self.right[b].clone()).collect(),
            edges,
        )?;
        Ok((sub, lefts, rights))
    }

    pub fn finite_sub_fds(&self, rsub: &[usize]) -> Result<Self> {
        Ok(self.finite_sub_fds_mapped(rsub)?.0)
    }

    /// Rescales one edge's cost table.
    pub fn scale_edge(&self, edge: usize, c: T) -> Self {
        let mut out = self.clone();
        for v in &mut out.edges[edge].costs {
            *v = v.clone() * c.clone();
        }
        out
    }
}

impl FdsCertificate {
    /// Re-solves the induced sub-structure and confirms it is infeasible.
    pub fn certifies<T: Scalar>(&self, fds: &GenericFds<T>, eps: &T, budget: &Budget) -> Result<bool> {
        if self.right_nodes.is_empty() {
            return Ok(false);
        }
        Ok(!fds.finite_sub_fds(&self.right_nodes)?.is_eps_feasible(eps, budget)?)
    }
}

fn sort_dedup<T: Scalar>(v: &mut Vec<T>) {
    v.sort_by(|a, b| a.partial_cmp(b).expect("comparable scalars"));
    v.dedup_by(|a, b| a == b);
}

struct SearchState<'a, T: Scalar> {
    fds: &'a GenericFds<T>,
    domains: &'a [Vec<usize>],
    edge_min: &'a [T],
    caps: &'a [T],
    assigned: Vec<T>,
    remaining: &'a mut Vec<T>,
    values: Vec<usize>,
    conflicts: Vec<bool>,
    steps: &'a mut usize,
    limit: usize,
}

impl<T: Scalar> SearchState<'_, T> {
    fn dfs(&mut self, order: &[usize], depth: usize) -> Result<bool> {
        let Some(&a) = order.get(depth) else { return Ok(true) };
        let es = &self.fds.left_edges[a];
        for &z in &self.domains[a] {
            *self.steps += 1;
            if *self.steps > self.limit {
                return Err(Error::Capacity { what: "FDS search steps", budget: self.limit });
            }
            for &e in es {
                let edge = &self.fds.edges[e];
                self.assigned[edge.right] += edge.costs[z].clone();
                self.remaining[edge.right] -= self.edge_min[e].clone();
            }
            let mut ok = true;
            for &e in es {
                let b = self.fds.edges[e].right;
                if self.assigned[b].clone() + self.remaining[b].clone() > self.caps[b] {
                    self.conflicts[b] = true;
                    ok = false;
                }
            }
            if ok && self.dfs(order, depth + 1)? {
                self.values[a] = z;
                return Ok(true);
            }
            for &e in es {
                let edge = &self.fds.edges[e];
                self.assigned[edge.right] -= edge.costs[z].clone();
                self.remaining[edge.right] += self.edge_min[e].clone();
            }
        }
        Ok(false)
    }
}

/// `f_e(z) = [z ≠ b] + 1/deg(b)` with left domains the neighbor sets: a
/// 1-assignment exists iff every right node can be matched to a distinct left node.
pub fn encode_matching<T: Scalar>(g: &BipartiteGraph) -> Result<GenericFds<T>> {
    if let Some(b) = (0..g.right_count()).find(|&b| g.right_neighbors(b).is_empty()) {
        return Err(Error::IsolatedRightNode(b));
    }
    let left = (0..g.left_count())
        .map(|a| {
            let nb = g.left_neighbors(a);
            FdsVariable {
                name: format!("a{a}"),
                domain: if nb.is_empty() { vec!["none".into()] } else { nb.iter().map(|b| format!("b{b}")).collect() },
            }
        })
        .collect();
    let right = (0..g.right_count()).map(|b| format!("b{b}")).collect();
    let mut edges = Vec::with_capacity(g.edge_count());
    for a in 0..g.left_count() {
        for &b in g.left_neighbors(a) {
            let share = T::one() / T::from_count(g.right_neighbors(b).len());
            let costs = g
                .left_neighbors(a)
                .iter()
                .map(|&z| if z == b { share.clone() } else { T::one() + share.clone() })
                .collect();
            edges.push(FdsEdge { left: a, right: b, costs });
        }
    }
    GenericFds::new(left, right, edges)
}

/// The FDS of the transductive problem on `points`: left nodes are the
/// scenarios with domain `Y`, right nodes the candidate truths, and the edge
/// from a scenario hiding coordinate `i` to truth `y` costs `ℓ(z, y_i)`,
/// minus the best-in-class loss of `y` in the agnostic setting.
pub fn encode_transductive<T: Scalar>(
    family: &dyn LabelingFamily,
    points: &[Point],
    setting: Setting,
    loss: &LossFunction<T>,
    budget: &Budget,
) -> Result<GenericFds<T>> {
    let restriction = family.restrict_within(points, budget.nodes)?;
    let labels = family.label_space();
    let oig = match setting {
        Setting::Realizable => build_bipartite_oig(&restriction, &labels, budget)?,
        Setting::Agnostic => build_agnostic_oig(&restriction, &labels, points.len(), budget)?,
    };
    encode_oig(&oig, &restriction, setting, loss)
}

/// [`encode_transductive`] for an already built bipartite OIG.
pub fn encode_oig<T: Scalar>(
    oig: &BipartiteOig,
    restriction: &[crate::label::Labeling],
    setting: Setting,
    loss: &LossFunction<T>,
) -> Result<GenericFds<T>> {
    let labels = oig.label_space();
    loss.check_covers(labels)?;
    let left = oig
        .left()
        .iter()
        .map(|p| FdsVariable { name: p.to_string(), domain: labels.iter().map(|y| y.to_string()).collect() })
        .collect();
    let right = oig.right().iter().map(|y| y.to_string()).collect();
    let g = oig.graph();
    let mut edges = Vec::with_capacity(g.edge_count());
    for (r, y) in oig.right().iter().enumerate() {
        let offset = match setting {
            Setting::Realizable => T::zero(),
            Setting::Agnostic => best_in_class_loss(restriction, y, loss)?,
        };
        for &l in g.right_neighbors(r) {
            let truth = y.get(oig.left()[l].hole());
            let costs = labels
                .iter()
                .map(|&z| Ok(loss.try_eval(z, truth)? - offset.clone()))
                .collect::<Result<_>>()?;
            edges.push(FdsEdge { left: l, right: r, costs });
        }
    }
    edges.sort_by_key(|e| (e.left, e.right));
    GenericFds::new(left, right, edges)
}

/// Exact FDS over rationals.
pub type Fds = GenericFds<Rational>;
