use std::collections::VecDeque;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::oig::OneInclusionGraph;
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    /// Enumerate every node subset.
    Exhaustive,
    /// Parametric min-cut (Goldberg's construction) with Dinkelbach updates.
    Flow,
}

/// Maximum average degree `max_U 2|E(U)|/|U|` of a binary OIG.
///
/// Uses subset enumeration when the node count fits the subset budget and
/// the exact flow method otherwise.
pub fn max_avg_degree(g: &OneInclusionGraph, mode: Option<DensityMode>, budget: &Budget) -> Result<Rational> {
    let edges = g.edge_pairs()?;
    let nodes = g.nodes().len();
    let mode = mode.unwrap_or(if nodes <= budget.subset_nodes { DensityMode::Exhaustive } else { DensityMode::Flow });
    let (density, _) = match mode {
        DensityMode::Exhaustive => {
            if nodes > budget.subset_nodes {
                return Err(Error::Capacity { what: "OIG nodes for exhaustive density", budget: budget.subset_nodes });
            }
            densest_subgraph_exhaustive(nodes, &edges)
        }
        DensityMode::Flow => densest_subgraph(nodes, &edges),
    };
    Ok(density * Rational::from_integer(2))
}

/// `max_U |E(U)|/|U|` by enumerating all nonempty subsets; `node_count < 64`.
pub fn densest_subgraph_exhaustive(node_count: usize, edges: &[(usize, usize)]) -> (Rational, Vec<usize>) {
    assert!(node_count < 64, "exhaustive density needs fewer than 64 nodes");
    let mut best = (Rational::from_integer(0), vec![]);
    for mask in 1u64..(1u64 << node_count) {
        let inside = edges.iter().filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1).count();
        let d = Rational::new(inside as i64, mask.count_ones() as i64);
        if d > best.0 {
            best = (d, (0..node_count).filter(|&v| mask >> v & 1 == 1).collect());
        }
    }
    best
}

/// Exact densest subgraph `max_U |E(U)|/|U|` and a maximizing `U`.
///
/// At a candidate density `λ = a/b` the min cut of the network
/// `source -(b)-> edge -(∞)-> endpoints -(a)-> sink` decides whether some
/// `U` has `b|E(U)| - a|U| > 0`; its source side is such a `U`, whose own
/// density becomes the next candidate. Densities strictly increase over a
/// finite set, so the loop terminates at the optimum.
pub fn densest_subgraph(node_count: usize, edges: &[(usize, usize)]) -> (Rational, Vec<usize>) {
    if node_count == 0 || edges.is_empty() {
        return (Rational::from_integer(0), if node_count > 0 { vec![0] } else { vec![] });
    }
    let mut set: Vec<usize> = (0..node_count).collect();
    let mut lambda = Rational::new(edges.len() as i64, node_count as i64);
    loop {
        match denser_than(node_count, edges, lambda) {
            Some(u) => {
                let inside = count_inside(&u, node_count, edges);
                let d = Rational::new(inside as i64, u.len() as i64);
                debug_assert!(d > lambda);
                lambda = d;
                set = u;
            }
            None => return (lambda, set),
        }
    }
}

fn count_inside(u: &[usize], node_count: usize, edges: &[(usize, usize)]) -> usize {
    let mut member = vec![false; node_count];
    for &v in u {
        member[v] = true;
    }
    edges.iter().filter(|&&(a, b)| member[a] && member[b]).count()
}

fn denser_than(node_count: usize, edges: &[(usize, usize)], lambda: Rational) -> Option<Vec<usize>> {
    let (a, b) = (*lambda.numer(), *lambda.denom());
    let m = edges.len();
    let source = 0;
    let sink = 1;
    let edge_node = |e: usize| 2 + e;
    let vertex_node = |v: usize| 2 + m + v;
    let inf = b * (m as i64) + 1;
    let mut net = FlowNetwork::new(2 + m + node_count);
    for (e, &(x, y)) in edges.iter().enumerate() {
        net.add_edge(source, edge_node(e), b);
        net.add_edge(edge_node(e), vertex_node(x), inf);
        net.add_edge(edge_node(e), vertex_node(y), inf);
    }
    for v in 0..node_count {
        net.add_edge(vertex_node(v), sink, a);
    }
    let cut = net.max_flow(source, sink);
    if b * m as i64 - cut <= 0 {
        return None;
    }
    let reach = net.residual_reach(source);
    let u: Vec<usize> = (0..node_count).filter(|&v| reach[vertex_node(v)]).collect();
    (!u.is_empty()).then_some(u)
}

/// Dinic's algorithm on integer capacities.
struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork { head: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new() }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: i64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn levels(&self, s: usize) -> Vec<i64> {
        let mut level = vec![-1; self.head.len()];
        level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        level
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            let level = self.levels(s);
            if level[t] < 0 {
                return flow;
            }
            let mut iter = vec![0usize; self.head.len()];
            loop {
                let pushed = self.push(s, t, i64::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
    }

    fn push(&mut self, u: usize, t: usize, limit: i64, level: &[i64], iter: &mut [usize]) -> i64 {
        if u == t {
            return limit;
        }
        while iter[u] < self.head[u].len() {
            let e = self.head[u][iter[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u] + 1 {
                let got = self.push(v, t, limit.min(self.cap[e]), level, iter);
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            iter[u] += 1;
        }
        0
    }

    fn residual_reach(&self, s: usize) -> Vec<bool> {
        self.levels(s).into_iter().map(|l| l >= 0).collect()
    }
}
