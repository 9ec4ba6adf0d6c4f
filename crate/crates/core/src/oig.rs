//! One-inclusion graphs in hypergraph and bipartite form, realizable and agnostic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::label::{all_labelings, hamming_distance, Label, Labeling, PartialLabeling};

/// Nodes of the OIG that disagree exactly at `coord` and agree elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    pub coord: usize,
    pub nodes: Vec<usize>,
}

/// The one-inclusion (hyper)graph on a set of labelings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneInclusionGraph {
    n: usize,
    nodes: Vec<Labeling>,
    hyperedges: Vec<Hyperedge>,
    discounts: Vec<usize>,
}

impl OneInclusionGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[Labeling] {
        &self.nodes
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.hyperedges
    }

    pub fn discounts(&self) -> &[usize] {
        &self.discounts
    }

    /// True when every hyperedge is an ordinary edge.
    pub fn is_graph(&self) -> bool {
        self.hyperedges.iter().all(|e| e.nodes.len() == 2)
    }

    /// Endpoint pairs, for OIGs that are ordinary graphs.
    pub fn edge_pairs(&self) -> Result<Vec<(usize, usize)>> {
        self.hyperedges
            .iter()
            .map(|e| match e.nodes.as_slice() {
                [a, b] => Ok((*a, *b)),
                _ => Err(Error::Invalid("OIG has a hyperedge with more than two nodes".into())),
            })
            .collect()
    }
}

fn normalize(labelings: &[Labeling], budget: usize) -> Result<(usize, Vec<Labeling>)> {
    let set: BTreeSet<Labeling> = labelings.iter().cloned().collect();
    let first = set.iter().next().ok_or(Error::Empty("labeling set"))?;
    let n = first.len();
    if n == 0 {
        return Err(Error::Empty("labeling"));
    }
    if let Some(bad) = set.iter().find(|y| y.len() != n) {
        return Err(Error::LengthMismatch { expected: n, found: bad.len() });
    }
    if set.len() > budget {
        return Err(Error::Capacity { what: "OIG nodes", budget });
    }
    Ok((n, set.into_iter().collect()))
}

/// Builds the hypergraph OIG: for each coordinate, nodes are bucketed by
/// their entries with that coordinate masked, and every bucket of two or
/// more nodes becomes a maximal hyperedge.
pub fn build_oig(labelings: &[Labeling], budget: &Budget) -> Result<OneInclusionGraph> {
    let (n, nodes) = normalize(labelings, budget.nodes)?;
    let mut hyperedges = Vec::new();
    for coord in 0..n {
        let mut buckets: BTreeMap<PartialLabeling, Vec<usize>> = BTreeMap::new();
        for (idx, y) in nodes.iter().enumerate() {
            buckets.entry(y.mask(coord)).or_default().push(idx);
        }
        hyperedges.extend(
            buckets
                .into_values()
                .filter(|members| members.len() >= 2)
                .map(|nodes| Hyperedge { coord, nodes }),
        );
    }
    let discounts = vec![0; nodes.len()];
    Ok(OneInclusionGraph { n, nodes, hyperedges, discounts })
}

/// The bipartite OIG: scenarios (partial labelings) on the left, full
/// labelings on the right, consistency edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteOig {
    label_space: Vec<Label>,
    left: Vec<PartialLabeling>,
    right: Vec<Labeling>,
    graph: BipartiteGraph,
}

impl BipartiteOig {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn label_space(&self) -> &[Label] {
        &self.label_space
    }

    pub fn left(&self) -> &[PartialLabeling] {
        &self.left
    }

    pub fn right(&self) -> &[Labeling] {
        &self.right
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn left_index(&self, p: &PartialLabeling) -> Option<usize> {
        self.left.binary_search(p).ok()
    }

    pub fn right_index(&self, y: &Labeling) -> Option<usize> {
        self.right.binary_search(y).ok()
    }

    /// Copy with the edge `(l, r)` removed; used for negative controls.
    pub fn without_edge(&self, l: usize, r: usize) -> Self {
        BipartiteOig { graph: self.graph.without_edge(l, r), ..self.clone() }
    }
}

fn assemble(n: usize, label_space: Vec<Label>, right: Vec<Labeling>, discounts: Vec<usize>) -> BipartiteOig {
    let left: Vec<PartialLabeling> = right
        .iter()
        .flat_map(|y| (0..n).map(move |i| y.mask(i)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let right_adj = right
        .iter()
        .map(|y| {
            (0..n)
                .map(|i| left.binary_search(&y.mask(i)).expect("mask is a left node"))
                .collect()
        })
        .collect();
    let graph = BipartiteGraph::from_right_adj(n, left.len(), right_adj, discounts);
    BipartiteOig { label_space, left, right, graph }
}

fn checked_label_space(labelings: &[Labeling], label_space: &[Label]) -> Result<Vec<Label>> {
    let mut ys = label_space.to_vec();
    ys.sort();
    ys.dedup();
    if ys.is_empty() {
        return Err(Error::Empty("label space"));
    }
    for y in labelings {
        if let Some(l) = y.entries().iter().find(|l| ys.binary_search(l).is_err()) {
            return Err(Error::Invalid(format!("labeling {y} uses label {l} outside the label space")));
        }
    }
    Ok(ys)
}

/// Realizable bipartite OIG on `labelings`. Every right node has degree
/// exactly `n`; scenarios with a unique completion stay as degree-1 left nodes.
pub fn build_bipartite_oig(labelings: &[Labeling], label_space: &[Label], budget: &Budget) -> Result<BipartiteOig> {
    let (n, right) = normalize(labelings, budget.nodes)?;
    let ys = checked_label_space(&right, label_space)?;
    let discounts = vec![0; right.len()];
    Ok(assemble(n, ys, right, discounts))
}

/// Agnostic bipartite OIG: right side is all of `Y^n`, each node discounted
/// by its Hamming distance to `restriction`.
pub fn build_agnostic_oig(restriction: &[Labeling], label_space: &[Label], n: usize, budget: &Budget) -> Result<BipartiteOig> {
    if restriction.is_empty() {
        return Err(Error::Empty("hypothesis restriction"));
    }
    if let Some(bad) = restriction.iter().find(|y| y.len() != n) {
        return Err(Error::LengthMismatch { expected: n, found: bad.len() });
    }
    let ys = checked_label_space(restriction, label_space)?;
    let right = all_labelings(&ys, n, budget.agnostic_nodes)?;
    let discounts = right
        .iter()
        .map(|y| hamming_distance(y, restriction))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(n, ys, right, discounts))
}

/// Checks that `b` is the edge-vertex incidence graph of `g` augmented with
/// self-loops: multi-neighbor scenarios correspond one-to-one to hyperedges,
/// single-neighbor scenarios to coordinates where a node has no hyperedge.
pub fn incidence_consistency_check(g: &OneInclusionGraph, b: &BipartiteOig) -> bool {
    let n = g.n();
    if b.n() != n || b.right() != g.nodes() {
        return false;
    }
    let graph = b.graph();
    for (r, y) in b.right().iter().enumerate() {
        let adj = graph.right_neighbors(r);
        if adj.len() != n {
            return false;
        }
        let holes: BTreeSet<usize> = adj.iter().map(|&l| b.left()[l].hole()).collect();
        if holes.len() != n || adj.iter().any(|&l| !b.left()[l].is_consistent_with(y)) {
            return false;
        }
    }
    let mut covered = vec![vec![false; n]; g.nodes().len()];
    let edges: BTreeSet<(usize, Vec<usize>)> = g
        .hyperedges()
        .iter()
        .map(|e| {
            for &v in &e.nodes {
                covered[v][e.coord] = true;
            }
            (e.coord, e.nodes.clone())
        })
        .collect();
    let mut seen = BTreeSet::new();
    for (l, p) in b.left().iter().enumerate() {
        let nbrs = graph.left_neighbors(l);
        if nbrs.iter().any(|&r| !graph.right_neighbors(r).contains(&l)) {
            return false;
        }
        match nbrs.len() {
            0 => return false,
            1 => {
                if covered[nbrs[0]][p.hole()] {
                    return false;
                }
            }
            _ => {
                let key = (p.hole(), nbrs.to_vec());
                if !edges.contains(&key) || !seen.insert(key) {
                    return false;
                }
            }
        }
    }
    seen.len() == edges.len()
}

/// Stable text dump of an OIG, for golden tests and the CLI.
pub fn dump_oig(g: &OneInclusionGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "oig n={} nodes={} hyperedges={}", g.n(), g.nodes().len(), g.hyperedges().len());
    for (i, y) in g.nodes().iter().enumerate() {
        let _ = writeln!(s, "node {i} {y} discount={}", g.discounts()[i]);
    }
    for (i, e) in g.hyperedges().iter().enumerate() {
        let members: Vec<String> = e.nodes.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "hyperedge {i} coord={} nodes={}", e.coord, members.join(","));
    }
    s
}

/// Stable text dump of a bipartite OIG.
pub fn dump_bipartite(b: &BipartiteOig) -> String {
    let mut s = String::new();
    let g = b.graph();
    let labels: Vec<String> = b.label_space().iter().map(Label::to_string).collect();
    let _ = writeln!(
        s,
        "bipartite n={} left={} right={} edges={} labels={}",
        b.n(),
        g.left_count(),
        g.right_count(),
        g.edge_count(),
        labels.join(",")
    );
    for (r, y) in b.right().iter().enumerate() {
        let _ = writeln!(s, "right {r} {y} discount={}", g.discount(r));
    }
    for (l, p) in b.left().iter().enumerate() {
        let nbrs: Vec<String> = g.left_neighbors(l).iter().map(usize::to_string).collect();
        let _ = writeln!(s, "left {l} {p} -> {}", nbrs.join(","));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(v: &[&str]) -> Vec<Labeling> {
        v.iter().map(|s| Labeling::bits(s)).collect()
    }

    fn binary() -> Vec<Label> {
        vec![Label::int(0), Label::int(1)]
    }

    #[test]
    fn path_oig() {
        let g = build_oig(&ls(&["000", "100", "110", "111"]), &Budget::default()).unwrap();
        assert_eq!(g.nodes().len(), 4);
        let coords: Vec<usize> = g.hyperedges().iter().map(|e| e.coord).collect();
        assert_eq!(coords, vec![0, 1, 2]);
        assert!(g.is_graph());
        assert_eq!(g.edge_pairs().unwrap(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn single_labeling() {
        let g = build_oig(&ls(&["01"]), &Budget::default()).unwrap();
        assert!(g.hyperedges().is_empty());
        let b = build_bipartite_oig(&ls(&["01"]), &binary(), &Budget::default()).unwrap();
        assert_eq!(b.left().len(), 2);
        assert!((0..2).all(|l| b.graph().left_neighbors(l).len() == 1));
        assert_eq!(b.graph().right_neighbors(0).len(), 2);
        assert!(incidence_consistency_check(&g, &b));
    }

    #[test]
    fn square_oig() {
        let g = build_oig(&ls(&["00", "01", "10", "11"]), &Budget::default()).unwrap();
        assert_eq!(g.hyperedges().len(), 4);
    }

    #[test]
    fn bipartite_two_labelings() {
        let b = build_bipartite_oig(&ls(&["000", "100"]), &binary(), &Budget::default()).unwrap();
        let left: Vec<String> = b.left().iter().map(|p| p.to_string()).collect();
        assert_eq!(left, vec!["(?,0,0)", "(0,?,0)", "(1,?,0)", "(0,0,?)", "(1,0,?)"]);
        let degrees: Vec<usize> = (0..5).map(|l| b.graph().left_neighbors(l).len()).collect();
        assert_eq!(degrees, vec![2, 1, 1, 1, 1]);
    }

    #[test]
    fn multiclass_right_degree() {
        let rows = ls(&["000", "100", "200", "010", "011", "012", "210"]);
        let labels = vec![Label::int(0), Label::int(1), Label::int(2)];
        let b = build_bipartite_oig(&rows, &labels, &Budget::default()).unwrap();
        assert!((0..b.right().len()).all(|r| b.graph().right_neighbors(r).len() == 3));
        let g = build_oig(&rows, &Budget::default()).unwrap();
        assert!(g.hyperedges().iter().any(|e| e.nodes.len() == 3));
        assert!(incidence_consistency_check(&g, &b));
    }

    #[test]
    fn agnostic_discounts() {
        let b = build_agnostic_oig(&ls(&["00"]), &binary(), 2, &Budget::default()).unwrap();
        assert_eq!(b.graph().discounts(), &[0, 1, 1, 2]);
        assert!((0..b.left().len()).all(|l| b.graph().left_neighbors(l).len() == 2));

        let ternary = vec![Label::int(0), Label::int(1), Label::int(2)];
        let b = build_agnostic_oig(&ls(&["00", "11"]), &ternary, 2, &Budget::default()).unwrap();
        assert_eq!(b.right().len(), 9);
        let r = b.right_index(&Labeling::bits("22")).unwrap();
        assert_eq!(b.graph().discount(r), 2);
        assert!(build_agnostic_oig(&[], &ternary, 2, &Budget::default()).is_err());
    }

    #[test]
    fn agnostic_on_full_cube_is_realizable() {
        let cube = ls(&["00", "01", "10", "11"]);
        let a = build_agnostic_oig(&cube, &binary(), 2, &Budget::default()).unwrap();
        let r = build_bipartite_oig(&cube, &binary(), &Budget::default()).unwrap();
        assert_eq!(a, r);
    }

    #[test]
    fn mutated_incidence_fails() {
        let rows = ls(&["000", "100", "110", "111"]);
        let g = build_oig(&rows, &Budget::default()).unwrap();
        let b = build_bipartite_oig(&rows, &binary(), &Budget::default()).unwrap();
        assert!(incidence_consistency_check(&g, &b));
        let l = b.left_index(&Labeling::bits("000").mask(0)).unwrap();
        assert!(!incidence_consistency_check(&g, &b.without_edge(l, 0)));
    }

    #[test]
    fn budget_errors() {
        let tight = Budget::default().with_nodes(2);
        assert!(matches!(build_oig(&ls(&["00", "01", "10"]), &tight), Err(Error::Capacity { .. })));
        let mut b = Budget::default();
        b.agnostic_nodes = 10;
        assert!(matches!(build_agnostic_oig(&ls(&["0000"]), &binary(), 4, &b), Err(Error::Capacity { .. })));
    }

    #[test]
    fn dump_is_stable() {
        let g = build_oig(&ls(&["00", "01"]), &Budget::default()).unwrap();
        assert_eq!(
            dump_oig(&g),
            "oig n=2 nodes=2 hyperedges=1\nnode 0 (0,0) discount=0\nnode 1 (0,1) discount=0\nhyperedge 0 coord=1 nodes=0,1\n"
        );
        let b = build_bipartite_oig(&ls(&["00", "01"]), &binary(), &Budget::default()).unwrap();
        assert_eq!(
            dump_bipartite(&b),
            "bipartite n=2 left=3 right=2 edges=4 labels=0,1\n\
             right 0 (0,0) discount=0\nright 1 (0,1) discount=0\n\
             left 0 (?,0) -> 0\nleft 1 (?,1) -> 1\nleft 2 (0,?) -> 0,1\n"
        );
    }
}
