//! Brute-force oracles and instance generators shared by the integration tests.
//!
//! Nothing here calls into the matching, density or FDS solvers; every
//! quantity is recomputed from definitions by exhaustive enumeration.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use oiglab::fds::{Fds, FdsEdge, FdsVariable};
use oiglab::graph::BipartiteGraph;
use oiglab::label::{Label, Labeling, PartialLabeling};
use oiglab::oig::{build_bipartite_oig, BipartiteOig, OneInclusionGraph};
use oiglab::{Budget, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn labels(k: usize) -> Vec<Label> {
    (0..k as i64).map(Label::int).collect()
}

/// Every labeling in `Y^n`, lexicographic.
pub fn cube(k: usize, n: usize) -> Vec<Labeling> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..k as i64).map(move |y| {
                    let mut q = p.clone();
                    q.push(y);
                    q
                })
            })
            .collect();
    }
    out.iter().map(|v| Labeling::ints(v)).collect()
}

/// A random class: `m` distinct labelings from `Y^n`.
pub fn random_class(rng: &mut ChaCha8Rng, k: usize, n: usize, m: usize) -> Vec<Labeling> {
    let mut all = cube(k, n);
    all.shuffle(rng);
    all.truncate(m.min(all.len()));
    all.sort();
    all
}

pub fn bipartite(class: &[Labeling], k: usize) -> BipartiteOig {
    build_bipartite_oig(class, &labels(k), &Budget::default()).unwrap()
}

pub fn random_graph(rng: &mut ChaCha8Rng, max_left: usize, max_right: usize, p: f64) -> BipartiteGraph {
    let l = rng.gen_range(1..=max_left);
    let r = rng.gen_range(1..=max_right);
    let mut edges = Vec::new();
    for a in 0..l {
        for b in 0..r {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    BipartiteGraph::from_edges(1, l, r, &edges).unwrap()
}

/// Maximum matching size by dynamic programming over (left prefix, used rights).
pub fn brute_max_matching(left: usize, right: usize, edges: &[(usize, usize)]) -> usize {
    assert!(right <= 20);
    let mut adj = vec![Vec::new(); left];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    let mut best: BTreeMap<u32, usize> = BTreeMap::from([(0, 0)]);
    for nbrs in &adj {
        let mut next = best.clone();
        for (&used, &size) in &best {
            for &b in nbrs {
                if used >> b & 1 == 0 {
                    let e = next.entry(used | 1 << b).or_insert(0);
                    *e = (*e).max(size + 1);
                }
            }
        }
        best = next;
    }
    best.values().copied().max().unwrap_or(0)
}

/// `|N(R')|` for a right subset given as a bitmask.
pub fn neighborhood(right_adj: &[Vec<usize>], mask: u64) -> usize {
    let mut seen = BTreeSet::new();
    for (r, nb) in right_adj.iter().enumerate() {
        if mask >> r & 1 == 1 {
            seen.extend(nb.iter().copied());
        }
    }
    seen.len()
}

/// Hall condition over all `2^|R|` subsets.
pub fn brute_hall(right_adj: &[Vec<usize>], demands: &[usize]) -> bool {
    (1u64..1 << right_adj.len()).all(|mask| {
        let need: usize = (0..right_adj.len()).filter(|&r| mask >> r & 1 == 1).map(|r| demands[r]).sum();
        need <= neighborhood(right_adj, mask)
    })
}

/// Least `k` such that every right subset satisfies the Hall inequality at
/// demands `max(0, n - k - d_r)`.
pub fn brute_defect(right_adj: &[Vec<usize>], discounts: &[usize], n: usize) -> usize {
    (0..=n)
        .find(|&k| {
            let demands: Vec<usize> = discounts.iter().map(|&d| n.saturating_sub(k + d)).collect();
            brute_hall(right_adj, &demands)
        })
        .expect("k = n always satisfies the Hall condition")
}

pub fn right_adj(g: &BipartiteGraph) -> Vec<Vec<usize>> {
    (0..g.right_count()).map(|r| g.right_neighbors(r).to_vec()).collect()
}

/// Minimal max out-degree over all orientations of the hyperedges: each
/// hyperedge points at one of its nodes; every other node gets one out-edge.
pub fn brute_orientation(g: &OneInclusionGraph) -> usize {
    let edges: Vec<&[usize]> = g.hyperedges().iter().map(|h| h.nodes.as_slice()).collect();
    let total: u128 = edges.iter().map(|e| e.len() as u128).product();
    assert!(total <= 1 << 24, "orientation space too large for brute force");
    let mut choice = vec![0usize; edges.len()];
    let mut best = usize::MAX;
    loop {
        let mut out = vec![0usize; g.nodes().len()];
        for (e, &c) in edges.iter().zip(&choice) {
            for (j, &v) in e.iter().enumerate() {
                if j != c {
                    out[v] += 1;
                }
            }
        }
        let worst = out.iter().zip(g.discounts()).map(|(&o, &d)| o.saturating_sub(d)).max().unwrap_or(0);
        best = best.min(worst);
        let mut i = 0;
        loop {
            if i == edges.len() {
                return if best == usize::MAX { 0 } else { best };
            }
            choice[i] += 1;
            if choice[i] < edges[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Every scenario (partial labeling) of a class, sorted.
pub fn scenarios(class: &[Labeling]) -> Vec<PartialLabeling> {
    let set: BTreeSet<PartialLabeling> = class.iter().flat_map(|y| (0..y.len()).map(move |i| y.mask(i))).collect();
    set.into_iter().collect()
}

/// Minimum over all learners (maps scenario -> label in `Y`) of the worst
/// realizable zero-one transductive error.
pub fn brute_best_learner(class: &[Labeling], k: usize) -> Rational {
    let n = class[0].len();
    let sc = scenarios(class);
    let index: BTreeMap<&PartialLabeling, usize> = sc.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let table: Vec<Vec<usize>> = class.iter().map(|y| (0..n).map(|i| index[&y.mask(i)]).collect()).collect();
    let truth: Vec<Vec<i64>> = class.iter().map(|y| (0..n).map(|i| *y.get(i).value().numer()).collect()).collect();
    let count = (k as u128).pow(sc.len() as u32);
    assert!(count <= 1 << 22);
    let mut best = usize::MAX;
    let mut learner = vec![0i64; sc.len()];
    for _ in 0..count {
        let worst = table
            .iter()
            .zip(&truth)
            .map(|(ids, ys)| ids.iter().zip(ys).filter(|(&s, &y)| learner[s] != y).count())
            .max()
            .unwrap();
        best = best.min(worst);
        for v in learner.iter_mut() {
            *v += 1;
            if *v < k as i64 {
                break;
            }
            *v = 0;
        }
    }
    Rational::new(best as i64, n as i64)
}

/// `max_U 2|E(U)| / |U|` over all nonempty node subsets.
pub fn brute_mad(nodes: usize, edges: &[(usize, usize)]) -> Rational {
    let mut best = Rational::from_integer(0);
    for mask in 1u32..1 << nodes {
        let inside = edges.iter().filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1).count();
        best = best.max(Rational::new(2 * inside as i64, mask.count_ones() as i64));
    }
    best
}

pub fn ceil(r: Rational) -> i64 {
    let (q, m) = (r.numer().div_euclid(*r.denom()), r.numer().rem_euclid(*r.denom()));
    if m == 0 {
        q
    } else {
        q + 1
    }
}

/// A random FDS: domains of size 1..=3, costs in {0, 1/2, .., 2}, every right node covered.
pub fn random_fds(rng: &mut ChaCha8Rng, max_left: usize, max_right: usize) -> Fds {
    let l = rng.gen_range(1..=max_left);
    let r = rng.gen_range(1..=max_right);
    let left: Vec<FdsVariable> = (0..l)
        .map(|a| FdsVariable { name: format!("a{a}"), domain: (0..rng.gen_range(1..=3)).map(|z| z.to_string()).collect() })
        .collect();
    let mut edges = Vec::new();
    for b in 0..r {
        let mut any = false;
        for (a, var) in left.iter().enumerate() {
            if rng.gen_bool(0.5) || (!any && a == l - 1) {
                any = true;
                let costs = (0..var.domain.len()).map(|_| Rational::new(rng.gen_range(0..=4), 2)).collect();
                edges.push(FdsEdge { left: a, right: b, costs });
            }
        }
    }
    Fds::new(left, (0..r).map(|b| format!("b{b}")).collect(), edges).unwrap()
}
