use std::collections::VecDeque;

use crate::graph::BipartiteGraph;

/// A matching: each left node is used at most once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub left_to_right: Vec<Option<usize>>,
}

impl Matching {
    pub fn cardinality(&self) -> usize {
        self.left_to_right.iter().flatten().count()
    }

    /// Number of left nodes matched to each right node.
    pub fn right_loads(&self, right_count: usize) -> Vec<usize> {
        let mut loads = vec![0; right_count];
        for r in self.left_to_right.iter().flatten() {
            loads[*r] += 1;
        }
        loads
    }

    pub fn is_valid_for(&self, g: &BipartiteGraph) -> bool {
        self.left_to_right.len() == g.left_count()
            && self
                .left_to_right
                .iter()
                .enumerate()
                .all(|(l, r)| r.map_or(true, |r| g.has_edge(l, r)))
    }
}

const UNSET: usize = usize::MAX;

/// Hopcroft–Karp from side A (`adj`) into side B of size `b_count`.
/// Returns the partner of each A node and of each B node.
pub(crate) fn hopcroft_karp(adj: &[Vec<usize>], b_count: usize) -> (Vec<usize>, Vec<usize>) {
    let a_count = adj.len();
    let mut mate_a = vec![UNSET; a_count];
    let mut mate_b = vec![UNSET; b_count];
    let mut dist = vec![0usize; a_count];
    let mut queue = VecDeque::new();
    loop {
        queue.clear();
        let mut found = false;
        for a in 0..a_count {
            if mate_a[a] == UNSET {
                dist[a] = 0;
                queue.push_back(a);
            } else {
                dist[a] = UNSET;
            }
        }
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                match mate_b[b] {
                    UNSET => found = true,
                    a2 if dist[a2] == UNSET => {
                        dist[a2] = dist[a] + 1;
                        queue.push_back(a2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            return (mate_a, mate_b);
        }
        let mut iter = vec![0usize; a_count];
        for a in 0..a_count {
            if mate_a[a] == UNSET {
                augment(a, adj, &mut mate_a, &mut mate_b, &mut dist, &mut iter);
            }
        }
    }
}

/// Iterative DFS along the BFS layering; flips the path when it reaches a free B node.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    mate_a: &mut [usize],
    mate_b: &mut [usize],
    dist: &mut [usize],
    iter: &mut [usize],
) -> bool {
    let mut stack = vec![root];
    while let Some(&a) = stack.last() {
        if iter[a] < adj[a].len() {
            let b = adj[a][iter[a]];
            iter[a] += 1;
            match mate_b[b] {
                UNSET => {
                    for &x in stack.iter().rev() {
                        let bx = adj[x][iter[x] - 1];
                        mate_a[x] = bx;
                        mate_b[bx] = x;
                    }
                    return true;
                }
                next if dist[next] == dist[a] + 1 => stack.push(next),
                _ => {}
            }
        } else {
            dist[a] = UNSET;
            stack.pop();
        }
    }
    false
}

/// Maximum-cardinality matching; deterministic for a fixed node order.
pub fn max_matching(g: &BipartiteGraph) -> Matching {
    let adj: Vec<Vec<usize>> = (0..g.left_count()).map(|l| g.left_neighbors(l).to_vec()).collect();
    let (mate_left, _) = hopcroft_karp(&adj, g.right_count());
    Matching {
        left_to_right: mate_left.into_iter().map(|r| (r != UNSET).then_some(r)).collect(),
    }
}
