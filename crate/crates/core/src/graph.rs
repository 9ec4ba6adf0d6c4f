//! Plain bipartite graph used by the matching layer.

use crate::error::{Error, Result};

/// A finite bipartite graph with per-right-node discounts.
///
/// `n` is the nominal right degree: demands at error level `k` are
/// `max(0, n - k - discount(r))`. For bipartite OIGs every right node has
/// degree exactly `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    n: usize,
    left_adj: Vec<Vec<usize>>,
    right_adj: Vec<Vec<usize>>,
    discounts: Vec<usize>,
}

impl BipartiteGraph {
    /// Builds a graph from `(left, right)` edges; duplicate edges are merged.
    pub fn from_edges(n: usize, left_count: usize, right_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut left_adj = vec![Vec::new(); left_count];
        let mut right_adj = vec![Vec::new(); right_count];
        for &(l, r) in edges {
            if l >= left_count || r >= right_count {
                return Err(Error::Invalid(format!("edge ({l}, {r}) out of range")));
            }
            left_adj[l].push(r);
            right_adj[r].push(l);
        }
        for adj in left_adj.iter_mut().chain(right_adj.iter_mut()) {
            adj.sort_unstable();
            adj.dedup();
        }
        Ok(BipartiteGraph { n, left_adj, right_adj, discounts: vec![0; right_count] })
    }

    /// Builds a graph from right-side adjacency lists, keeping their order.
    pub(crate) fn from_right_adj(n: usize, left_count: usize, right_adj: Vec<Vec<usize>>, discounts: Vec<usize>) -> Self {
        let mut left_adj = vec![Vec::new(); left_count];
        for (r, adj) in right_adj.iter().enumerate() {
            for &l in adj {
                left_adj[l].push(r);
            }
        }
        BipartiteGraph { n, left_adj, right_adj, discounts }
    }

    pub fn with_discounts(mut self, discounts: Vec<usize>) -> Result<Self> {
        if discounts.len() != self.right_adj.len() {
            return Err(Error::LengthMismatch { expected: self.right_adj.len(), found: discounts.len() });
        }
        self.discounts = discounts;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn left_count(&self) -> usize {
        self.left_adj.len()
    }

    pub fn right_count(&self) -> usize {
        self.right_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.left_adj.iter().map(Vec::len).sum()
    }

    pub fn left_neighbors(&self, l: usize) -> &[usize] {
        &self.left_adj[l]
    }

    pub fn right_neighbors(&self, r: usize) -> &[usize] {
        &self.right_adj[r]
    }

    pub fn discount(&self, r: usize) -> usize {
        self.discounts[r]
    }

    pub fn discounts(&self) -> &[usize] {
        &self.discounts
    }

    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        self.left_adj[l].contains(&r)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left_adj.iter().enumerate().flat_map(|(l, adj)| adj.iter().map(move |&r| (l, r)))
    }

    /// Copy without the edge `(l, r)`.
    pub fn without_edge(&self, l: usize, r: usize) -> Self {
        let mut g = self.clone();
        g.left_adj[l].retain(|&x| x != r);
        g.right_adj[r].retain(|&x| x != l);
        g
    }

    /// Subgraph induced by the right nodes `rs` and all their neighbors.
    ///
    /// Returns the subgraph plus the original indices of its left nodes.
    pub fn induced_by_right(&self, rs: &[usize]) -> (BipartiteGraph, Vec<usize>) {
        let mut left_map = vec![usize::MAX; self.left_count()];
        let mut left_orig = Vec::new();
        let mut right_adj = Vec::with_capacity(rs.len());
        for &r in rs {
            let adj = self.right_adj[r]
                .iter()
                .map(|&l| {
                    if left_map[l] == usize::MAX {
                        left_map[l] = left_orig.len();
                        left_orig.push(l);
                    }
                    left_map[l]
                })
                .collect();
            right_adj.push(adj);
        }
        let discounts = rs.iter().map(|&r| self.discounts[r]).collect();
        (BipartiteGraph::from_right_adj(self.n, left_orig.len(), right_adj, discounts), left_orig)
    }

    /// Same graph with left and right nodes renumbered: new index `i` is old
    /// index `left_perm[i]` (resp. `right_perm[i]`).
    pub fn permuted(&self, left_perm: &[usize], right_perm: &[usize]) -> Self {
        let mut left_inv = vec![0; left_perm.len()];
        for (new, &old) in left_perm.iter().enumerate() {
            left_inv[old] = new;
        }
        let mut right_inv = vec![0; right_perm.len()];
        for (new, &old) in right_perm.iter().enumerate() {
            right_inv[old] = new;
        }
        let edges: Vec<(usize, usize)> = self.edges().map(|(l, r)| (left_inv[l], right_inv[r])).collect();
        let discounts = right_perm.iter().map(|&r| self.discounts[r]).collect();
        BipartiteGraph::from_edges(self.n, self.left_count(), self.right_count(), &edges)
            .expect("permutation keeps edges in range")
            .with_discounts(discounts)
            .expect("discount count unchanged")
    }
}
