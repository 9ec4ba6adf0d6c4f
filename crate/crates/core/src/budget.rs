/// Hard caps for the enumerating parts of the library.
///
/// Every exhaustive routine checks its relevant cap up front (or while it
/// enumerates) and fails with [`Error::Capacity`](crate::Error::Capacity)
/// instead of silently sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of labelings produced by a restriction or OIG build.
    pub nodes: usize,
    /// Maximum number of right nodes of an agnostic OIG (`|Y|^n`).
    pub agnostic_nodes: usize,
    /// Maximum number of right nodes for exhaustive subset enumeration.
    pub subset_nodes: usize,
    /// Maximum number of search nodes visited by the FDS backtracking solver.
    pub search_steps: usize,
}

pub const DEFAULT_NODE_BUDGET: usize = 4096;
pub const DEFAULT_AGNOSTIC_BUDGET: usize = 20_000;
pub const DEFAULT_SUBSET_BUDGET: usize = 18;
pub const DEFAULT_SEARCH_BUDGET: usize = 5_000_000;

impl Default for Budget {
    fn default() -> Self {
        Budget {
            nodes: DEFAULT_NODE_BUDGET,
            agnostic_nodes: DEFAULT_AGNOSTIC_BUDGET,
            subset_nodes: DEFAULT_SUBSET_BUDGET,
            search_steps: DEFAULT_SEARCH_BUDGET,
        }
    }
}

impl Budget {
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn with_subset_nodes(mut self, subset_nodes: usize) -> Self {
        self.subset_nodes = subset_nodes;
        self
    }
}
