/// Resource limits shared by every search and enumeration in the crate.
///
/// All limits are explicit: an operation that would exceed one reports
/// a budget error (or an `Unknown` verdict) instead of returning a partial
/// answer as if it were complete.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Budget {
    /// Upper bound on any `max_dim` argument.
    pub max_dim: usize,
    /// Backtracking nodes a single search may visit.
    pub search_nodes: u64,
    /// Longest reduced word enumerated in a freely presented groupoid level.
    pub word_length: usize,
    /// Largest order of the test groups used to count homomorphisms.
    pub group_order: usize,
    /// Coset table size limit for Todd-Coxeter enumeration.
    pub cosets: usize,
    /// Largest number of candidate elements a single enumeration may produce.
    pub elements: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_dim: 6,
            search_nodes: 5_000_000,
            word_length: 2,
            group_order: 8,
            cosets: 20_000,
            elements: 200_000,
        }
    }
}

impl Budget {
    pub fn check_dim(&self, requested: usize) -> crate::Result<()> {
        if requested > self.max_dim {
            return Err(crate::Error::DimBudgetExceeded {
                requested,
                bound: self.max_dim,
            });
        }
        Ok(())
    }

    pub fn with_search_nodes(mut self, nodes: u64) -> Self {
        self.search_nodes = nodes;
        self
    }

    pub fn with_word_length(mut self, len: usize) -> Self {
        self.word_length = len;
        self
    }

    pub fn with_max_dim(mut self, dim: usize) -> Self {
        self.max_dim = dim;
        self
    }
}
