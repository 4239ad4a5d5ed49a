use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PhyloTree, VertexNumber};
use crate::rmq::SparseTable;

/// Lowest common ancestors via an Euler tour and a sparse table over
/// `(depth, vertex)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcaStructure {
    /// Tour index of the first visit of vertex `v`, at `v - 1`.
    first: Vec<usize>,
    table: SparseTable<(u32, VertexNumber)>,
}

impl LcaStructure {
    pub fn new(tree: &PhyloTree) -> Self {
        let tour = tree.euler_tour();
        let mut first = vec![usize::MAX; tree.vertex_count()];
        for (i, &(_, v)) in tour.iter().enumerate() {
            let slot = &mut first[v.0 as usize - 1];
            if *slot == usize::MAX {
                *slot = i;
            }
        }
        Self {
            first,
            table: SparseTable::new(tour),
        }
    }

    pub fn tour_len(&self) -> usize {
        self.table.len()
    }

    fn first(&self, v: VertexNumber) -> Result<usize> {
        (v.0 as usize)
            .checked_sub(1)
            .and_then(|i| self.first.get(i).copied())
            .ok_or(Error::UnknownVertex(v.0))
    }

    pub fn lca(&self, u: VertexNumber, v: VertexNumber) -> Result<VertexNumber> {
        let (a, b) = (self.first(u)?, self.first(v)?);
        Ok(self.table.min(a.min(b), a.max(b)).1)
    }
}
