//! Phylogenetic tree, genome records and the sentinel-separated concatenation.

mod concat;
mod fasta;
mod newick;
mod tree;

pub use concat::{build_concatenation, Concatenation, DEFAULT_SENTINEL};
pub use fasta::{parse_fasta, GenomeRecord};
pub use newick::{parse_newick, parse_newick_str};
pub use tree::{PhyloTree, VertexNumber};


/// Answer for the k-mer starting at `position` (1-based): the root of the
/// smallest subtree holding every genome that contains it, or `None` when no
/// genome does.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KmerResult {
    pub position: usize,
    pub kmer: Vec<u8>,
    pub answer: Option<VertexNumber>,
}
