pub mod contexts;
pub mod engine;
pub mod error;
pub mod grid;
pub mod io;
pub mod lca;
pub mod lz77;
pub mod model;
pub mod oracle;
pub mod rmq;
pub mod trie;
pub mod window;

pub use engine::{Direction, KatkaIndex, QueryStats, SideIndex};
pub use error::{Error, Result};
pub use io::{parse_reads, ReadRecord};
pub use model::{GenomeRecord, KmerResult, PhyloTree, VertexNumber};
