use thiserror::Error;

/// Errors raised while ingesting inputs, building an index or answering queries.
#[derive(Debug, Error)]
pub enum Error {
    #[error("newick: {msg} at byte {offset}")]
    Newick { offset: usize, msg: String },

    #[error("newick: empty tree")]
    EmptyTree,

    #[error("newick: duplicate leaf label `{0}`")]
    DuplicateLeaf(String),

    #[error("fasta: {msg} (line {line})")]
    Fasta { line: usize, msg: String },

    #[error("fastq: {msg} (line {line})")]
    Fastq { line: usize, msg: String },

    #[error("no genome given for leaf `{0}`")]
    MissingGenome(String),

    #[error("genome `{0}` does not match any leaf of the tree")]
    UnknownGenome(String),

    #[error("genome `{0}` contains the sentinel byte")]
    SentinelInGenome(String),

    #[error("genome `{0}` is empty")]
    EmptyGenome(String),

    #[error("position {pos} is outside the text (length {len})")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("cannot parse an empty text")]
    EmptyText,

    #[error("trie keys are not sorted and distinct (at key {0})")]
    UnsortedKeys(usize),

    #[error("grid has two points at ({x}, {y})")]
    DuplicatePoint { x: usize, y: usize },

    #[error("grid point ({x}, {y}) lies outside the {width} x {height} grid")]
    PointOutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },

    #[error("unknown vertex number {0}")]
    UnknownVertex(u32),

    #[error("k must be at least 1")]
    InvalidK,

    #[error("pattern contains the sentinel byte {0:#04x} at offset {1}")]
    SentinelInPattern(u8, usize),

    #[error("not a katka index file")]
    BadMagic,

    #[error("unsupported index format version {0}")]
    UnsupportedVersion(u32),

    #[error("index payload: {0}")]
    Codec(#[from] bincode::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
