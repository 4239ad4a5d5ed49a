//! Brute-force reference answers for testing.
//!
//! Scans every genome for every k-mer and walks parent pointers for the LCA.
//! Deliberately shares nothing with the index beyond the model types.

use crate::error::{Error, Result};
use crate::model::{GenomeRecord, KmerResult, PhyloTree, VertexNumber};

/// Genomes (1-based leaf ordinals) containing one k-mer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceSet {
    pub kmer: Vec<u8>,
    pub genomes: Vec<usize>,
}

/// Sequences in leaf order.
fn ordered<'g>(tree: &PhyloTree, genomes: &'g [GenomeRecord]) -> Result<Vec<&'g [u8]>> {
    (1..=tree.leaf_count())
        .map(|o| {
            let label = tree.leaf_label(o).unwrap_or_default();
            genomes
                .iter()
                .find(|g| g.name == label)
                .map(|g| g.sequence.as_slice())
                .ok_or_else(|| Error::MissingGenome(label.to_owned()))
        })
        .collect()
}

fn contains(haystack: &[u8], needle: &[u8]) -> bool {
    needle.is_empty() || haystack.windows(needle.len()).any(|w| w == needle)
}

pub fn occurrence_set(
    tree: &PhyloTree,
    genomes: &[GenomeRecord],
    kmer: &[u8],
) -> Result<OccurrenceSet> {
    let seqs = ordered(tree, genomes)?;
    Ok(OccurrenceSet {
        kmer: kmer.to_vec(),
        genomes: seqs
            .iter()
            .enumerate()
            .filter(|(_, s)| contains(s, kmer))
            .map(|(i, _)| i + 1)
            .collect(),
    })
}

/// LCA by lifting the deeper vertex, then both, one parent at a time.
pub fn naive_lca(tree: &PhyloTree, u: VertexNumber, v: VertexNumber) -> Result<VertexNumber> {
    let depth = |x| tree.depth(x).ok_or(Error::UnknownVertex(x.0));
    let (mut a, mut b) = (u, v);
    let (mut da, mut db) = (depth(a)?, depth(b)?);
    while da > db {
        a = tree.parent(a).expect("non-root has a parent");
        da -= 1;
    }
    while db > da {
        b = tree.parent(b).expect("non-root has a parent");
        db -= 1;
    }
    while a != b {
        a = tree.parent(a).expect("distinct vertices below the root");
        b = tree.parent(b).expect("distinct vertices below the root");
    }
    Ok(a)
}

pub fn naive_classify(
    tree: &PhyloTree,
    genomes: &[GenomeRecord],
    pattern: &[u8],
    k: usize,
    sentinel: u8,
) -> Result<Vec<KmerResult>> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    if let Some(at) = pattern.iter().position(|&b| b == sentinel) {
        return Err(Error::SentinelInPattern(sentinel, at));
    }
    if k > pattern.len() {
        return Ok(Vec::new());
    }
    let seqs = ordered(tree, genomes)?;
    let leaves: Vec<VertexNumber> = tree.leaves().collect();
    pattern
        .windows(k)
        .enumerate()
        .map(|(i, kmer)| {
            let mut answer: Option<VertexNumber> = None;
            for (o, s) in seqs.iter().enumerate() {
                if contains(s, kmer) {
                    answer = Some(match answer {
                        None => leaves[o],
                        Some(a) => naive_lca(tree, a, leaves[o])?,
                    });
                }
            }
            Ok(KmerResult {
                position: i + 1,
                kmer: kmer.to_vec(),
                answer,
            })
        })
        .collect()
}
