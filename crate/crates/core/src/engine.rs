//! The two-sided index and the k-mer query.
//!
//! The forward side indexes the concatenation and reports, per k-mer, the
//! smallest leaf vertex among the genomes containing it; the reverse side
//! indexes the reversed concatenation with a max-grid and reports the largest.
//! The LCA of the two is the answer.
//!
//! Why one side suffices for its extreme: the leftmost occurrence of a k-mer in
//! a text crosses or ends at a phrase boundary of the text's LZ77 parse, so
//! splitting the k-mer at that boundary yields a context (phrase suffix,
//! boundary prefix) in the leftmost genome containing it. Every split is
//! tried, and every grid point in a split's box is a genuine occurrence.

use serde::{Deserialize, Serialize};

use crate::contexts::{build_context_sets, grid_points};
use crate::error::{Error, Result};
use crate::grid::{Aggregator, ContextGrid};
use crate::lca::LcaStructure;
use crate::lz77::{lz77_parse, Lz77Parse};
use crate::model::{
    build_concatenation, Concatenation, GenomeRecord, KmerResult, PhyloTree, VertexNumber,
    DEFAULT_SENTINEL,
};
use crate::trie::{CompactTrie, Locus, LocusTable};
use crate::window::{Orientation, Window};

/// Whether a side indexes the concatenation or its reversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Reverse,
}

/// One LZ77-boundary index: parse, the two compact tries and the grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideIndex {
    direction: Direction,
    concat: Concatenation,
    parse: Lz77Parse,
    /// Reversed maximal phrase suffixes; ranks are co-lex ranks.
    suffix_trie: CompactTrie,
    prefix_trie: CompactTrie,
    grid: ContextGrid<VertexNumber>,
    context_count: usize,
}

impl SideIndex {
    /// `leaf_vertex[o - 1]` is the vertex of this side's genome ordinal `o`.
    fn build(
        direction: Direction,
        concat: Concatenation,
        leaf_vertex: &[VertexNumber],
    ) -> Result<Self> {
        let aggregator = match direction {
            Direction::Forward => Aggregator::Min,
            Direction::Reverse => Aggregator::Max,
        };
        let text = concat.text();
        let parse = lz77_parse(text)?;
        let sets = build_context_sets(&concat, &parse)?;
        let points = grid_points(text, &sets, aggregator, leaf_vertex);
        let grid = ContextGrid::with_dimensions(
            points,
            aggregator,
            sets.suffixes.len(),
            sets.prefixes.len(),
        )?;
        let suffix_trie = CompactTrie::build(
            text,
            sets.suffixes.windows().to_vec(),
            Orientation::Backward,
        )?;
        let prefix_trie =
            CompactTrie::build(text, sets.prefixes.windows().to_vec(), Orientation::Forward)?;
        let context_count = sets.contexts.len();
        Ok(Self {
            direction,
            concat,
            parse,
            suffix_trie,
            prefix_trie,
            grid,
            context_count,
        })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// The indexed text (the reversed concatenation on the reverse side).
    pub fn text(&self) -> &[u8] {
        self.concat.text()
    }

    pub fn concatenation(&self) -> &Concatenation {
        &self.concat
    }

    pub fn parse(&self) -> &Lz77Parse {
        &self.parse
    }

    pub fn suffix_trie(&self) -> &CompactTrie {
        &self.suffix_trie
    }

    pub fn prefix_trie(&self) -> &CompactTrie {
        &self.prefix_trie
    }

    pub fn grid(&self) -> &ContextGrid<VertexNumber> {
        &self.grid
    }

    pub fn aggregator(&self) -> Aggregator {
        self.grid.aggregator()
    }

    /// Boundaries with a non-empty preceding suffix.
    pub fn context_count(&self) -> usize {
        self.context_count
    }

    /// Suffix-set strings in co-lex order.
    pub fn suffix_strings(&self) -> Vec<&[u8]> {
        self.suffix_trie
            .keys()
            .iter()
            .map(|w| w.slice(self.text(), Orientation::Backward))
            .collect()
    }

    /// Retained prefix strings in lex order.
    pub fn prefix_strings(&self) -> Vec<&[u8]> {
        self.prefix_trie
            .keys()
            .iter()
            .map(|w: &Window| w.slice(self.text(), Orientation::Forward))
            .collect()
    }

    /// Leftmost (forward side) or rightmost (reverse side) vertex among the
    /// genomes containing `kmer`. The k-mer is given in its original
    /// orientation on both sides.
    pub fn query(&self, kmer: &[u8]) -> Result<Option<VertexNumber>> {
        if kmer.is_empty() {
            return Err(Error::InvalidK);
        }
        check_pattern(kmer, self.concat.sentinel())?;
        let oriented: Vec<u8> = match self.direction {
            Direction::Forward => kmer.to_vec(),
            Direction::Reverse => kmer.iter().rev().copied().collect(),
        };
        let reversed: Vec<u8> = oriented.iter().rev().copied().collect();
        let mut search = SideSearch::new(self, &oriented, &reversed, kmer.len());
        Ok(search.best(0))
    }
}

/// Counters for one `classify` call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Root-to-locus trie descents, over both sides and both trie families.
    pub descents: usize,
    pub grid_queries: usize,
}

/// Per-call search state over one side, for one pattern (already in the
/// side's orientation) and one k.
///
/// Loci come from two families of incremental descents, each started at most
/// once per pattern position: forward from a start position in the prefix
/// trie (for the right part of a split) and backward from an end position in
/// the reversed-suffix trie (for the left part).
struct SideSearch<'a> {
    side: &'a SideIndex,
    pattern: &'a [u8],
    reversed: &'a [u8],
    k: usize,
    /// Left parts ending at position `e`, indexed by `e`.
    left: Vec<Option<LocusTable<'a>>>,
    /// Right parts starting at position `s`, indexed by `s`.
    right: Vec<Option<LocusTable<'a>>>,
    stats: QueryStats,
}

impl<'a> SideSearch<'a> {
    fn new(side: &'a SideIndex, pattern: &'a [u8], reversed: &'a [u8], k: usize) -> Self {
        let m = pattern.len();
        Self {
            side,
            pattern,
            reversed,
            k,
            left: (0..=m).map(|_| None).collect(),
            right: (0..=m).map(|_| None).collect(),
            stats: QueryStats::default(),
        }
    }

    /// Verified locus of `reverse(pattern[end - len..end])` in the suffix trie.
    fn left_locus(&mut self, end: usize, len: usize) -> Option<Locus> {
        let trie = &self.side.suffix_trie;
        let table = self.left[end].get_or_insert_with(|| {
            self.stats.descents += 1;
            let m = self.pattern.len();
            trie.extensions(&self.reversed[m - end..], self.k)
        });
        table.verified(trie, self.side.text(), len)
    }

    /// Verified locus of `pattern[start..start + len]` in the prefix trie.
    fn right_locus(&mut self, start: usize, len: usize) -> Option<Locus> {
        let trie = &self.side.prefix_trie;
        if len == 0 {
            return trie.blind_descend(&[]);
        }
        let table = self.right[start].get_or_insert_with(|| {
            self.stats.descents += 1;
            trie.extensions(&self.pattern[start..], self.k - 1)
        });
        table.verified(trie, self.side.text(), len)
    }

    /// Side aggregate for the k-mer starting at `i`, over every split into a
    /// non-empty left part and a possibly empty right part.
    fn best(&mut self, i: usize) -> Option<VertexNumber> {
        let agg = self.side.aggregator();
        let mut acc = None;
        for j in 1..=self.k {
            let cut = i + j;
            let Some(left) = self.left_locus(cut, j) else {
                continue;
            };
            let Some(right) = self.right_locus(cut, self.k - j) else {
                continue;
            };
            self.stats.grid_queries += 1;
            if let Some(label) = self.side.grid.range_best(left.lo, left.hi, right.lo, right.hi) {
                acc = agg.fold(acc, label);
            }
        }
        acc
    }
}

fn check_pattern(pattern: &[u8], sentinel: u8) -> Result<()> {
    match pattern.iter().position(|&b| b == sentinel) {
        Some(at) => Err(Error::SentinelInPattern(sentinel, at)),
        None => Ok(()),
    }
}

/// The queryable index: both sides plus the LCA structure of the tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KatkaIndex {
    tree: PhyloTree,
    forward: SideIndex,
    reverse: SideIndex,
    lca: LcaStructure,
    sentinel: u8,
}

impl KatkaIndex {
    pub fn build(tree: PhyloTree, genomes: &[GenomeRecord]) -> Result<Self> {
        Self::build_with_sentinel(tree, genomes, DEFAULT_SENTINEL)
    }

    pub fn build_with_sentinel(
        tree: PhyloTree,
        genomes: &[GenomeRecord],
        sentinel: u8,
    ) -> Result<Self> {
        let forward_concat = build_concatenation(&tree, genomes, sentinel)?;
        let reversed: Vec<Vec<u8>> = (1..=forward_concat.genome_count())
            .rev()
            .map(|o| forward_concat.genome(o).unwrap().iter().rev().copied().collect())
            .collect();
        let reverse_concat = Concatenation::from_sequences(&reversed, sentinel);
        debug_assert!(reverse_concat.text().iter().eq(forward_concat.text().iter().rev()));

        let leaves: Vec<VertexNumber> = tree.leaves().collect();
        let leaves_reversed: Vec<VertexNumber> = leaves.iter().rev().copied().collect();
        let forward = SideIndex::build(Direction::Forward, forward_concat, &leaves)?;
        let reverse = SideIndex::build(Direction::Reverse, reverse_concat, &leaves_reversed)?;
        let lca = LcaStructure::new(&tree);
        Ok(Self {
            tree,
            forward,
            reverse,
            lca,
            sentinel,
        })
    }

    pub fn tree(&self) -> &PhyloTree {
        &self.tree
    }

    pub fn forward(&self) -> &SideIndex {
        &self.forward
    }

    pub fn reverse(&self) -> &SideIndex {
        &self.reverse
    }

    pub fn lca(&self) -> &LcaStructure {
        &self.lca
    }

    pub fn sentinel(&self) -> u8 {
        self.sentinel
    }

    /// Number of genomes, `g`.
    pub fn genome_count(&self) -> usize {
        self.tree.leaf_count()
    }

    /// Length of the concatenation, `n`.
    pub fn text_len(&self) -> usize {
        self.forward.text().len()
    }

    /// Answers every k-mer of `pattern`, in order.
    pub fn classify(&self, pattern: &[u8], k: usize) -> Result<Vec<KmerResult>> {
        self.classify_with_stats(pattern, k).map(|(r, _)| r)
    }

    pub fn classify_with_stats(
        &self,
        pattern: &[u8],
        k: usize,
    ) -> Result<(Vec<KmerResult>, QueryStats)> {
        if k == 0 {
            return Err(Error::InvalidK);
        }
        check_pattern(pattern, self.sentinel)?;
        let m = pattern.len();
        if k > m {
            return Ok((Vec::new(), QueryStats::default()));
        }

        let reversed: Vec<u8> = pattern.iter().rev().copied().collect();
        let mut left = SideSearch::new(&self.forward, pattern, &reversed, k);
        let mut right = SideSearch::new(&self.reverse, &reversed, pattern, k);

        let mut results = Vec::with_capacity(m - k + 1);
        for i in 0..=m - k {
            let leftmost = left.best(i);
            let rightmost = right.best(m - k - i);
            debug_assert_eq!(leftmost.is_some(), rightmost.is_some());
            let answer = match (leftmost, rightmost) {
                (Some(a), Some(b)) => Some(self.lca.lca(a, b)?),
                _ => None,
            };
            results.push(KmerResult {
                position: i + 1,
                kmer: pattern[i..i + k].to_vec(),
                answer,
            });
        }
        let stats = QueryStats {
            descents: left.stats.descents + right.stats.descents,
            grid_queries: left.stats.grid_queries + right.stats.grid_queries,
        };
        Ok((results, stats))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_newick_str;

    const TREE: &str = "((GATTACAT,(AGATACAT,GATACAT)),(GATTAGAT,GATTAGATA));";

    fn fixture() -> KatkaIndex {
        let tree = parse_newick_str(TREE).unwrap();
        let genomes: Vec<_> = ["GATTACAT", "AGATACAT", "GATACAT", "GATTAGAT", "GATTAGATA"]
            .iter()
            .map(|s| GenomeRecord::new(*s, s.as_bytes()))
            .collect();
        KatkaIndex::build(tree, &genomes).unwrap()
    }

    fn answers(r: &[KmerResult]) -> Vec<Option<u32>> {
        r.iter().map(|x| x.answer.map(|v| v.0)).collect()
    }

    #[test]
    fn sample() {
        let idx = fixture();
        assert_eq!(idx.forward().parse().z(), 12);
        assert_eq!(idx.forward().grid().len(), 10);
        assert_eq!(idx.forward().grid().dimensions(), (9, 8));
        assert_eq!(idx.forward().query(b"TAG").unwrap(), Some(VertexNumber(7)));
        assert_eq!(idx.reverse().query(b"TAG").unwrap(), Some(VertexNumber(9)));
        assert_eq!(idx.forward().query(b"GAC").unwrap(), None);
        assert_eq!(idx.reverse().query(b"GAC").unwrap(), None);
        let r = idx.classify(b"TAGACA", 3).unwrap();
        assert_eq!(answers(&r), [Some(8), Some(6), None, Some(2)]);
        assert_eq!(r[2].kmer, b"GAC");
        assert_eq!(r[3].position, 4);
        assert!(idx.classify(b"TAGACA", 7).unwrap().is_empty());
    }

    #[test]
    fn reverse_side_mirrors_text() {
        let idx = fixture();
        let fwd = idx.forward().text();
        assert!(idx.reverse().text().iter().eq(fwd.iter().rev()));
        assert_eq!(idx.reverse().aggregator(), Aggregator::Max);
    }

    #[test]
    fn single_genome() {
        let tree = parse_newick_str("(G);").unwrap();
        let idx = KatkaIndex::build(tree, &[GenomeRecord::new("G", "G")]).unwrap();
        assert_eq!(answers(&idx.classify(b"G", 1).unwrap()), [Some(1)]);
        assert_eq!(answers(&idx.classify(b"GAG", 1).unwrap()), [Some(1), None, Some(1)]);
    }

    #[test]
    fn bad_queries() {
        let idx = fixture();
        assert!(matches!(idx.classify(b"TAG", 0), Err(Error::InvalidK)));
        assert!(matches!(
            idx.classify(b"TA$G", 2),
            Err(Error::SentinelInPattern(b'$', 2))
        ));
        assert!(idx.forward().query(b"").is_err());
        assert!(idx.forward().query(b"A$").is_err());
        // unknown bytes are simply absent
        assert_eq!(answers(&idx.classify(b"NNA", 1).unwrap()), [None, None, Some(6)]);
    }

    #[test]
    fn descent_budget() {
        let idx = fixture();
        for k in 1..=6 {
            let (_, stats) = idx.classify_with_stats(b"TAGACA", k).unwrap();
            assert!(stats.descents <= 4 * 6, "k={k}: {stats:?}");
        }
    }
}
