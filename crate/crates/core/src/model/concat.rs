use std::collections::HashMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::fasta::GenomeRecord;
use super::tree::PhyloTree;
use crate::error::{Error, Result};

pub const DEFAULT_SENTINEL: u8 = b'$';

/// Genomes joined in leaf order with one sentinel between consecutive genomes
/// and none at the end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concatenation {
    text: Vec<u8>,
    spans: Vec<Range<usize>>,
    sentinel: u8,
}

impl Concatenation {
    /// Joins `sequences` (already in leaf order).
    pub fn from_sequences<S: AsRef<[u8]>>(sequences: &[S], sentinel: u8) -> Self {
        let total = sequences.iter().map(|s| s.as_ref().len() + 1).sum::<usize>();
        let mut text = Vec::with_capacity(total.saturating_sub(1));
        let mut spans = Vec::with_capacity(sequences.len());
        for (i, s) in sequences.iter().enumerate() {
            if i > 0 {
                text.push(sentinel);
            }
            let start = text.len();
            text.extend_from_slice(s.as_ref());
            spans.push(start..text.len());
        }
        Self {
            text,
            spans,
            sentinel,
        }
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn sentinel(&self) -> u8 {
        self.sentinel
    }

    pub fn genome_count(&self) -> usize {
        self.spans.len()
    }

    /// Half-open span of each genome, in leaf order.
    pub fn genome_spans(&self) -> &[Range<usize>] {
        &self.spans
    }

    pub fn genome(&self, ordinal: usize) -> Option<&[u8]> {
        let span = self.spans.get(ordinal.checked_sub(1)?)?;
        Some(&self.text[span.clone()])
    }

    /// 1-based ordinal of the genome containing `pos`, `None` on a sentinel.
    /// `pos == len()` maps to the last genome (the end-of-text boundary).
    pub fn genome_of_position(&self, pos: usize) -> Result<Option<usize>> {
        if pos > self.text.len() {
            return Err(Error::PositionOutOfRange {
                pos,
                len: self.text.len(),
            });
        }
        if pos == self.text.len() {
            return Ok(Some(self.spans.len()));
        }
        let i = self.spans.partition_point(|s| s.end <= pos);
        Ok(self
            .spans
            .get(i)
            .filter(|s| s.contains(&pos))
            .map(|_| i + 1))
    }
}

/// Joins the genomes in the tree's left-to-right leaf order.
pub fn build_concatenation(
    tree: &PhyloTree,
    genomes: &[GenomeRecord],
    sentinel: u8,
) -> Result<Concatenation> {
    let mut by_name: HashMap<&str, &GenomeRecord> = HashMap::with_capacity(genomes.len());
    for g in genomes {
        if by_name.insert(g.name.as_str(), g).is_some() {
            return Err(Error::Fasta {
                line: 0,
                msg: format!("duplicate record name `{}`", g.name),
            });
        }
    }
    let mut ordered = Vec::with_capacity(tree.leaf_count());
    for ordinal in 1..=tree.leaf_count() {
        let label = tree.leaf_label(ordinal).unwrap_or_default();
        let g = by_name
            .remove(label)
            .ok_or_else(|| Error::MissingGenome(label.to_owned()))?;
        if g.sequence.is_empty() {
            return Err(Error::EmptyGenome(g.name.clone()));
        }
        if g.sequence.contains(&sentinel) {
            return Err(Error::SentinelInGenome(g.name.clone()));
        }
        ordered.push(g.sequence.as_slice());
    }
    if let Some(extra) = genomes.iter().find(|g| by_name.contains_key(g.name.as_str())) {
        return Err(Error::UnknownGenome(extra.name.clone()));
    }
    Ok(Concatenation::from_sequences(&ordered, sentinel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_newick_str;

    pub(crate) const SAMPLE_TREE: &str = "((GATTACAT,(AGATACAT,GATACAT)),(GATTAGAT,GATTAGATA));";

    fn sample() -> Concatenation {
        let tree = parse_newick_str(SAMPLE_TREE).unwrap();
        // deliberately out of leaf order
        let genomes: Vec<_> = ["GATTAGATA", "AGATACAT", "GATTACAT", "GATTAGAT", "GATACAT"]
            .iter()
            .map(|s| GenomeRecord::new(*s, s.as_bytes()))
            .collect();
        build_concatenation(&tree, &genomes, DEFAULT_SENTINEL).unwrap()
    }

    #[test]
    fn sample_text() {
        let c = sample();
        assert_eq!(c.text(), b"GATTACAT$AGATACAT$GATACAT$GATTAGAT$GATTAGATA");
        assert_eq!(c.len(), 44);
        assert_eq!(c.genome(5), Some(&b"GATTAGATA"[..]));
    }

    #[test]
    fn small_texts() {
        let c = Concatenation::from_sequences(&["G"], b'$');
        assert_eq!(c.text(), b"G");
        assert_eq!(c.genome_spans(), &[std::ops::Range { start: 0, end: 1 }]);
        let c = Concatenation::from_sequences(&["A", "C"], b'$');
        assert_eq!(c.text(), b"A$C");
        assert_eq!(c.genome_spans(), &[0..1, 2..3]);
    }

    #[test]
    fn position_lookup() {
        let c = sample();
        assert_eq!(c.genome_of_position(0).unwrap(), Some(1));
        assert_eq!(c.genome_of_position(8).unwrap(), None);
        assert_eq!(c.genome_of_position(9).unwrap(), Some(2));
        assert_eq!(c.genome_of_position(43).unwrap(), Some(5));
        assert_eq!(c.genome_of_position(44).unwrap(), Some(5));
        assert!(c.genome_of_position(45).is_err());
        for (i, span) in c.genome_spans().iter().enumerate() {
            for p in span.clone() {
                assert_eq!(c.genome_of_position(p).unwrap(), Some(i + 1));
            }
        }
    }

    #[test]
    fn name_mismatch() {
        let tree = parse_newick_str("(a,b);").unwrap();
        let only_a = [GenomeRecord::new("a", "AC")];
        assert!(matches!(
            build_concatenation(&tree, &only_a, b'$'),
            Err(Error::MissingGenome(l)) if l == "b"
        ));
        let extra = [
            GenomeRecord::new("a", "AC"),
            GenomeRecord::new("b", "AC"),
            GenomeRecord::new("c", "AC"),
        ];
        assert!(matches!(
            build_concatenation(&tree, &extra, b'$'),
            Err(Error::UnknownGenome(l)) if l == "c"
        ));
        let bad = [GenomeRecord::new("a", "A$"), GenomeRecord::new("b", "AC")];
        assert!(build_concatenation(&tree, &bad, b'$').is_err());
    }
}
