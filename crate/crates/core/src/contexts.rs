//! Boundary contexts: the sentinel-free phrase suffixes to the left of each
//! phrase boundary and the sentinel-free text prefixes to its right.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::grid::{Aggregator, GridPoint};
use crate::lz77::Lz77Parse;
use crate::model::{Concatenation, VertexNumber};
use crate::window::{colex_cmp, Orientation, Window};

/// Part of `phrase` after its last sentinel (all of it when there is none).
pub fn max_suffix_of_phrase(phrase: &[u8], sentinel: u8) -> &[u8] {
    match phrase.iter().rposition(|&b| b == sentinel) {
        Some(i) => &phrase[i + 1..],
        None => phrase,
    }
}

/// Longest sentinel-free prefix of `text[pos..]`.
pub fn max_prefix_at(text: &[u8], pos: usize, sentinel: u8) -> Result<&[u8]> {
    let rest = text.get(pos..).ok_or(Error::PositionOutOfRange {
        pos,
        len: text.len(),
    })?;
    let len = rest.iter().position(|&b| b == sentinel).unwrap_or(rest.len());
    Ok(&rest[..len])
}

/// Distinct maximal sentinel-free phrase suffixes in co-lexicographic order.
/// Each entry is a [`Window`] ending at its boundary.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuffixSet {
    windows: Vec<Window>,
}

/// Distinct boundary prefixes in lexicographic order. Each entry is a
/// [`Window`] starting at its boundary.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrefixSet {
    windows: Vec<Window>,
}

macro_rules! string_set {
    ($ty:ty, $orientation:expr, $cmp:expr) => {
        impl $ty {
            fn from_windows(text: &[u8], mut windows: Vec<Window>) -> Self {
                let o = $orientation;
                windows.sort_by(|a, b| a.key_cmp(b, text, o));
                windows.dedup_by(|a, b| a.slice(text, o) == b.slice(text, o));
                Self { windows }
            }

            pub fn len(&self) -> usize {
                self.windows.len()
            }

            pub fn is_empty(&self) -> bool {
                self.windows.is_empty()
            }

            pub fn windows(&self) -> &[Window] {
                &self.windows
            }

            pub fn orientation(&self) -> Orientation {
                $orientation
            }

            /// Strings in set order.
            pub fn strings<'t>(&'t self, text: &'t [u8]) -> impl Iterator<Item = &'t [u8]> + 't {
                self.windows.iter().map(move |w| w.slice(text, $orientation))
            }

            /// 1-based rank of `s` in the set.
            pub fn rank(&self, text: &[u8], s: &[u8]) -> Option<usize> {
                let cmp: fn(&[u8], &[u8]) -> Ordering = $cmp;
                self.windows
                    .binary_search_by(|w| cmp(w.slice(text, $orientation), s))
                    .ok()
                    .map(|i| i + 1)
            }
        }
    };
}

string_set!(SuffixSet, Orientation::Backward, colex_cmp);
string_set!(PrefixSet, Orientation::Forward, |a, b| a.cmp(b));

/// A phrase boundary preceded by a non-empty sentinel-free phrase suffix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryContext {
    pub boundary_pos: usize,
    pub suffix_len: usize,
    pub prefix_len: usize,
    /// 1-based ordinal of the genome holding `boundary_pos - 1`.
    pub genome: usize,
}

impl BoundaryContext {
    pub fn suffix<'t>(&self, text: &'t [u8]) -> &'t [u8] {
        &text[self.boundary_pos - self.suffix_len..self.boundary_pos]
    }

    pub fn prefix<'t>(&self, text: &'t [u8]) -> &'t [u8] {
        &text[self.boundary_pos..self.boundary_pos + self.prefix_len]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContextSets {
    pub suffixes: SuffixSet,
    /// Retained prefixes: those read at some boundary with a non-empty
    /// preceding suffix.
    pub prefixes: PrefixSet,
    /// Every boundary prefix, retained or not.
    pub candidates: PrefixSet,
    pub contexts: Vec<BoundaryContext>,
}

impl ContextSets {
    /// Candidate prefixes that were discarded, in lexicographic order.
    pub fn discarded<'t>(&'t self, text: &'t [u8]) -> Vec<&'t [u8]> {
        self.candidates
            .strings(text)
            .filter(|s| self.prefixes.rank(text, s).is_none())
            .collect()
    }
}

/// Collects the suffix set, the candidate and retained prefix sets, and one
/// context per boundary whose preceding suffix is non-empty.
pub fn build_context_sets(c: &Concatenation, parse: &Lz77Parse) -> Result<ContextSets> {
    let text = c.text();
    let sentinel = c.sentinel();
    let mut candidates = Vec::new();
    let mut contexts = Vec::new();

    let mut phrase_start = None;
    for b in parse.boundaries() {
        let prefix_len = max_prefix_at(text, b, sentinel)?.len();
        candidates.push(Window::new(b, prefix_len));
        if let Some(start) = phrase_start {
            let suffix_len = max_suffix_of_phrase(&text[start..b], sentinel).len();
            if suffix_len > 0 {
                let genome = c
                    .genome_of_position(b - 1)?
                    .expect("a non-empty suffix ends on a genome byte");
                contexts.push(BoundaryContext {
                    boundary_pos: b,
                    suffix_len,
                    prefix_len,
                    genome,
                });
            }
        }
        phrase_start = Some(b);
    }

    let suffixes = SuffixSet::from_windows(
        text,
        contexts
            .iter()
            .map(|cx| Window::new(cx.boundary_pos, cx.suffix_len))
            .collect(),
    );
    let prefixes = PrefixSet::from_windows(
        text,
        contexts
            .iter()
            .map(|cx| Window::new(cx.boundary_pos, cx.prefix_len))
            .collect(),
    );
    Ok(ContextSets {
        suffixes,
        prefixes,
        candidates: PrefixSet::from_windows(text, candidates),
        contexts,
    })
}

/// One grid point per distinct (suffix rank, prefix rank) pair, labelled with
/// the aggregate of the vertex numbers of the genomes sharing that pair.
/// `leaf_vertex[o - 1]` is the vertex of genome ordinal `o`.
pub fn grid_points(
    text: &[u8],
    sets: &ContextSets,
    aggregator: Aggregator,
    leaf_vertex: &[VertexNumber],
) -> Vec<GridPoint<VertexNumber>> {
    let mut points: Vec<GridPoint<VertexNumber>> = sets
        .contexts
        .iter()
        .map(|cx| GridPoint {
            x: sets
                .suffixes
                .rank(text, cx.suffix(text))
                .expect("context suffix is in the suffix set"),
            y: sets
                .prefixes
                .rank(text, cx.prefix(text))
                .expect("context prefix is in the prefix set"),
            label: leaf_vertex[cx.genome - 1],
        })
        .collect();
    points.sort_unstable_by_key(|p| (p.x, p.y));
    points.dedup_by(|later, kept| {
        if (later.x, later.y) == (kept.x, kept.y) {
            kept.label = aggregator.pick(kept.label, later.label);
            true
        } else {
            false
        }
    });
    points
}
