//! Greedy self-referential LZ77 factorization.
//!
//! Each phrase is the longest prefix of the remaining text that also starts at
//! an earlier position (the copy may overlap the phrase itself), followed by
//! one literal byte. A final phrase whose copy reaches the end of the text has
//! no literal. Every byte, the sentinel included, is an ordinary symbol here.
//!
//! The five-genome sample used throughout the tests parses as
//! `G A T TA C AT$ AG ATA CAT$G ATACAT$GATT AGAT$ GATTAGATA`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rmq::SparseTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phrase {
    pub start: usize,
    /// Length of the copied part, 0 for a fresh byte.
    pub match_len: usize,
    /// Earlier start of the copied part; `None` when `match_len == 0`.
    pub source: Option<usize>,
    /// Trailing byte; `None` only for a final phrase ending at text end.
    pub literal: Option<u8>,
}

impl Phrase {
    pub fn len(&self) -> usize {
        self.match_len + usize::from(self.literal.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn end(&self) -> usize {
        self.start + self.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lz77Parse {
    phrases: Vec<Phrase>,
    text_len: usize,
}

impl Lz77Parse {
    pub fn phrases(&self) -> &[Phrase] {
        &self.phrases
    }

    /// Number of phrases.
    pub fn z(&self) -> usize {
        self.phrases.len()
    }

    pub fn text_len(&self) -> usize {
        self.text_len
    }

    /// Start of every phrase plus the end-of-text position, ascending.
    pub fn boundaries(&self) -> Vec<usize> {
        self.phrases
            .iter()
            .map(|p| p.start)
            .chain(std::iter::once(self.text_len))
            .collect()
    }

    /// Rebuilds the text from the phrases alone, copying byte by byte so that
    /// overlapping copies resolve.
    pub fn materialize(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.text_len);
        for p in &self.phrases {
            if let Some(src) = p.source {
                for t in 0..p.match_len {
                    out.push(out[src + t]);
                }
            }
            out.extend(p.literal);
        }
        out
    }
}

/// Factorizes `text`.
pub fn lz77_parse(text: &[u8]) -> Result<Lz77Parse> {
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    let lpf = longest_previous_factors(text);
    let n = text.len();
    let mut phrases = Vec::new();
    let mut i = 0;
    while i < n {
        let (len, src) = lpf[i];
        let phrase = if len == 0 {
            Phrase {
                start: i,
                match_len: 0,
                source: None,
                literal: Some(text[i]),
            }
        } else {
            Phrase {
                start: i,
                match_len: len,
                source: Some(src),
                literal: text.get(i + len).copied(),
            }
        };
        i = phrase.end();
        phrases.push(phrase);
    }
    Ok(Lz77Parse {
        phrases,
        text_len: n,
    })
}

/// For every position `i`, the length of the longest prefix of `text[i..]`
/// that also starts at some `j < i`, together with one such `j`.
///
/// Uses the suffix array: the best earlier source is one of the nearest
/// suffix-array neighbours of `i` that start before `i`.
pub fn longest_previous_factors(text: &[u8]) -> Vec<(usize, usize)> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    let sa = suffix_array(text);
    let mut rank = vec![0; n];
    for (r, &p) in sa.iter().enumerate() {
        rank[p] = r;
    }
    let lcp = SparseTable::new(lcp_array(text, &sa, &rank));

    let mut prev_smaller = vec![None; n];
    let mut next_smaller = vec![None; n];
    let mut stack: Vec<usize> = Vec::new();
    for r in 0..n {
        while stack.last().is_some_and(|&t| sa[t] > sa[r]) {
            stack.pop();
        }
        prev_smaller[r] = stack.last().copied();
        stack.push(r);
    }
    stack.clear();
    for r in (0..n).rev() {
        while stack.last().is_some_and(|&t| sa[t] > sa[r]) {
            stack.pop();
        }
        next_smaller[r] = stack.last().copied();
        stack.push(r);
    }

    (0..n)
        .map(|i| {
            let r = rank[i];
            let before = prev_smaller[r].map(|p| (lcp.min(p + 1, r), sa[p]));
            let after = next_smaller[r].map(|q| (lcp.min(r + 1, q), sa[q]));
            match (before, after) {
                (Some(a), Some(b)) => {
                    if b.0 > a.0 {
                        b
                    } else {
                        a
                    }
                }
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => (0, 0),
            }
        })
        .collect()
}

/// Suffix array by prefix doubling.
fn suffix_array(text: &[u8]) -> Vec<usize> {
    let n = text.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<usize> = text.iter().map(|&b| b as usize).collect();
    let mut next = vec![0; n];
    let mut width = 1;
    loop {
        let key = |i: usize| (rank[i], if i + width < n { rank[i + width] + 1 } else { 0 });
        sa.sort_unstable_by_key(|&i| key(i));
        next[sa[0]] = 0;
        for w in 1..n {
            next[sa[w]] = next[sa[w - 1]] + usize::from(key(sa[w]) != key(sa[w - 1]));
        }
        std::mem::swap(&mut rank, &mut next);
        if rank[sa[n - 1]] == n - 1 || width >= n {
            break;
        }
        width *= 2;
    }
    sa
}

/// Kasai: `lcp[r]` is the common prefix length of the suffixes at ranks
/// `r - 1` and `r`; `lcp[0] = 0`.
fn lcp_array(text: &[u8], sa: &[usize], rank: &[usize]) -> Vec<usize> {
    let n = text.len();
    let mut lcp = vec![0; n];
    let mut h = 0;
    for i in 0..n {
        if rank[i] == 0 {
            h = 0;
            continue;
        }
        let j = sa[rank[i] - 1];
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[rank[i]] = h;
        h = h.saturating_sub(1);
    }
    lcp
}
