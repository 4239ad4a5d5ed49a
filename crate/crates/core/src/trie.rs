//! Compact (Patricia) tries over sets of text windows.
//!
//! Each node stores its string depth and, per child, only the first byte of
//! the edge label. Descent is blind: inside an edge the pattern bytes are
//! skipped unexamined, so a locus is only a candidate until its path label is
//! compared against the text ([`CompactTrie::verify_locus`]).
//!
//! A key that is a proper prefix of another key ends at an inner node, which
//! is then marked terminal; the empty key marks the root.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::window::{Orientation, Window};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct TrieNode {
    depth: usize,
    /// A key whose first `depth` bytes spell the path label.
    rep: usize,
    terminal: bool,
    /// 1-based rank interval of the keys below this node.
    lo: usize,
    hi: usize,
    /// (first edge byte, child), sorted by byte.
    children: Vec<(u8, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactTrie {
    orientation: Orientation,
    /// Keys in rank order (rank = index + 1).
    keys: Vec<Window>,
    nodes: Vec<TrieNode>,
}

/// A trie position reached by a pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Locus {
    /// The node at or directly below the pattern's end.
    pub node: usize,
    /// Pattern length.
    pub depth: usize,
    pub verified: bool,
    /// 1-based ranks of the keys having the pattern as a prefix (when verified).
    pub lo: usize,
    pub hi: usize,
}

const ROOT: usize = 0;

impl CompactTrie {
    /// Builds the trie over `keys`, which must be strictly increasing in key
    /// order (lexicographic for [`Orientation::Forward`], co-lexicographic for
    /// [`Orientation::Backward`]).
    pub fn build(text: &[u8], keys: Vec<Window>, orientation: Orientation) -> Result<Self> {
        let byte = |k: usize, d: usize| keys[k].key_byte(text, orientation, d);
        let lcp = |a: usize, b: usize| {
            let max = keys[a].len.min(keys[b].len);
            (0..max).take_while(|&d| byte(a, d) == byte(b, d)).count()
        };

        let mut nodes = vec![TrieNode {
            depth: 0,
            rep: 0,
            terminal: false,
            lo: 1,
            hi: keys.len(),
            children: Vec::new(),
        }];
        let mut stack = vec![ROOT];
        let new_node = |nodes: &mut Vec<TrieNode>, depth, rep, terminal| {
            nodes.push(TrieNode {
                depth,
                rep,
                terminal,
                lo: 0,
                hi: 0,
                children: Vec::new(),
            });
            nodes.len() - 1
        };
        let attach = |nodes: &mut Vec<TrieNode>, parent: usize, child: usize| {
            let d = nodes[parent].depth;
            let b = byte(nodes[child].rep, d);
            nodes[parent].children.push((b, child));
        };

        for i in 0..keys.len() {
            let shared = if i == 0 {
                0
            } else {
                let l = lcp(i - 1, i);
                let ordered = l < keys[i].len
                    && (l == keys[i - 1].len || byte(i - 1, l) < byte(i, l));
                if !ordered {
                    return Err(Error::UnsortedKeys(i));
                }
                l
            };
            while nodes[*stack.last().unwrap()].depth > shared {
                let v = stack.pop().unwrap();
                let top = *stack.last().unwrap();
                if nodes[top].depth >= shared {
                    attach(&mut nodes, top, v);
                } else {
                    let rep = nodes[v].rep;
                    let w = new_node(&mut nodes, shared, rep, false);
                    attach(&mut nodes, w, v);
                    stack.push(w);
                }
            }
            let top = *stack.last().unwrap();
            if keys[i].len == nodes[top].depth {
                // only the empty key at the root can land here
                nodes[top].terminal = true;
            } else {
                let u = new_node(&mut nodes, keys[i].len, i, true);
                stack.push(u);
            }
        }
        while stack.len() > 1 {
            let v = stack.pop().unwrap();
            attach(&mut nodes, *stack.last().unwrap(), v);
        }

        // rank intervals: terminal nodes are numbered in preorder, which is
        // key order because children are sorted by first byte
        let mut rank = 0;
        let mut walk = vec![(ROOT, false)];
        while let Some((v, done)) = walk.pop() {
            if done {
                let node = &nodes[v];
                let hi = node.children.last().map_or(node.hi, |&(_, c)| nodes[c].hi);
                nodes[v].hi = hi.max(nodes[v].hi);
                continue;
            }
            if nodes[v].terminal {
                rank += 1;
                nodes[v].lo = rank;
                nodes[v].hi = rank;
            } else {
                nodes[v].lo = rank + 1;
            }
            walk.push((v, true));
            for &(_, c) in nodes[v].children.iter().rev() {
                walk.push((c, false));
            }
        }
        debug_assert_eq!(rank, keys.len());

        Ok(Self {
            orientation,
            keys,
            nodes,
        })
    }

    /// Builds a forward trie over standalone strings, returning the backing
    /// text the trie's windows point into.
    pub fn from_strings<S: AsRef<[u8]>>(strings: &[S]) -> Result<(Vec<u8>, Self)> {
        let mut text = Vec::new();
        let mut keys = Vec::with_capacity(strings.len());
        for s in strings {
            keys.push(Window::new(text.len(), s.as_ref().len()));
            text.extend_from_slice(s.as_ref());
        }
        let trie = Self::build(&text, keys, Orientation::Forward)?;
        Ok((text, trie))
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Number of keys.
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn keys(&self) -> &[Window] {
        &self.keys
    }

    /// Key with the given 1-based rank, in text order.
    pub fn key<'t>(&self, text: &'t [u8], rank: usize) -> Option<&'t [u8]> {
        let w = self.keys.get(rank.checked_sub(1)?)?;
        Some(w.slice(text, self.orientation))
    }

    pub fn root_locus(&self) -> Locus {
        let root = &self.nodes[ROOT];
        Locus {
            node: ROOT,
            depth: 0,
            verified: true,
            lo: root.lo,
            hi: root.hi,
        }
    }

    fn child(&self, v: usize, b: u8) -> Option<usize> {
        let children = &self.nodes[v].children;
        children
            .binary_search_by_key(&b, |&(c, _)| c)
            .ok()
            .map(|i| children[i].1)
    }

    /// One blind step: given the node reached after `consumed` pattern bytes,
    /// returns the node reached after consuming byte `b` as well.
    #[inline]
    fn step(&self, at: usize, consumed: usize, b: u8) -> Option<usize> {
        if self.nodes[at].depth == consumed {
            self.child(at, b)
        } else {
            Some(at)
        }
    }

    fn candidate(&self, node: usize, depth: usize) -> Locus {
        let n = &self.nodes[node];
        Locus {
            node,
            depth,
            verified: false,
            lo: n.lo,
            hi: n.hi,
        }
    }

    /// Patricia descent comparing only the first byte of each edge.
    pub fn blind_descend(&self, pattern: &[u8]) -> Option<Locus> {
        if self.keys.is_empty() {
            return None;
        }
        if pattern.is_empty() {
            return Some(self.root_locus());
        }
        let mut at = ROOT;
        for (t, &b) in pattern.iter().enumerate() {
            at = self.step(at, t, b)?;
        }
        Some(self.candidate(at, pattern.len()))
    }

    /// Compares the locus' path label with `pattern` byte for byte.
    pub fn verify_locus(&self, text: &[u8], locus: Locus, pattern: &[u8]) -> Option<Locus> {
        if locus.verified {
            return Some(locus);
        }
        if locus.depth != pattern.len() || self.keys.is_empty() {
            return None;
        }
        let key = self.keys[self.nodes[locus.node].rep];
        if key.len < pattern.len() {
            return None;
        }
        let o = self.orientation;
        pattern
            .iter()
            .enumerate()
            .all(|(d, &b)| key.key_byte(text, o, d) == b)
            .then_some(Locus {
                verified: true,
                ..locus
            })
    }

    /// Blind descent followed by verification.
    pub fn find(&self, text: &[u8], pattern: &[u8]) -> Option<Locus> {
        let locus = self.blind_descend(pattern)?;
        self.verify_locus(text, locus, pattern)
    }

    /// One incremental descent recording the candidate locus after each of
    /// the first `max_len` bytes of `pattern`.
    pub fn extensions<'p>(&self, pattern: &'p [u8], max_len: usize) -> LocusTable<'p> {
        let pattern = &pattern[..max_len.min(pattern.len())];
        let mut nodes = Vec::with_capacity(pattern.len());
        let mut at = ROOT;
        for (t, &b) in pattern.iter().enumerate() {
            match self.step(at, t, b) {
                Some(next) => at = next,
                None => break,
            }
            nodes.push(at);
        }
        LocusTable {
            pattern,
            nodes,
            verified_upto: 0,
            rejected_from: usize::MAX,
        }
    }
}

/// Candidate loci of every prefix of one pattern, produced by a single
/// descent and verified lazily.
///
/// Along one descent verification is monotone: if the length-`l` prefix
/// matches its path label so do all shorter ones, so only the bytes beyond the
/// longest verified length are ever compared.
#[derive(Clone, Debug)]
pub struct LocusTable<'p> {
    pattern: &'p [u8],
    /// Node reached after `len` bytes at index `len - 1`; ends where the
    /// descent died.
    nodes: Vec<usize>,
    verified_upto: usize,
    rejected_from: usize,
}

impl LocusTable<'_> {
    /// Longest length with a (candidate) locus.
    pub fn reach(&self) -> usize {
        self.nodes.len()
    }

    /// Candidate locus for the prefix of length `len >= 1`.
    pub fn candidate(&self, trie: &CompactTrie, len: usize) -> Option<Locus> {
        let node = *self.nodes.get(len.checked_sub(1)?)?;
        Some(trie.candidate(node, len))
    }

    /// Verified locus for the prefix of length `len >= 1`.
    pub fn verified(&mut self, trie: &CompactTrie, text: &[u8], len: usize) -> Option<Locus> {
        let mut locus = self.candidate(trie, len)?;
        if len >= self.rejected_from {
            return None;
        }
        if len > self.verified_upto {
            let key = trie.keys[trie.nodes[locus.node].rep];
            let o = trie.orientation;
            let ok = key.len >= len
                && (self.verified_upto..len).all(|d| key.key_byte(text, o, d) == self.pattern[d]);
            if !ok {
                self.rejected_from = len;
                return None;
            }
            self.verified_upto = len;
        }
        locus.verified = true;
        Some(locus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trie(strings: &[&str]) -> (Vec<u8>, CompactTrie) {
        CompactTrie::from_strings(strings).unwrap()
    }

    const PREFIXES: [&str; 8] = ["", "AGAT", "AT", "ATACAT", "ATTACAT", "CAT", "TACAT", "TTACAT"];

    #[test]
    fn sample_prefix_trie() {
        let (text, t) = trie(&PREFIXES);
        assert_eq!(t.len(), 8);
        let at = t.find(&text, b"AT").unwrap();
        assert_eq!((at.lo, at.hi), (3, 5));
        assert!(t.blind_descend(b"G").is_none());
        let agat = t.blind_descend(b"AGAT").unwrap();
        assert!(!agat.verified);
        assert_eq!((agat.lo, agat.hi), (2, 2));
        let agat = t.verify_locus(&text, agat, b"AGAT").unwrap();
        assert_eq!((agat.lo, agat.hi), (2, 2));
        let ag = t.find(&text, b"AG").unwrap();
        assert_eq!((ag.lo, ag.hi), (2, 2));
        let root = t.blind_descend(b"").unwrap();
        assert_eq!((root.lo, root.hi), (1, 8));
        for (r, s) in PREFIXES.iter().enumerate() {
            assert_eq!(t.key(&text, r + 1), Some(s.as_bytes()));
            let l = t.find(&text, s.as_bytes()).unwrap();
            assert!(l.lo <= r + 1 && r < l.hi);
        }
    }

    #[test]
    fn sample_reversed_suffix_trie() {
        // A TA ATA GATTAGATA C G AG T GATT, reversed: co-lex order becomes lex
        let reversed = ["A", "AT", "ATA", "ATAGATTAG", "C", "G", "GA", "T", "TTAG"];
        let (text, t) = trie(&reversed);
        let g = t.find(&text, b"G").unwrap();
        assert_eq!((g.lo, g.hi), (6, 7));
        assert!(t.blind_descend(b"GAT").is_none());
        let tt = t.find(&text, b"T").unwrap();
        assert_eq!((tt.lo, tt.hi), (8, 9));
    }

    #[test]
    fn backward_orientation_over_text() {
        // keys are the suffixes ending at the anchors, read right to left
        let text = b"xGATTyAG";
        let keys = vec![Window::new(8, 2), Window::new(5, 4)]; // "AG" -> "GA", "GATT" -> "TTAG"
        let t = CompactTrie::build(text, keys, Orientation::Backward).unwrap();
        assert_eq!(t.key(text, 1), Some(&b"AG"[..]));
        assert_eq!(t.find(text, b"GA").map(|l| (l.lo, l.hi)), Some((1, 1)));
        assert_eq!(t.find(text, b"TTA").map(|l| (l.lo, l.hi)), Some((2, 2)));
        assert!(t.find(text, b"AG").is_none());
    }

    #[test]
    fn blind_false_positive_is_rejected() {
        let (text, t) = trie(&["ABC"]);
        let l = t.blind_descend(b"AXC").unwrap();
        assert!(!l.verified);
        assert!(t.verify_locus(&text, l, b"AXC").is_none());
        assert!(t.verify_locus(&text, t.blind_descend(b"ABC").unwrap(), b"ABC").is_some());
    }

    #[test]
    fn empty_trie() {
        let (text, t) = trie(&[]);
        assert!(t.is_empty());
        assert!(t.blind_descend(b"A").is_none());
        assert!(t.find(&text, b"").is_none());
    }

    #[test]
    fn unsorted_keys() {
        assert!(matches!(
            CompactTrie::from_strings(&["B", "A"]),
            Err(Error::UnsortedKeys(1))
        ));
        assert!(CompactTrie::from_strings(&["A", "A"]).is_err());
        assert!(CompactTrie::from_strings(&["AB", "A"]).is_err());
    }

    #[test]
    fn extension_table() {
        let (text, t) = trie(&PREFIXES);
        let mut table = t.extensions(b"AGA", 3);
        assert_eq!(table.reach(), 3);
        assert_eq!(table.verified(&t, &text, 1).map(|l| (l.lo, l.hi)), Some((2, 5)));
        assert_eq!(table.verified(&t, &text, 2).map(|l| (l.lo, l.hi)), Some((2, 2)));
        assert_eq!(table.verified(&t, &text, 3).map(|l| (l.lo, l.hi)), Some((2, 2)));
        let mut wrong = t.extensions(b"AGC", 3);
        assert!(wrong.candidate(&t, 3).is_some());
        assert!(wrong.verified(&t, &text, 3).is_none());
        assert!(wrong.verified(&t, &text, 2).is_some());
        let dead = t.extensions(b"GAC", 3);
        assert_eq!(dead.reach(), 0);
        assert!(dead.candidate(&t, 1).is_none());
    }

    fn arb_set() -> impl Strategy<Value = Vec<Vec<u8>>> {
        prop::collection::btree_set(prop::collection::vec(b'A'..b'D', 0..7), 0..25)
            .prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn locus_iff_prefix_of_some_key(set in arb_set(), probe in prop::collection::vec(b'A'..b'E', 0..8)) {
            let (text, t) = CompactTrie::from_strings(&set).unwrap();
            let ranks: Vec<usize> = set.iter().enumerate()
                .filter(|(_, s)| s.starts_with(&probe))
                .map(|(i, _)| i + 1)
                .collect();
            match t.find(&text, &probe) {
                Some(l) => {
                    prop_assert!(!ranks.is_empty());
                    prop_assert_eq!((l.lo, l.hi), (ranks[0], *ranks.last().unwrap()));
                    prop_assert_eq!(ranks.len(), l.hi + 1 - l.lo);
                }
                None => prop_assert!(ranks.is_empty()),
            }
        }

        #[test]
        fn incremental_matches_independent_descents(set in arb_set(), probe in prop::collection::vec(b'A'..b'D', 1..10), max in 1usize..12) {
            let (text, t) = CompactTrie::from_strings(&set).unwrap();
            let mut table = t.extensions(&probe, max);
            // query lengths in a scrambled order to exercise the watermarks
            let n = max.min(probe.len());
            let order: Vec<usize> = (1..=n).rev().chain(1..=n).collect();
            for len in order {
                let blind = t.blind_descend(&probe[..len]);
                prop_assert_eq!(table.candidate(&t, len), blind);
                prop_assert_eq!(table.verified(&t, &text, len), t.find(&text, &probe[..len]));
            }
        }
    }
}
