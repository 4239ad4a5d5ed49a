use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Which way a [`Window`] is read from its anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// `text[anchor..anchor + len]`, read left to right.
    Forward,
    /// `text[anchor - len..anchor]`, read right to left (the reversed string).
    Backward,
}

/// A string stored by reference into a text, anchored at a phrase boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub anchor: usize,
    pub len: usize,
}

impl Window {
    pub fn new(anchor: usize, len: usize) -> Self {
        Self { anchor, len }
    }

    /// The underlying text slice, in text order regardless of orientation.
    pub fn slice<'t>(&self, text: &'t [u8], o: Orientation) -> &'t [u8] {
        match o {
            Orientation::Forward => &text[self.anchor..self.anchor + self.len],
            Orientation::Backward => &text[self.anchor - self.len..self.anchor],
        }
    }

    /// Byte `d` of the key as read in orientation `o`.
    #[inline]
    pub fn key_byte(&self, text: &[u8], o: Orientation, d: usize) -> u8 {
        debug_assert!(d < self.len);
        match o {
            Orientation::Forward => text[self.anchor + d],
            Orientation::Backward => text[self.anchor - 1 - d],
        }
    }

    /// Compares the keys of two windows (lexicographic in reading order).
    pub fn key_cmp(&self, other: &Window, text: &[u8], o: Orientation) -> Ordering {
        let (a, b) = (self.slice(text, o), other.slice(text, o));
        match o {
            Orientation::Forward => a.cmp(b),
            Orientation::Backward => colex_cmp(a, b),
        }
    }
}

/// Co-lexicographic order: compare the reversed strings.
pub fn colex_cmp(a: &[u8], b: &[u8]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}
