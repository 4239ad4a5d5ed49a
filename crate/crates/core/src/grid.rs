//! Static labelled point grid with range-minimum / range-maximum queries.
//!
//! Points are kept in a merge-sort tree over x: level `h` splits the x-sorted
//! points into aligned blocks of `2^h` and sorts every block by y, and each
//! level carries a segment tree over its labels. A box query covers the x
//! range with `O(log z)` aligned blocks, binary-searches y inside each block
//! and combines one segment-tree range per block, `O(log² z)` in total.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Aggregator {
    Min,
    Max,
}

impl Aggregator {
    #[inline]
    pub fn pick<L: Ord>(self, a: L, b: L) -> L {
        match self {
            Aggregator::Min => a.min(b),
            Aggregator::Max => a.max(b),
        }
    }

    #[inline]
    pub fn fold<L: Ord>(self, acc: Option<L>, x: L) -> Option<L> {
        Some(match acc {
            Some(a) => self.pick(a, x),
            None => x,
        })
    }
}

/// A labelled grid cell; coordinates are 1-based ranks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPoint<L> {
    pub x: usize,
    pub y: usize,
    pub label: L,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Level<L> {
    ys: Vec<usize>,
    /// Bottom-up segment tree; leaves at `[n, 2n)`, slot 0 unused.
    tree: Vec<L>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextGrid<L> {
    aggregator: Aggregator,
    width: usize,
    height: usize,
    /// Points sorted by (x, y).
    points: Vec<GridPoint<L>>,
    levels: Vec<Level<L>>,
}

impl<L: Ord + Copy> ContextGrid<L> {
    /// Builds a grid whose dimensions are the largest coordinates present.
    pub fn new(points: Vec<GridPoint<L>>, aggregator: Aggregator) -> Result<Self> {
        let width = points.iter().map(|p| p.x).max().unwrap_or(0);
        let height = points.iter().map(|p| p.y).max().unwrap_or(0);
        Self::with_dimensions(points, aggregator, width, height)
    }

    /// Builds a `width × height` grid. Coordinates must lie in
    /// `[1, width] × [1, height]` and be distinct.
    pub fn with_dimensions(
        mut points: Vec<GridPoint<L>>,
        aggregator: Aggregator,
        width: usize,
        height: usize,
    ) -> Result<Self> {
        points.sort_unstable_by_key(|p| (p.x, p.y));
        for w in points.windows(2) {
            if (w[0].x, w[0].y) == (w[1].x, w[1].y) {
                return Err(Error::DuplicatePoint { x: w[0].x, y: w[0].y });
            }
        }
        if let Some(p) = points
            .iter()
            .find(|p| p.x == 0 || p.y == 0 || p.x > width || p.y > height)
        {
            return Err(Error::PointOutOfBounds {
                x: p.x,
                y: p.y,
                width,
                height,
            });
        }

        let n = points.len();
        let mut levels = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        let mut block = 1;
        loop {
            let ys: Vec<usize> = order.iter().map(|&i| points[i].y).collect();
            let labels: Vec<L> = order.iter().map(|&i| points[i].label).collect();
            levels.push(Level {
                ys,
                tree: segment_tree(&labels, aggregator),
            });
            if block >= n {
                break;
            }
            // merge neighbouring blocks by y
            let mut merged = Vec::with_capacity(n);
            for chunk in order.chunks(2 * block) {
                let (a, b) = chunk.split_at(block.min(chunk.len()));
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    if j == b.len() || (i < a.len() && points[a[i]].y <= points[b[j]].y) {
                        merged.push(a[i]);
                        i += 1;
                    } else {
                        merged.push(b[j]);
                        j += 1;
                    }
                }
            }
            order = merged;
            block *= 2;
        }

        Ok(Self {
            aggregator,
            width,
            height,
            points,
            levels,
        })
    }

    pub fn aggregator(&self) -> Aggregator {
        self.aggregator
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn points(&self) -> &[GridPoint<L>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Aggregate label over the closed box `[x1, x2] × [y1, y2]`, or `None`
    /// when the box holds no point (including inverted ranges).
    pub fn range_best(&self, x1: usize, x2: usize, y1: usize, y2: usize) -> Option<L> {
        if x1 > x2 || y1 > y2 || self.points.is_empty() {
            return None;
        }
        let mut lo = self.points.partition_point(|p| p.x < x1);
        let hi = self.points.partition_point(|p| p.x <= x2);
        let mut acc = None;
        while lo < hi {
            // largest aligned block starting at lo that fits in [lo, hi)
            let mut h = 0;
            while h + 1 < self.levels.len()
                && lo % (1 << (h + 1)) == 0
                && lo + (1 << (h + 1)) <= hi
            {
                h += 1;
            }
            let end = lo + (1 << h);
            let level = &self.levels[h];
            let ys = &level.ys[lo..end];
            let a = lo + ys.partition_point(|&y| y < y1);
            let b = lo + ys.partition_point(|&y| y <= y2);
            if a < b {
                if let Some(v) = segment_query(&level.tree, a, b, self.aggregator) {
                    acc = self.aggregator.fold(acc, v);
                }
            }
            lo = end;
        }
        acc
    }
}

fn segment_tree<L: Ord + Copy>(labels: &[L], agg: Aggregator) -> Vec<L> {
    let n = labels.len();
    if n == 0 {
        return Vec::new();
    }
    let mut tree = Vec::with_capacity(2 * n);
    tree.extend(std::iter::repeat_n(labels[0], n));
    tree.extend_from_slice(labels);
    for i in (1..n).rev() {
        tree[i] = agg.pick(tree[2 * i], tree[2 * i + 1]);
    }
    tree
}

/// Aggregate over leaves `[lo, hi)`.
fn segment_query<L: Ord + Copy>(tree: &[L], lo: usize, hi: usize, agg: Aggregator) -> Option<L> {
    let n = tree.len() / 2;
    let (mut l, mut r) = (lo + n, hi + n);
    let mut acc = None;
    while l < r {
        if l & 1 == 1 {
            acc = agg.fold(acc, tree[l]);
            l += 1;
        }
        if r & 1 == 1 {
            r -= 1;
            acc = agg.fold(acc, tree[r]);
        }
        l >>= 1;
        r >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(x: usize, y: usize, label: u32) -> GridPoint<u32> {
        GridPoint { x, y, label }
    }

    /// The forward grid of the five-genome sample: columns are the co-lex ranks
    /// of A TA ATA GATTAGATA C G AG T GATT, rows the lex ranks of
    /// ε AGAT AT ATACAT ATTACAT CAT TACAT TTACAT.
    fn sample() -> ContextGrid<u32> {
        let points = vec![
            pt(4, 1, 9),
            pt(9, 2, 7),
            pt(5, 3, 1),
            pt(6, 4, 5),
            pt(7, 4, 3),
            pt(6, 5, 1),
            pt(2, 6, 1),
            pt(3, 6, 3),
            pt(8, 7, 1),
            pt(1, 8, 1),
        ];
        ContextGrid::new(points, Aggregator::Min).unwrap()
    }

    fn scan(points: &[GridPoint<u32>], agg: Aggregator, b: (usize, usize, usize, usize)) -> Option<u32> {
        points
            .iter()
            .filter(|p| (b.0..=b.1).contains(&p.x) && (b.2..=b.3).contains(&p.y))
            .map(|p| p.label)
            .fold(None, |acc, l| agg.fold(acc, l))
    }

    #[test]
    fn sample_queries() {
        let g = sample();
        assert_eq!(g.dimensions(), (9, 8));
        assert_eq!(g.range_best(6, 7, 3, 5), Some(1));
        assert_eq!(g.range_best(8, 9, 2, 2), Some(7));
        assert_eq!(g.range_best(1, 9, 1, 8), Some(1));
        assert_eq!(g.range_best(4, 4, 1, 1), Some(9));
        assert_eq!(g.range_best(7, 6, 1, 8), None);
        assert_eq!(g.range_best(1, 9, 3, 2), None);
        assert_eq!(g.range_best(1, 3, 1, 5), None);
    }

    #[test]
    fn empty_grid() {
        let g: ContextGrid<u32> = ContextGrid::new(Vec::new(), Aggregator::Min).unwrap();
        assert_eq!(g.range_best(1, 10, 1, 10), None);
        assert_eq!(g.dimensions(), (0, 0));
    }

    #[test]
    fn rejects_bad_points() {
        assert!(matches!(
            ContextGrid::new(vec![pt(1, 1, 3), pt(1, 1, 7)], Aggregator::Min),
            Err(Error::DuplicatePoint { x: 1, y: 1 })
        ));
        assert!(ContextGrid::with_dimensions(vec![pt(3, 1, 3)], Aggregator::Min, 2, 2).is_err());
        assert!(ContextGrid::new(vec![pt(0, 1, 3)], Aggregator::Min).is_err());
    }

    fn arb_points() -> impl Strategy<Value = Vec<GridPoint<u32>>> {
        prop::collection::btree_map((1usize..40, 1usize..40), 0u32..100, 0..300)
            .prop_map(|m| m.into_iter().map(|((x, y), l)| pt(x, y, l)).collect())
    }

    proptest! {
        #[test]
        fn matches_scan(points in arb_points(), boxes in prop::collection::vec((0usize..42, 0usize..42, 0usize..42, 0usize..42), 1..40)) {
            for agg in [Aggregator::Min, Aggregator::Max] {
                let g = ContextGrid::new(points.clone(), agg).unwrap();
                for &b in &boxes {
                    prop_assert_eq!(g.range_best(b.0, b.1, b.2, b.3), scan(&points, agg, b));
                }
            }
        }

        #[test]
        fn enlarging_never_worsens(points in arb_points(), x1 in 1usize..40, y1 in 1usize..40, w in 0usize..20, h in 0usize..20, grow in 1usize..10) {
            let g = ContextGrid::new(points, Aggregator::Min).unwrap();
            let small = g.range_best(x1, x1 + w, y1, y1 + h);
            let big = g.range_best(x1.saturating_sub(grow).max(1), x1 + w + grow, y1, y1 + h + grow);
            if let Some(s) = small {
                prop_assert!(big.is_some_and(|b| b <= s));
            }
        }
    }
}
