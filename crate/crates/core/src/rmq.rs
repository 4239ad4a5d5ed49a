use serde::{Deserialize, Serialize};

/// Static range-minimum over a slice of `Ord` values, `O(n log n)` words,
/// `O(1)` per query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseTable<T> {
    levels: Vec<Vec<T>>,
}

impl<T: Ord + Copy> SparseTable<T> {
    pub fn new(values: Vec<T>) -> Self {
        let n = values.len();
        let mut levels = vec![values];
        let mut width = 1;
        while 2 * width <= n {
            let prev = levels.last().unwrap();
            let next = (0..=n - 2 * width)
                .map(|i| prev[i].min(prev[i + width]))
                .collect();
            levels.push(next);
            width *= 2;
        }
        Self { levels }
    }

    pub fn len(&self) -> usize {
        self.levels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels[0].is_empty()
    }

    /// Minimum of `values[lo..=hi]`. Panics if the range is empty or out of
    /// bounds.
    pub fn min(&self, lo: usize, hi: usize) -> T {
        assert!(lo <= hi && hi < self.len(), "bad range {lo}..={hi}");
        let level = (usize::BITS - 1 - (hi - lo + 1).leading_zeros()) as usize;
        let row = &self.levels[level];
        row[lo].min(row[hi + 1 - (1 << level)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_scan(values in prop::collection::vec(0u32..50, 1..200), a: usize, b: usize) {
            let n = values.len();
            let (lo, hi) = { let (x, y) = (a % n, b % n); (x.min(y), x.max(y)) };
            let table = SparseTable::new(values.clone());
            prop_assert_eq!(table.min(lo, hi), *values[lo..=hi].iter().min().unwrap());
        }
    }

    #[test]
    fn single() {
        let t = SparseTable::new(vec![(3, 'x')]);
        assert_eq!(t.min(0, 0), (3, 'x'));
    }
}
