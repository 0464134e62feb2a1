use std::fmt;

use crate::polygon::PolygonSpec;

/// A set of n-diagonals of one polygon, stored as a bitmask over ranks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagSet {
    spec: PolygonSpec,
    words: Vec<u64>,
}

impl DiagSet {
    pub fn empty(spec: PolygonSpec) -> DiagSet {
        let words = vec![0; spec.n_diagonal_count().div_ceil(64)];
        DiagSet { spec, words }
    }

    pub fn full(spec: PolygonSpec) -> DiagSet {
        let count = spec.n_diagonal_count();
        let mut set = DiagSet::empty(spec);
        for (i, w) in set.words.iter_mut().enumerate() {
            let lo = i * 64;
            let bits = (count - lo).min(64);
            *w = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        }
        set
    }

    pub fn from_ranks<I: IntoIterator<Item = usize>>(spec: PolygonSpec, ranks: I) -> DiagSet {
        let mut set = DiagSet::empty(spec);
        for r in ranks {
            set.insert(r);
        }
        set
    }

    pub fn spec(&self) -> PolygonSpec {
        self.spec
    }

    /// Size of the universe (all n-diagonals).
    pub fn capacity(&self) -> usize {
        self.spec.n_diagonal_count()
    }

    pub fn contains(&self, rank: usize) -> bool {
        rank < self.capacity() && self.words[rank / 64] >> (rank % 64) & 1 == 1
    }

    /// Panics when `rank` is outside the universe.
    pub fn insert(&mut self, rank: usize) -> bool {
        assert!(rank < self.capacity(), "rank {rank} out of range");
        let was = self.contains(rank);
        self.words[rank / 64] |= 1 << (rank % 64);
        !was
    }

    pub fn remove(&mut self, rank: usize) -> bool {
        let was = self.contains(rank);
        if was {
            self.words[rank / 64] &= !(1 << (rank % 64));
        }
        was
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> Ranks<'_> {
        Ranks {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    fn zip_with(&self, other: &DiagSet, f: impl Fn(u64, u64) -> u64) -> DiagSet {
        assert_eq!(self.spec, other.spec, "diagonal sets of different polygons");
        DiagSet {
            spec: self.spec,
            words: self.words.iter().zip(&other.words).map(|(&x, &y)| f(x, y)).collect(),
        }
    }

    pub fn union(&self, other: &DiagSet) -> DiagSet {
        self.zip_with(other, |x, y| x | y)
    }

    pub fn intersection(&self, other: &DiagSet) -> DiagSet {
        self.zip_with(other, |x, y| x & y)
    }

    pub fn difference(&self, other: &DiagSet) -> DiagSet {
        self.zip_with(other, |x, y| x & !y)
    }

    pub fn intersect_with(&mut self, other: &DiagSet) {
        for (x, y) in self.words.iter_mut().zip(&other.words) {
            *x &= y;
        }
    }

    pub fn is_subset(&self, other: &DiagSet) -> bool {
        self.words.iter().zip(&other.words).all(|(&x, &y)| x & !y == 0)
    }

    /// Keep only ranks strictly below `bound`.
    pub(crate) fn truncate_below(&mut self, bound: usize) {
        for (i, w) in self.words.iter_mut().enumerate() {
            let lo = i * 64;
            if lo >= bound {
                *w = 0;
            } else if bound - lo < 64 {
                *w &= (1u64 << (bound - lo)) - 1;
            }
        }
    }

    /// Smallest rank in `self` but not in `other`.
    pub(crate) fn first_outside(&self, other: &DiagSet) -> Option<usize> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find_map(|(i, (&x, &y))| {
                let d = x & !y;
                (d != 0).then(|| i * 64 + d.trailing_zeros() as usize)
            })
    }
}

impl fmt::Debug for DiagSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a DiagSet {
    type Item = usize;
    type IntoIter = Ranks<'a>;

    fn into_iter(self) -> Ranks<'a> {
        self.iter()
    }
}

/// Ascending iterator over member ranks.
pub struct Ranks<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ranks<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big() -> PolygonSpec {
        // 13-gon, 65 diagonals: spans two words
        PolygonSpec::new(1, 10).unwrap()
    }

    #[test]
    fn full_and_empty() {
        let s = big();
        assert_eq!(DiagSet::full(s).len(), 65);
        assert!(DiagSet::empty(s).is_empty());
        assert_eq!(DiagSet::full(s).iter().last(), Some(64));
    }

    #[test]
    fn first_outside_and_truncate() {
        let s = big();
        let a = DiagSet::from_ranks(s, [3, 64]);
        let b = DiagSet::from_ranks(s, [3]);
        assert_eq!(a.first_outside(&b), Some(64));
        assert_eq!(b.first_outside(&a), None);
        let mut f = DiagSet::full(s);
        f.truncate_below(5);
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        let mut f = DiagSet::full(s);
        f.truncate_below(64);
        assert_eq!(f.len(), 64);
    }

    proptest! {
        #[test]
        fn set_algebra_matches_btreeset(xs in proptest::collection::btree_set(0usize..65, 0..30),
                                         ys in proptest::collection::btree_set(0usize..65, 0..30)) {
            let s = big();
            let a = DiagSet::from_ranks(s, xs.iter().copied());
            let b = DiagSet::from_ranks(s, ys.iter().copied());
            prop_assert_eq!(a.iter().collect::<Vec<_>>(), xs.iter().copied().collect::<Vec<_>>());
            prop_assert_eq!(a.len(), xs.len());
            prop_assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), xs.union(&ys).copied().collect::<Vec<_>>());
            prop_assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), xs.intersection(&ys).copied().collect::<Vec<_>>());
            prop_assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), xs.difference(&ys).copied().collect::<Vec<_>>());
            prop_assert_eq!(a.is_subset(&b), xs.is_subset(&ys));
        }
    }
}
