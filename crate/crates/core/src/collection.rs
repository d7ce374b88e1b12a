use std::fmt;

use crate::error::{PidError, Result};

/// Largest source count a [`Collection`] mask can address.
pub const MAX_SOURCES: usize = 6;

/// A set of source indices drawn from `{1, ..., n}`, stored as a bitmask where
/// bit `i - 1` represents source `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Collection(u32);

impl Collection {
    pub const EMPTY: Collection = Collection(0);

    pub const fn from_mask(mask: u32) -> Self {
        Collection(mask)
    }

    /// The full set `{1, ..., n}`.
    pub const fn full(n: usize) -> Self {
        Collection((1u32 << n) - 1)
    }

    /// Builds a collection from 1-based source indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut mask = 0u32;
        for i in indices {
            if i == 0 || i > MAX_SOURCES {
                return Err(PidError::Usage(format!(
                    "source index {i} outside 1..={MAX_SOURCES}"
                )));
            }
            mask |= 1 << (i - 1);
        }
        Ok(Collection(mask))
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, index: usize) -> bool {
        index >= 1 && (self.0 >> (index - 1)) & 1 == 1
    }

    pub const fn is_subset_of(self, other: Collection) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_superset_of(self, other: Collection) -> bool {
        other.is_subset_of(self)
    }

    pub const fn union(self, other: Collection) -> Collection {
        Collection(self.0 | other.0)
    }

    /// Complement within `{1, ..., n}`.
    pub const fn complement(self, n: usize) -> Collection {
        Collection(!self.0 & Collection::full(n).0)
    }

    /// Largest index in the collection, or 0 when empty.
    pub fn max_index(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// 1-based indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |b| (mask >> b) & 1 == 1).map(|b| b + 1)
    }

    /// Every collection over `n` sources, in ascending mask order (starting with the empty set).
    pub fn all(n: usize) -> impl Iterator<Item = Collection> {
        (0..1u32 << n).map(Collection)
    }

    /// Every non-empty collection over `n` sources.
    pub fn all_nonempty(n: usize) -> impl Iterator<Item = Collection> {
        (1..1u32 << n).map(Collection)
    }

    /// Compact label such as `12` for `{1,2}`, or `∅`.
    pub fn compact(self) -> String {
        if self.is_empty() {
            return "∅".to_string();
        }
        self.indices().map(|i| i.to_string()).collect()
    }
}

impl fmt::Display for Collection {
    /// `{1,2}` style.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = Collection::from_indices([1, 3]).unwrap();
        let b = Collection::from_indices([1]).unwrap();
        assert!(b.is_subset_of(a));
        assert!(!a.is_subset_of(b));
        assert_eq!(a.len(), 2);
        assert_eq!(a.indices().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(a.complement(3), Collection::from_indices([2]).unwrap());
        assert_eq!(a.to_string(), "{1,3}");
        assert_eq!(a.compact(), "13");
        assert_eq!(a.max_index(), 3);
        assert!(Collection::EMPTY.is_subset_of(b));
    }

    #[test]
    fn index_zero_rejected() {
        assert!(Collection::from_indices([0]).is_err());
        assert!(Collection::from_indices([7]).is_err());
    }
}
