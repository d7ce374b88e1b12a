use std::fmt;

use super::{Antichain, LogicStatement};
use crate::collection::{Collection, MAX_SOURCES};
use crate::error::{PidError, Result};

/// A monotone Boolean function on the powerset of `{1, ..., n}` that is 0 on the
/// empty collection and 1 on the full set.
///
/// The truth table is stored as a `2^n`-bit mask: bit `c` is the value on the
/// collection whose mask is `c`. This mask is the canonical identity of a
/// lattice node; antichains and logic statements are derived views.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParthoodDistribution {
    n: u8,
    table: u64,
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SOURCES {
        return Err(PidError::Usage(format!(
            "source count {n} outside 1..={MAX_SOURCES}"
        )));
    }
    Ok(())
}

/// Mask with one bit per collection over `n` sources.
pub(crate) fn table_width_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1usize << n)) - 1
    }
}

/// Whether a raw table is monotone (closed under supersets).
pub(crate) fn is_monotone(n: usize, table: u64) -> bool {
    for c in 0..(1u32 << n) {
        if (table >> c) & 1 == 1 {
            for i in 0..n {
                let sup = c | (1 << i);
                if (table >> sup) & 1 == 0 {
                    return false;
                }
            }
        }
    }
    true
}

impl ParthoodDistribution {
    /// Validates and wraps a raw truth table.
    pub fn new(n: usize, table: u64) -> Result<Self> {
        check_n(n)?;
        if table & !table_width_mask(n) != 0 {
            return Err(PidError::Usage(format!(
                "truth table {table:#x} has bits beyond the 2^{n} collections"
            )));
        }
        if table & 1 == 1 {
            return Err(PidError::Usage(
                "parthood distribution must be 0 on the empty collection".into(),
            ));
        }
        if (table >> Collection::full(n).mask()) & 1 == 0 {
            return Err(PidError::Usage(
                "parthood distribution must be 1 on the full set".into(),
            ));
        }
        if !is_monotone(n, table) {
            return Err(PidError::Usage(format!(
                "truth table {table:#x} is not monotone"
            )));
        }
        Ok(ParthoodDistribution { n: n as u8, table })
    }

    pub(crate) const fn new_unchecked(n: usize, table: u64) -> Self {
        ParthoodDistribution { n: n as u8, table }
    }

    /// The all-way synergy node: 1 only on the full set.
    pub fn top(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self::new_unchecked(n, 1u64 << Collection::full(n).mask()))
    }

    /// The all-way shared node: 1 on every non-empty collection.
    pub fn bottom(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self::new_unchecked(n, table_width_mask(n) & !1))
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn table(&self) -> u64 {
        self.table
    }

    pub fn value(&self, c: Collection) -> bool {
        (self.table >> c.mask()) & 1 == 1
    }

    /// Collections with value 1, ascending by mask.
    pub fn ones(&self) -> impl Iterator<Item = Collection> + '_ {
        Collection::all(self.n()).filter(move |c| self.value(*c))
    }

    pub fn ones_count(&self) -> u32 {
        self.table.count_ones()
    }

    /// Lattice order: `self ≤ other` iff every collection where `other` is 1 is
    /// also 1 in `self`. The all-shared node is the bottom.
    pub fn leq(&self, other: &ParthoodDistribution) -> Result<bool> {
        if self.n != other.n {
            return Err(PidError::Usage(format!(
                "cannot compare nodes over {} and {} sources",
                self.n, other.n
            )));
        }
        Ok(self.is_below(other))
    }

    #[inline]
    pub(crate) fn is_below(&self, other: &ParthoodDistribution) -> bool {
        self.table & other.table == other.table
    }

    /// The ⊆-minimal collections with value 1.
    pub fn to_antichain(&self) -> Antichain {
        let minimal: Vec<Collection> = self
            .ones()
            .filter(|c| {
                !c.indices()
                    .any(|i| self.value(Collection::from_mask(c.mask() & !(1 << (i - 1)))))
            })
            .collect();
        Antichain::from_sorted_unchecked(minimal)
    }

    /// `f(b) = 1` iff `b` contains some collection of `alpha`.
    pub fn from_antichain(alpha: &Antichain, n: usize) -> Result<Self> {
        check_n(n)?;
        if alpha.is_empty() {
            return Err(PidError::Usage(
                "the empty antichain is not a lattice node".into(),
            ));
        }
        if let Some(c) = alpha.collections().iter().find(|c| c.max_index() > n) {
            return Err(PidError::Usage(format!(
                "collection {c} uses a source index greater than n = {n}"
            )));
        }
        let table = Collection::all(n)
            .filter(|b| alpha.collections().iter().any(|a| b.is_superset_of(*a)))
            .fold(0u64, |t, b| t | 1u64 << b.mask());
        Ok(Self::new_unchecked(n, table))
    }

    pub fn to_statement(&self) -> LogicStatement {
        LogicStatement::from_antichain(&self.to_antichain())
    }

    /// Values on the non-empty collections ordered by (size, mask), e.g. `111`
    /// for the shared node of two sources (collections `{1}`, `{2}`, `{1,2}`).
    pub fn bitstring(&self) -> String {
        let mut cols: Vec<Collection> = Collection::all_nonempty(self.n()).collect();
        cols.sort_by_key(|c| (c.len(), c.mask()));
        cols.iter()
            .map(|c| if self.value(*c) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for ParthoodDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParthoodDistribution({})", self.to_antichain())
    }
}
