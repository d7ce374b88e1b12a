use std::fmt;
use std::str::FromStr;

use crate::collection::Collection;
use crate::error::{PidError, Result};

/// A set of pairwise ⊆-incomparable, non-empty collections of source indices.
///
/// Collections are kept sorted by (size, mask). The empty antichain is
/// representable for the synergy systems but is not a lattice node.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Antichain(Vec<Collection>);

fn canonical_sort(cols: &mut Vec<Collection>) {
    cols.sort_by_key(|c| (c.len(), c.mask()));
    cols.dedup();
}

impl Antichain {
    pub fn empty() -> Self {
        Antichain(Vec::new())
    }

    /// Builds an antichain, rejecting empty collections and nested pairs.
    /// Repeated collections are merged.
    pub fn new<I: IntoIterator<Item = Collection>>(collections: I) -> Result<Self> {
        let mut cols: Vec<Collection> = collections.into_iter().collect();
        if cols.iter().any(|c| c.is_empty()) {
            return Err(PidError::Usage(
                "an antichain cannot contain the empty collection".into(),
            ));
        }
        canonical_sort(&mut cols);
        for (i, a) in cols.iter().enumerate() {
            for b in &cols[i + 1..] {
                if a.is_subset_of(*b) {
                    return Err(PidError::NotAntichain {
                        subset: a
                            .indices()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                        superset: b
                            .indices()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                    });
                }
            }
        }
        Ok(Antichain(cols))
    }

    /// Reduces an arbitrary tuple of collections to its ⊆-minimal members
    /// (superset removal plus deduplication).
    pub fn minimal_of<I: IntoIterator<Item = Collection>>(collections: I) -> Result<Self> {
        let mut cols: Vec<Collection> = collections.into_iter().collect();
        if cols.iter().any(|c| c.is_empty()) {
            return Err(PidError::Usage(
                "an antichain cannot contain the empty collection".into(),
            ));
        }
        canonical_sort(&mut cols);
        let minimal = cols
            .iter()
            .copied()
            .filter(|b| !cols.iter().any(|a| a != b && a.is_subset_of(*b)))
            .collect();
        Ok(Antichain(minimal))
    }

    /// Reduces to the ⊆-maximal members (subset removal).
    pub fn maximal_of<I: IntoIterator<Item = Collection>>(collections: I) -> Result<Self> {
        let mut cols: Vec<Collection> = collections.into_iter().collect();
        if cols.iter().any(|c| c.is_empty()) {
            return Err(PidError::Usage(
                "an antichain cannot contain the empty collection".into(),
            ));
        }
        canonical_sort(&mut cols);
        let maximal = cols
            .iter()
            .copied()
            .filter(|a| !cols.iter().any(|b| a != b && a.is_subset_of(*b)))
            .collect();
        Ok(Antichain(maximal))
    }

    pub(crate) fn from_sorted_unchecked(mut cols: Vec<Collection>) -> Self {
        canonical_sort(&mut cols);
        Antichain(cols)
    }

    pub fn collections(&self) -> &[Collection] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Union of all member collections.
    pub fn union(&self) -> Collection {
        self.0.iter().fold(Collection::EMPTY, |u, c| u.union(*c))
    }

    /// Largest source index used.
    pub fn max_index(&self) -> usize {
        self.union().max_index()
    }

    /// Crampton–Loizou order: `self ⪯ other` iff every `b ∈ other` contains
    /// some `a ∈ self`.
    pub fn precedes(&self, other: &Antichain) -> bool {
        other
            .0
            .iter()
            .all(|b| self.0.iter().any(|a| b.is_superset_of(*a)))
    }

    /// Text in the semicolon grammar, e.g. `1;2,3`.
    pub fn to_semicolon_text(&self) -> String {
        self.0
            .iter()
            .map(|c| {
                c.indices()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for Antichain {
    /// `{1}{2,3}`; the empty antichain renders as `∅`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_indices(text: &str, column: usize) -> Result<Collection> {
    let text = text.trim();
    if text.is_empty() {
        return Err(PidError::parse(1, column, "empty collection"));
    }
    let mut indices = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let i: usize = part
            .parse()
            .map_err(|_| PidError::parse(1, column, format!("`{part}` is not a source index")))?;
        indices.push(i);
    }
    Collection::from_indices(indices)
}

impl FromStr for Antichain {
    type Err = PidError;

    /// Accepts `{1}{2,3}` (outer braces omitted) or `1;2,3`. `∅` or `{}` with
    /// nothing else denotes the empty antichain.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            return Ok(Antichain::empty());
        }
        let mut cols = Vec::new();
        if s.starts_with('{') {
            let mut rest = s;
            let mut offset = 0;
            while !rest.is_empty() {
                if !rest.starts_with('{') {
                    return Err(PidError::parse(1, offset + 1, "expected `{`"));
                }
                let close = rest
                    .find('}')
                    .ok_or_else(|| PidError::parse(1, offset + 1, "unterminated `{`"))?;
                let inner = &rest[1..close];
                if inner.trim().is_empty() && s == "{}" {
                    return Ok(Antichain::empty());
                }
                cols.push(parse_indices(inner, offset + 2)?);
                offset += close + 1;
                rest = rest[close + 1..].trim_start();
            }
        } else {
            let mut column = 1;
            for part in s.split(';') {
                cols.push(parse_indices(part, column)?);
                column += part.len() + 1;
            }
        }
        Antichain::new(cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_both_grammars() {
        let a: Antichain = "1;2,3".parse().unwrap();
        let b: Antichain = "{2,3}{1}".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "{1}{2,3}");
        assert_eq!(a.to_semicolon_text(), "1;2,3");
        assert_eq!("∅".parse::<Antichain>().unwrap(), Antichain::empty());
    }

    #[test]
    fn nested_pair_is_reported() {
        let err = "1;1,2".parse::<Antichain>().unwrap_err();
        assert_eq!(
            err,
            PidError::NotAntichain {
                subset: "1".into(),
                superset: "1,2".into()
            }
        );
    }

    #[test]
    fn malformed_text() {
        assert!("1;;2".parse::<Antichain>().is_err());
        assert!("{1".parse::<Antichain>().is_err());
        assert!("a,b".parse::<Antichain>().is_err());
        assert!("{1}x".parse::<Antichain>().is_err());
    }

    #[test]
    fn minimal_and_maximal_reduction() {
        let c = |v: &[usize]| Collection::from_indices(v.iter().copied()).unwrap();
        let raw = [c(&[1]), c(&[1, 2]), c(&[3]), c(&[1])];
        assert_eq!(Antichain::minimal_of(raw).unwrap().to_string(), "{1}{3}");
        assert_eq!(Antichain::maximal_of(raw).unwrap().to_string(), "{3}{1,2}");
    }

    #[test]
    fn precedes_matches_crampton_loizou() {
        let bottom: Antichain = "1;2".parse().unwrap();
        let top: Antichain = "1,2".parse().unwrap();
        assert!(bottom.precedes(&top));
        assert!(!top.precedes(&bottom));
    }
}
