use std::fmt;

use super::{Antichain, ParthoodDistribution};
use crate::collection::Collection;
use crate::error::{PidError, Result};

/// A disjunction of logically independent conjunctions of the atomic
/// propositions `φ_i` ("source `i` takes its realized value").
///
/// Conjunctions are index sets, ordered by (size, mask); indices ascend inside
/// each conjunction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LogicStatement {
    dnf: Vec<Collection>,
}

fn canonical(mut dnf: Vec<Collection>) -> Vec<Collection> {
    dnf.sort_by_key(|c| (c.len(), c.mask()));
    dnf.dedup();
    dnf
}

/// Drops every disjunct that logically implies another one (i.e. whose index
/// set is a strict superset of another disjunct's).
fn prune_implying(dnf: Vec<Collection>) -> Vec<Collection> {
    let dnf = canonical(dnf);
    dnf.iter()
        .copied()
        .filter(|b| !dnf.iter().any(|a| a != b && a.is_subset_of(*b)))
        .collect()
}

impl LogicStatement {
    /// Validates a DNF: non-empty, non-empty conjunctions, pairwise independent.
    pub fn new(dnf: Vec<Collection>) -> Result<Self> {
        if dnf.is_empty() {
            return Err(PidError::Usage(
                "a statement needs at least one conjunction".into(),
            ));
        }
        if dnf.iter().any(|c| c.is_empty()) {
            return Err(PidError::Usage("empty conjunction".into()));
        }
        let dnf = canonical(dnf);
        for (i, a) in dnf.iter().enumerate() {
            for b in &dnf[i + 1..] {
                if a.is_subset_of(*b) {
                    return Err(PidError::Usage(format!(
                        "conjunctions over {a} and {b} are not logically independent"
                    )));
                }
            }
        }
        Ok(LogicStatement { dnf })
    }

    /// One conjunction per collection of the antichain.
    pub fn from_antichain(alpha: &Antichain) -> Self {
        LogicStatement {
            dnf: canonical(alpha.collections().to_vec()),
        }
    }

    pub fn conjunctions(&self) -> &[Collection] {
        &self.dnf
    }

    pub fn to_antichain(&self) -> Antichain {
        Antichain::from_sorted_unchecked(self.dnf.clone())
    }

    /// Whether the valuation making exactly the variables in `true_vars` true
    /// satisfies the statement.
    pub fn satisfied_by(&self, true_vars: Collection) -> bool {
        self.dnf
            .iter()
            .any(|conj| conj.indices().all(|i| true_vars.contains(i)))
    }

    /// Truth table over all `2^n` valuations, as a parthood distribution.
    pub fn truth_table(&self, n: usize) -> Result<ParthoodDistribution> {
        if self.dnf.iter().any(|c| c.max_index() > n) {
            return Err(PidError::Usage(format!(
                "statement {self} uses a variable beyond n = {n}"
            )));
        }
        let table = Collection::all(n)
            .filter(|v| self.satisfied_by(*v))
            .fold(0u64, |t, v| t | 1u64 << v.mask());
        ParthoodDistribution::new(n, table)
    }

    /// `self ⊨ other`: every valuation satisfying `self` satisfies `other`.
    pub fn implies(&self, other: &LogicStatement, n: usize) -> bool {
        Collection::all(n).all(|v| !self.satisfied_by(v) || other.satisfied_by(v))
    }

    /// Canonical form of `self ∨ other` (the lattice meet).
    pub fn disjoin(&self, other: &LogicStatement) -> LogicStatement {
        let dnf = self.dnf.iter().chain(&other.dnf).copied().collect();
        LogicStatement {
            dnf: prune_implying(dnf),
        }
    }

    /// Canonical form of `self ∧ other` (the lattice join): distribute, merge
    /// repeated variables inside each conjunction, then prune.
    pub fn conjoin(&self, other: &LogicStatement) -> LogicStatement {
        let dnf = self
            .dnf
            .iter()
            .flat_map(|a| other.dnf.iter().map(move |b| a.union(*b)))
            .collect();
        LogicStatement {
            dnf: prune_implying(dnf),
        }
    }
}

impl fmt::Display for LogicStatement {
    /// `φ1∧φ2`, `φ1∨φ2`, `(φ1∧φ2)∨(φ2∧φ3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let multi = self.dnf.len() > 1;
        for (k, conj) in self.dnf.iter().enumerate() {
            if k > 0 {
                write!(f, "∨")?;
            }
            let paren = multi && conj.len() > 1;
            if paren {
                write!(f, "(")?;
            }
            let atoms: Vec<String> = conj.indices().map(|i| format!("φ{i}")).collect();
            write!(f, "{}", atoms.join("∧"))?;
            if paren {
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LogicStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(text: &str) -> LogicStatement {
        LogicStatement::from_antichain(&text.parse().unwrap())
    }

    #[test]
    fn rendering() {
        assert_eq!(st("1,2;2,3").to_string(), "(φ1∧φ2)∨(φ2∧φ3)");
        assert_eq!(st("1").to_string(), "φ1");
        assert_eq!(st("1;2;3").to_string(), "φ1∨φ2∨φ3");
        assert_eq!(st("1,2").to_string(), "φ1∧φ2");
    }

    #[test]
    fn truth_tables() {
        let ones = |s: &LogicStatement, n| {
            s.truth_table(n)
                .unwrap()
                .ones()
                .map(|c| c.compact())
                .collect::<Vec<_>>()
        };
        assert_eq!(ones(&st("1;2"), 2), vec!["1", "2", "12"]);
        assert_eq!(ones(&st("1,2"), 2), vec!["12"]);
        // all 8 valuations of (φ1∧φ2)∨(φ2∧φ3): satisfied by 011 (12), 110 (23), 111
        assert_eq!(ones(&st("1,2;2,3"), 3), vec!["12", "23", "123"]);
        assert!(st("3").truth_table(2).is_err());
    }

    #[test]
    fn independence_required() {
        let c = |v: &[usize]| Collection::from_indices(v.iter().copied()).unwrap();
        assert!(LogicStatement::new(vec![c(&[1]), c(&[1, 2])]).is_err());
        assert!(LogicStatement::new(vec![]).is_err());
        assert!(LogicStatement::new(vec![c(&[2]), c(&[1])]).is_ok());
    }

    #[test]
    fn meet_join_at_statement_level() {
        assert_eq!(st("1").disjoin(&st("2")), st("1;2"));
        assert_eq!(st("1").conjoin(&st("2")), st("1,2"));
        // (φ1 ∨ φ2) ∧ (φ1 ∨ φ3) = φ1 ∨ (φ2∧φ3)
        assert_eq!(st("1;2").conjoin(&st("1;3")), st("1;2,3"));
        assert!(st("1,2").implies(&st("1"), 2));
        assert!(!st("1").implies(&st("1,2"), 2));
    }
}
