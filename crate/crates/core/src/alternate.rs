//! Decompositions induced by quantities other than redundancy.
//!
//! Each system is given by a parthood criterion `C(f : α)` that decides which
//! atoms `Π(f)` make up the quantity attached to the antichain `α`:
//!
//! * `res`: restricted information, atoms reachable only through some `a_i`;
//! * `ws`: weak synergy, atoms not reachable from any single `a_i`;
//! * `ms`: moderate synergy, `ws` atoms that become reachable from `∪ a_i`;
//! * `syn`: strong synergy, additionally hidden from every proper partial union;
//! * `unq`: unique information, exactly the atom at `α`.
//!
//! `res`, `ws`, `ms` and `unq` determine the atoms uniquely; `syn` does not.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::collection::Collection;
use crate::decomposition::{moebius_invert_dual, sum_where, AtomTable};
use crate::error::{PidError, Result};
use crate::lattice::{Antichain, Lattice, ParthoodDistribution};
use crate::probability::JointDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    Res,
    Ws,
    Ms,
    Syn,
    Unq,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Criterion::Res,
        Criterion::Ws,
        Criterion::Ms,
        Criterion::Syn,
        Criterion::Unq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Res => "res",
            Criterion::Ws => "ws",
            Criterion::Ms => "ms",
            Criterion::Syn => "syn",
            Criterion::Unq => "unq",
        }
    }

    /// Whether atom `f` is part of the quantity attached to `alpha`.
    pub fn holds(self, f: &ParthoodDistribution, alpha: &Antichain) -> bool {
        let cols = alpha.collections();
        match self {
            Criterion::Res => f.ones().all(|b| cols.iter().any(|a| b.is_superset_of(*a))),
            Criterion::Ws => cols.iter().all(|a| !f.value(*a)),
            Criterion::Ms => {
                !alpha.is_empty() && cols.iter().all(|a| !f.value(*a)) && f.value(alpha.union())
            }
            Criterion::Syn => {
                if alpha.is_empty() || !Criterion::Ms.holds(f, alpha) {
                    return false;
                }
                let all = alpha.union();
                let m = cols.len();
                // proper subsets J with |J| ≥ 2
                (1u32..(1 << m) - 1)
                    .filter(|j| j.count_ones() >= 2)
                    .map(|j| {
                        (0..m)
                            .filter(|k| j >> k & 1 == 1)
                            .fold(Collection::EMPTY, |u, k| u.union(cols[k]))
                    })
                    .all(|u| u == all || !f.value(u))
            }
            Criterion::Unq => Collection::all(f.n())
                .all(|b| f.value(b) == cols.iter().any(|a| b.is_superset_of(*a))),
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = PidError;

    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| PidError::UnknownMeasure(s.to_string()))
    }
}

/// `Σ_{C(f:α)} Π(f)`.
pub fn forward_sum(criterion: Criterion, atoms: &AtomTable, alpha: &Antichain) -> Result<f64> {
    if alpha.max_index() > atoms.lattice().n() {
        return Err(PidError::Usage(format!(
            "antichain {alpha} refers to a source beyond n = {}",
            atoms.lattice().n()
        )));
    }
    Ok(sum_where(atoms, |f| criterion.holds(f, alpha)))
}

/// The criterion's quantity on the antichain of every lattice node.
pub fn criterion_table(criterion: Criterion, atoms: &AtomTable) -> AtomTable {
    let lattice = atoms.lattice();
    let values = lattice
        .nodes()
        .iter()
        .map(|f| sum_where(atoms, |g| criterion.holds(g, &f.to_antichain())))
        .collect();
    AtomTable::new(lattice.clone(), values).expect("finite sums of finite atoms")
}

pub fn restricted_info_from_atoms(atoms: &AtomTable, alpha: &Antichain) -> Result<f64> {
    forward_sum(Criterion::Res, atoms, alpha)
}

/// `alpha` may be empty, in which case every atom counts.
pub fn weak_synergy_from_atoms(atoms: &AtomTable, alpha: &Antichain) -> Result<f64> {
    forward_sum(Criterion::Ws, atoms, alpha)
}

pub fn moderate_synergy_from_atoms(atoms: &AtomTable, alpha: &Antichain) -> Result<f64> {
    forward_sum(Criterion::Ms, atoms, alpha)
}

pub fn strong_synergy_from_atoms(atoms: &AtomTable, alpha: &Antichain) -> Result<f64> {
    forward_sum(Criterion::Syn, atoms, alpha)
}

/// The single atom at `node(alpha)`.
pub fn unique_info_from_atoms(atoms: &AtomTable, alpha: &Antichain) -> Result<f64> {
    atoms.at(alpha)
}

/// The antichain `β` with `I_ws(α) = I_res(β)`: the ⊆-minimal collections not
/// contained in any member of `alpha`.
pub fn ws_as_restricted(alpha: &Antichain, n: usize) -> Result<Antichain> {
    check_n_for(alpha, n)?;
    let outside: Vec<Collection> = Collection::all_nonempty(n)
        .filter(|b| alpha.collections().iter().all(|a| !b.is_subset_of(*a)))
        .collect();
    Antichain::minimal_of(outside)
}

/// Inverse of [`ws_as_restricted`]: the ⊆-maximal collections containing no
/// member of `beta`.
pub fn restricted_as_ws(beta: &Antichain, n: usize) -> Result<Antichain> {
    check_n_for(beta, n)?;
    let inside: Vec<Collection> = Collection::all_nonempty(n)
        .filter(|a| beta.collections().iter().all(|b| !a.is_superset_of(*b)))
        .collect();
    Antichain::maximal_of(inside)
}

fn check_n_for(alpha: &Antichain, n: usize) -> Result<()> {
    if alpha.max_index() > n {
        return Err(PidError::Usage(format!(
            "antichain {alpha} refers to a source beyond n = {n}"
        )));
    }
    Ok(())
}

/// Restricted information at `α` sums the atoms at or above `α`, so the atoms
/// follow from inverting over the dual order.
pub fn invert_restricted(values: &AtomTable) -> AtomTable {
    moebius_invert_dual(values)
}

/// Recovers atoms from weak-synergy values on every lattice node plus the
/// value on the empty antichain (the joint mutual information).
pub fn invert_weak_synergy(values: &AtomTable, empty_value: f64) -> Result<AtomTable> {
    let lattice = values.lattice().clone();
    invert_weak_with(&lattice, |alpha| {
        if alpha.is_empty() {
            Ok(empty_value)
        } else {
            values.at(alpha)
        }
    })
}

fn invert_weak_with(
    lattice: &std::sync::Arc<Lattice>,
    mut ws: impl FnMut(&Antichain) -> Result<f64>,
) -> Result<AtomTable> {
    let n = lattice.n();
    let mut res = Vec::with_capacity(lattice.len());
    for f in lattice.nodes() {
        let alpha = restricted_as_ws(&f.to_antichain(), n)?;
        res.push(ws(&alpha)?);
    }
    Ok(invert_restricted(&AtomTable::new(lattice.clone(), res)?))
}

/// Recovers atoms from moderate-synergy values.
///
/// Only entries for antichains with at least two collections are read from
/// `values`. The system is completed with the self-synergy equations
/// `I_ws(a) = I(T : a^C | a)` for every proper collection `a` (including the
/// empty one), taken from `dist`; then
/// `I_ws(α) = I_ms(α) + I_ws({∪α})` turns every row into a weak-synergy row.
pub fn invert_moderate(values: &AtomTable, dist: &JointDistribution) -> Result<AtomTable> {
    let n = values.lattice().n();
    if dist.n() != n {
        return Err(PidError::Usage(format!(
            "values over {n} sources, distribution over {}",
            dist.n()
        )));
    }
    invert_moderate_with(values, |a| dist.conditional_mi(a.complement(n), a))
}

/// As [`invert_moderate`] with the self-synergy terms supplied by the caller.
pub fn invert_moderate_with(
    values: &AtomTable,
    mut self_synergy: impl FnMut(Collection) -> Result<f64>,
) -> Result<AtomTable> {
    let lattice = values.lattice().clone();
    let full = Collection::full(lattice.n());
    let mut ws_of_collection = |a: Collection| -> Result<f64> {
        if a == full {
            Ok(0.0)
        } else {
            self_synergy(a)
        }
    };
    invert_weak_with(&lattice, |alpha| match alpha.len() {
        0 => ws_of_collection(Collection::EMPTY),
        1 => ws_of_collection(alpha.collections()[0]),
        _ => {
            let union = alpha.union();
            Ok(values.at(alpha)? + ws_of_collection(union)?)
        }
    })
}

/// 0/1 coefficient rows of a criterion, one per antichain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub criterion: Criterion,
    pub row_labels: Vec<Antichain>,
    /// `rows[r][c]` is 1 when the criterion selects node `c` for row `r`.
    pub rows: Vec<Vec<u8>>,
}

impl LinearSystem {
    pub fn columns(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

/// Rows for every lattice node's antichain; the weak-synergy system also gets
/// the row of the empty antichain.
pub fn criterion_matrix(criterion: Criterion, lattice: &Lattice) -> LinearSystem {
    let mut labels: Vec<Antichain> = lattice.nodes().iter().map(|f| f.to_antichain()).collect();
    if criterion == Criterion::Ws {
        labels.insert(0, Antichain::empty());
    }
    let rows = labels
        .iter()
        .map(|alpha| {
            lattice
                .nodes()
                .iter()
                .map(|f| criterion.holds(f, alpha) as u8)
                .collect()
        })
        .collect();
    LinearSystem {
        criterion,
        row_labels: labels,
        rows,
    }
}

/// Rank by fraction-free (Bareiss) elimination over the integers.
pub fn exact_rank(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let height = m.len();
    let width = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..height).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for i in rank + 1..height {
            for j in col + 1..width {
                let v = &m[i][j] * &m[rank][col] - &m[i][col] * &m[rank][j];
                m[i][j] = v / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == height {
            break;
        }
    }
    rank
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub n: usize,
    pub criterion: String,
    pub rows: usize,
    pub columns: usize,
    pub rank: usize,
    /// Groups of antichains (two or more) whose coefficient rows coincide.
    pub identical_rows: Vec<Vec<String>>,
    /// Antichains whose row selects no atom.
    pub zero_rows: Vec<String>,
    pub determines_atoms: bool,
    /// For strong synergy over three sources: the pair `{1}{2}{3}`, `{1,2}{1,3}{2,3}`
    /// when their rows coincide.
    pub witness: Option<(String, String)>,
}

/// Builds the criterion's coefficient matrix and reports its rank and any
/// duplicated rows.
pub fn rank_check(criterion: Criterion, lattice: &Lattice) -> RankReport {
    let system = criterion_matrix(criterion, lattice);
    let rank = exact_rank(&system.rows);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (r, row) in system.rows.iter().enumerate() {
        if row.iter().all(|&x| x == 0) {
            continue;
        }
        match groups.iter_mut().find(|g| system.rows[g[0]] == *row) {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    let identical_rows: Vec<Vec<String>> = groups
        .into_iter()
        .filter(|g| g.len() > 1)
        .map(|g| {
            g.iter()
                .map(|&r| system.row_labels[r].to_string())
                .collect()
        })
        .collect();
    let zero_rows = system
        .rows
        .iter()
        .zip(&system.row_labels)
        .filter(|(row, _)| row.iter().all(|&x| x == 0))
        .map(|(_, a)| a.to_string())
        .collect();
    let witness = if criterion == Criterion::Syn && lattice.n() == 3 {
        let a = "{1}{2}{3}".to_string();
        let b = "{1,2}{1,3}{2,3}".to_string();
        identical_rows
            .iter()
            .any(|g| g.contains(&a) && g.contains(&b))
            .then_some((a, b))
    } else {
        None
    };
    RankReport {
        n: lattice.n(),
        criterion: criterion.name().to_string(),
        rows: system.rows.len(),
        columns: system.columns(),
        rank,
        identical_rows,
        zero_rows,
        determines_atoms: rank == system.columns(),
        witness,
    }
}

/// Strong-synergy rank check.
pub fn strong_synergy_rank_check(lattice: &Lattice) -> RankReport {
    rank_check(Criterion::Syn, lattice)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ac(s: &str) -> Antichain {
        s.parse().unwrap()
    }

    fn selected(criterion: Criterion, lattice: &Lattice, alpha: &str) -> Vec<String> {
        let alpha = ac(alpha);
        let mut v: Vec<String> = lattice
            .nodes()
            .iter()
            .filter(|f| criterion.holds(f, &alpha))
            .map(|f| f.to_antichain().to_string())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn restricted_by_source_one() {
        let l = Lattice::new(2).unwrap();
        assert_eq!(selected(Criterion::Res, &l, "1"), vec!["{1,2}", "{1}"]);
        assert_eq!(
            selected(Criterion::Ws, &l, "2"),
            selected(Criterion::Res, &l, "1")
        );
        assert!(selected(Criterion::Ms, &l, "1").is_empty());
        assert!(selected(Criterion::Syn, &l, "1").is_empty());
        assert_eq!(selected(Criterion::Unq, &l, "1"), vec!["{1}"]);
    }

    #[test]
    fn translation_is_a_bijection() {
        for n in 1..=4 {
            let l = Lattice::new(n).unwrap();
            let mut domain: Vec<Antichain> = l.nodes().iter().map(|f| f.to_antichain()).collect();
            domain.push(Antichain::empty());
            for alpha in &domain {
                let beta = ws_as_restricted(alpha, n).unwrap();
                assert_eq!(&restricted_as_ws(&beta, n).unwrap(), alpha);
            }
        }
        assert_eq!(ws_as_restricted(&Antichain::empty(), 2).unwrap(), ac("1;2"));
        assert_eq!(ws_as_restricted(&ac("1,2"), 2).unwrap(), Antichain::empty());
        assert_eq!(ws_as_restricted(&ac("2"), 2).unwrap(), ac("1"));
    }

    #[test]
    fn criterion_names() {
        for c in Criterion::ALL {
            assert_eq!(c.name().parse::<Criterion>().unwrap(), c);
        }
        assert!("xyz".parse::<Criterion>().is_err());
    }

    #[test]
    fn bareiss_rank() {
        assert_eq!(exact_rank(&[vec![1, 1], vec![1, 1]]), 1);
        assert_eq!(exact_rank(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(
            exact_rank(&[vec![0, 1, 1], vec![0, 1, 0], vec![0, 0, 1]]),
            2
        );
        assert_eq!(
            exact_rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]),
            3
        );
        assert_eq!(exact_rank(&[]), 0);
    }

    #[test]
    fn strong_synergy_witness_n3() {
        let l = Lattice::new(3).unwrap();
        let report = strong_synergy_rank_check(&l);
        assert_eq!(report.columns, 18);
        assert!(report.rank < 18);
        assert!(report.witness.is_some());
        assert!(!report.determines_atoms);
    }

    #[test]
    fn invertible_systems_have_full_rank() {
        let l = Lattice::new(3).unwrap();
        for c in [Criterion::Res, Criterion::Ws, Criterion::Unq] {
            let report = rank_check(c, &l);
            assert!(report.determines_atoms, "{c:?}: rank {}", report.rank);
        }
        assert!(!rank_check(Criterion::Ms, &l).determines_atoms);
    }
}
