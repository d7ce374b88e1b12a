//! Möbius inversion of per-node measures into information atoms, averaging
//! of pointwise atoms, and consistency checks against mutual information.

use std::sync::Arc;

use crate::alternate::{self, Criterion};
use crate::collection::Collection;
use crate::error::{PidError, Result};
use crate::lattice::{Antichain, Lattice, ParthoodDistribution};
use crate::probability::{JointDistribution, Realization};
use crate::redundancy::{i_cap_sx_split, PointwiseContext};

/// Residual threshold for the consistency check.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-9;

/// One real value per lattice node, indexed like [`Lattice::nodes`].
#[derive(Debug, Clone)]
pub struct AtomTable {
    lattice: Arc<Lattice>,
    values: Vec<f64>,
}

impl PartialEq for AtomTable {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.n() == other.lattice.n() && self.values == other.values
    }
}

impl AtomTable {
    pub fn new(lattice: Arc<Lattice>, values: Vec<f64>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(PidError::Usage(format!(
                "{} values for a lattice with {} nodes",
                values.len(),
                lattice.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(PidError::Domain(format!("non-finite node value {v}")));
        }
        Ok(AtomTable { lattice, values })
    }

    pub fn zeros(lattice: Arc<Lattice>) -> Self {
        let values = vec![0.0; lattice.len()];
        AtomTable { lattice, values }
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn at(&self, alpha: &Antichain) -> Result<f64> {
        Ok(self.values[self.lattice.index_of_antichain(alpha)?])
    }

    pub fn set(&mut self, i: usize, v: f64) {
        self.values[i] = v;
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Largest absolute elementwise difference.
    pub fn max_abs_diff(&self, other: &AtomTable) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn same_lattice(&self, other: &AtomTable) -> Result<()> {
        if self.lattice.n() != other.lattice.n() {
            return Err(PidError::Usage(
                "atom tables over different lattices".into(),
            ));
        }
        Ok(())
    }

    /// `self − other`, node by node.
    pub fn difference(&self, other: &AtomTable) -> Result<AtomTable> {
        self.same_lattice(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(AtomTable {
            lattice: self.lattice.clone(),
            values,
        })
    }
}

/// Evaluates `measure` on the antichain of every node.
pub fn measure_on_lattice(
    lattice: &Arc<Lattice>,
    mut measure: impl FnMut(&Antichain) -> Result<f64>,
) -> Result<AtomTable> {
    let values = lattice
        .nodes()
        .iter()
        .map(|f| measure(&f.to_antichain()))
        .collect::<Result<Vec<f64>>>()?;
    AtomTable::new(lattice.clone(), values)
}

/// Inverts `table(f) = Σ_{g ≤ f} π(g)` by a bottom-up subtraction pass.
pub fn moebius_invert(table: &AtomTable) -> AtomTable {
    let lattice = &table.lattice;
    let order = lattice.linear_extension();
    invert_along(table, &order, |g, f| g.is_below(f))
}

/// Inversion over the dual order, `table(f) = Σ_{g ≥ f} π(g)`.
pub fn moebius_invert_dual(table: &AtomTable) -> AtomTable {
    let mut order = table.lattice.linear_extension();
    order.reverse();
    invert_along(table, &order, |g, f| f.is_below(g))
}

// `order` must be a linear extension of `below`.
fn invert_along(
    table: &AtomTable,
    order: &[usize],
    below: impl Fn(&ParthoodDistribution, &ParthoodDistribution) -> bool,
) -> AtomTable {
    let lattice = &table.lattice;
    let mut atoms = vec![0.0; lattice.len()];
    for (k, &fi) in order.iter().enumerate() {
        let f = lattice.node(fi);
        let lower: f64 = order[..k]
            .iter()
            .filter(|&&gi| below(lattice.node(gi), f))
            .map(|&gi| atoms[gi])
            .sum();
        atoms[fi] = table.values[fi] - lower;
    }
    AtomTable {
        lattice: lattice.clone(),
        values: atoms,
    }
}

/// `Σ_{g ≤ node(α)} π(g)`: the redundancy the atoms assign to `alpha`.
pub fn redundancy_from_atoms(atoms: &AtomTable, alpha: &Antichain) -> Result<f64> {
    let f = ParthoodDistribution::from_antichain(alpha, atoms.lattice.n())?;
    Ok(sum_where(atoms, |g| g.is_below(&f)))
}

/// Forward sum of the whole table: redundancy at every node.
pub fn redundancy_table(atoms: &AtomTable) -> AtomTable {
    let lattice = &atoms.lattice;
    let values = lattice
        .nodes()
        .iter()
        .map(|f| sum_where(atoms, |g| g.is_below(f)))
        .collect();
    AtomTable {
        lattice: lattice.clone(),
        values,
    }
}

pub(crate) fn sum_where(atoms: &AtomTable, pred: impl Fn(&ParthoodDistribution) -> bool) -> f64 {
    atoms
        .lattice
        .nodes()
        .iter()
        .zip(&atoms.values)
        .filter(|(g, _)| pred(g))
        .map(|(_, v)| v)
        .sum()
}

/// Decomposition systems selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Shared-exclusion redundancy.
    Sx,
    Res,
    Ws,
    Ms,
    Unq,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Sx => "sx",
            Measure::Res => "res",
            Measure::Ws => "ws",
            Measure::Ms => "ms",
            Measure::Unq => "unq",
        }
    }

    fn criterion(self) -> Option<Criterion> {
        match self {
            Measure::Sx => None,
            Measure::Res => Some(Criterion::Res),
            Measure::Ws => Some(Criterion::Ws),
            Measure::Ms => Some(Criterion::Ms),
            Measure::Unq => Some(Criterion::Unq),
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = PidError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sx" => Ok(Measure::Sx),
            "res" => Ok(Measure::Res),
            "ws" => Ok(Measure::Ws),
            "ms" => Ok(Measure::Ms),
            "unq" => Ok(Measure::Unq),
            other => Err(PidError::UnknownMeasure(other.to_string())),
        }
    }
}

/// Per-realization output.
#[derive(Debug, Clone)]
pub struct PointwiseDecomposition {
    pub realization: Realization,
    pub mass: f64,
    /// The measure evaluated on every node.
    pub measure: AtomTable,
    pub atoms: AtomTable,
    /// Informative / misinformative atoms (sx only).
    pub split: Option<(AtomTable, AtomTable)>,
}

/// One consistency equation `I(T:a) = Σ_{f(a)=1} Π(f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub collection: Collection,
    pub mutual_information: f64,
    pub atom_sum: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub residuals: Vec<Residual>,
    pub max_abs_residual: f64,
    pub worst: Option<Collection>,
    pub tolerance: f64,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.max_abs_residual <= self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub measure: Measure,
    pub lattice: Arc<Lattice>,
    pub pointwise: Vec<PointwiseDecomposition>,
    pub averaged: AtomTable,
    /// Averaged measure per node (redundancy for sx, the alternate quantity otherwise).
    pub measure_values: AtomTable,
    /// Averaged informative / misinformative atoms (sx only).
    pub averaged_split: Option<(AtomTable, AtomTable)>,
    pub diagnostics: ConsistencyReport,
    /// For alternate systems: max |atoms recovered by inversion − sx atoms|.
    pub round_trip_error: Option<f64>,
}

/// Pointwise sx decomposition at one realization.
pub fn decompose_pointwise(
    ctx: &PointwiseContext<'_>,
    lattice: &Arc<Lattice>,
) -> Result<PointwiseDecomposition> {
    let mut plus = Vec::with_capacity(lattice.len());
    let mut minus = Vec::with_capacity(lattice.len());
    for f in lattice.nodes() {
        let s = i_cap_sx_split(ctx, &f.to_antichain())?;
        plus.push(s.informative);
        minus.push(s.misinformative);
    }
    let net: Vec<f64> = plus.iter().zip(&minus).map(|(p, m)| p - m).collect();
    let measure = AtomTable::new(lattice.clone(), net)?;
    let plus = AtomTable::new(lattice.clone(), plus)?;
    let minus = AtomTable::new(lattice.clone(), minus)?;
    let pi_plus = moebius_invert(&plus);
    let pi_minus = moebius_invert(&minus);
    Ok(PointwiseDecomposition {
        realization: ctx.realization().clone(),
        mass: ctx.dist().mass_of(ctx.realization()),
        atoms: pi_plus.difference(&pi_minus)?,
        measure,
        split: Some((pi_plus, pi_minus)),
    })
}

fn average(lattice: &Arc<Lattice>, items: &[(f64, &AtomTable)]) -> AtomTable {
    let mut acc = vec![0.0; lattice.len()];
    for (w, t) in items {
        for (a, v) in acc.iter_mut().zip(&t.values) {
            *a += w * v;
        }
    }
    AtomTable {
        lattice: lattice.clone(),
        values: acc,
    }
}

/// Full pipeline: pointwise sx atoms per positive-mass realization, their
/// mass-weighted average, and (for alternate systems) the round trip through
/// that system's forward sums and inversion.
pub fn decompose(dist: &JointDistribution, measure: Measure) -> Result<DecompositionResult> {
    let lattice = Lattice::shared(dist.n())?;
    let mut pointwise = Vec::new();
    for row in dist.support() {
        let ctx = PointwiseContext::new(dist, row.realization.clone())?;
        pointwise.push(decompose_pointwise(&ctx, &lattice)?);
    }
    let weighted = |pick: &dyn Fn(&PointwiseDecomposition) -> &AtomTable| {
        let items: Vec<(f64, &AtomTable)> = pointwise.iter().map(|p| (p.mass, pick(p))).collect();
        average(&lattice, &items)
    };
    let sx_atoms = weighted(&|p| &p.atoms);
    let sx_measure = weighted(&|p| &p.measure);
    let split = (
        weighted(&|p| &p.split.as_ref().unwrap().0),
        weighted(&|p| &p.split.as_ref().unwrap().1),
    );

    let (averaged, measure_values, averaged_split, round_trip_error) = match measure.criterion() {
        None => (sx_atoms, sx_measure, Some(split), None),
        Some(criterion) => {
            for p in pointwise.iter_mut() {
                p.measure = alternate::criterion_table(criterion, &p.atoms);
                p.split = None;
            }
            let values = alternate::criterion_table(criterion, &sx_atoms);
            let recovered = match criterion {
                Criterion::Res => alternate::invert_restricted(&values),
                Criterion::Ws => {
                    let empty = alternate::weak_synergy_from_atoms(&sx_atoms, &Antichain::empty())?;
                    alternate::invert_weak_synergy(&values, empty)?
                }
                Criterion::Ms => alternate::invert_moderate(&values, dist)?,
                Criterion::Unq => values.clone(),
                Criterion::Syn => unreachable!("strong synergy is not a decomposition measure"),
            };
            let err = recovered.max_abs_diff(&sx_atoms);
            (recovered, values, None, Some(err))
        }
    };
    let diagnostics = validate_consistency(&averaged, dist, CONSISTENCY_TOLERANCE)?;
    Ok(DecompositionResult {
        measure,
        lattice,
        pointwise,
        averaged,
        measure_values,
        averaged_split,
        diagnostics,
        round_trip_error,
    })
}

/// Checks `I(T:a) = Σ_{f(a)=1} Π(f)` for every non-empty collection `a`.
pub fn validate_consistency(
    atoms: &AtomTable,
    dist: &JointDistribution,
    tolerance: f64,
) -> Result<ConsistencyReport> {
    let n = atoms.lattice.n();
    if dist.n() != n {
        return Err(PidError::Usage(format!(
            "atoms over {n} sources, distribution over {}",
            dist.n()
        )));
    }
    let mut residuals = Vec::new();
    for a in Collection::all_nonempty(n) {
        let mi = dist.mutual_information(a)?;
        let atom_sum = sum_where(atoms, |f| f.value(a));
        residuals.push(Residual {
            collection: a,
            mutual_information: mi,
            atom_sum,
            residual: mi - atom_sum,
        });
    }
    // first collection (ascending mask) attaining the largest residual
    let worst = residuals
        .iter()
        .fold(None::<&Residual>, |best, r| match best {
            Some(b) if b.residual.abs() >= r.residual.abs() => Some(b),
            _ => Some(r),
        })
        .cloned();
    Ok(ConsistencyReport {
        max_abs_residual: worst.as_ref().map_or(0.0, |r| r.residual.abs()),
        worst: worst.map(|r| r.collection),
        residuals,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> JointDistribution {
        JointDistribution::from_csv("s1,s2,t,p\n0,0,0,1/4\n0,1,1,1/4\n1,0,1,1/4\n1,1,0,1/4\n")
            .unwrap()
    }

    fn ac(s: &str) -> Antichain {
        s.parse().unwrap()
    }

    #[test]
    fn xor_pointwise_table_and_atoms() {
        let d = xor();
        let lattice = Lattice::shared(2).unwrap();
        let ctx = PointwiseContext::new(&d, Realization::new(vec![0, 0], 0)).unwrap();
        let table = measure_on_lattice(&lattice, |a| crate::redundancy::i_cap_sx(&ctx, a)).unwrap();
        let l23 = (2.0f64 / 3.0).log2();
        assert!((table.at(&ac("1;2")).unwrap() - l23).abs() < 1e-12);
        assert_eq!(table.at(&ac("1")).unwrap(), 0.0);
        assert_eq!(table.at(&ac("2")).unwrap(), 0.0);
        assert_eq!(table.at(&ac("1,2")).unwrap(), 1.0);
        let atoms = moebius_invert(&table);
        assert!((atoms.at(&ac("1;2")).unwrap() - l23).abs() < 1e-12);
        assert!((atoms.at(&ac("1")).unwrap() + l23).abs() < 1e-12);
        assert!((atoms.at(&ac("2")).unwrap() + l23).abs() < 1e-12);
        assert!((atoms.at(&ac("1,2")).unwrap() - (1.0 + l23)).abs() < 1e-12);
    }

    #[test]
    fn zero_table_inverts_to_zero() {
        let lattice = Lattice::shared(3).unwrap();
        let zeros = AtomTable::zeros(lattice.clone());
        assert_eq!(moebius_invert(&zeros), zeros);
        assert_eq!(moebius_invert_dual(&zeros), zeros);
        let t = measure_on_lattice(&lattice, |_| Ok(0.0)).unwrap();
        assert_eq!(t, zeros);
    }

    #[test]
    fn forward_after_invert_is_identity() {
        let lattice = Lattice::shared(3).unwrap();
        let values: Vec<f64> = (0..lattice.len())
            .map(|i| ((i * 37) % 11) as f64 - 5.3)
            .collect();
        let table = AtomTable::new(lattice.clone(), values).unwrap();
        let back = redundancy_table(&moebius_invert(&table));
        assert!(back.max_abs_diff(&table) < 1e-12);
    }

    #[test]
    fn redundancy_from_atoms_examples() {
        let d = xor();
        let r = decompose(&d, Measure::Sx).unwrap();
        assert!(redundancy_from_atoms(&r.averaged, &ac("1")).unwrap().abs() < 1e-12);
        assert!((redundancy_from_atoms(&r.averaged, &ac("1,2")).unwrap() - 1.0).abs() < 1e-12);
        for (i, f) in r.lattice.nodes().iter().enumerate() {
            let v = redundancy_from_atoms(&r.averaged, &f.to_antichain()).unwrap();
            assert!((v - r.measure_values.get(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn independent_target_all_zero() {
        let d = JointDistribution::from_csv(
            "s1,s2,t,p\n0,0,0,1/8\n0,0,1,1/8\n0,1,0,1/8\n0,1,1,1/8\n1,0,0,1/8\n1,0,1,1/8\n1,1,0,1/8\n1,1,1,1/8\n",
        )
        .unwrap();
        let r = decompose(&d, Measure::Sx).unwrap();
        assert!(r.averaged.values().iter().all(|v| v.abs() < 1e-12));
        assert!(r.diagnostics.passed());
    }

    #[test]
    fn perturbed_atoms_fail_validation() {
        let d = xor();
        let r = decompose(&d, Measure::Sx).unwrap();
        assert!(r.diagnostics.passed());
        let mut bad = r.averaged.clone();
        let i = r.lattice.index_of_antichain(&ac("1")).unwrap();
        bad.set(i, bad.get(i) + 0.1);
        let report = validate_consistency(&bad, &d, CONSISTENCY_TOLERANCE).unwrap();
        assert!(!report.passed());
        assert!((report.max_abs_residual - 0.1).abs() < 1e-12);
        // the {1} atom is part of I(T:S1) and I(T:S1,S2)
        let worst = report.worst.unwrap();
        assert!(worst.contains(1), "located {worst}");
    }

    #[test]
    fn single_source() {
        let d = JointDistribution::from_csv("s1,t,p\n0,0,0.4\n1,1,0.4\n1,0,0.2\n").unwrap();
        let r = decompose(&d, Measure::Sx).unwrap();
        assert_eq!(r.diagnostics.residuals.len(), 1);
        assert!(r.diagnostics.passed());
        let mi = d.mutual_information(Collection::full(1)).unwrap();
        assert!((r.averaged.get(0) - mi).abs() < 1e-12);
    }

    #[test]
    fn measure_names() {
        for m in ["sx", "res", "ws", "ms", "unq"] {
            assert_eq!(m.parse::<Measure>().unwrap().name(), m);
        }
        assert!("imin".parse::<Measure>().is_err());
    }

    #[test]
    fn alternate_measures_round_trip() {
        let d = xor();
        for m in [Measure::Res, Measure::Ws, Measure::Ms, Measure::Unq] {
            let r = decompose(&d, m).unwrap();
            assert!(r.round_trip_error.unwrap() < 1e-12, "{m:?}");
            assert!(r.diagnostics.passed());
        }
    }
}
