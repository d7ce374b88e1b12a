//! Shared-exclusion pointwise redundancy.
//!
//! The redundancy of collections `a_1, ..., a_m` at a realization is the
//! pointwise mutual information between the target value and the truth of
//! `∨_j ∧_{i ∈ a_j} (S_i = s_i)`.

use crate::collection::Collection;
use crate::error::{PidError, Result};
use crate::lattice::Antichain;
use crate::probability::{JointDistribution, Realization};

/// A distribution together with one positive-mass realization.
#[derive(Debug, Clone)]
pub struct PointwiseContext<'a> {
    dist: &'a JointDistribution,
    realization: Realization,
    p_target: f64,
}

impl<'a> PointwiseContext<'a> {
    pub fn new(dist: &'a JointDistribution, realization: Realization) -> Result<Self> {
        if realization.sources.len() != dist.n() {
            return Err(PidError::Usage(format!(
                "realization has {} source values, distribution has {} sources",
                realization.sources.len(),
                dist.n()
            )));
        }
        if dist.mass_of(&realization) <= 0.0 {
            return Err(PidError::Domain(format!(
                "realization {realization:?} has zero mass"
            )));
        }
        let t = realization.target;
        let p_target = dist.probability_of_event(|r| r.target == t);
        Ok(PointwiseContext {
            dist,
            realization,
            p_target,
        })
    }

    pub fn dist(&self) -> &JointDistribution {
        self.dist
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }
}

/// `P(A)` and `P(A | T = t)` for a statement event `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventProbability {
    pub unconditional: f64,
    pub given_target: f64,
}

/// Probabilities of the event "some collection in `collections` matches the
/// context's source values", for any tuple of collections (not necessarily an
/// antichain).
pub fn disjunction_event_probability(
    ctx: &PointwiseContext<'_>,
    collections: &[Collection],
) -> Result<EventProbability> {
    if collections.is_empty() {
        return Err(PidError::Usage(
            "redundancy of an empty tuple is undefined".into(),
        ));
    }
    if let Some(c) = collections.iter().find(|c| c.max_index() > ctx.dist.n()) {
        return Err(PidError::Usage(format!(
            "collection {c} refers to a source beyond n = {}",
            ctx.dist.n()
        )));
    }
    let here = &ctx.realization;
    let holds = |r: &Realization| collections.iter().any(|a| here.agrees_on(r, *a));
    let mut p_event = 0.0;
    let mut p_joint = 0.0;
    for row in ctx.dist.rows() {
        if holds(&row.realization) {
            p_event += row.mass;
            if row.realization.target == here.target {
                p_joint += row.mass;
            }
        }
    }
    Ok(EventProbability {
        unconditional: p_event,
        given_target: p_joint / ctx.p_target,
    })
}

pub fn statement_event_probability(
    ctx: &PointwiseContext<'_>,
    alpha: &Antichain,
) -> Result<EventProbability> {
    disjunction_event_probability(ctx, alpha.collections())
}

/// `i∩sx(t : α) = log2 P(A | t) / P(A)`.
pub fn i_cap_sx(ctx: &PointwiseContext<'_>, alpha: &Antichain) -> Result<f64> {
    let p = statement_event_probability(ctx, alpha)?;
    Ok((p.given_target / p.unconditional).log2())
}

/// Informative and misinformative parts of the redundancy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRedundancy {
    /// `−log2 P(A)`
    pub informative: f64,
    /// `−log2 P(A | t)`
    pub misinformative: f64,
}

impl SplitRedundancy {
    pub fn net(&self) -> f64 {
        self.informative - self.misinformative
    }
}

pub fn i_cap_sx_split(ctx: &PointwiseContext<'_>, alpha: &Antichain) -> Result<SplitRedundancy> {
    let p = statement_event_probability(ctx, alpha)?;
    Ok(SplitRedundancy {
        informative: -p.unconditional.log2(),
        misinformative: -p.given_target.log2(),
    })
}
