//! Exact partial information decomposition.
//!
//! The crate enumerates the lattice of information atoms for `n` sources
//! (parthood distributions, antichains and logic statements are three views
//! of the same nodes), evaluates the shared-exclusion redundancy `i∩sx`
//! pointwise on a discrete joint distribution, and Möbius-inverts it into
//! pointwise and averaged atoms. [`alternate`] holds the decompositions
//! induced by restricted information, weak and moderate synergy and unique
//! information, plus the rank check showing that strong synergy is not
//! invertible.
//!
//! ```
//! use pid_core::{decompose, JointDistribution, Measure};
//!
//! let xor = JointDistribution::from_csv("s1,s2,t,p\n0,0,0,1/4\n0,1,1,1/4\n1,0,1,1/4\n1,1,0,1/4\n")?;
//! let result = decompose(&xor, Measure::Sx)?;
//! let synergy = result.averaged.at(&"{1,2}".parse()?)?;
//! assert!((synergy - (1.0 - 1.5f64.log2())).abs() < 1e-12);
//! # Ok::<(), pid_core::PidError>(())
//! ```

pub mod alternate;
pub mod collection;
pub mod decomposition;
pub mod error;
pub mod lattice;
pub mod probability;
pub mod redundancy;
pub mod report;

pub use collection::Collection;
pub use decomposition::{
    decompose, moebius_invert, validate_consistency, AtomTable, DecompositionResult, Measure,
};
pub use error::{PidError, Result};
pub use lattice::{Antichain, LabelView, Lattice, LogicStatement, ParthoodDistribution};
pub use probability::{JointDistribution, Realization};
