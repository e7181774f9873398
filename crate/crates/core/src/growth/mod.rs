//! Symbolic growth orders built from ρ-powers and iterated logarithms and
//! exponentials of `1/ρ`, the convex-ring chain they classify into, and the
//! spilling principles on threshold sets.

mod generating;
mod order;
mod ring;
mod spill;

use thiserror::Error;

pub use generating::{validate_generating, GeneratingFailure, SequenceKind, ValidationReport};
pub use order::{cmp_growth, Base, Dominant, GrowthOrder};
pub use ring::{chain_position, classify_ring, Membership, RingFamilyId};
pub use spill::{spill_check, BoundKind, Outcome, Principle, SpillReport, ThresholdSet, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrowthError {
    #[error("non-canonical growth order: {0}")]
    Canonicalization(String),
    #[error("column {column}: {message}")]
    Parse { column: usize, message: String },
}
