//! Error type shared by every module of the core crate.

use alloc::string::String;
use alloc::vec::Vec;

use crate::partitions::Partition;

/// Errors raised by constructions and checks in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A partition of weight zero was requested where a positive weight is required.
    #[error("empty weight")]
    EmptyWeight,

    /// The parts do not form a partition (zero part or increasing sequence).
    #[error("invalid partition {0:?}: parts must be positive and non-increasing")]
    InvalidPartition(Vec<usize>),

    /// Two objects that must share a weight (or arity) do not.
    #[error("weight mismatch: {left} vs {right}")]
    WeightMismatch {
        /// Weight of the first argument.
        left: usize,
        /// Weight of the second argument.
        right: usize,
    },

    /// The symmetric group is too large to enumerate.
    #[error("group too large: p = {0} exceeds 8")]
    GroupTooLarge(usize),

    /// An image list is not a bijection on `1..=p`.
    #[error("not a permutation: {0:?}")]
    InvalidPermutation(Vec<usize>),

    /// A branching path does not belong to the irrep it was used with.
    #[error("branching path does not belong to irrep {0}")]
    ForeignPath(Partition),

    /// A subsystem index lies outside the operator.
    #[error("slot {slot} out of range for arity {arity}")]
    SlotOutOfRange {
        /// Offending slot.
        slot: usize,
        /// Number of slots of the operator.
        arity: usize,
    },

    /// Matrix or operator shapes are incompatible.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A partial trace was requested against the construction order of a unit.
    #[error("trace incompatible with construction order")]
    TraceOrientation,

    /// Two partitions are neither equal nor related by moving one box.
    #[error("partitions {0} and {1} are not box-related")]
    Unrelated(Partition, Partition),

    /// A Gram matrix is singular and no degeneracy handling was requested.
    #[error("singular Gram matrix; violating diagrams: {0:?}")]
    SingularGram(Vec<Partition>),

    /// Parameters outside the supported range of an operation.
    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    /// Any other precondition violation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
