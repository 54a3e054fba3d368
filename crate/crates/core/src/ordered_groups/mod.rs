//! Ordered abelian groups as finite lexicographic products of computable
//! subgroups of the rationals, together with their convex subgroups,
//! archimedean components, prime-index extensions and ideal value sets.

mod adjoined;
mod coords;
mod group;
mod ideal;
mod level;

pub use adjoined::{AdjoinedGroup, ExtValue};
pub use coords::Coords;
pub use group::{
    check_drvg, check_drvg_by_quotients, ConvexSubgroup, DrvgOutcome, GroupElement, OrderedGroup,
};
pub use ideal::{IdealShape, IdealValueSet};
pub use level::LevelDescriptor;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("level descriptor invalid: {0}")]
    BadLevel(String),
    #[error("coordinate count {got} does not match level count {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("coordinate {coord} at level {level} is not a member of the level group")]
    NotAMember { level: usize, coord: String },
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("operation undefined for the zero element")]
    ZeroElement,
    #[error("operation undefined for the trivial group")]
    TrivialGroup,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q*delta does not lie in the base group")]
    AdjoinOutsideBase,
    #[error("offset does not lie in the ambient group")]
    OffsetOutsideAmbient,
    #[error("convex subgroup index {index} out of range for rank {rank}")]
    ConvexOutOfRange { index: usize, rank: usize },
    #[error("value set is empty")]
    EmptyValueSet,
}
