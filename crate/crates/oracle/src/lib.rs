//! Independent brute-force verification layer: finite-support generalized
//! power series over small prime fields, exact extension arithmetic
//! through the defining relation, Newton polygons, and direct value-set
//! computations of the ideals whose quotients the classifier describes.

pub mod classify;
pub mod ext;
pub mod field;
pub mod instances;
pub mod newton;
pub mod series;

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum OracleError {
    #[error("exponent outside the base value group: {0}")]
    ExponentOutsideGroup(String),
    #[error("valuation is negative where an integral element is required")]
    NegativeValuation,
    #[error("extension is not unibranched: {0}")]
    NotUnibranched(String),
    #[error("reduction did not terminate after {steps} steps; defect suspected")]
    DefectSuspected { steps: usize },
    #[error("instance outside oracle scope: {0}")]
    OutOfScope(String),
    #[error("empty candidate list")]
    EmptyCandidates,
    #[error("oracle arithmetic check failed: {0}")]
    Arithmetic(String),
    #[error(transparent)]
    Group(#[from] valdiff_core::ordered_groups::GroupError),
}
