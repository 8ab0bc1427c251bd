use thiserror::Error;

use crate::combinatorics::ElementSet;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground sizes differ: {left} vs {right}")]
    GroundSizeMismatch { left: u8, right: u8 },

    #[error("ground set of size {0} does not fit in one machine word (max 63)")]
    GroundTooLarge(usize),

    #[error("element {element} is outside the ground set [1..{ground}]")]
    ElementOutOfRange { element: usize, ground: u8 },

    #[error("{0} is not a subset of {1}")]
    NotSubset(ElementSet, ElementSet),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid geometry parameters: {0}")]
    InvalidParams(String),

    #[error("point roster for k={0} is too large to materialize")]
    GeometryTooLarge(u32),

    #[error("{0} is not a point of the geometry")]
    NotAPoint(ElementSet),

    #[error("{0} and {1} are not collinear")]
    NotCollinear(ElementSet, ElementSet),

    #[error("closure leaves the geometry: {0} has the wrong cardinality")]
    SpanLeavesGeometry(ElementSet),

    #[error("expected {expected} elements, found {found}")]
    WrongSize { expected: usize, found: usize },

    #[error("invalid clique: {0}")]
    InvalidClique(String),

    #[error("{0} is not a center point of the clique")]
    NotCenter(ElementSet),

    #[error("invalid Fano plane: {0}")]
    InvalidFanoPlane(String),

    #[error("bijection index {0} is not one of 0, 1, 3, 7")]
    InvalidIndex(u8),

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("not a normalized Hadamard matrix: {0}")]
    NotHadamard(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("group does not preserve the design: {0}")]
    GroupDoesNotPreserve(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
