use thiserror::Error;

use crate::lattice::LatticePoint;

/// Errors surfaced by the library. Infeasible counting keys are not errors
/// (they yield zero); these are contract violations or internal invariant
/// breaches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Sequence subtraction would produce a negative entry.
    #[error("sequence subtraction underflows at place {place}")]
    NegativeEntry { place: usize },

    /// A path step moves two or more columns to the right, so no column
    /// profile exists.
    #[error("path step from column {from} to column {to} skips a column")]
    ColumnSkip { from: i64, to: i64 },

    /// A path point lies outside its polygon.
    #[error("point ({x}, {y}) lies outside the polygon")]
    PointOutsidePolygon { x: i64, y: i64 },

    /// Path points are not strictly increasing in the lambda order.
    #[error("path points are not strictly lambda-increasing")]
    NotLambdaIncreasing,

    /// A multiplicity engine was handed a path with the wrong endpoints.
    #[error("path runs {found_start:?} -> {found_end:?}, expected {expected_start:?} -> {expected_end:?}")]
    BadEndpoints {
        expected_start: LatticePoint,
        expected_end: LatticePoint,
        found_start: LatticePoint,
        found_end: LatticePoint,
    },

    /// An aggregated count came out non-integral. Per-path multiplicities may
    /// be rational, but every total must be an integer; this is a bug.
    #[error("aggregated count for {key} is not an integer: {value}")]
    NonIntegralTotal { key: String, value: String },

    /// A counting key violates its polygon constraint.
    #[error("invalid count key: {0}")]
    InvalidKey(String),
}

pub type Result<T> = std::result::Result<T, Error>;
