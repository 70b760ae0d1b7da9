use thiserror::Error;

use crate::report::Report;

/// Errors raised by constructors and conversions in this crate.
///
/// Condition failures of an otherwise well-formed object (an LR filling that
/// breaks the word condition, a hive with a bad rhombus) are carried in a
/// [`Report`]; structural problems get their own variants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a partition: {0:?} is not weakly decreasing")]
    NotPartition(Vec<u64>),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid LR filling: {0}")]
    InvalidFilling(Report),

    #[error("invalid hive: {0}")]
    InvalidHive(Report),

    #[error("content mismatch: label {label} occurs {found} times, expected {expected}")]
    ContentMismatch { label: usize, found: u64, expected: u64 },

    #[error("label {label} in row {row} exceeds the content bound {bound}")]
    LabelOutOfRange { label: usize, row: usize, bound: usize },

    #[error("flow is not canonical: {0}")]
    NonCanonicalFlow(String),

    #[error("trace does not match flow: {0}")]
    TraceMismatch(String),

    #[error("summation exceeded the step cap of {0}")]
    StepCap(usize),

    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
