use std::fmt;

use thiserror::Error;

/// Which axis of a labeled matrix a label belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Row => f.write_str("algorithm"),
            Axis::Column => f.write_str("benchmark"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("bad value: {0}")]
    BadValue(String),

    #[error("empty matrix: at least one algorithm and one benchmark are required")]
    EmptyMatrix,

    #[error("duplicate {axis} label {label:?}")]
    DuplicateLabel { axis: Axis, label: String },

    #[error("unknown {axis} label {label:?}")]
    UnknownLabel { axis: Axis, label: String },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid weights: {0}")]
    WeightInvalid(String),

    #[error("standard deviation must be strictly positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("sigma floor must be strictly positive and finite, got {0}")]
    NonPositiveSigmaFloor(f64),

    #[error("tie epsilon must be finite and nonnegative, got {0}")]
    InvalidTieEpsilon(f64),

    #[error("at least 2 algorithms are required, got {0}")]
    TooFewAlgorithms(usize),

    #[error("at least 2 benchmarks are required, got {0}")]
    TooFewBenchmarks(usize),

    #[error("all paired differences are zero; the signed-rank test is undefined")]
    AllZeroDifferences,

    #[error("significance level must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),

    #[error("bad weight grid: {0}")]
    BadGrid(String),

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;
