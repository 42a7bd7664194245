//! Error type shared by all modules of the crate.

use core::fmt;

/// Errors from model evaluation, fitting, segmentation, and generation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violated its domain (e.g. a non-positive semi-period).
    InvalidParameter(&'static str),
    /// A fit configuration field is out of range.
    InvalidConfig(&'static str),
    /// The data series is empty.
    EmptyData,
    /// Fewer data points than free parameters.
    InsufficientData { points: usize, params: usize },
    /// The model produced a non-finite value at a probe point.
    NonFiniteEvaluation { year: f64 },
    /// A value was not strictly positive where a logarithm is taken.
    NonPositiveValue { year: i32 },
    /// A requested year lies outside the regime interval.
    YearOutOfRegime { year: i32 },
    /// A year is not covered by any regime of the partition.
    YearNotCovered { year: i32 },
    /// Parameter-set count does not match the partition's regime count.
    ParamsPartitionMismatch { regimes: usize, params: usize },
    /// Two spike events target the same year.
    DuplicateSpikeYear { year: i32 },
    /// The data span cannot host the requested regimes at the minimum width.
    InfeasiblePartition { span: i32, required: i32 },
    /// Regime list violates the ordering or overlap rules.
    InvalidPartition(&'static str),
    /// A series was constructed with a repeated year.
    DuplicateYear { year: i32 },
    /// A series value was negative or not finite.
    InvalidValue { year: i32 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::InvalidConfig(what) => write!(f, "invalid fit configuration: {what}"),
            Error::EmptyData => write!(f, "data series is empty"),
            Error::InsufficientData { points, params } => {
                write!(f, "{points} data points cannot constrain {params} parameters")
            }
            Error::NonFiniteEvaluation { year } => {
                write!(f, "model evaluated to a non-finite value near year {year}")
            }
            Error::NonPositiveValue { year } => {
                write!(f, "non-positive value at year {year} (log scale required)")
            }
            Error::YearOutOfRegime { year } => {
                write!(f, "year {year} lies outside the regime interval")
            }
            Error::YearNotCovered { year } => {
                write!(f, "year {year} is not covered by any regime")
            }
            Error::ParamsPartitionMismatch { regimes, params } => {
                write!(f, "{params} parameter sets for {regimes} regimes")
            }
            Error::DuplicateSpikeYear { year } => {
                write!(f, "more than one spike event targets year {year}")
            }
            Error::InfeasiblePartition { span, required } => {
                write!(f, "span of {span} years cannot host the partition ({required} required)")
            }
            Error::InvalidPartition(what) => write!(f, "invalid partition: {what}"),
            Error::DuplicateYear { year } => write!(f, "duplicate year {year}"),
            Error::InvalidValue { year } => {
                write!(f, "negative or non-finite value at year {year}")
            }
        }
    }
}

impl core::error::Error for Error {}
