//! Library error type.

/// Errors produced by constructors, evaluators, and fitting routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument violated its documented range or shape.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A data value lies outside the distribution support.
    #[error("value {value} outside the support [{lower}, {upper}]")]
    OutsideSupport { value: f64, lower: f64, upper: f64 },

    /// A control polygon does not describe a cumulative distribution function.
    #[error("control polygon is not a valid CDF: {0}")]
    NotACdf(String),

    /// No usable observations remain after exclusions.
    #[error("no usable data: {0}")]
    EmptyData(String),

    /// A four-parameter fit was requested with an unusable box.
    #[error("infeasible bounds: {0}")]
    InfeasibleBounds(String),
}

pub type Result<T> = std::result::Result<T, Error>;
