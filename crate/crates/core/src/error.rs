use alloc::string::String;

/// Errors produced by the forecasting core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("exogenous table does not cover month {missing} of series {series}")]
    MisalignedExogenous { series: String, missing: String },
    #[error("non-finite value in {context} at position {index}")]
    NonFiniteValue { context: String, index: usize },
    #[error("series too short: need at least {required} observations, got {actual}")]
    SeriesTooShort { required: usize, actual: usize },
    #[error("too few rows: need at least {required}, got {actual}")]
    TooFewRows { required: usize, actual: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("actual value must be positive, got {0}")]
    ZeroActual(f64),
    #[error("empty record set")]
    EmptySet,
    #[error("records span more than one dataset ({0} and {1})")]
    MixedDatasets(String, String),
    #[error("in-sample seasonal naive error is zero")]
    ConstantSeasonalSeries,
    #[error("series is constant")]
    ConstantSeries,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("no exogenous row for the forecast month")]
    MissingExogForecastRow,
    #[error("unknown exogenous column {0:?}")]
    UnknownFeature(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("too short: need at least {required} observations, got {actual}")]
    TooShort { required: usize, actual: usize },
    #[error("requested {requested} features but only {available} are available")]
    TooFewFeatures { requested: usize, available: usize },
    #[error("every feature prefix failed to fit")]
    AllPrefixesFailed,
    #[error("no forecast instance has results for every model")]
    NoCompleteRows,
    #[error("degenerate rank matrix: {0}")]
    DegenerateMatrix(String),
    #[error("too few non-zero paired differences: need {required}, got {actual}")]
    TooFewPairs { required: usize, actual: usize },
    #[error("category {0} has no members in the roster")]
    EmptyCategory(String),
    #[error("unknown model {0:?}")]
    UnknownModel(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
