use std::fmt;

use thiserror::Error;

/// Position of a token in expression or config text. Both fields are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at {at}: expected {}, found {found}", .expected.join(" or "))]
    Parse {
        at: Span,
        expected: Vec<String>,
        found: String,
    },

    #[error("unknown symbol `{name}` at {at}")]
    UnknownSymbol { name: String, at: Span },

    #[error("domain error in `{expr}`: {reason}")]
    Domain { expr: String, reason: String },

    #[error("point {point:?} is outside the chart: {reason}")]
    OutsideChart { point: Vec<f64>, reason: String },

    #[error("singular metric at {point:?}: {reason}")]
    SingularMetric { point: Vec<f64>, reason: String },

    #[error("metric at {point:?} is not Lorentzian (negative/zero/positive eigenvalues = {negative}/{zero}/{positive})")]
    WrongSignature {
        point: Vec<f64>,
        negative: usize,
        zero: usize,
        positive: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("gradient is null at {point:?} (|df.df| = {norm_sq:e})")]
    NullGradient { point: Vec<f64>, norm_sq: f64 },

    #[error("matrix is not a nondegenerate Lorentzian metric")]
    NonLorentzianMetric,

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("at grid point {point:?}: {source}")]
    AtGridPoint {
        point: Vec<f64>,
        #[source]
        source: Box<Error>,
    },

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("model `{0}` is not declared in block (warped-product) form")]
    NotBlockForm(String),

    #[error("slice is not spacelike at {point:?}")]
    NonSpacelikeSlice { point: Vec<f64> },

    #[error("invalid step size {0}")]
    StepSizeInvalid(f64),

    #[error("curve is not closed: {0}")]
    NotClosed(String),

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid model definition: {0}")]
    InvalidModel(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
