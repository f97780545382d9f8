use thiserror::Error;

/// Errors surfaced by the library. Variant names follow the operation
/// contracts; solver non-convergence is reported on the result record
/// instead of through this type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("G vanishes at t = {t:e} > 0, index ratio undefined")]
    DegenerateRatio { t: f64 },

    #[error("g is flat over a segment of width {width:e} near t = {t:e}, inverse undefined")]
    NonInvertible { t: f64, width: f64 },

    #[error("not subcritical: integrand exponent {exponent} at zero (convergence needs > -1)")]
    NotSubcritical { exponent: f64 },

    #[error("domination test oscillates at the largest sampled argument (a = {a})")]
    Inconclusive { a: f64 },

    #[error("bad geometry: {0}")]
    BadGeometry(String),

    #[error("pair ({0}, {0}) lies on the excluded diagonal")]
    DiagonalPair(usize),

    #[error("beta must be strictly positive on exterior nodes: node {node} has {value}")]
    NonPositiveBeta { node: usize, value: f64 },

    #[error("function is identically zero on the interior")]
    ZeroFunction,

    #[error("constraint gradient vanished")]
    DegenerateGradient,

    #[error("ordering violation: {0}")]
    OrderingViolation(String),

    #[error("no sampled function yields a positive F-integral")]
    NoPositiveF,

    #[error("missing config section [{0}]")]
    MissingSection(&'static str),

    #[error("parse error: {0}")]
    ParseError(String),

    #[error("validation error: {0}")]
    ValidationError(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
