//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CerError>;

/// Everything that can go wrong between a chain file and a rate surface.
#[derive(Debug, Error)]
pub enum CerError {
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("header mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch { expected: String, found: String },

    #[error("chain JSON must be an array of quote objects")]
    NotAJsonArray,

    #[error("metadata is missing required field `{field}`")]
    MissingMetaField { field: &'static str },

    #[error("invalid metadata: {reason}")]
    InvalidMeta { reason: String },

    #[error("invalid inputs: {reason}")]
    InvalidInputs { reason: String },

    #[error("no quotes were accepted from the chain")]
    EmptyChain,

    #[error("crossed market: bid {bid} exceeds ask {ask}")]
    CrossedMarket { bid: f64, ask: f64 },

    #[error("expiry must be strictly after the start date")]
    NonPositiveMaturity,

    #[error("day-count config requires days_per_year > 0")]
    InvalidDayCount,

    #[error("non-positive parity denominator {denominator}: quotes are parity-inconsistent")]
    NonPositiveDenominator { denominator: f64 },

    #[error("implied rate is not finite (inputs too extreme for double precision)")]
    NonFinite,

    #[error("implied rate rounds to -1 in double precision (inputs too extreme)")]
    RateUnderflow,

    #[error("rate {value} violates the > -1 bound of discrete discounting")]
    RateOutOfRange { value: f64 },

    #[error("parity residual does not change sign on [{lo}, {hi}]: no root")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("invalid bracket [{lo}, {hi}]: need -1 < lo < hi and tol > 0")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("surface is empty: every quote failed ({failures} failures)")]
    EmptySurface { failures: usize },

    #[error("cannot summarize a surface with no points")]
    EmptySummary,

    #[error("grid needs at least 2 bins per axis, got t_bins={t_bins}, m_bins={m_bins}")]
    InvalidBins { t_bins: usize, m_bins: usize },

    #[error("cannot rank an empty list of tickers")]
    EmptyRanking,
}
