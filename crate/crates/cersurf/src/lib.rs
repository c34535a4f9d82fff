//! Implied put-call-parity certainty equivalent rate surfaces.
//!
//! Discrete-compounding put-call parity ties a call/put pair, the discounted
//! strike, and the dividend-adjusted spot together through one rate. Backing
//! that rate out of quoted option chains, one strike/expiry at a time, gives
//! a per-ticker surface over time to maturity and moneyness whose sign and
//! level read directly as an investment signal.
//!
//! The crate covers the full pipeline:
//!
//! - [`chain`]: parse and validate chain files and valuation metadata into a
//!   [`ChainSnapshot`].
//! - [`daycount`]: business-day year fractions (252-day year by default).
//! - [`rate`]: the closed-form implied rate, the parity residual, and an
//!   independent bisection solver for cross-checking.
//! - [`surface`]: per-ticker surfaces, their summary statistics, and the
//!   moneyness-sensitivity diagnostic.
//! - [`grid`]: resampling scattered surfaces onto plot-ready regular grids.
//! - [`ranking`]: investability classification and priority ordering.
//! - [`synthetic`]: parity-consistent chains at a flat rate, the recovery
//!   oracle used across the test suites.

pub mod chain;
pub mod daycount;
pub mod error;
pub mod grid;
pub mod ranking;
pub mod rate;
pub mod surface;
pub mod synthetic;

pub use chain::{
    chain_to_csv, load_snapshot, parse_chain_file, parse_chain_reader, parse_meta_file,
    ChainFormat, ChainSnapshot, IngestReport, OptionQuote, RejectReason, RowRejection,
    SnapshotMeta,
};
pub use daycount::{
    add_business_days, business_days_between, year_fraction, DayCountConfig, WeekendRule,
};
pub use error::{CerError, Result};
pub use grid::{grid_surface, GriddedSurface};
pub use ranking::{classify, rank, RankEntry, RankPolicy, RankReport};
pub use rate::{
    implied_cer, mid_price, parity_residual, solve_rate_bisection, ImpliedRate, RateInputs,
};
pub use surface::{
    build_surface, moneyness_sensitivity, summarize, CerPoint, CerSurface, QuoteFailure,
    RateSummary,
};
pub use synthetic::{flat_rate_chain, FlatChainSpec};
