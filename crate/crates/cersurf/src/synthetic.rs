//! Parity-consistent synthetic chains.
//!
//! Builds option chains whose call/put price gaps are constructed directly
//! from discrete-compounding parity at one flat rate, so that every quote
//! implies exactly that rate. Such chains serve as recovery oracles for the
//! whole pipeline (ingest -> surface -> summary) and as checked-in demo
//! fixtures: feed one through and every point must come back at the chosen
//! rate to within round-off.

use chrono::NaiveDate;

use crate::chain::{ChainSnapshot, OptionQuote, SnapshotMeta};
use crate::daycount::add_business_days;
use crate::error::{CerError, Result};

/// Recipe for a flat-rate chain.
#[derive(Debug, Clone)]
pub struct FlatChainSpec {
    pub ticker: String,
    pub start_date: NaiveDate,
    pub spot: f64,
    pub dividend_yield: f64,
    /// The rate every quote of the chain implies; must exceed -1.
    pub flat_rate: f64,
    /// Expiries as business-day offsets from the start date (each >= 1).
    pub business_day_offsets: Vec<u32>,
    pub strikes: Vec<f64>,
    /// Denominator that turns business days into years; must match the
    /// day-count configuration the consumer will use.
    pub days_per_year: u32,
    /// Mid-price of the cheaper leg of each pair; keeps both legs positive.
    pub base_price: f64,
    /// Half bid/ask spread applied symmetrically around each mid.
    pub half_spread: f64,
}

impl FlatChainSpec {
    pub fn new(
        ticker: impl Into<String>,
        start_date: NaiveDate,
        spot: f64,
        dividend_yield: f64,
        flat_rate: f64,
    ) -> Self {
        Self {
            ticker: ticker.into(),
            start_date,
            spot,
            dividend_yield,
            flat_rate,
            business_day_offsets: vec![21, 63, 126, 252],
            strikes: vec![0.6 * spot, 0.8 * spot, spot, 1.25 * spot, 1.6 * spot],
            days_per_year: 252,
            base_price: 1.0,
            half_spread: 0.0,
        }
    }

    pub fn offsets(mut self, business_day_offsets: Vec<u32>) -> Self {
        self.business_day_offsets = business_day_offsets;
        self
    }

    pub fn strikes(mut self, strikes: Vec<f64>) -> Self {
        self.strikes = strikes;
        self
    }

    pub fn days_per_year(mut self, days_per_year: u32) -> Self {
        self.days_per_year = days_per_year;
        self
    }

    pub fn spread(mut self, half_spread: f64) -> Self {
        self.half_spread = half_spread;
        self
    }

    fn validate(&self) -> Result<()> {
        let ok = self.spot > 0.0
            && self.dividend_yield >= 0.0
            && self.flat_rate > -1.0
            && self.days_per_year > 0
            && !self.business_day_offsets.is_empty()
            && self.business_day_offsets.iter().all(|&n| n >= 1)
            && !self.strikes.is_empty()
            && self.strikes.iter().all(|&k| k > 0.0)
            && self.base_price >= self.half_spread
            && self.half_spread >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(CerError::InvalidInputs {
                reason: format!("invalid flat-chain recipe: {self:?}"),
            })
        }
    }
}

/// Builds the snapshot described by `spec`.
///
/// For each (expiry, strike), the call/put mid gap is set to
/// `S/(1+q)^T - K/(1+r)^T` with the cheaper leg priced at `base_price`, so
/// parity holds exactly at `flat_rate`.
pub fn flat_rate_chain(spec: &FlatChainSpec) -> Result<ChainSnapshot> {
    spec.validate()?;
    let mut quotes = Vec::with_capacity(spec.business_day_offsets.len() * spec.strikes.len());
    for &offset in &spec.business_day_offsets {
        let expiry = add_business_days(spec.start_date, offset);
        let maturity = f64::from(offset) / f64::from(spec.days_per_year);
        let pv_spot = spec.spot / (1.0 + spec.dividend_yield).powf(maturity);
        let pv_strike = |k: f64| k / (1.0 + spec.flat_rate).powf(maturity);
        for &strike in &spec.strikes {
            let gap = pv_spot - pv_strike(strike); // C - P at the flat rate
            let (call_mid, put_mid) = if gap >= 0.0 {
                (spec.base_price + gap, spec.base_price)
            } else {
                (spec.base_price, spec.base_price - gap)
            };
            quotes.push(OptionQuote {
                expiry,
                strike,
                call_bid: call_mid - spec.half_spread,
                call_ask: call_mid + spec.half_spread,
                put_bid: put_mid - spec.half_spread,
                put_ask: put_mid + spec.half_spread,
            });
        }
    }
    ChainSnapshot::new(
        SnapshotMeta {
            ticker: spec.ticker.clone(),
            start_date: spec.start_date,
            spot: spec.spot,
            dividend_yield: spec.dividend_yield,
        },
        quotes,
    )
}
