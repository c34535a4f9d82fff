//! Business-day counting and year fractions.
//!
//! Time to maturity is measured as whole business days between two calendar
//! dates divided by a configurable day count (252 by default). Weekends are
//! excluded; exchange holidays are not, since holiday calendars are vendor
//! data. The interval convention is half-open on the left: days are counted
//! in `(start, expiry]`.

use chrono::{Datelike, Duration, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::error::{CerError, Result};

/// How weekends are treated when counting business days.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeekendRule {
    /// Saturdays and Sundays are never business days; everything else is.
    #[default]
    WeekdaysOnly,
}

/// Day-count configuration: business days per year and the weekend rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayCountConfig {
    pub days_per_year: u32,
    pub weekend_rule: WeekendRule,
}

impl Default for DayCountConfig {
    fn default() -> Self {
        Self {
            days_per_year: 252,
            weekend_rule: WeekendRule::WeekdaysOnly,
        }
    }
}

impl DayCountConfig {
    pub fn with_days_per_year(days_per_year: u32) -> Self {
        Self {
            days_per_year,
            ..Self::default()
        }
    }
}

/// Number of weekdays in day range `1..=n` of the proleptic Gregorian
/// calendar, where day 1 (0001-01-01) is a Monday.
fn weekdays_from_ce(n: i64) -> i64 {
    debug_assert!(n >= 0);
    (n / 7) * 5 + (n % 7).min(5)
}

/// Business days in the half-open interval `(start, end]`, weekends excluded.
///
/// Returns a negative count when `end < start` (the mirrored interval).
pub fn business_days_between(start: NaiveDate, end: NaiveDate) -> i64 {
    weekdays_from_ce(i64::from(end.num_days_from_ce()))
        - weekdays_from_ce(i64::from(start.num_days_from_ce()))
}

/// Steps `n` business days forward from `start`, skipping weekends.
pub fn add_business_days(start: NaiveDate, n: u32) -> NaiveDate {
    let mut date = start;
    let mut remaining = n;
    while remaining > 0 {
        date += Duration::days(1);
        if !matches!(date.weekday(), Weekday::Sat | Weekday::Sun) {
            remaining -= 1;
        }
    }
    date
}

/// Year fraction between `start` and `expiry` under `cfg`.
///
/// Counts business days in `(start, expiry]` and divides by
/// `cfg.days_per_year`. `expiry` must be strictly after `start`; a maturity
/// of zero or less has no discounting meaning.
pub fn year_fraction(start: NaiveDate, expiry: NaiveDate, cfg: &DayCountConfig) -> Result<f64> {
    if cfg.days_per_year == 0 {
        return Err(CerError::InvalidDayCount);
    }
    if expiry <= start {
        return Err(CerError::NonPositiveMaturity);
    }
    let WeekendRule::WeekdaysOnly = cfg.weekend_rule;
    let days = business_days_between(start, expiry);
    if days <= 0 {
        // start and expiry straddle nothing but weekend days
        return Err(CerError::NonPositiveMaturity);
    }
    Ok(days as f64 / f64::from(cfg.days_per_year))
}
