//! Per-ticker rate surfaces over (time to maturity, moneyness).
//!
//! Every accepted quote becomes one sample: its maturity in years, its
//! moneyness `S/K`, and the implied certainty equivalent rate backed out of
//! the call/put mid-prices. Quotes whose rate cannot be computed (crossed
//! after construction, parity-inconsistent, maturity of zero business days)
//! are carried alongside the points so reports can show exactly what was
//! dropped and why.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::chain::ChainSnapshot;
use crate::daycount::{year_fraction, DayCountConfig};
use crate::error::{CerError, Result};
use crate::rate::{implied_cer, mid_price, RateInputs};

/// One computed sample of the rate surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CerPoint {
    pub maturity_years: f64,
    pub strike: f64,
    pub moneyness: f64,
    pub rate: f64,
}

/// A quote that produced no point, with the reason it failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuoteFailure {
    pub expiry: NaiveDate,
    pub strike: f64,
    pub reason: String,
}

/// All surface samples for one ticker.
///
/// Invariants (upheld by [`build_surface`]): `points` is non-empty, sorted
/// by maturity then strike, and free of duplicate (maturity, strike) pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CerSurface {
    pub ticker: String,
    pub points: Vec<CerPoint>,
    pub failures: Vec<QuoteFailure>,
}

/// Maximum, minimum, and unweighted mean rate over a surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSummary {
    pub maximum: f64,
    pub minimum: f64,
    pub mean: f64,
}

/// Computes one [`CerPoint`] per accepted quote of the snapshot.
///
/// Mid-prices feed the rate kernel; maturities come from the business-day
/// year fraction. Failing quotes land in `failures` with their reason. The
/// result is deterministic and independent of the input quote order: points
/// are sorted by (maturity, strike), and when two expiries collapse onto the
/// same maturity for the same strike (weekend expiries), the earlier expiry
/// wins and the later is reported as a duplicate.
pub fn build_surface(snapshot: &ChainSnapshot, cfg: &DayCountConfig) -> Result<CerSurface> {
    let mut quotes = snapshot.quotes.clone();
    quotes.sort_by(|a, b| {
        (a.expiry, a.strike)
            .partial_cmp(&(b.expiry, b.strike))
            .expect("validated quotes have comparable keys")
    });

    let mut points: Vec<CerPoint> = Vec::with_capacity(quotes.len());
    let mut failures: Vec<QuoteFailure> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for quote in &quotes {
        let fail = |reason: String| QuoteFailure {
            expiry: quote.expiry,
            strike: quote.strike,
            reason,
        };
        let maturity = match year_fraction(snapshot.start_date, quote.expiry, cfg) {
            Ok(t) => t,
            Err(e) => {
                failures.push(fail(e.to_string()));
                continue;
            }
        };
        if !seen.insert((maturity.to_bits(), quote.strike.to_bits())) {
            failures.push(fail("duplicate maturity/strike point".to_string()));
            continue;
        }
        let call_mid = match mid_price(quote.call_bid, quote.call_ask) {
            Ok(m) => m,
            Err(e) => {
                failures.push(fail(e.to_string()));
                continue;
            }
        };
        let put_mid = match mid_price(quote.put_bid, quote.put_ask) {
            Ok(m) => m,
            Err(e) => {
                failures.push(fail(e.to_string()));
                continue;
            }
        };
        let inputs = RateInputs {
            spot: snapshot.spot,
            dividend_yield: snapshot.dividend_yield,
            maturity_years: maturity,
            strike: quote.strike,
            call_mid,
            put_mid,
        };
        match implied_cer(&inputs) {
            Ok(rate) => points.push(CerPoint {
                maturity_years: maturity,
                strike: quote.strike,
                moneyness: snapshot.spot / quote.strike,
                rate: rate.value(),
            }),
            Err(e) => failures.push(fail(e.to_string())),
        }
    }

    if points.is_empty() {
        return Err(CerError::EmptySurface {
            failures: failures.len(),
        });
    }
    points.sort_by(|a, b| {
        (a.maturity_years, a.strike)
            .partial_cmp(&(b.maturity_years, b.strike))
            .expect("surface points are finite")
    });
    Ok(CerSurface {
        ticker: snapshot.ticker.clone(),
        points,
        failures,
    })
}

/// Maximum, minimum, and unweighted arithmetic mean over all point rates.
pub fn summarize(surface: &CerSurface) -> Result<RateSummary> {
    if surface.points.is_empty() {
        return Err(CerError::EmptySummary);
    }
    let mut maximum = f64::NEG_INFINITY;
    let mut minimum = f64::INFINITY;
    let mut sum = 0.0;
    for point in &surface.points {
        maximum = maximum.max(point.rate);
        minimum = minimum.min(point.rate);
        sum += point.rate;
    }
    Ok(RateSummary {
        maximum,
        minimum,
        mean: sum / surface.points.len() as f64,
    })
}

/// For each distinct maturity, the spread of rates across strikes.
///
/// A diagnostic for how flat the surface is in the moneyness direction: on
/// parity-consistent data the ranges are zero; real chains decide for
/// themselves.
pub fn moneyness_sensitivity(surface: &CerSurface) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut i = 0;
    let points = &surface.points; // sorted by (maturity, strike)
    while i < points.len() {
        let maturity = points[i].maturity_years;
        let mut lo = points[i].rate;
        let mut hi = points[i].rate;
        let mut j = i + 1;
        while j < points.len() && points[j].maturity_years == maturity {
            lo = lo.min(points[j].rate);
            hi = hi.max(points[j].rate);
            j += 1;
        }
        out.push((maturity, hi - lo));
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{OptionQuote, SnapshotMeta};
    use crate::synthetic::{flat_rate_chain, FlatChainSpec};

    fn date(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn meta() -> SnapshotMeta {
        SnapshotMeta {
            ticker: "SYNTH".into(),
            start_date: date(2023, 1, 3),
            spot: 100.0,
            dividend_yield: 0.0,
        }
    }

    fn quote(expiry: NaiveDate, strike: f64, c: f64, p: f64) -> OptionQuote {
        OptionQuote {
            expiry,
            strike,
            call_bid: c,
            call_ask: c,
            put_bid: p,
            put_ask: p,
        }
    }

    #[test]
    fn flat_chain_recovers_its_rate_everywhere() {
        let spec = FlatChainSpec::new("SYNTH", date(2023, 1, 3), 100.0, 0.02, 0.03)
            .offsets(vec![5, 21, 63, 126, 252, 504])
            .strikes(vec![60.0, 80.0, 100.0, 120.0, 150.0]);
        let snapshot = flat_rate_chain(&spec).unwrap();
        let surface = build_surface(&snapshot, &DayCountConfig::default()).unwrap();
        assert_eq!(surface.points.len(), 30);
        assert!(surface.failures.is_empty());
        for point in &surface.points {
            assert!(
                (point.rate - 0.03).abs() < 1e-9,
                "rate {} at T={} K={}",
                point.rate,
                point.maturity_years,
                point.strike
            );
            assert!((point.moneyness - 100.0 / point.strike).abs() < 1e-15);
        }
        let summary = summarize(&surface).unwrap();
        assert!((summary.maximum - 0.03).abs() < 1e-9);
        assert!((summary.minimum - 0.03).abs() < 1e-9);
        assert!((summary.mean - 0.03).abs() < 1e-9);
        for (_, range) in moneyness_sensitivity(&surface) {
            assert!(range.abs() < 1e-9);
        }
    }

    #[test]
    fn point_count_matches_accepted_minus_failed() {
        let snapshot = ChainSnapshot::new(
            meta(),
            vec![
                quote(date(2023, 6, 16), 100.0, 7.0, 7.0),
                // parity-inconsistent: C - P >= S forces D <= 0
                quote(date(2023, 6, 16), 105.0, 150.0, 1.0),
                quote(date(2023, 9, 15), 100.0, 8.0, 6.0),
            ],
        )
        .unwrap();
        let surface = build_surface(&snapshot, &DayCountConfig::default()).unwrap();
        assert_eq!(surface.points.len(), 2);
        assert_eq!(surface.failures.len(), 1);
        assert!(surface.failures[0].reason.contains("parity-inconsistent"));
    }

    #[test]
    fn single_quote_yields_single_point() {
        let snapshot =
            ChainSnapshot::new(meta(), vec![quote(date(2023, 6, 16), 100.0, 7.0, 7.0)]).unwrap();
        let surface = build_surface(&snapshot, &DayCountConfig::default()).unwrap();
        assert_eq!(surface.points.len(), 1);
    }

    #[test]
    fn all_failing_quotes_is_an_error() {
        let snapshot =
            ChainSnapshot::new(meta(), vec![quote(date(2023, 6, 16), 105.0, 150.0, 1.0)]).unwrap();
        assert!(matches!(
            build_surface(&snapshot, &DayCountConfig::default()),
            Err(CerError::EmptySurface { failures: 1 })
        ));
    }

    #[test]
    fn weekend_expiry_collapsing_onto_same_maturity_is_reported() {
        // Fri 2023-06-16 and Sat 2023-06-17 hold the same business-day count.
        let snapshot = ChainSnapshot::new(
            meta(),
            vec![
                quote(date(2023, 6, 17), 100.0, 7.0, 7.0),
                quote(date(2023, 6, 16), 100.0, 7.2, 7.2),
            ],
        )
        .unwrap();
        let surface = build_surface(&snapshot, &DayCountConfig::default()).unwrap();
        assert_eq!(surface.points.len(), 1);
        assert_eq!(surface.failures.len(), 1);
        assert_eq!(surface.failures[0].expiry, date(2023, 6, 17));
        assert!(surface.failures[0].reason.contains("duplicate"));
    }

    #[test]
    fn surface_is_order_independent() {
        let quotes = vec![
            quote(date(2023, 9, 15), 120.0, 2.0, 20.0),
            quote(date(2023, 6, 16), 100.0, 7.0, 7.0),
            quote(date(2023, 6, 16), 90.0, 12.0, 2.0),
            quote(date(2023, 9, 15), 100.0, 9.0, 7.5),
        ];
        let mut reversed = quotes.clone();
        reversed.reverse();
        let a = build_surface(
            &ChainSnapshot::new(meta(), quotes).unwrap(),
            &DayCountConfig::default(),
        )
        .unwrap();
        let b = build_surface(
            &ChainSnapshot::new(meta(), reversed).unwrap(),
            &DayCountConfig::default(),
        )
        .unwrap();
        assert_eq!(a, b);
        for pair in a.points.windows(2) {
            assert!(
                (pair[0].maturity_years, pair[0].strike) < (pair[1].maturity_years, pair[1].strike)
            );
        }
    }

    #[test]
    fn summarize_examples() {
        let surf = |rates: &[f64]| CerSurface {
            ticker: "X".into(),
            points: rates
                .iter()
                .enumerate()
                .map(|(i, &rate)| CerPoint {
                    maturity_years: 1.0,
                    strike: 100.0 + i as f64,
                    moneyness: 1.0,
                    rate,
                })
                .collect(),
            failures: vec![],
        };
        let s = summarize(&surf(&[0.1, 0.2, 0.3])).unwrap();
        assert_eq!((s.maximum, s.minimum), (0.3, 0.1));
        assert!((s.mean - 0.2).abs() < 1e-15);

        let single = summarize(&surf(&[-0.5])).unwrap();
        assert_eq!(
            (single.maximum, single.minimum, single.mean),
            (-0.5, -0.5, -0.5)
        );

        assert!(matches!(summarize(&surf(&[])), Err(CerError::EmptySummary)));
    }

    #[test]
    fn sensitivity_examples() {
        let surface = CerSurface {
            ticker: "X".into(),
            points: vec![
                CerPoint {
                    maturity_years: 0.5,
                    strike: 100.0,
                    moneyness: 1.0,
                    rate: 0.10,
                },
                CerPoint {
                    maturity_years: 0.5,
                    strike: 110.0,
                    moneyness: 0.909,
                    rate: 0.12,
                },
                CerPoint {
                    maturity_years: 1.0,
                    strike: 100.0,
                    moneyness: 1.0,
                    rate: 0.07,
                },
            ],
            failures: vec![],
        };
        let ranges = moneyness_sensitivity(&surface);
        assert_eq!(ranges.len(), 2);
        assert_eq!(ranges[0].0, 0.5);
        assert!((ranges[0].1 - 0.02).abs() < 1e-15);
        assert_eq!(ranges[1], (1.0, 0.0));
    }
}
