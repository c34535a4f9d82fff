//! The implied certainty equivalent rate kernel.
//!
//! Discrete-compounding put-call parity links a call/put pair with the
//! discounted strike and dividend-adjusted spot:
//!
//! ```text
//! C + K / (1 + r)^T  =  P + S / (1 + q)^T
//! ```
//!
//! Solving for `r` gives the closed form implemented by [`implied_cer`]:
//!
//! ```text
//! r = [ K (1 + q)^T / (S + (P - C)(1 + q)^T) ]^(1/T) - 1
//! ```
//!
//! [`parity_residual`] evaluates the parity gap at an arbitrary rate and
//! [`solve_rate_bisection`] finds its root directly, giving an independent
//! route to the same number. The two routes agree to 1e-10 whenever the
//! closed form's preconditions hold and the root lies in the bracket.

use serde::{Deserialize, Serialize};

use crate::error::{CerError, Result};

/// Everything parity needs for one strike/expiry: spot `S`, dividend yield
/// `q`, maturity `T` in years, strike `K`, and the call and put mid-prices
/// `C` and `P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateInputs {
    pub spot: f64,
    pub dividend_yield: f64,
    pub maturity_years: f64,
    pub strike: f64,
    pub call_mid: f64,
    pub put_mid: f64,
}

impl RateInputs {
    /// Validates positivity/non-negativity of every field.
    pub fn validate(&self) -> Result<()> {
        let ok = self.spot > 0.0
            && self.dividend_yield >= 0.0
            && self.maturity_years > 0.0
            && self.strike > 0.0
            && self.call_mid >= 0.0
            && self.put_mid >= 0.0
            && self.spot.is_finite()
            && self.dividend_yield.is_finite()
            && self.maturity_years.is_finite()
            && self.strike.is_finite()
            && self.call_mid.is_finite()
            && self.put_mid.is_finite();
        if ok {
            Ok(())
        } else {
            Err(CerError::InvalidInputs {
                reason: format!("rate inputs violate their bounds: {self:?}"),
            })
        }
    }

    /// `(1 + q)^T`, the dividend accrual factor.
    fn accrual(&self) -> f64 {
        (1.0 + self.dividend_yield).powf(self.maturity_years)
    }

    /// Parity denominator `D = S + (P - C)(1 + q)^T`.
    pub fn parity_denominator(&self) -> f64 {
        self.spot + (self.put_mid - self.call_mid) * self.accrual()
    }
}

/// An annualized certainty equivalent rate, strictly above -1 so that
/// `1 + r` stays a usable discount base.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ImpliedRate {
    value: f64,
}

impl ImpliedRate {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > -1.0 {
            Ok(Self { value })
        } else {
            Err(CerError::RateOutOfRange { value })
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Mid-price of a bid/ask pair.
///
/// Zero bids and asks are legitimate (deep out-of-the-money quotes); only a
/// crossed market is an error.
pub fn mid_price(bid: f64, ask: f64) -> Result<f64> {
    if bid > ask {
        return Err(CerError::CrossedMarket { bid, ask });
    }
    Ok((bid + ask) / 2.0)
}

/// Closed-form implied certainty equivalent rate.
///
/// `r = [K (1+q)^T / D]^(1/T) - 1` with `D = S + (P - C)(1+q)^T`.
///
/// `D <= 0` means the quotes admit no discrete discount rate at all and is
/// reported as an error rather than clamped, as is an `r` that overflows or
/// is so close to -1 that double precision rounds it onto the bound.
pub fn implied_cer(inputs: &RateInputs) -> Result<ImpliedRate> {
    inputs.validate()?;
    let accrual = inputs.accrual();
    let denominator = inputs.spot + (inputs.put_mid - inputs.call_mid) * accrual;
    if denominator <= 0.0 {
        return Err(CerError::NonPositiveDenominator { denominator });
    }
    let growth = (inputs.strike * accrual / denominator).powf(1.0 / inputs.maturity_years);
    if !growth.is_finite() {
        return Err(CerError::NonFinite);
    }
    let rate = growth - 1.0;
    if rate <= -1.0 {
        // growth underflowed below one ulp of 1.0; the exact rate exceeds -1
        // but has no double-precision representative above it.
        return Err(CerError::RateUnderflow);
    }
    // Storing the rate rounds 1 + r by up to half an ulp of r. Propagated
    // through K/(1+r)^T, that moves the parity residual by roughly
    // T * (D / (1+q)^T) * ulp / (1 + r). Rates so deep below zero that this
    // noise approaches the 1e-9 residual contract are refused rather than
    // returned with silently broken parity.
    let rate_ulp = rate.next_up() - rate;
    let residual_noise =
        inputs.maturity_years * (denominator / accrual) * (0.5 * rate_ulp) / growth;
    if residual_noise > 2.5e-10 {
        return Err(CerError::RateUnderflow);
    }
    ImpliedRate::new(rate)
}

/// Put-call parity residual `C + K/(1+r)^T - P - S/(1+q)^T` at a given rate.
///
/// Zero at the implied rate; strictly decreasing in `r`.
pub fn parity_residual(inputs: &RateInputs, rate: ImpliedRate) -> f64 {
    let r = rate.value();
    inputs.call_mid + inputs.strike / (1.0 + r).powf(inputs.maturity_years)
        - inputs.put_mid
        - inputs.spot / (1.0 + inputs.dividend_yield).powf(inputs.maturity_years)
}

/// Independent root-finder for the rate: bisection on the parity residual.
///
/// Requires a sign change of the residual on `[lo, hi]` with `lo > -1`;
/// shrinks the bracket until its width is at most `tol` and returns the
/// midpoint. A missing sign change signals either a non-positive parity
/// denominator (no root exists) or a bracket that does not straddle it.
pub fn solve_rate_bisection(
    inputs: &RateInputs,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<ImpliedRate> {
    inputs.validate()?;
    if !(lo > -1.0 && lo < hi && tol > 0.0 && lo.is_finite() && hi.is_finite()) {
        return Err(CerError::InvalidBracket { lo, hi });
    }

    let residual_at = |r: f64| parity_residual(inputs, ImpliedRate { value: r });
    let mut lo = lo;
    let mut hi = hi;
    let g_lo = residual_at(lo);
    let g_hi = residual_at(hi);
    if g_lo == 0.0 {
        return ImpliedRate::new(lo);
    }
    if g_hi == 0.0 {
        return ImpliedRate::new(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(CerError::NoSignChange { lo, hi });
    }

    // 2000 halvings exhaust f64 resolution on any finite bracket.
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let g_mid = residual_at(mid);
        if g_mid == 0.0 {
            return ImpliedRate::new(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ImpliedRate::new(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(s: f64, q: f64, t: f64, k: f64, c: f64, p: f64) -> RateInputs {
        RateInputs {
            spot: s,
            dividend_yield: q,
            maturity_years: t,
            strike: k,
            call_mid: c,
            put_mid: p,
        }
    }

    #[test]
    fn mid_price_examples() {
        assert_eq!(mid_price(1.0, 1.2).unwrap(), 1.1);
        assert_eq!(mid_price(5.0, 5.0).unwrap(), 5.0);
        assert_eq!(mid_price(0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn mid_price_rejects_crossed_market() {
        assert!(matches!(
            mid_price(5.10, 4.90),
            Err(CerError::CrossedMarket { .. })
        ));
    }

    #[test]
    fn symmetric_parity_case_is_zero() {
        // C = P, q = 0, K = S forces (1+r)^T = K/S = 1.
        let r = implied_cer(&inputs(100.0, 0.0, 0.5, 100.0, 7.0, 7.0)).unwrap();
        assert_eq!(r.value(), 0.0);
    }

    #[test]
    fn one_year_case_reduces_to_simple_ratio() {
        // q = 0, T = 1, C = P: r = K / S - 1.
        let r = implied_cer(&inputs(100.0, 0.0, 1.0, 105.0, 4.2, 4.2)).unwrap();
        assert!((r.value() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_frozen_bisection_value() {
        // Bisection on the parity residual over (-0.999, 10) at tol 1e-12
        // pins r = 0.2834141255531879 for these inputs.
        let io = inputs(100.0, 0.02, 0.75, 110.0, 12.40, 5.10);
        let closed = implied_cer(&io).unwrap();
        assert!((closed.value() - 0.2834141255531879).abs() < 1e-10);
        let bisected = solve_rate_bisection(&io, -0.999, 10.0, 1e-12).unwrap();
        assert!((closed.value() - bisected.value()).abs() < 1e-10);
    }

    #[test]
    fn residual_vanishes_at_the_implied_rate() {
        let io = inputs(100.0, 0.02, 0.75, 110.0, 12.40, 5.10);
        let r = implied_cer(&io).unwrap();
        assert!(parity_residual(&io, r).abs() < 1e-9);

        let sym = inputs(100.0, 0.0, 0.5, 100.0, 7.0, 7.0);
        assert_eq!(parity_residual(&sym, ImpliedRate::new(0.0).unwrap()), 0.0);
    }

    #[test]
    fn residual_is_negative_above_the_root() {
        let io = inputs(100.0, 0.02, 0.75, 110.0, 12.40, 5.10);
        let r = implied_cer(&io).unwrap();
        let bumped = ImpliedRate::new(r.value() + 0.01).unwrap();
        assert!(parity_residual(&io, bumped) < 0.0);
    }

    #[test]
    fn non_positive_denominator_is_an_error() {
        // C - P large enough that (P - C)(1+q)^T <= -S.
        let io = inputs(100.0, 0.0, 1.0, 100.0, 150.0, 10.0);
        assert!(io.parity_denominator() <= 0.0);
        assert!(matches!(
            implied_cer(&io),
            Err(CerError::NonPositiveDenominator { .. })
        ));
    }

    #[test]
    fn bisection_recovers_known_zero_rate() {
        let io = inputs(100.0, 0.0, 0.5, 100.0, 7.0, 7.0);
        let r = solve_rate_bisection(&io, -0.5, 0.5, 1e-12).unwrap();
        assert!(r.value().abs() <= 1e-12);
    }

    #[test]
    fn bisection_reports_missing_root() {
        let io = inputs(100.0, 0.0, 1.0, 100.0, 150.0, 10.0);
        assert!(matches!(
            solve_rate_bisection(&io, -0.999, 10.0, 1e-12),
            Err(CerError::NoSignChange { .. })
        ));
    }

    #[test]
    fn bisection_validates_bracket() {
        let io = inputs(100.0, 0.0, 1.0, 105.0, 4.2, 4.2);
        assert!(matches!(
            solve_rate_bisection(&io, -1.5, 10.0, 1e-12),
            Err(CerError::InvalidBracket { .. })
        ));
        assert!(matches!(
            solve_rate_bisection(&io, 0.5, 0.5, 1e-12),
            Err(CerError::InvalidBracket { .. })
        ));
        assert!(matches!(
            solve_rate_bisection(&io, -0.5, 0.5, 0.0),
            Err(CerError::InvalidBracket { .. })
        ));
    }

    #[test]
    fn extreme_growth_overflows_to_error() {
        // ratio ~ 10 at T = 1/2520 forces growth = ratio^2520 -> inf.
        let io = inputs(100.0, 0.0, 1.0 / 2520.0, 1000.0, 0.0, 0.0);
        assert!(matches!(implied_cer(&io), Err(CerError::NonFinite)));
    }

    #[test]
    fn deep_negative_growth_underflows_to_error() {
        // ratio ~ 0.1 at T = 1/2520: growth = 0.1^2520 rounds r onto -1.
        let io = inputs(1000.0, 0.0, 1.0 / 2520.0, 100.0, 0.0, 0.0);
        assert!(matches!(implied_cer(&io), Err(CerError::RateUnderflow)));
    }

    #[test]
    fn implied_rate_enforces_lower_bound() {
        assert!(ImpliedRate::new(-1.0).is_err());
        assert!(ImpliedRate::new(f64::NAN).is_err());
        assert!(ImpliedRate::new(-0.9999).is_ok());
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(implied_cer(&inputs(-1.0, 0.0, 1.0, 100.0, 1.0, 1.0)).is_err());
        assert!(implied_cer(&inputs(100.0, -0.1, 1.0, 100.0, 1.0, 1.0)).is_err());
        assert!(implied_cer(&inputs(100.0, 0.0, 0.0, 100.0, 1.0, 1.0)).is_err());
        assert!(implied_cer(&inputs(100.0, 0.0, 1.0, 0.0, 1.0, 1.0)).is_err());
        assert!(implied_cer(&inputs(100.0, 0.0, 1.0, 100.0, -1.0, 1.0)).is_err());
    }
}
