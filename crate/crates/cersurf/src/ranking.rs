//! Investability classification and priority ordering.
//!
//! A ticker is investable when its summary statistic is strictly positive:
//! a positive certainty equivalent rate means option markets price a return
//! for holding the stock, a negative one prices a loss. Among investable
//! tickers, a lower positive rate means lower risk, so priorities run in
//! ascending statistic order.

use serde::{Deserialize, Serialize};

use crate::error::{CerError, Result};
use crate::surface::RateSummary;

/// Which summary statistic drives classification and ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankPolicy {
    #[default]
    Mean,
    Min,
    Max,
}

impl RankPolicy {
    pub fn statistic(&self, summary: &RateSummary) -> f64 {
        match self {
            RankPolicy::Mean => summary.mean,
            RankPolicy::Min => summary.minimum,
            RankPolicy::Max => summary.maximum,
        }
    }
}

impl std::fmt::Display for RankPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RankPolicy::Mean => "mean",
            RankPolicy::Min => "min",
            RankPolicy::Max => "max",
        })
    }
}

/// One ticker's place in the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    pub ticker: String,
    pub summary: RateSummary,
    pub investable: bool,
    /// 1-based priority; `None` for non-investable tickers.
    pub priority: Option<usize>,
}

/// Ranked tickers: investable first in priority order, then the rest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub entries: Vec<RankEntry>,
    pub policy: RankPolicy,
}

/// True iff the policy statistic is strictly positive.
///
/// Zero is not investable: a zero rate offers no certainty-equivalent edge.
pub fn classify(summary: &RateSummary, policy: RankPolicy) -> bool {
    policy.statistic(summary) > 0.0
}

/// Orders tickers by the policy statistic.
///
/// Investable tickers get priorities `1..=n` in ascending statistic order
/// (lower positive rate, lower risk, higher priority); ties break on the
/// ticker symbol. Non-investable tickers follow unranked, in the same
/// ascending order for determinism.
pub fn rank(summaries: &[(String, RateSummary)], policy: RankPolicy) -> Result<RankReport> {
    if summaries.is_empty() {
        return Err(CerError::EmptyRanking);
    }
    let mut ordered: Vec<&(String, RateSummary)> = summaries.iter().collect();
    ordered.sort_by(|a, b| {
        policy
            .statistic(&a.1)
            .total_cmp(&policy.statistic(&b.1))
            .then_with(|| a.0.cmp(&b.0))
    });

    let mut investable_entries = Vec::new();
    let mut rest = Vec::new();
    for (ticker, summary) in ordered {
        let investable = classify(summary, policy);
        let entry = RankEntry {
            ticker: ticker.clone(),
            summary: *summary,
            investable,
            priority: None,
        };
        if investable {
            investable_entries.push(entry);
        } else {
            rest.push(entry);
        }
    }
    for (i, entry) in investable_entries.iter_mut().enumerate() {
        entry.priority = Some(i + 1);
    }
    investable_entries.extend(rest);
    Ok(RankReport {
        entries: investable_entries,
        policy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn summary(maximum: f64, minimum: f64, mean: f64) -> RateSummary {
        RateSummary {
            maximum,
            minimum,
            mean,
        }
    }

    fn flat(mean: f64) -> RateSummary {
        summary(mean, mean, mean)
    }

    #[test]
    fn classify_by_sign_of_mean() {
        assert!(classify(&summary(0.8644, 0.1181, 0.4437), RankPolicy::Mean));
        assert!(!classify(
            &summary(-0.8600, -0.9998, -0.9731),
            RankPolicy::Mean
        ));
        assert!(!classify(&flat(0.0), RankPolicy::Mean));
    }

    #[test]
    fn ev_means_order_ascending() {
        let summaries = vec![
            ("Tesla".to_string(), flat(1.0320)),
            ("General Motors".to_string(), flat(0.0708)),
            ("Ford Motor Company".to_string(), flat(0.2626)),
        ];
        let report = rank(&summaries, RankPolicy::Mean).unwrap();
        let order: Vec<&str> = report.entries.iter().map(|e| e.ticker.as_str()).collect();
        assert_eq!(order, ["General Motors", "Ford Motor Company", "Tesla"]);
        assert_eq!(report.entries[0].priority, Some(1));
        assert_eq!(report.entries[2].priority, Some(3));
    }

    #[test]
    fn negative_means_go_unranked() {
        let summaries = vec![
            ("Apple".to_string(), flat(0.4437)),
            ("Signature Bank".to_string(), flat(-0.1601)),
        ];
        let report = rank(&summaries, RankPolicy::Mean).unwrap();
        assert_eq!(report.entries[0].ticker, "Apple");
        assert_eq!(report.entries[0].priority, Some(1));
        assert!(report.entries[0].investable);
        assert_eq!(report.entries[1].ticker, "Signature Bank");
        assert_eq!(report.entries[1].priority, None);
        assert!(!report.entries[1].investable);
    }

    #[test]
    fn ties_break_lexicographically() {
        let summaries = vec![
            ("ZZZ".to_string(), flat(0.1)),
            ("AAA".to_string(), flat(0.1)),
        ];
        let report = rank(&summaries, RankPolicy::Mean).unwrap();
        assert_eq!(report.entries[0].ticker, "AAA");
        assert_eq!(report.entries[1].ticker, "ZZZ");
    }

    #[test]
    fn alternative_policies_use_their_statistic() {
        let summaries = vec![
            ("A".to_string(), summary(3.0, -0.5, 0.2)),
            ("B".to_string(), summary(1.0, 0.1, 0.5)),
        ];
        let by_min = rank(&summaries, RankPolicy::Min).unwrap();
        assert_eq!(by_min.entries[0].ticker, "B"); // only positive minimum
        assert!(!by_min.entries[1].investable);
        let by_max = rank(&summaries, RankPolicy::Max).unwrap();
        assert_eq!(by_max.entries[0].ticker, "B"); // 1.0 < 3.0
        assert_eq!(by_max.entries[1].priority, Some(2));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            rank(&[], RankPolicy::Mean),
            Err(CerError::EmptyRanking)
        ));
    }

    proptest! {
        /// rank is a permutation, investable entries precede the rest, and
        /// priorities are 1..=n with no gaps.
        #[test]
        fn rank_structure(means in proptest::collection::vec(-2.0f64..4.0, 1..20)) {
            let summaries: Vec<(String, RateSummary)> = means
                .iter()
                .enumerate()
                .map(|(i, &m)| (format!("T{i:02}"), flat(m)))
                .collect();
            let report = rank(&summaries, RankPolicy::Mean).unwrap();
            prop_assert_eq!(report.entries.len(), summaries.len());
            let mut names: Vec<&str> = report.entries.iter().map(|e| e.ticker.as_str()).collect();
            names.sort_unstable();
            let mut expected: Vec<&str> = summaries.iter().map(|(t, _)| t.as_str()).collect();
            expected.sort_unstable();
            prop_assert_eq!(names, expected);

            let investable = report.entries.iter().take_while(|e| e.investable).count();
            prop_assert!(report.entries[investable..].iter().all(|e| !e.investable));
            for (i, entry) in report.entries.iter().enumerate() {
                if i < investable {
                    prop_assert_eq!(entry.priority, Some(i + 1));
                } else {
                    prop_assert_eq!(entry.priority, None);
                }
            }
        }

        /// Scaling every statistic by a positive constant never reorders.
        #[test]
        fn positive_scaling_preserves_order(
            means in proptest::collection::vec(-2.0f64..4.0, 1..20),
            scale in 0.01f64..100.0,
        ) {
            let base: Vec<(String, RateSummary)> = means
                .iter()
                .enumerate()
                .map(|(i, &m)| (format!("T{i:02}"), flat(m)))
                .collect();
            let scaled: Vec<(String, RateSummary)> = base
                .iter()
                .map(|(t, s)| (t.clone(), flat(s.mean * scale)))
                .collect();
            let order =
                |r: RankReport| r.entries.into_iter().map(|e| e.ticker).collect::<Vec<_>>();
            prop_assert_eq!(
                order(rank(&base, RankPolicy::Mean).unwrap()),
                order(rank(&scaled, RankPolicy::Mean).unwrap())
            );
        }
    }
}
