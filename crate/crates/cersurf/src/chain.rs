//! Option-chain ingestion: parsing, validation, and snapshot assembly.
//!
//! A chain file (CSV or JSON) carries one row per strike/expiry with call and
//! put bid/ask. A small metadata file supplies the valuation context: ticker,
//! start date, spot, and forward dividend yield. The two are sourced
//! separately because quote vendors publish them on different pages.
//!
//! Malformed or invalid rows never abort a parse; they are rejected
//! one by one with a documented reason:
//!
//! - `malformed row: ...`   (bad field count, number, or date)
//! - `non-positive strike`
//! - `negative quote`
//! - `crossed call market`  (call bid above call ask)
//! - `crossed put market`
//! - `duplicate`            (repeated expiry/strike; first occurrence wins)
//! - `non-positive maturity` (expiry on or before the start date)

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{CerError, Result};

/// Exact column set of the canonical chain CSV schema, in order.
pub const CHAIN_CSV_HEADER: [&str; 6] = [
    "expiry", "strike", "call_bid", "call_ask", "put_bid", "put_ask",
];

/// Chain file encodings understood by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainFormat {
    Csv,
    Json,
}

impl ChainFormat {
    /// Infers the format from a path extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => ChainFormat::Json,
            _ => ChainFormat::Csv,
        }
    }
}

/// One strike/expiry row of an option chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionQuote {
    pub expiry: NaiveDate,
    pub strike: f64,
    pub call_bid: f64,
    pub call_ask: f64,
    pub put_bid: f64,
    pub put_ask: f64,
}

impl OptionQuote {
    /// Checks the per-quote invariants; the reason doubles as the ingest
    /// rejection record.
    pub fn validate(&self) -> std::result::Result<(), RejectReason> {
        let finite = self.strike.is_finite()
            && self.call_bid.is_finite()
            && self.call_ask.is_finite()
            && self.put_bid.is_finite()
            && self.put_ask.is_finite();
        if !finite {
            return Err(RejectReason::Malformed("non-finite number".to_string()));
        }
        if self.strike <= 0.0 {
            return Err(RejectReason::NonPositiveStrike);
        }
        if self.call_bid < 0.0 || self.call_ask < 0.0 || self.put_bid < 0.0 || self.put_ask < 0.0 {
            return Err(RejectReason::NegativeQuote);
        }
        if self.call_bid > self.call_ask {
            return Err(RejectReason::CrossedCallMarket);
        }
        if self.put_bid > self.put_ask {
            return Err(RejectReason::CrossedPutMarket);
        }
        Ok(())
    }
}

/// Why a row was rejected during ingestion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    Malformed(String),
    NonPositiveStrike,
    NegativeQuote,
    CrossedCallMarket,
    CrossedPutMarket,
    Duplicate,
    NonPositiveMaturity,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::Malformed(detail) => write!(f, "malformed row: {detail}"),
            RejectReason::NonPositiveStrike => f.write_str("non-positive strike"),
            RejectReason::NegativeQuote => f.write_str("negative quote"),
            RejectReason::CrossedCallMarket => f.write_str("crossed call market"),
            RejectReason::CrossedPutMarket => f.write_str("crossed put market"),
            RejectReason::Duplicate => f.write_str("duplicate"),
            RejectReason::NonPositiveMaturity => f.write_str("non-positive maturity"),
        }
    }
}

impl Serialize for RejectReason {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One rejected row: its 1-based data-row (or JSON element) index and reason.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowRejection {
    pub row: usize,
    pub reason: RejectReason,
}

/// Ingestion tally: `accepted + rejected` equals the rows parsed.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IngestReport {
    pub accepted: usize,
    pub rejected: usize,
    pub rejections: Vec<RowRejection>,
}

impl IngestReport {
    pub fn total(&self) -> usize {
        self.accepted + self.rejected
    }

    fn reject(&mut self, row: usize, reason: RejectReason) {
        self.rejected += 1;
        self.rejections.push(RowRejection { row, reason });
    }
}

/// Valuation context for a chain: ticker, start date, spot, dividend yield.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub ticker: String,
    pub start_date: NaiveDate,
    pub spot: f64,
    pub dividend_yield: f64,
}

impl SnapshotMeta {
    pub fn validate(&self) -> Result<()> {
        if self.ticker.trim().is_empty() {
            return Err(CerError::InvalidMeta {
                reason: "empty ticker".to_string(),
            });
        }
        if !(self.spot > 0.0 && self.spot.is_finite()) {
            return Err(CerError::InvalidMeta {
                reason: "non-positive spot".to_string(),
            });
        }
        if !(self.dividend_yield >= 0.0 && self.dividend_yield.is_finite()) {
            return Err(CerError::InvalidMeta {
                reason: "negative dividend yield".to_string(),
            });
        }
        Ok(())
    }
}

/// A ticker's accepted chain plus its valuation context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSnapshot {
    pub ticker: String,
    pub start_date: NaiveDate,
    pub spot: f64,
    pub dividend_yield: f64,
    pub quotes: Vec<OptionQuote>,
}

impl ChainSnapshot {
    /// Builds a snapshot, enforcing every invariant: valid meta, a non-empty
    /// quote list, quote-level bounds, expiries after the start date, and no
    /// duplicate (expiry, strike) pair.
    pub fn new(meta: SnapshotMeta, quotes: Vec<OptionQuote>) -> Result<Self> {
        meta.validate()?;
        if quotes.is_empty() {
            return Err(CerError::EmptyChain);
        }
        let mut seen = HashSet::new();
        for quote in &quotes {
            if let Err(reason) = quote.validate() {
                return Err(CerError::InvalidInputs {
                    reason: format!("invalid quote: {reason}"),
                });
            }
            if quote.expiry <= meta.start_date {
                return Err(CerError::NonPositiveMaturity);
            }
            if !seen.insert((quote.expiry, quote.strike.to_bits())) {
                return Err(CerError::InvalidInputs {
                    reason: "duplicate (expiry, strike) pair".to_string(),
                });
            }
        }
        Ok(Self {
            ticker: meta.ticker,
            start_date: meta.start_date,
            spot: meta.spot,
            dividend_yield: meta.dividend_yield,
            quotes,
        })
    }

    pub fn meta(&self) -> SnapshotMeta {
        SnapshotMeta {
            ticker: self.ticker.clone(),
            start_date: self.start_date,
            spot: self.spot,
            dividend_yield: self.dividend_yield,
        }
    }
}

#[derive(Deserialize)]
struct RawRow {
    expiry: String,
    strike: f64,
    call_bid: f64,
    call_ask: f64,
    put_bid: f64,
    put_ask: f64,
}

impl RawRow {
    fn into_quote(self) -> std::result::Result<OptionQuote, RejectReason> {
        let expiry = NaiveDate::parse_from_str(self.expiry.trim(), "%Y-%m-%d")
            .map_err(|_| RejectReason::Malformed(format!("invalid date `{}`", self.expiry)))?;
        let quote = OptionQuote {
            expiry,
            strike: self.strike,
            call_bid: self.call_bid,
            call_ask: self.call_ask,
            put_bid: self.put_bid,
            put_ask: self.put_ask,
        };
        quote.validate()?;
        Ok(quote)
    }
}

/// Parses an option-chain file into accepted quotes plus an ingest report.
///
/// Only an unreadable file, a header mismatch, or a structurally broken
/// container is fatal; individual bad rows are rejected and recorded.
pub fn parse_chain_file(
    path: impl AsRef<Path>,
    format: ChainFormat,
) -> Result<(Vec<OptionQuote>, IngestReport)> {
    let (rows, report) = parse_chain_rows(path, format)?;
    Ok((rows.into_iter().map(|(_, q)| q).collect(), report))
}

/// Like [`parse_chain_file`] but keeps each accepted quote's row index, so a
/// later stage can extend the report with row-accurate rejections.
pub(crate) fn parse_chain_rows(
    path: impl AsRef<Path>,
    format: ChainFormat,
) -> Result<(Vec<(usize, OptionQuote)>, IngestReport)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| CerError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_chain_reader(file, format)
}

/// Parses a chain from any reader. See [`parse_chain_file`].
pub fn parse_chain_reader<R: Read>(
    reader: R,
    format: ChainFormat,
) -> Result<(Vec<(usize, OptionQuote)>, IngestReport)> {
    match format {
        ChainFormat::Csv => parse_chain_csv(reader),
        ChainFormat::Json => parse_chain_json(reader),
    }
}

fn parse_chain_csv<R: Read>(reader: R) -> Result<(Vec<(usize, OptionQuote)>, IngestReport)> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = csv_reader
        .headers()
        .map_err(|e| CerError::HeaderMismatch {
            expected: CHAIN_CSV_HEADER.join(","),
            found: format!("unreadable header: {e}"),
        })?
        .clone();
    if headers.iter().ne(CHAIN_CSV_HEADER) {
        return Err(CerError::HeaderMismatch {
            expected: CHAIN_CSV_HEADER.join(","),
            found: headers.iter().collect::<Vec<_>>().join(","),
        });
    }

    let mut accepted = Vec::new();
    let mut report = IngestReport::default();
    let mut seen = HashSet::new();
    for (idx, record) in csv_reader.records().enumerate() {
        let row = idx + 1;
        let parsed = record
            .map_err(|e| RejectReason::Malformed(e.to_string()))
            .and_then(|rec| parse_csv_record(&rec));
        sift(parsed, row, &mut seen, &mut accepted, &mut report);
    }
    Ok((accepted, report))
}

fn parse_csv_record(record: &csv::StringRecord) -> std::result::Result<OptionQuote, RejectReason> {
    if record.len() != CHAIN_CSV_HEADER.len() {
        return Err(RejectReason::Malformed(format!(
            "expected {} fields, found {}",
            CHAIN_CSV_HEADER.len(),
            record.len()
        )));
    }
    let number = |i: usize| -> std::result::Result<f64, RejectReason> {
        let field = &record[i];
        field
            .parse::<f64>()
            .map_err(|_| RejectReason::Malformed(format!("invalid number `{field}`")))
    };
    RawRow {
        expiry: record[0].to_string(),
        strike: number(1)?,
        call_bid: number(2)?,
        call_ask: number(3)?,
        put_bid: number(4)?,
        put_ask: number(5)?,
    }
    .into_quote()
}

fn parse_chain_json<R: Read>(reader: R) -> Result<(Vec<(usize, OptionQuote)>, IngestReport)> {
    let value: serde_json::Value =
        serde_json::from_reader(reader).map_err(|_| CerError::NotAJsonArray)?;
    let elements = match value {
        serde_json::Value::Array(elements) => elements,
        _ => return Err(CerError::NotAJsonArray),
    };

    let mut accepted = Vec::new();
    let mut report = IngestReport::default();
    let mut seen = HashSet::new();
    for (idx, element) in elements.into_iter().enumerate() {
        let row = idx + 1;
        let parsed = serde_json::from_value::<RawRow>(element)
            .map_err(|e| RejectReason::Malformed(e.to_string()))
            .and_then(RawRow::into_quote);
        sift(parsed, row, &mut seen, &mut accepted, &mut report);
    }
    Ok((accepted, report))
}

fn sift(
    parsed: std::result::Result<OptionQuote, RejectReason>,
    row: usize,
    seen: &mut HashSet<(NaiveDate, u64)>,
    accepted: &mut Vec<(usize, OptionQuote)>,
    report: &mut IngestReport,
) {
    match parsed {
        Ok(quote) => {
            if seen.insert((quote.expiry, quote.strike.to_bits())) {
                report.accepted += 1;
                accepted.push((row, quote));
            } else {
                report.reject(row, RejectReason::Duplicate);
            }
        }
        Err(reason) => report.reject(row, reason),
    }
}

#[derive(Deserialize)]
struct RawMeta {
    ticker: Option<String>,
    start_date: Option<String>,
    spot: Option<f64>,
    dividend_yield: Option<f64>,
}

/// Parses a metadata file: either a JSON object or `key = value` lines with
/// the fields `ticker`, `start_date`, `spot`, `dividend_yield`.
pub fn parse_meta_file(path: impl AsRef<Path>) -> Result<SnapshotMeta> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CerError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_meta_str(&text)
}

/// See [`parse_meta_file`].
pub fn parse_meta_str(text: &str) -> Result<SnapshotMeta> {
    let raw = if text.trim_start().starts_with('{') {
        serde_json::from_str::<RawMeta>(text).map_err(|e| CerError::InvalidMeta {
            reason: format!("invalid JSON metadata: {e}"),
        })?
    } else {
        parse_meta_lines(text)?
    };

    let ticker = raw
        .ticker
        .ok_or(CerError::MissingMetaField { field: "ticker" })?;
    let start_date = raw.start_date.ok_or(CerError::MissingMetaField {
        field: "start_date",
    })?;
    let spot = raw
        .spot
        .ok_or(CerError::MissingMetaField { field: "spot" })?;
    let dividend_yield = raw.dividend_yield.ok_or(CerError::MissingMetaField {
        field: "dividend_yield",
    })?;

    let start_date = NaiveDate::parse_from_str(start_date.trim(), "%Y-%m-%d").map_err(|_| {
        CerError::InvalidMeta {
            reason: format!("invalid start_date `{start_date}`"),
        }
    })?;
    let meta = SnapshotMeta {
        ticker: ticker.trim().to_string(),
        start_date,
        spot,
        dividend_yield,
    };
    meta.validate()?;
    Ok(meta)
}

fn parse_meta_lines(text: &str) -> Result<RawMeta> {
    let mut raw = RawMeta {
        ticker: None,
        start_date: None,
        spot: None,
        dividend_yield: None,
    };
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CerError::InvalidMeta {
                reason: format!("expected `key = value`, found `{line}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        let parse_number = || -> Result<f64> {
            value.parse::<f64>().map_err(|_| CerError::InvalidMeta {
                reason: format!("invalid number for `{key}`: `{value}`"),
            })
        };
        match key {
            "ticker" => raw.ticker = Some(value.to_string()),
            "start_date" => raw.start_date = Some(value.to_string()),
            "spot" => raw.spot = Some(parse_number()?),
            "dividend_yield" => raw.dividend_yield = Some(parse_number()?),
            _ => {} // unknown keys are ignored
        }
    }
    Ok(raw)
}

/// Loads a chain file and its metadata into a validated [`ChainSnapshot`].
///
/// Quotes expiring on or before the start date are rejected (reason
/// `non-positive maturity`) and recorded in the report; an empty accepted
/// set is fatal. The chain format is inferred from the file extension.
pub fn load_snapshot(
    chain_path: impl AsRef<Path>,
    meta_path: impl AsRef<Path>,
) -> Result<(ChainSnapshot, IngestReport)> {
    let meta = parse_meta_file(meta_path)?;
    let chain_path = chain_path.as_ref();
    let format = ChainFormat::from_path(chain_path);
    let (rows, mut report) = parse_chain_rows(chain_path, format)?;

    let mut quotes = Vec::with_capacity(rows.len());
    for (row, quote) in rows {
        if quote.expiry <= meta.start_date {
            report.accepted -= 1;
            report.reject(row, RejectReason::NonPositiveMaturity);
        } else {
            quotes.push(quote);
        }
    }
    report.rejections.sort_by_key(|r| r.row);

    if quotes.is_empty() {
        return Err(CerError::EmptyChain);
    }
    let snapshot = ChainSnapshot::new(meta, quotes)?;
    Ok((snapshot, report))
}

/// Serializes quotes back to the canonical CSV schema.
///
/// Numbers are printed in Rust's shortest round-trip form, so
/// parse -> serialize -> parse is the identity on accepted quotes.
pub fn chain_to_csv(quotes: &[OptionQuote]) -> String {
    let mut out = String::with_capacity(32 * (quotes.len() + 1));
    out.push_str(&CHAIN_CSV_HEADER.join(","));
    out.push('\n');
    for q in quotes {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            q.expiry.format("%Y-%m-%d"),
            q.strike,
            q.call_bid,
            q.call_ask,
            q.put_bid,
            q.put_ask
        ));
    }
    out
}
