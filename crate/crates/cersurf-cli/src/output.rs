//! Output rendering and atomic file writes.
//!
//! Data exports (points, grids) print floats in shortest round-trip form so
//! re-ingesting a file reproduces the in-memory values exactly. Report files
//! (summary, rank) render statistics at 4 decimal places in CSV and keep
//! full precision in JSON. Every file is written to a temporary sibling and
//! renamed into place, so a concurrent reader never sees a partial file.

use std::path::Path;

use anyhow::{Context, Result};
use cersurf::{CerSurface, GriddedSurface, RankReport, RateSummary};
use serde::Serialize;

use crate::config::OutputFormat;

/// Write-then-rename within the destination directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create temporary file in {}", dir.display()))?;
    std::io::Write::write_all(&mut tmp, bytes)
        .with_context(|| format!("cannot write {}", path.display()))?;
    tmp.persist(path)
        .with_context(|| format!("cannot move output into place at {}", path.display()))?;
    Ok(())
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut text = serde_json::to_string_pretty(value).context("JSON serialization failed")?;
    text.push('\n');
    Ok(text.into_bytes())
}

/// Scattered points: `maturity_years,strike,moneyness,rate`.
pub fn points_bytes(surface: &CerSurface, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("maturity_years,strike,moneyness,rate\n");
            for p in &surface.points {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    p.maturity_years, p.strike, p.moneyness, p.rate
                ));
            }
            Ok(out.into_bytes())
        }
        OutputFormat::Json => json_bytes(&surface.points),
    }
}

/// Gridded surface. CSV is long-form `maturity_years,moneyness,rate` with
/// `NaN` marking nodes outside the data hull; JSON carries the axes and the
/// value matrix with `null` for missing.
pub fn grid_bytes(grid: &GriddedSurface, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("maturity_years,moneyness,rate\n");
            for (t, m, v) in grid.cells() {
                match v {
                    Some(v) => out.push_str(&format!("{t},{m},{v}\n")),
                    None => out.push_str(&format!("{t},{m},NaN\n")),
                }
            }
            Ok(out.into_bytes())
        }
        OutputFormat::Json => json_bytes(grid),
    }
}

/// One summarize row.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub ticker: String,
    #[serde(flatten)]
    pub summary: RateSummary,
}

pub fn summary_bytes(rows: &[SummaryRow], format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("company,maximum,minimum,mean\n");
            for row in rows {
                out.push_str(&format!(
                    "{},{:.4},{:.4},{:.4}\n",
                    row.ticker, row.summary.maximum, row.summary.minimum, row.summary.mean
                ));
            }
            Ok(out.into_bytes())
        }
        OutputFormat::Json => json_bytes(&rows),
    }
}

pub fn rank_bytes(report: &RankReport, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("priority,ticker,statistic,investable\n");
            for entry in &report.entries {
                let priority = entry
                    .priority
                    .map(|p| p.to_string())
                    .unwrap_or_else(|| "-".to_string());
                out.push_str(&format!(
                    "{},{},{:.4},{}\n",
                    priority,
                    entry.ticker,
                    report.policy.statistic(&entry.summary),
                    entry.investable
                ));
            }
            Ok(out.into_bytes())
        }
        OutputFormat::Json => json_bytes(report),
    }
}

/// Gnuplot-ready surface data: space-separated `t m rate` records grouped in
/// maturity blocks separated by blank lines, `NaN` for missing nodes.
pub fn surface_dat(ticker: &str, grid: &GriddedSurface) -> String {
    let mut out = format!(
        "# implied certainty equivalent rate surface: {ticker}\n\
         # columns: maturity_years moneyness rate (NaN marks nodes outside the data hull)\n"
    );
    for (i, &t) in grid.t_axis.iter().enumerate() {
        for (j, &m) in grid.m_axis.iter().enumerate() {
            match grid.values[i][j] {
                Some(v) => out.push_str(&format!("{t} {m} {v}\n")),
                None => out.push_str(&format!("{t} {m} NaN\n")),
            }
        }
        if i + 1 < grid.t_axis.len() {
            out.push('\n');
        }
    }
    out
}

/// Self-contained gnuplot script that renders the companion data file.
pub fn gnuplot_script(ticker: &str, dat_name: &str, png_name: &str) -> String {
    format!(
        "# surface plot for {ticker}; run from the directory containing {dat_name}\n\
         set datafile missing \"NaN\"\n\
         set xlabel \"time to maturity\"\n\
         set ylabel \"moneyness\"\n\
         set zlabel \"implied certainty equivalent rate\" rotate parallel\n\
         set title \"{ticker}\"\n\
         set hidden3d\n\
         set grid\n\
         set terminal pngcairo size 1000,700\n\
         set output \"{png_name}\"\n\
         splot \"{dat_name}\" using 1:2:3 with lines notitle\n"
    )
}
