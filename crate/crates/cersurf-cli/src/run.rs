//! Subcommand execution over the job list.
//!
//! Jobs are independent: one failure never stops the batch. Every command
//! returns whether all jobs succeeded, which drives the process exit status.

use std::path::PathBuf;

use anyhow::Result;
use cersurf::{
    build_surface, grid_surface, load_snapshot, rank, summarize, CerSurface, GriddedSurface,
    IngestReport, RateSummary,
};
use serde::Serialize;

use crate::config::{Cli, Job};
use crate::output;

#[derive(Clone, Copy)]
pub enum Action {
    Compute,
    Summarize,
    Rank,
    ExportPlot,
}

/// A successfully prepared job: snapshot ingested, surface built, grid ready.
struct Prepared {
    ticker: String,
    ingest: IngestReport,
    surface: CerSurface,
    grid: GriddedSurface,
}

/// Ticker label for error reporting. Prefers the explicit job ticker, then
/// the metadata file's ticker (when readable), then the chain file stem, so
/// a failed job is still reported under a recognizable name.
fn job_label(job: &Job) -> String {
    job.ticker
        .clone()
        .or_else(|| cersurf::parse_meta_file(&job.meta).ok().map(|m| m.ticker))
        .unwrap_or_else(|| {
            job.chain
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| job.chain.display().to_string())
        })
}

fn prepare(job: &Job, cli: &Cli) -> Result<Prepared> {
    // CerError::Io already names the offending file, so no extra context.
    let (mut snapshot, ingest) = load_snapshot(&job.chain, &job.meta)?;
    if let Some(ticker) = &job.ticker {
        snapshot.ticker = ticker.clone();
    }
    let surface = build_surface(&snapshot, &cli.day_count())?;
    let grid = grid_surface(&surface, cli.t_bins, cli.m_bins)?;
    Ok(Prepared {
        ticker: snapshot.ticker.clone(),
        ingest,
        surface,
        grid,
    })
}

#[derive(Serialize)]
struct JobReport {
    ticker: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    accepted_rows: usize,
    rejected_rows: usize,
    points: usize,
    quote_failures: usize,
}

pub fn execute(cli: &Cli, action: Action) -> Result<bool> {
    let prepared: Vec<(String, Result<Prepared>)> = cli
        .jobs
        .iter()
        .map(|job| (job_label(job), prepare(job, cli)))
        .collect();

    match action {
        Action::Compute => compute(cli, prepared),
        Action::Summarize => summarize_cmd(cli, prepared),
        Action::Rank => rank_cmd(cli, prepared),
        Action::ExportPlot => export_plot(cli, prepared),
    }
}

fn out_path(cli: &Cli, name: &str) -> PathBuf {
    cli.out.join(name)
}

fn compute(cli: &Cli, prepared: Vec<(String, Result<Prepared>)>) -> Result<bool> {
    let mut reports = Vec::new();
    let mut all_ok = true;
    for (label, outcome) in prepared {
        match outcome {
            Ok(p) => {
                let ext = cli.format.extension();
                let points_path = out_path(cli, &format!("{}_points.{ext}", p.ticker));
                let grid_path = out_path(cli, &format!("{}_grid.{ext}", p.ticker));
                output::write_atomic(&points_path, &output::points_bytes(&p.surface, cli.format)?)?;
                output::write_atomic(&grid_path, &output::grid_bytes(&p.grid, cli.format)?)?;
                println!(
                    "{}: {} points ({} rows rejected, {} quote failures) -> {}, {}",
                    p.ticker,
                    p.surface.points.len(),
                    p.ingest.rejected,
                    p.surface.failures.len(),
                    points_path.display(),
                    grid_path.display()
                );
                reports.push(JobReport {
                    ticker: p.ticker,
                    status: "ok",
                    error: None,
                    accepted_rows: p.ingest.accepted,
                    rejected_rows: p.ingest.rejected,
                    points: p.surface.points.len(),
                    quote_failures: p.surface.failures.len(),
                });
            }
            Err(e) => {
                all_ok = false;
                eprintln!("{label}: failed: {e:#}");
                reports.push(JobReport {
                    ticker: label,
                    status: "failed",
                    error: Some(format!("{e:#}")),
                    accepted_rows: 0,
                    rejected_rows: 0,
                    points: 0,
                    quote_failures: 0,
                });
            }
        }
    }
    let report_path = out_path(cli, "compute_report.json");
    let mut body = serde_json::to_string_pretty(&reports)?;
    body.push('\n');
    output::write_atomic(&report_path, body.as_bytes())?;
    Ok(all_ok)
}

fn summarize_cmd(cli: &Cli, prepared: Vec<(String, Result<Prepared>)>) -> Result<bool> {
    let mut rows = Vec::new();
    let mut all_ok = true;
    println!(
        "{:<20} {:>14} {:>14} {:>14}",
        "Company", "Maximum value", "Minimum value", "Mean value"
    );
    for (label, outcome) in prepared {
        match outcome.and_then(|p| Ok((p.ticker.clone(), summarize(&p.surface)?))) {
            Ok((ticker, summary)) => {
                println!(
                    "{:<20} {:>14.4} {:>14.4} {:>14.4}",
                    ticker, summary.maximum, summary.minimum, summary.mean
                );
                rows.push(output::SummaryRow { ticker, summary });
            }
            Err(e) => {
                all_ok = false;
                println!("{label:<20} failed: {e:#}");
            }
        }
    }
    let path = out_path(cli, &format!("summary.{}", cli.format.extension()));
    output::write_atomic(&path, &output::summary_bytes(&rows, cli.format)?)?;
    println!("wrote {}", path.display());
    Ok(all_ok)
}

fn rank_cmd(cli: &Cli, prepared: Vec<(String, Result<Prepared>)>) -> Result<bool> {
    let mut summaries: Vec<(String, RateSummary)> = Vec::new();
    let mut all_ok = true;
    for (label, outcome) in prepared {
        match outcome.and_then(|p| Ok((p.ticker.clone(), summarize(&p.surface)?))) {
            Ok(pair) => summaries.push(pair),
            Err(e) => {
                all_ok = false;
                eprintln!("{label}: failed: {e:#}");
            }
        }
    }
    if summaries.is_empty() {
        anyhow::bail!("no ticker could be summarized; nothing to rank");
    }
    let report = rank(&summaries, cli.policy)?;
    println!(
        "{:<9} {:<20} {:>10} {:>12}",
        "priority",
        "ticker",
        cli.policy.to_string(),
        "investable"
    );
    for entry in &report.entries {
        let priority = entry
            .priority
            .map(|p| p.to_string())
            .unwrap_or_else(|| "-".to_string());
        println!(
            "{:<9} {:<20} {:>10.4} {:>12}",
            priority,
            entry.ticker,
            cli.policy.statistic(&entry.summary),
            entry.investable
        );
    }
    let path = out_path(cli, &format!("rank.{}", cli.format.extension()));
    output::write_atomic(&path, &output::rank_bytes(&report, cli.format)?)?;
    println!("wrote {}", path.display());
    Ok(all_ok)
}

fn export_plot(cli: &Cli, prepared: Vec<(String, Result<Prepared>)>) -> Result<bool> {
    let mut all_ok = true;
    for (label, outcome) in prepared {
        match outcome {
            Ok(p) => {
                let dat_name = format!("{}_surface.dat", p.ticker);
                let gp_name = format!("{}_surface.gp", p.ticker);
                let png_name = format!("{}_surface.png", p.ticker);
                let dat = output::surface_dat(&p.ticker, &p.grid);
                let script = output::gnuplot_script(&p.ticker, &dat_name, &png_name);
                output::write_atomic(&out_path(cli, &dat_name), dat.as_bytes())?;
                output::write_atomic(&out_path(cli, &gp_name), script.as_bytes())?;
                println!(
                    "{}: wrote {} and {}",
                    p.ticker,
                    out_path(cli, &gp_name).display(),
                    out_path(cli, &dat_name).display()
                );
            }
            Err(e) => {
                all_ok = false;
                eprintln!("{label}: no grid to plot: {e:#}");
            }
        }
    }
    Ok(all_ok)
}
