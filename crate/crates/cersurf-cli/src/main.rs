//! Batch front end for certainty equivalent rate surfaces.
//!
//! Four subcommands cover the pipeline end to end:
//!
//! - `compute`: per-ticker scattered points and gridded surface files
//! - `summarize`: max/min/mean table across tickers
//! - `rank`: investability and priority ordering
//! - `export-plot`: gnuplot script plus surface data per ticker
//!
//! Jobs come from repeated `--chain`/`--meta` flag pairs or from a JSON
//! manifest; flags override manifest options. Jobs fail independently: the
//! run continues past a broken job and the exit status reports whether every
//! job succeeded.

mod config;
mod output;
mod run;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Cli, OptionOverrides};

#[derive(Parser)]
#[command(name = "cersurf")]
#[command(
    about = "Implied put-call-parity certainty equivalent rate surfaces",
    version
)]
struct CommandLine {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Chain file (CSV or JSON); repeat for multiple tickers, paired with --meta
    #[arg(long)]
    chain: Vec<std::path::PathBuf>,

    /// Metadata file (key = value lines or JSON); one per --chain
    #[arg(long)]
    meta: Vec<std::path::PathBuf>,

    /// JSON manifest listing jobs and options; flags override it
    #[arg(long)]
    manifest: Option<std::path::PathBuf>,

    /// Business days per year for the day count
    #[arg(long)]
    days_per_year: Option<u32>,

    /// Ranking statistic
    #[arg(long, value_parser = config::parse_policy)]
    policy: Option<cersurf::RankPolicy>,

    /// Grid resolution along the maturity axis
    #[arg(long)]
    t_bins: Option<usize>,

    /// Grid resolution along the moneyness axis
    #[arg(long)]
    m_bins: Option<usize>,

    /// Output directory
    #[arg(long)]
    out: Option<std::path::PathBuf>,

    /// Output file format
    #[arg(long, value_parser = config::parse_format)]
    format: Option<config::OutputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute per-ticker surface point and grid files
    Compute(CommonArgs),
    /// Print and write the per-ticker max/min/mean rate table
    Summarize(CommonArgs),
    /// Rank tickers by investability and priority
    Rank(CommonArgs),
    /// Write a gnuplot script and surface data file per ticker
    ExportPlot(CommonArgs),
}

fn main() -> ExitCode {
    let parsed = CommandLine::parse();
    let (args, action): (&CommonArgs, run::Action) = match &parsed.command {
        Command::Compute(a) => (a, run::Action::Compute),
        Command::Summarize(a) => (a, run::Action::Summarize),
        Command::Rank(a) => (a, run::Action::Rank),
        Command::ExportPlot(a) => (a, run::Action::ExportPlot),
    };

    let overrides = OptionOverrides {
        days_per_year: args.days_per_year,
        policy: args.policy,
        t_bins: args.t_bins,
        m_bins: args.m_bins,
        out: args.out.clone(),
        format: args.format,
    };
    let cli = match Cli::assemble(args.manifest.as_deref(), &args.chain, &args.meta, overrides) {
        Ok(cli) => cli,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };

    match run::execute(&cli, action) {
        Ok(all_jobs_succeeded) => {
            if all_jobs_succeeded {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
