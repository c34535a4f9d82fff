//! Run configuration: manifest loading and flag merging.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cersurf::RankPolicy;
use serde::Deserialize;

/// Output encodings for data files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

pub fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(format!("unknown format `{other}` (expected csv or json)")),
    }
}

pub fn parse_policy(s: &str) -> Result<RankPolicy, String> {
    match s {
        "mean" => Ok(RankPolicy::Mean),
        "min" | "minimum" => Ok(RankPolicy::Min),
        "max" | "maximum" => Ok(RankPolicy::Max),
        other => Err(format!(
            "unknown policy `{other}` (expected mean, min, or max)"
        )),
    }
}

/// One unit of work: a chain file plus its metadata file.
///
/// The ticker normally comes from the metadata; a manifest entry may carry
/// an explicit label that takes precedence.
#[derive(Debug, Clone, Deserialize)]
pub struct Job {
    #[serde(default)]
    pub ticker: Option<String>,
    pub chain: PathBuf,
    pub meta: PathBuf,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct Cli {
    pub jobs: Vec<Job>,
    pub days_per_year: u32,
    pub policy: RankPolicy,
    pub t_bins: usize,
    pub m_bins: usize,
    pub out: PathBuf,
    pub format: OutputFormat,
}

/// Flag-level option overrides collected from the command line.
#[derive(Debug, Default)]
pub struct OptionOverrides {
    pub days_per_year: Option<u32>,
    pub policy: Option<RankPolicy>,
    pub t_bins: Option<usize>,
    pub m_bins: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    #[serde(default)]
    jobs: Vec<Job>,
    #[serde(default)]
    days_per_year: Option<u32>,
    #[serde(default)]
    policy: Option<RankPolicy>,
    #[serde(default)]
    t_bins: Option<usize>,
    #[serde(default)]
    m_bins: Option<usize>,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default)]
    format: Option<OutputFormat>,
}

impl Cli {
    /// Builds the configuration from an optional manifest plus flags.
    ///
    /// `--chain`/`--meta` pairs, when present, replace the manifest's job
    /// list; every scalar flag overrides its manifest counterpart. Relative
    /// paths inside a manifest resolve against the manifest's directory.
    pub fn assemble(
        manifest_path: Option<&Path>,
        chains: &[PathBuf],
        metas: &[PathBuf],
        overrides: OptionOverrides,
    ) -> Result<Self> {
        let manifest = match manifest_path {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read manifest {}", path.display()))?;
                let mut manifest: Manifest = serde_json::from_str(&text)
                    .with_context(|| format!("invalid manifest {}", path.display()))?;
                let base = path.parent().unwrap_or(Path::new("."));
                for job in &mut manifest.jobs {
                    job.chain = resolve(base, &job.chain);
                    job.meta = resolve(base, &job.meta);
                }
                if let Some(out) = manifest.out.take() {
                    manifest.out = Some(resolve(base, &out));
                }
                manifest
            }
            None => Manifest::default(),
        };

        if chains.len() != metas.len() {
            bail!(
                "--chain and --meta must be paired: got {} chain(s) and {} meta(s)",
                chains.len(),
                metas.len()
            );
        }
        let jobs: Vec<Job> = if chains.is_empty() {
            manifest.jobs
        } else {
            chains
                .iter()
                .zip(metas)
                .map(|(chain, meta)| Job {
                    ticker: None,
                    chain: chain.clone(),
                    meta: meta.clone(),
                })
                .collect()
        };
        if jobs.is_empty() {
            bail!("no jobs: pass --chain/--meta pairs or a manifest with a jobs list");
        }

        let cli = Cli {
            jobs,
            days_per_year: overrides
                .days_per_year
                .or(manifest.days_per_year)
                .unwrap_or(252),
            policy: overrides.policy.or(manifest.policy).unwrap_or_default(),
            t_bins: overrides.t_bins.or(manifest.t_bins).unwrap_or(40),
            m_bins: overrides.m_bins.or(manifest.m_bins).unwrap_or(40),
            out: overrides
                .out
                .or(manifest.out)
                .unwrap_or_else(|| PathBuf::from(".")),
            format: overrides.format.or(manifest.format).unwrap_or_default(),
        };

        if cli.days_per_year == 0 {
            bail!("--days-per-year must be positive");
        }
        if cli.t_bins < 2 || cli.m_bins < 2 {
            bail!("--t-bins and --m-bins must be at least 2");
        }
        Ok(cli)
    }

    pub fn day_count(&self) -> cersurf::DayCountConfig {
        cersurf::DayCountConfig::with_days_per_year(self.days_per_year)
    }
}

fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}
