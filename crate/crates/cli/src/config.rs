//! Run configuration: one JSON file plus command-line overrides.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use blrain::stats::AveragingMode;
use blrain::{IntensityFamily, PulseDepthDependence, Variant};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// 5-minute gauge CSV (`timestamp,depth_mm`).
    pub data: Option<PathBuf>,
    /// Pre-computed statistics JSON (output of `blrain stats`), used by
    /// `fit` instead of re-deriving from `data`.
    pub stats: Option<PathBuf>,
    /// Parameter source: a params JSON, a fit-result JSON, or a directory
    /// of fit results.
    pub params: Option<PathBuf>,
    pub models: Vec<Variant>,
    pub intensity: IntensityFamily,
    pub pulse_depths: PulseDepthDependence,
    pub alpha_min: f64,
    /// Fixed mean pulse depth for instantaneous-variant fits.
    pub fixed_mu_x: Option<f64>,
    pub timescales_min: Vec<u32>,
    pub months: Vec<u8>,
    pub seed: u64,
    /// Simulation replicates for validation, extremes and multi-replicate
    /// generation.
    pub replicates: usize,
    /// Years per simulated replicate.
    pub sim_years: usize,
    /// Wet/dry threshold: a bin is dry when its depth is at or below this.
    pub threshold_mm: f64,
    pub statistic_mode: AveragingMode,
    /// Sample parameters from the fitted asymptotic distribution for each
    /// replicate.
    pub uncertainty: bool,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data: None,
            stats: None,
            params: None,
            models: vec![Variant::BlrprX],
            intensity: IntensityFamily::Exponential,
            pulse_depths: PulseDepthDependence::Common,
            alpha_min: 2.0,
            fixed_mu_x: Some(0.001),
            timescales_min: vec![5, 60, 360, 1440],
            months: (1..=12).collect(),
            seed: 1,
            replicates: 100,
            sim_years: 69,
            threshold_mm: 0.0,
            statistic_mode: AveragingMode::PerMonthAverage,
            uncertainty: false,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file `{}`", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("parsing config file `{}`", path.display()))
    }

    pub fn timescales(&self) -> Vec<blrain::stats::Timescale> {
        self.timescales_min.iter().map(|&m| blrain::stats::Timescale(m)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        anyhow::ensure!(!self.months.is_empty(), "no months configured");
        anyhow::ensure!(
            self.months.iter().all(|m| (1..=12).contains(m)),
            "months must be within 1..=12"
        );
        anyhow::ensure!(!self.timescales_min.is_empty(), "no timescales configured");
        anyhow::ensure!(
            self.timescales_min.iter().all(|m| m % 5 == 0 && *m > 0),
            "timescales must be positive multiples of 5 minutes"
        );
        anyhow::ensure!(self.replicates > 0, "replicates must be positive");
        anyhow::ensure!(self.sim_years > 0, "sim_years must be positive");
        Ok(())
    }
}

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Configuration file (JSON).
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Gauge data CSV.
    #[arg(long, value_name = "FILE")]
    pub data: Option<PathBuf>,
    /// Statistics JSON produced by `blrain stats`.
    #[arg(long, value_name = "FILE")]
    pub stats: Option<PathBuf>,
    /// Parameter file, fit-result file, or directory of fit results.
    #[arg(long, value_name = "PATH")]
    pub params: Option<PathBuf>,
    /// Model variant(s); repeatable.
    #[arg(long = "model", value_name = "VARIANT")]
    pub models: Vec<String>,
    /// Months to process, e.g. `1,2,7`.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub months: Vec<u8>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "alpha-min")]
    pub alpha_min: Option<f64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Years per simulated replicate.
    #[arg(long = "years")]
    pub sim_years: Option<usize>,
    /// Wet/dry threshold in mm.
    #[arg(long = "threshold")]
    pub threshold_mm: Option<f64>,
    /// Sample parameters from the fitted uncertainty distribution.
    #[arg(long)]
    pub uncertainty: bool,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

/// Load the config file (if any) and apply flag overrides.
pub fn resolve(overrides: &Overrides) -> Result<RunConfig> {
    let mut config = match &overrides.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = &overrides.data {
        config.data = Some(v.clone());
    }
    if let Some(v) = &overrides.stats {
        config.stats = Some(v.clone());
    }
    if let Some(v) = &overrides.params {
        config.params = Some(v.clone());
    }
    if !overrides.models.is_empty() {
        config.models = overrides
            .models
            .iter()
            .map(|m| m.parse::<Variant>().map_err(anyhow::Error::from))
            .collect::<Result<Vec<_>>>()?;
    }
    if !overrides.months.is_empty() {
        config.months = overrides.months.clone();
    }
    if let Some(v) = overrides.seed {
        config.seed = v;
    }
    if let Some(v) = overrides.alpha_min {
        config.alpha_min = v;
    }
    if let Some(v) = overrides.replicates {
        config.replicates = v;
    }
    if let Some(v) = overrides.sim_years {
        config.sim_years = v;
    }
    if let Some(v) = overrides.threshold_mm {
        config.threshold_mm = v;
    }
    if overrides.uncertainty {
        config.uncertainty = true;
    }
    if let Some(v) = &overrides.out {
        config.out = v.clone();
    }
    config.validate()?;
    Ok(config)
}
