//! Subcommand implementations.

pub mod extremes;
pub mod fit;
pub mod profile;
pub mod simulate;
pub mod stats;
pub mod validate;

use anyhow::{Context, Result};
use chrono::NaiveDate;

use blrain::model::{validate_params, ConstraintSet};
use blrain::simulate::{aggregate, simulate_with, substream, SimOptions};
use blrain::stats::{GaugeRecord, StatisticsOptions};
use blrain::{ModelParams, ValidatedParams};

use crate::config::RunConfig;

/// Outcome of a command for exit-code purposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Every unit of work succeeded.
    Complete,
    /// Some months failed; their errors were reported.
    Partial,
}

/// Distinct substream namespaces so commands never share random streams.
#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub enum StreamKind {
    Simulate = 1,
    UncertaintySampler = 2,
    Validate = 3,
    Extremes = 4,
}

pub fn stream_id(kind: StreamKind, replicate: usize, unit: usize) -> u64 {
    ((kind as u64) << 40) | ((replicate as u64) << 20) | (unit as u64 & 0xFFFFF)
}

pub fn load_observed(config: &RunConfig) -> Result<GaugeRecord> {
    let path = config
        .data
        .as_ref()
        .context("this command needs gauge data: set `data` in the config or pass --data")?;
    blrain::stats::load_series(path)
        .with_context(|| format!("loading gauge data `{}`", path.display()))
}

pub fn statistics_options(config: &RunConfig) -> StatisticsOptions {
    let ts = config.timescales();
    StatisticsOptions {
        timescales: [ts[0], ts[1.min(ts.len() - 1)], ts[2.min(ts.len() - 1)], ts[3.min(ts.len() - 1)]],
        max_missing_fraction: 0.05,
        mode: config.statistic_mode,
        min_years: 2,
    }
}

pub fn month_hours(year: i32, month: u8) -> f64 {
    f64::from(days_in_month(year, month)) * 24.0
}

pub fn days_in_month(year: i32, month: u8) -> u32 {
    let first = NaiveDate::from_ymd_opt(year, u32::from(month), 1).expect("valid month");
    let next = if month == 12 {
        NaiveDate::from_ymd_opt(year + 1, 1, 1).unwrap()
    } else {
        NaiveDate::from_ymd_opt(year, u32::from(month) + 1, 1).unwrap()
    };
    (next - first).num_days() as u32
}

/// Parameters per month for one simulation replicate.
pub struct ReplicateParams<'a> {
    pub by_month: Vec<(u8, &'a ModelParams)>,
}

/// Simulate one replicate of `years` calendar years and return it as a
/// 5-minute gauge record starting at `start_year`. Only the configured
/// months are simulated; the rest stay missing. Each (replicate, year,
/// month) consumes its own substream, so replicates are independent and
/// reproducible in any execution order.
pub fn simulate_record(
    config: &RunConfig,
    params: &ReplicateParams<'_>,
    kind: StreamKind,
    replicate: usize,
    years: usize,
    start_year: i32,
) -> Result<GaugeRecord> {
    let start = NaiveDate::from_ymd_opt(start_year, 1, 1)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap();
    let end = NaiveDate::from_ymd_opt(start_year + years as i32, 1, 1)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap();
    let total_slots = ((end - start).num_minutes() / 5) as usize;
    let mut depths: Vec<Option<f64>> = vec![None; total_slots];

    for (month, params) in &params.by_month {
        let validated: ValidatedParams =
            validate_params(*params, &ConstraintSet::with_alpha_min(1.0))
                .map_err(|e| anyhow::anyhow!("month {month}: {e}"))?;
        for y in 0..years {
            let year = start_year + y as i32;
            let horizon = month_hours(year, *month);
            let mut rng = substream(
                config.seed,
                stream_id(kind, replicate, y * 16 + *month as usize),
            );
            let series = simulate_with(
                &validated,
                &config.intensity,
                config.pulse_depths,
                horizon,
                &SimOptions::default(),
                &mut rng,
            )?;
            let bins = aggregate(&series, 1.0 / 12.0)?;
            let month_start = NaiveDate::from_ymd_opt(year, u32::from(*month), 1)
                .unwrap()
                .and_hms_opt(0, 0, 0)
                .unwrap();
            let offset = ((month_start - start).num_minutes() / 5) as usize;
            for (i, d) in bins.depths.iter().enumerate() {
                depths[offset + i] = Some(*d);
            }
        }
    }
    Ok(GaugeRecord::from_parts(start, depths)?)
}

