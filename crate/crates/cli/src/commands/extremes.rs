//! `blrain extremes`: observed annual maxima on Gumbel coordinates plus a
//! simulated quantile envelope across replicates.

use anyhow::{Context, Result};
use rayon::prelude::*;

use blrain::stats::{annual_maxima, gumbel_points, Timescale};

use super::{simulate_record, Outcome, ReplicateParams, StreamKind};
use crate::commands::simulate::replicate_params;
use crate::config::RunConfig;
use crate::io::{num, opt_num, CsvDoc, ParamsSource};

/// Type-7 (linear interpolation) quantile of a sorted sample.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    let path = config
        .params
        .as_ref()
        .context("extremes needs parameters: set `params` in the config or pass --params")?;
    let source = ParamsSource::load(path)?;
    let draws = replicate_params(config, &source)?;

    // observed maxima when data is available; the simulated record length
    // matches the observed years so ranks align
    let observed = match &config.data {
        Some(_) => Some(super::load_observed(config)?),
        None => None,
    };

    let mut failed: Vec<String> = Vec::new();
    for ts in config.timescales() {
        match timescale_table(config, &draws, observed.as_ref(), ts) {
            Ok(csv) => csv.write(&config.out.join(format!("extremes_{ts}.csv")))?,
            Err(e) => failed.push(format!("{ts}: {e}")),
        }
    }
    for f in &failed {
        eprintln!("{f}");
    }
    Ok(if failed.is_empty() { Outcome::Complete } else { Outcome::Partial })
}

fn timescale_table(
    config: &RunConfig,
    draws: &[Vec<(u8, blrain::ModelParams)>],
    observed: Option<&blrain::stats::GaugeRecord>,
    ts: Timescale,
) -> Result<CsvDoc> {
    let observed_maxima: Option<Vec<f64>> = observed
        .map(|rec| -> Result<Vec<f64>> {
            let maxima = annual_maxima(rec, ts, &config.months, 0.05)?;
            Ok(maxima.iter().map(|m| m.max_depth_mm).collect())
        })
        .transpose()?;
    let years = observed_maxima.as_ref().map_or(config.sim_years, Vec::len);
    anyhow::ensure!(years >= 2, "at least two years are needed for a Gumbel plot");

    // simulated replicate maxima, ranked per replicate
    let ranked: Vec<Result<Vec<f64>, String>> = draws
        .par_iter()
        .enumerate()
        .map(|(r, months)| {
            let params = ReplicateParams {
                by_month: months.iter().map(|(m, p)| (*m, p)).collect(),
            };
            let record = simulate_record(config, &params, StreamKind::Extremes, r, years, 2001)
                .map_err(|e| e.to_string())?;
            let maxima = annual_maxima(&record, ts, &config.months, 0.05)
                .map_err(|e| e.to_string())?;
            let mut values: Vec<f64> = maxima.iter().map(|m| m.max_depth_mm).collect();
            values.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Ok(values)
        })
        .collect();
    let mut replicate_maxima = Vec::with_capacity(draws.len());
    for r in ranked {
        replicate_maxima.push(r.map_err(anyhow::Error::msg)?);
    }

    let observed_sorted = observed_maxima.map(|mut v| {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    });
    // plotting positions for `years` ranked maxima
    let positions = gumbel_points(&vec![0.0; years]);

    let mut csv = CsvDoc::new(
        config,
        "rank,non_exceedance,return_period_years,reduced_variate,observed_mm,q025_mm,q500_mm,q975_mm",
    )?;
    for (i, pos) in positions.iter().enumerate() {
        let mut at_rank: Vec<f64> =
            replicate_maxima.iter().map(|v| v[i]).collect();
        at_rank.sort_by(|a, b| a.partial_cmp(b).unwrap());
        csv.row(&[
            pos.rank.to_string(),
            num(pos.non_exceedance),
            num(pos.return_period),
            num(pos.reduced_variate),
            opt_num(observed_sorted.as_ref().map(|v| v[i])),
            num(quantile(&at_rank, 0.025)),
            num(quantile(&at_rank, 0.5)),
            num(quantile(&at_rank, 0.975)),
        ]);
    }
    Ok(csv)
}
