//! `blrain simulate`: generate synthetic gauge records, optionally sampling
//! parameters from the fitted uncertainty distribution per replicate.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use blrain::fit::ParamSampler;
use blrain::stats::write_series;
use blrain::ModelParams;

use super::{simulate_record, stream_id, Outcome, ReplicateParams, StreamKind};
use crate::config::RunConfig;
use crate::io::{atomic_write, ParamsSource};

/// Per-replicate parameter draws: fixed parameters unless uncertainty
/// sampling is requested, in which case every replicate gets its own draw
/// from each month's asymptotic distribution. Draws happen up front, in a
/// fixed order, so parallel replicate simulation stays deterministic.
pub fn replicate_params(
    config: &RunConfig,
    source: &ParamsSource,
) -> Result<Vec<Vec<(u8, ModelParams)>>> {
    let months: Vec<u8> =
        config.months.iter().copied().filter(|m| source.get(*m).is_some()).collect();
    if months.is_empty() {
        bail!("the params source covers none of the configured months");
    }
    if !config.uncertainty {
        let fixed: Vec<(u8, ModelParams)> =
            months.iter().map(|&m| (m, source.get(m).unwrap().1)).collect();
        return Ok(vec![fixed; config.replicates]);
    }

    let mut per_month: Vec<(u8, Vec<ModelParams>)> = Vec::new();
    for &m in &months {
        let (_, _, doc) = source.get(m).unwrap();
        let doc = doc.as_ref().with_context(|| {
            format!("month {m}: uncertainty sampling needs fit documents, not a plain params file")
        })?;
        let cov = doc.result.covariance.as_ref().with_context(|| {
            format!("month {m}: fit document carries no parameter covariance")
        })?;
        let mut sampler = ParamSampler::new(&doc.spec, &doc.result, cov, config.seed.wrapping_add(
            stream_id(StreamKind::UncertaintySampler, 0, m as usize),
        ))?;
        let draws: Vec<ModelParams> = (0..config.replicates).map(|_| sampler.draw()).collect();
        per_month.push((m, draws));
    }
    Ok((0..config.replicates)
        .map(|r| per_month.iter().map(|(m, draws)| (*m, draws[r])).collect())
        .collect())
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    let path = config
        .params
        .as_ref()
        .context("simulate needs parameters: set `params` in the config or pass --params")?;
    let source = ParamsSource::load(path)?;
    let draws = replicate_params(config, &source)?;

    let results: Vec<Result<(), String>> = draws
        .par_iter()
        .enumerate()
        .map(|(r, months)| {
            let params = ReplicateParams {
                by_month: months.iter().map(|(m, p)| (*m, p)).collect(),
            };
            let record = simulate_record(config, &params, StreamKind::Simulate, r, config.sim_years, 2001)
                .map_err(|e| format!("replicate {r}: {e}"))?;
            let mut buf = Vec::new();
            let header = format!(
                "# config: {}\n# seed: {}\n# replicate: {r}\n",
                serde_json::to_string(config).map_err(|e| e.to_string())?,
                config.seed
            );
            buf.extend_from_slice(header.as_bytes());
            write_series(&record, &mut buf).map_err(|e| e.to_string())?;
            atomic_write(&config.out.join(format!("sim_r{r:03}.csv")), &buf)
                .map_err(|e| format!("replicate {r}: {e}"))?;
            Ok(())
        })
        .collect();

    let mut failed = false;
    for r in results {
        if let Err(e) = r {
            eprintln!("{e}");
            failed = true;
        }
    }
    Ok(if failed { Outcome::Partial } else { Outcome::Complete })
}
