//! `blrain validate`: fitted model against observed data for the fitting
//! moments and the reserved wet/dry properties.

use anyhow::{Context, Result};
use rayon::prelude::*;

use blrain::model::{validate_params, ConstraintSet};
use blrain::moments::analytic_moments;
use blrain::stats::{
    monthly_statistics, wet_dry_stats, AveragingMode, PropertyId, StatisticsOptions,
};
use blrain::ModelParams;

use super::{load_observed, simulate_record, statistics_options, Outcome, ReplicateParams, StreamKind};
use crate::config::RunConfig;
use crate::io::{num, CsvDoc, ParamsSource};

struct Row {
    month: u8,
    property: String,
    observed: Option<f64>,
    model: Option<f64>,
    mode: &'static str,
}

fn month_rows(config: &RunConfig, record: &blrain::stats::GaugeRecord, month: u8, params: &ModelParams) -> Result<Vec<Row>, String> {
    let mut rows = Vec::new();
    let opts = statistics_options(config);

    // model side: replicate-months laid down as consecutive years
    let sim_years = config.replicates.max(2);
    let rep = ReplicateParams { by_month: vec![(month, params)] };
    let mut sim_config = config.clone();
    sim_config.months = vec![month];
    let synthetic = simulate_record(&sim_config, &rep, StreamKind::Validate, 0, sim_years, 2001)
        .map_err(|e| format!("month {month}: {e}"))?;

    // fitted moments: analytic when available, simulated otherwise
    let analytic = params.variant().has_analytic_moments();
    let model_stats = if analytic {
        None
    } else {
        let pooled = StatisticsOptions { mode: AveragingMode::Pooled, ..opts };
        Some(
            monthly_statistics(&synthetic, month, &pooled)
                .map_err(|e| format!("month {month} model statistics: {e}"))?,
        )
    };

    let observed_stats = monthly_statistics(record, month, &opts)
        .map_err(|e| format!("month {month}: {e}"))?;
    for entry in &observed_stats.entries {
        let model = match &model_stats {
            Some(sv) => sv.get(entry.property).map(|e| e.value),
            None => {
                let h = entry.property.timescale().map_or(1.0, |t| t.hours());
                let m =
                    analytic_moments(params, &config.intensity, config.pulse_depths, h, 1)
                        .map_err(|e| format!("month {month}: {e}"))?;
                Some(match entry.property {
                    PropertyId::MeanHourly => m.mean / m.h,
                    PropertyId::Cv(_) => m.variance.sqrt() / m.mean,
                    PropertyId::Lag1(_) => m.autocov[0] / m.variance,
                    PropertyId::Skewness(_) => m.third_central / m.variance.powf(1.5),
                })
            }
        };
        rows.push(Row {
            month,
            property: entry.property.to_string(),
            observed: Some(entry.value),
            model,
            mode: if analytic { "analytic" } else { "simulated" },
        });
    }

    // wet/dry properties at every timescale, model side always simulated
    for ts in config.timescales() {
        let obs = wet_dry_stats(record, month, ts, config.threshold_mm).ok();
        let sim = wet_dry_stats(&synthetic, month, ts, config.threshold_mm).ok();
        for (name, pick) in [
            ("p_dry", 0usize),
            ("p_ww", 1),
            ("p_dd", 2),
        ] {
            let get = |w: &Option<blrain::stats::WetDryStats>| {
                w.as_ref().map(|w| match pick {
                    0 => w.p_dry,
                    1 => w.p_ww,
                    _ => w.p_dd,
                })
            };
            rows.push(Row {
                month,
                property: format!("{name}_{ts}"),
                observed: get(&obs),
                model: get(&sim),
                mode: "simulated",
            });
        }
    }
    Ok(rows)
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    let record = load_observed(config)?;
    let path = config
        .params
        .as_ref()
        .context("validate needs parameters: set `params` in the config or pass --params")?;
    let source = ParamsSource::load(path)?;

    let jobs: Vec<(u8, ModelParams)> = config
        .months
        .iter()
        .filter_map(|&m| source.get(m).map(|(_, p, _)| (m, *p)))
        .collect();
    let mut failed: Vec<String> = config
        .months
        .iter()
        .filter(|m| source.get(**m).is_none())
        .map(|m| format!("month {m}: no parameters in source"))
        .collect();

    for (m, p) in &jobs {
        if let Err(e) = validate_params(p, &ConstraintSet::with_alpha_min(1.0)) {
            failed.push(format!("month {m}: invalid parameters: {e}"));
        }
    }

    let results: Vec<Result<Vec<Row>, String>> = jobs
        .par_iter()
        .map(|(m, p)| month_rows(config, &record, *m, p))
        .collect();

    let mut csv = CsvDoc::new(config, "month,property,observed,model,model_mode")?;
    for r in results {
        match r {
            Ok(rows) => {
                for row in rows {
                    csv.row(&[
                        row.month.to_string(),
                        row.property,
                        row.observed.map(num).unwrap_or_default(),
                        row.model.map(num).unwrap_or_default(),
                        row.mode.to_string(),
                    ]);
                }
            }
            Err(e) => failed.push(e),
        }
    }
    csv.write(&config.out.join("validate.csv"))?;

    for f in &failed {
        eprintln!("{f}");
    }
    Ok(if failed.is_empty() { Outcome::Complete } else { Outcome::Partial })
}
