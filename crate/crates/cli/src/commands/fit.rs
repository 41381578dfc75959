//! `blrain fit`: per-month GMM calibration with a side-by-side model
//! comparison summary.

use std::collections::BTreeMap;

use anyhow::{Context, Result};
use rayon::prelude::*;

use blrain::fit::{fit, FitOptions, ObjectiveSpec};
use blrain::model::{BliprParams, BlrprxParams};
use blrain::stats::{monthly_statistics, PropertyId, StatisticVector};
use blrain::{ModelParams, Variant};

use super::{load_observed, statistics_options, Outcome};
use crate::config::RunConfig;
use crate::io::{num, write_json, CsvDoc, FitDocument, MonthParams, ParamsFile, Units};

/// Data-informed default start: the mean pins the depth/intensity scale,
/// the remaining shape parameters start at mid-range values typical of
/// temperate records. Multistart perturbation explores around it.
pub fn default_start(variant: Variant, statistics: &StatisticVector, alpha_min: f64, fixed_mu_x: Option<f64>) -> ModelParams {
    let mean_1h = statistics
        .get(PropertyId::MeanHourly)
        .map(|e| e.value)
        .filter(|v| *v > 0.0)
        .unwrap_or(0.1);
    let (lambda, alpha, kappa, phi) = (0.02, alpha_min + 0.5, 0.7, 0.05);
    let nu = alpha / 6.0; // mean cell-duration rate around 6 per hour
    match variant {
        Variant::BlrprX => ModelParams::BlrprX(BlrprxParams {
            lambda,
            iota: mean_1h / (lambda * (1.0 + kappa / phi)),
            alpha,
            nu,
            kappa,
            phi,
        }),
        Variant::Blipr => {
            let mu_x = fixed_mu_x.unwrap_or(0.001);
            ModelParams::Blipr(BliprParams {
                lambda,
                mu_x,
                alpha,
                nu,
                kappa,
                phi,
                omega: mean_1h * phi * (phi + 1.0) / (lambda * kappa * mu_x),
            })
        }
        other => unreachable!("fit rejects {other} before reaching here"),
    }
}

fn load_statistics(config: &RunConfig) -> Result<BTreeMap<u8, StatisticVector>> {
    if let Some(path) = &config.stats {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading statistics file `{}`", path.display()))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .with_context(|| format!("parsing statistics file `{}`", path.display()))?;
        let months = value
            .get("months")
            .context("statistics file has no `months` object")?;
        let map: BTreeMap<String, StatisticVector> =
            serde_json::from_value(months.clone()).context("parsing statistics months")?;
        return Ok(map
            .into_values()
            .map(|sv| (sv.month, sv))
            .collect());
    }
    let record = load_observed(config)?;
    let opts = statistics_options(config);
    let mut out = BTreeMap::new();
    for &m in &config.months {
        if let Ok(sv) = monthly_statistics(&record, m, &opts) {
            out.insert(m, sv);
        }
    }
    Ok(out)
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    let statistics = load_statistics(config)?;
    let mut failed: Vec<String> = Vec::new();
    let mut summary: BTreeMap<u8, BTreeMap<String, f64>> = BTreeMap::new();

    for &variant in &config.models {
        anyhow::ensure!(
            variant.has_analytic_moments(),
            "model {variant} has no closed-form moments and cannot be fitted; \
             choose BLIPR or BLRPR_X"
        );
        let fixed_mu_x = variant.is_instantaneous().then_some(config.fixed_mu_x).flatten();

        let jobs: Vec<(u8, StatisticVector)> = config
            .months
            .iter()
            .filter_map(|m| statistics.get(m).map(|sv| (*m, sv.clone())))
            .collect();
        for &m in &config.months {
            if !statistics.contains_key(&m) {
                failed.push(format!("{variant} month {m}: no statistics available"));
            }
        }

        let results: Vec<(u8, Result<FitDocument, String>)> = jobs
            .par_iter()
            .map(|(month, sv)| {
                let spec = ObjectiveSpec {
                    variant,
                    statistics: sv.clone(),
                    family: config.intensity,
                    depths: config.pulse_depths,
                    alpha_min: config.alpha_min,
                    fixed_mu_x,
                };
                let start = default_start(variant, sv, config.alpha_min, fixed_mu_x);
                let opts = FitOptions { seed: config.seed, ..Default::default() };
                let doc = fit(&spec, &start, &opts).map(|result| FitDocument {
                    config: config.clone(),
                    seed: config.seed,
                    spec,
                    result,
                });
                (*month, doc.map_err(|e| e.to_string()))
            })
            .collect();

        let mut fitted_months = Vec::new();
        for (month, r) in results {
            match r {
                Ok(doc) => {
                    write_json(
                        &config
                            .out
                            .join(format!("fit_{}_m{month:02}.json", variant.name())),
                        &doc,
                    )?;
                    summary
                        .entry(month)
                        .or_default()
                        .insert(variant.name().to_string(), doc.result.s_value);
                    fitted_months.push(MonthParams { month, params: doc.result.params });
                }
                Err(e) => failed.push(format!("{variant} month {month}: {e}")),
            }
        }
        if !fitted_months.is_empty() {
            write_json(
                &config.out.join(format!("params_{}.json", variant.name())),
                &ParamsFile {
                    units: Units::default(),
                    months: fitted_months,
                    config: Some(config.clone()),
                    seed: Some(config.seed),
                },
            )?;
        }
    }

    // summary CSV and a side-by-side table on stdout
    let mut csv = CsvDoc::new(config, "month,model,s_min")?;
    for (month, per_model) in &summary {
        for (model, s) in per_model {
            csv.row(&[month.to_string(), model.clone(), num(*s)]);
        }
    }
    csv.write(&config.out.join("fit_summary.csv"))?;

    let model_names: Vec<String> =
        config.models.iter().map(|v| v.name().to_string()).collect();
    println!("minimum objective function value per month");
    println!("month,{}", model_names.join(","));
    for (month, per_model) in &summary {
        let cells: Vec<String> = model_names
            .iter()
            .map(|name| per_model.get(name).map(|s| format!("{s:.2}")).unwrap_or_default())
            .collect();
        println!("{month},{}", cells.join(","));
    }

    for f in &failed {
        eprintln!("{f}");
    }
    Ok(if failed.is_empty() { Outcome::Complete } else { Outcome::Partial })
}
