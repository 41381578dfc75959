//! `blrain stats`: per-month fitting statistics from a gauge record.

use std::collections::BTreeMap;

use anyhow::Result;
use rayon::prelude::*;

use blrain::stats::{monthly_statistics, StatisticVector};

use super::{load_observed, statistics_options, Outcome};
use crate::config::RunConfig;
use crate::io::{num, CsvDoc};

#[derive(serde::Serialize)]
struct StatsOutput<'a> {
    config: &'a RunConfig,
    seed: u64,
    months: BTreeMap<String, StatisticVector>,
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    let record = load_observed(config)?;
    let opts = statistics_options(config);

    let results: Vec<(u8, Result<StatisticVector, String>)> = config
        .months
        .par_iter()
        .map(|&m| (m, monthly_statistics(&record, m, &opts).map_err(|e| e.to_string())))
        .collect();

    let mut months = BTreeMap::new();
    let mut failed = Vec::new();
    for (m, r) in &results {
        match r {
            Ok(sv) => {
                months.insert(format!("{m:02}"), sv.clone());
            }
            Err(e) => failed.push((m, e.clone())),
        }
    }

    let mut csv = CsvDoc::new(config, "month,property,value,variance,weight,years_used")?;
    for sv in months.values() {
        for e in &sv.entries {
            csv.row(&[
                sv.month.to_string(),
                e.property.to_string(),
                num(e.value),
                num(e.variance),
                num(e.weight),
                sv.years_used.to_string(),
            ]);
        }
    }
    csv.write(&config.out.join("stats_summary.csv"))?;
    crate::io::write_json(
        &config.out.join("stats.json"),
        &StatsOutput { config, seed: config.seed, months },
    )?;

    for (m, e) in &failed {
        eprintln!("month {m}: {e}");
    }
    Ok(if failed.is_empty() { Outcome::Complete } else { Outcome::Partial })
}
