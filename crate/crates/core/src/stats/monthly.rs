//! Per-month fitting statistics and their across-year variances.

use serde::{Deserialize, Serialize};

use super::{
    aggregate_slots, missing_fraction, GaugeRecord, PropertyId, StatsError, Timescale,
};

/// How the per-month statistics are formed from multiple observation years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AveragingMode {
    /// Compute each statistic per observation-month, then average across
    /// years (default). The spread across years also yields the weights.
    #[default]
    PerMonthAverage,
    /// Compute each statistic once from all years pooled. Weights still come
    /// from the per-year spread, since a single pooled sample has none.
    Pooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatEntry {
    pub property: PropertyId,
    /// Observed (or target) value `T_i`.
    pub value: f64,
    /// Sampling variance of `T_i` across observation years.
    pub variance: f64,
    /// GMM weight, the reciprocal of `variance`.
    pub weight: f64,
}

/// Observed fitting properties for one calendar month with their weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticVector {
    pub month: u8,
    pub years_used: usize,
    pub mode: AveragingMode,
    pub entries: Vec<StatEntry>,
}

impl StatisticVector {
    pub fn get(&self, property: PropertyId) -> Option<&StatEntry> {
        self.entries.iter().find(|e| e.property == property)
    }

    /// Distinct timescales appearing in the entries, ascending.
    pub fn timescales(&self) -> Vec<Timescale> {
        let mut ts: Vec<Timescale> =
            self.entries.iter().filter_map(|e| e.property.timescale()).collect();
        ts.sort();
        ts.dedup();
        ts
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatisticsOptions {
    pub timescales: [Timescale; 4],
    /// Observation-months with a larger missing fraction are excluded.
    pub max_missing_fraction: f64,
    pub mode: AveragingMode,
    /// Minimum usable observation years.
    pub min_years: usize,
}

impl Default for StatisticsOptions {
    fn default() -> Self {
        Self {
            timescales: [Timescale::FIVE_MIN, Timescale::H1, Timescale::H6, Timescale::H24],
            max_missing_fraction: 0.05,
            mode: AveragingMode::default(),
            min_years: 2,
        }
    }
}

/// Central moments with population (1/n) denominators and the lag-1
/// autocovariance over adjacent present pairs, all computed about `center`.
struct BinMoments {
    mean: f64,
    var: f64,
    third: f64,
    lag1_cov: Option<f64>,
}

fn bin_moments(bins: &[Option<f64>], center: Option<f64>) -> Option<BinMoments> {
    let present: Vec<f64> = bins.iter().flatten().copied().collect();
    if present.is_empty() {
        return None;
    }
    let n = present.len();
    let mean = present.iter().sum::<f64>() / n as f64;
    let c = center.unwrap_or(mean);
    let var = present.iter().map(|y| (y - c).powi(2)).sum::<f64>() / n as f64;
    let third = present.iter().map(|y| (y - c).powi(3)).sum::<f64>() / n as f64;
    let mut pair_sum = 0.0;
    let mut pairs = 0usize;
    for w in bins.windows(2) {
        if let (Some(a), Some(b)) = (w[0], w[1]) {
            pair_sum += (a - c) * (b - c);
            pairs += 1;
        }
    }
    let lag1_cov = (pairs > 0).then(|| pair_sum / pairs as f64);
    Some(BinMoments { mean, var, third, lag1_cov })
}

/// Values of the thirteen properties for one observation-month; `None` where
/// undefined (zero variance or no adjacent pairs).
fn year_property_values(
    five: &[Option<f64>],
    opts: &StatisticsOptions,
) -> Result<Vec<(PropertyId, Option<f64>)>, StatsError> {
    let mut out = Vec::with_capacity(13);
    let hourly = aggregate_slots(five, Timescale::H1.slots()?);
    let mean_1h = bin_moments(&hourly, None).map(|m| m.mean);
    out.push((PropertyId::MeanHourly, mean_1h));
    let mut per_scale = Vec::new();
    for &ts in &opts.timescales {
        let bins = aggregate_slots(five, ts.slots()?);
        per_scale.push((ts, bin_moments(&bins, None)));
    }
    for (ts, m) in &per_scale {
        let cv = m.as_ref().and_then(|m| (m.var > 0.0).then(|| m.var.sqrt() / m.mean));
        out.push((PropertyId::Cv(*ts), cv));
    }
    for (ts, m) in &per_scale {
        let lag1 = m
            .as_ref()
            .and_then(|m| m.lag1_cov.and_then(|c| (m.var > 0.0).then(|| c / m.var)));
        out.push((PropertyId::Lag1(*ts), lag1));
    }
    for (ts, m) in &per_scale {
        let skew =
            m.as_ref().and_then(|m| (m.var > 0.0).then(|| m.third / m.var.powf(1.5)));
        out.push((PropertyId::Skewness(*ts), skew));
    }
    Ok(out)
}

/// Compute the statistic vector for one calendar month.
///
/// Each statistic is computed per observation-month and averaged across
/// years; the variance of the per-year values divided by the year count
/// gives `Var(T_i)` and the weights are its reciprocal. Observation-months
/// missing more than `max_missing_fraction` of their 5-minute slots are
/// excluded entirely; within retained months, missing bins are excluded from
/// moment sums and transition pairs spanning a gap are dropped.
pub fn monthly_statistics(
    record: &GaugeRecord,
    month: u8,
    opts: &StatisticsOptions,
) -> Result<StatisticVector, StatsError> {
    assert!((1..=12).contains(&month), "month must be 1..=12");
    let properties = PropertyId::standard(&opts.timescales);

    // collect usable observation-months
    let mut years_data: Vec<Vec<Option<f64>>> = Vec::new();
    for year in record.years() {
        if let Some(five) = record.month_slots(year, month) {
            if missing_fraction(&five) <= opts.max_missing_fraction {
                years_data.push(five);
            }
        }
    }
    if years_data.len() < opts.min_years {
        return Err(StatsError::InsufficientYears {
            month,
            years: years_data.len(),
            required: opts.min_years,
        });
    }

    // property -> per-year values
    let mut per_year: Vec<Vec<Option<f64>>> = vec![Vec::new(); properties.len()];
    for five in &years_data {
        for (i, (_, value)) in year_property_values(five, opts)?.iter().enumerate() {
            per_year[i].push(*value);
        }
    }

    let mut entries = Vec::with_capacity(properties.len());
    match opts.mode {
        AveragingMode::PerMonthAverage => {
            for (i, property) in properties.iter().enumerate() {
                let values: Vec<f64> = per_year[i].iter().flatten().copied().collect();
                if values.len() < opts.min_years {
                    return Err(StatsError::AllDryMonth { month });
                }
                let n = values.len() as f64;
                let mean = values.iter().sum::<f64>() / n;
                let spread =
                    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
                let variance = spread / n;
                if variance <= 0.0 {
                    return Err(StatsError::AllDryMonth { month });
                }
                entries.push(StatEntry {
                    property: *property,
                    value: mean,
                    variance,
                    weight: 1.0 / variance,
                });
            }
        }
        AveragingMode::Pooled => {
            let (values, variances) = pooled_with_jackknife(&years_data, opts)?;
            for ((property, value), variance) in properties.iter().zip(values).zip(variances) {
                let (value, variance) = (
                    value.ok_or(StatsError::AllDryMonth { month })?,
                    variance.ok_or(StatsError::AllDryMonth { month })?,
                );
                if variance <= 0.0 {
                    return Err(StatsError::AllDryMonth { month });
                }
                entries.push(StatEntry {
                    property: *property,
                    value,
                    variance,
                    weight: 1.0 / variance,
                });
            }
        }
    }

    Ok(StatisticVector {
        month,
        years_used: years_data.len(),
        mode: opts.mode,
        entries,
    })
}

/// Raw power and pair sums of one observation-month at one timescale;
/// sufficient for the pooled statistics, and additive across years.
#[derive(Debug, Clone, Copy, Default)]
struct ScaleSums {
    n: f64,
    s1: f64,
    s2: f64,
    s3: f64,
    pairs: f64,
    pair_cross: f64,
    pair_lin: f64,
}

impl ScaleSums {
    fn from_bins(bins: &[Option<f64>]) -> ScaleSums {
        let mut out = ScaleSums::default();
        for b in bins.iter().flatten() {
            out.n += 1.0;
            out.s1 += b;
            out.s2 += b * b;
            out.s3 += b * b * b;
        }
        for w in bins.windows(2) {
            if let (Some(a), Some(b)) = (w[0], w[1]) {
                out.pairs += 1.0;
                out.pair_cross += a * b;
                out.pair_lin += a + b;
            }
        }
        out
    }

    fn minus(&self, other: &ScaleSums) -> ScaleSums {
        ScaleSums {
            n: self.n - other.n,
            s1: self.s1 - other.s1,
            s2: self.s2 - other.s2,
            s3: self.s3 - other.s3,
            pairs: self.pairs - other.pairs,
            pair_cross: self.pair_cross - other.pair_cross,
            pair_lin: self.pair_lin - other.pair_lin,
        }
    }

    fn accumulate(&mut self, other: &ScaleSums) {
        self.n += other.n;
        self.s1 += other.s1;
        self.s2 += other.s2;
        self.s3 += other.s3;
        self.pairs += other.pairs;
        self.pair_cross += other.pair_cross;
        self.pair_lin += other.pair_lin;
    }

    fn mean(&self) -> Option<f64> {
        (self.n > 0.0).then(|| self.s1 / self.n)
    }

    /// (cv, lag1, skew) about the pooled mean.
    fn ratio_stats(&self) -> (Option<f64>, Option<f64>, Option<f64>) {
        let Some(c) = self.mean() else { return (None, None, None) };
        let var = self.s2 / self.n - c * c;
        if var <= 0.0 || c <= 0.0 {
            return (None, None, None);
        }
        let third = self.s3 / self.n - 3.0 * c * self.s2 / self.n + 2.0 * c * c * c;
        let lag1 = (self.pairs > 0.0).then(|| {
            (self.pair_cross - c * self.pair_lin + self.pairs * c * c) / self.pairs / var
        });
        (Some(var.sqrt() / c), lag1, Some(third / var.powf(1.5)))
    }
}

/// Pooled statistics over all years, with per-statistic sampling
/// variances from a delete-one-year jackknife. The across-year spread of
/// per-year statistics is the right variance for the *averaged* mode but
/// understates the variance of pooled higher-moment statistics (a per-year
/// skewness from a handful of coarse bins is a compressed statistic);
/// deleting whole years resamples the pooled estimator itself.
fn pooled_with_jackknife(
    years_data: &[Vec<Option<f64>>],
    opts: &StatisticsOptions,
) -> Result<(Vec<Option<f64>>, Vec<Option<f64>>), StatsError> {
    let hourly_slots = Timescale::H1.slots()?;
    let mut scale_slots = Vec::with_capacity(opts.timescales.len());
    for ts in &opts.timescales {
        scale_slots.push(ts.slots()?);
    }

    // per-year sufficient sums: index 0 is the hourly scale for the mean,
    // then one entry per configured timescale
    let per_year: Vec<Vec<ScaleSums>> = years_data
        .iter()
        .map(|five| {
            let mut sums =
                vec![ScaleSums::from_bins(&aggregate_slots(five, hourly_slots))];
            for &slots in &scale_slots {
                sums.push(ScaleSums::from_bins(&aggregate_slots(five, slots)));
            }
            sums
        })
        .collect();

    let n_scales = scale_slots.len();
    let mut totals = vec![ScaleSums::default(); n_scales + 1];
    for year in &per_year {
        for (t, y) in totals.iter_mut().zip(year) {
            t.accumulate(y);
        }
    }

    let stats_of = |sums: &[ScaleSums]| -> Vec<Option<f64>> {
        let mut out = Vec::with_capacity(1 + 3 * n_scales);
        out.push(sums[0].mean());
        let ratio: Vec<(Option<f64>, Option<f64>, Option<f64>)> =
            sums[1..].iter().map(ScaleSums::ratio_stats).collect();
        out.extend(ratio.iter().map(|r| r.0));
        out.extend(ratio.iter().map(|r| r.1));
        out.extend(ratio.iter().map(|r| r.2));
        out
    };

    let values = stats_of(&totals);
    let n_years = per_year.len();
    let n_props = values.len();

    // delete-one-year replicates
    let mut leave_out: Vec<Vec<Option<f64>>> = Vec::with_capacity(n_years);
    for year in &per_year {
        let reduced: Vec<ScaleSums> =
            totals.iter().zip(year).map(|(t, y)| t.minus(y)).collect();
        leave_out.push(stats_of(&reduced));
    }
    let mut variances = vec![None; n_props];
    for (i, variance) in variances.iter_mut().enumerate() {
        let reps: Vec<f64> = leave_out.iter().filter_map(|l| l[i]).collect();
        if reps.len() == n_years {
            let m = reps.iter().sum::<f64>() / n_years as f64;
            let ss: f64 = reps.iter().map(|r| (r - m).powi(2)).sum();
            *variance = Some((n_years as f64 - 1.0) / n_years as f64 * ss);
        }
    }
    Ok((values, variances))
}
