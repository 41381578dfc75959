//! Annual maxima and Gumbel plot coordinates.

use serde::Serialize;

use super::{missing_fraction, GaugeRecord, StatsError, Timescale};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnualMaximum {
    pub year: i32,
    pub max_depth_mm: f64,
}

/// Per-year maxima of the depths aggregated to `scale`, restricted to the
/// given months (empty slice means the whole year). A year counts only if
/// every requested month is present with an acceptable missing fraction.
pub fn annual_maxima(
    record: &GaugeRecord,
    scale: Timescale,
    months: &[u8],
    max_missing_fraction: f64,
) -> Result<Vec<AnnualMaximum>, StatsError> {
    let months: Vec<u8> = if months.is_empty() { (1..=12).collect() } else { months.to_vec() };
    let mut out = Vec::new();
    'years: for year in record.years() {
        let mut year_max = f64::NEG_INFINITY;
        for &month in &months {
            let Some(five) = record.month_slots(year, month) else { continue 'years };
            if missing_fraction(&five) > max_missing_fraction {
                continue 'years;
            }
            let bins = super::aggregate_slots(&five, scale.slots()?);
            for b in bins.iter().flatten() {
                year_max = year_max.max(*b);
            }
        }
        if year_max.is_finite() {
            out.push(AnnualMaximum { year, max_depth_mm: year_max });
        }
    }
    if out.is_empty() {
        return Err(StatsError::NoCompleteYears);
    }
    Ok(out)
}

/// One plotting point: ranked maximum against its reduced variate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GumbelPoint {
    /// Rank in ascending order, 1-based.
    pub rank: usize,
    pub value: f64,
    /// Gringorten non-exceedance probability `(i - 0.44) / (n + 0.12)`.
    pub non_exceedance: f64,
    /// Empirical return period `1 / (1 - p)`, in years.
    pub return_period: f64,
    /// `-ln(-ln(p))`, the Gumbel plot abscissa.
    pub reduced_variate: f64,
}

/// Rank maxima ascending and attach Gringorten plotting positions.
pub fn gumbel_points(maxima: &[f64]) -> Vec<GumbelPoint> {
    let mut sorted: Vec<f64> = maxima.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite maxima"));
    let n = sorted.len() as f64;
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, value)| {
            let rank = i + 1;
            let p = (rank as f64 - 0.44) / (n + 0.12);
            GumbelPoint {
                rank,
                value,
                non_exceedance: p,
                return_period: 1.0 / (1.0 - p),
                reduced_variate: -(-p.ln()).ln(),
            }
        })
        .collect()
}

/// Reduced variate for a return period `R`: `-ln(-ln(1 - 1/R))`.
pub fn reduced_variate(return_period: f64) -> f64 {
    -(-(1.0 - 1.0 / return_period).ln()).ln()
}
