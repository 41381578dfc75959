//! Wet/dry interval statistics.

use serde::Serialize;

use super::{GaugeRecord, StatsError, Timescale};

/// Proportion of dry intervals and the wet/dry spell transition
/// probabilities at one timescale. Transitions never cross month (or year)
/// boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WetDryStats {
    pub p_dry: f64,
    /// P(wet at i+1 | wet at i).
    pub p_ww: f64,
    /// P(dry at i+1 | dry at i).
    pub p_dd: f64,
    pub n_bins: usize,
    pub n_wet_pairs: usize,
    pub n_dry_pairs: usize,
}

/// Compute wet/dry statistics for one calendar month across all observation
/// years. A bin is dry when its depth is at or below `threshold_mm`; bins
/// with missing constituents are excluded, and pairs spanning a gap are
/// dropped.
pub fn wet_dry_stats(
    record: &GaugeRecord,
    month: u8,
    scale: Timescale,
    threshold_mm: f64,
) -> Result<WetDryStats, StatsError> {
    assert!((1..=12).contains(&month), "month must be 1..=12");
    let mut n_bins = 0usize;
    let mut n_dry = 0usize;
    let mut wet_pairs = 0usize;
    let mut wet_wet = 0usize;
    let mut dry_pairs = 0usize;
    let mut dry_dry = 0usize;

    for year in record.years() {
        let Some(bins) = record.month_bins(year, month, scale)? else { continue };
        for b in bins.iter().flatten() {
            n_bins += 1;
            if *b <= threshold_mm {
                n_dry += 1;
            }
        }
        for w in bins.windows(2) {
            if let (Some(a), Some(b)) = (w[0], w[1]) {
                let a_wet = a > threshold_mm;
                let b_wet = b > threshold_mm;
                if a_wet {
                    wet_pairs += 1;
                    if b_wet {
                        wet_wet += 1;
                    }
                } else {
                    dry_pairs += 1;
                    if !b_wet {
                        dry_dry += 1;
                    }
                }
            }
        }
    }

    if n_bins == 0 {
        return Err(StatsError::InsufficientYears { month, years: 0, required: 1 });
    }
    if wet_pairs == 0 {
        return Err(StatsError::NoWetIntervals);
    }
    if dry_pairs == 0 {
        return Err(StatsError::NoDryIntervals);
    }
    Ok(WetDryStats {
        p_dry: n_dry as f64 / n_bins as f64,
        p_ww: wet_wet as f64 / wet_pairs as f64,
        p_dd: dry_dry as f64 / dry_pairs as f64,
        n_bins,
        n_wet_pairs: wet_pairs,
        n_dry_pairs: dry_pairs,
    })
}
