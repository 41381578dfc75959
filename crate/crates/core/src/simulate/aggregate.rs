//! Exact aggregation of event series to discrete depth bins.

use chrono::NaiveDateTime;
use serde::Serialize;

use super::{CellKind, EventSeries, SimulateError};

/// Discrete rainfall depths at one timescale, with optional calendar
/// metadata attached by callers that anchor the series in time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregatedSeries {
    /// Bin width, hours.
    pub h_hours: f64,
    /// Depth per bin, mm.
    pub depths: Vec<f64>,
    pub start: Option<NaiveDateTime>,
    pub month: Option<u8>,
}

impl AggregatedSeries {
    pub fn total_mm(&self) -> f64 {
        self.depths.iter().sum()
    }

    /// Sum consecutive groups of `factor` bins, e.g. 12 five-minute bins
    /// into one hourly bin. The bin count must divide evenly.
    pub fn reaggregated(&self, factor: usize) -> Result<AggregatedSeries, SimulateError> {
        if factor == 0 || !self.depths.len().is_multiple_of(factor) {
            return Err(SimulateError::NonDividingBin {
                horizon_h: self.h_hours * self.depths.len() as f64,
                h_hours: self.h_hours * factor as f64,
            });
        }
        let depths = self
            .depths
            .chunks_exact(factor)
            .map(|chunk| chunk.iter().sum())
            .collect();
        Ok(AggregatedSeries {
            h_hours: self.h_hours * factor as f64,
            depths,
            start: self.start,
            month: self.month,
        })
    }
}

/// Aggregate an event series into bins of width `h` hours over
/// `[0, horizon)`.
///
/// Rectangular cells are integrated exactly by interval overlap, with no
/// time discretization; instantaneous pulses contribute their full depth to
/// the bin containing their arrival time. `h` must divide the horizon.
pub fn aggregate(series: &EventSeries, h: f64) -> Result<AggregatedSeries, SimulateError> {
    if !(h > 0.0) {
        return Err(SimulateError::NonDividingBin { horizon_h: series.horizon_h, h_hours: h });
    }
    let n_real = series.horizon_h / h;
    let n = n_real.round();
    if (n_real - n).abs() > 1e-9 * n_real.max(1.0) || n < 1.0 {
        return Err(SimulateError::NonDividingBin { horizon_h: series.horizon_h, h_hours: h });
    }
    let n = n as usize;
    let mut depths = vec![0.0f64; n];
    let horizon = series.horizon_h;

    for cell in &series.cells {
        let CellKind::Rect { duration_h, intensity_mm_h } = cell.kind else { continue };
        let start = cell.origin_h.max(0.0);
        let end = (cell.origin_h + duration_h).min(horizon);
        if end <= start {
            continue;
        }
        let i0 = (start / h).floor() as usize;
        let i1 = (((end / h).ceil() as usize).max(i0 + 1) - 1).min(n - 1);
        for (i, depth) in depths.iter_mut().enumerate().take(i1 + 1).skip(i0) {
            let lo = start.max(i as f64 * h);
            let hi = end.min((i + 1) as f64 * h);
            if hi > lo {
                *depth += intensity_mm_h * (hi - lo);
            }
        }
    }

    for pulse in &series.pulses {
        if pulse.time_h >= 0.0 && pulse.time_h < horizon {
            let idx = ((pulse.time_h / h) as usize).min(n - 1);
            depths[idx] += pulse.depth_mm;
        }
    }

    Ok(AggregatedSeries { h_hours: h, depths, start: None, month: None })
}
