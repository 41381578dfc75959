//! Rejection of unrealistically long or intense events from a realization.
//!
//! Heavy-tailed storm and cell durations occasionally produce unrealistic
//! rain events; both removal (default) and truncated resampling are offered.

use rand::{Rng, RngExt};

use super::{substream, Cell, CellKind, EventSeries};
use crate::model::IntensityFamily;

/// Upper limits; absent limits are not enforced.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RejectionLimits {
    /// Maximum storm activity (cell-generation window) duration, hours.
    pub max_storm_duration_h: Option<f64>,
    /// Maximum individual cell duration, hours.
    pub max_cell_duration_h: Option<f64>,
    /// Maximum cell intensity (mm/h) or pulse depth (mm).
    pub max_intensity: Option<f64>,
}

impl RejectionLimits {
    pub fn none() -> Self {
        Self::default()
    }
}

/// Counts of offending events handled by a filter pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RejectionReport {
    pub storms: usize,
    pub cells: usize,
    pub pulses: usize,
}

impl RejectionReport {
    pub fn total(&self) -> usize {
        self.storms + self.cells + self.pulses
    }
}

/// Remove every storm, cell or pulse that violates a limit (offending
/// storms take their cells and pulses with them). Without limits this is
/// the identity.
pub fn rejection_filter(
    series: &EventSeries,
    limits: &RejectionLimits,
) -> (EventSeries, RejectionReport) {
    let mut report = RejectionReport::default();
    let mut out = EventSeries {
        variant: series.variant,
        horizon_h: series.horizon_h,
        storms: Vec::with_capacity(series.storms.len()),
        cells: Vec::with_capacity(series.cells.len()),
        pulses: Vec::with_capacity(series.pulses.len()),
    };

    let mut storm_map = vec![usize::MAX; series.storms.len()];
    for (i, storm) in series.storms.iter().enumerate() {
        let duration = storm.window_end_h - storm.origin_h;
        if limits.max_storm_duration_h.is_some_and(|m| duration > m) {
            report.storms += 1;
            continue;
        }
        storm_map[i] = out.storms.len();
        out.storms.push(*storm);
    }

    let mut cell_map = vec![usize::MAX; series.cells.len()];
    for (i, cell) in series.cells.iter().enumerate() {
        if storm_map[cell.storm] == usize::MAX {
            continue; // parent storm rejected
        }
        let (duration, intensity) = match cell.kind {
            CellKind::Rect { duration_h, intensity_mm_h } => (duration_h, Some(intensity_mm_h)),
            CellKind::Pulsed { end_h } => (end_h - cell.origin_h, None),
        };
        if limits.max_cell_duration_h.is_some_and(|m| duration > m)
            || limits.max_intensity.is_some_and(|m| intensity.is_some_and(|x| x > m))
        {
            report.cells += 1;
            continue;
        }
        cell_map[i] = out.cells.len();
        out.cells.push(Cell { storm: storm_map[cell.storm], ..*cell });
    }

    for pulse in &series.pulses {
        if cell_map[pulse.cell] == usize::MAX {
            continue;
        }
        if limits.max_intensity.is_some_and(|m| pulse.depth_mm > m) {
            report.pulses += 1;
            continue;
        }
        out.pulses.push(super::Pulse { cell: cell_map[pulse.cell], ..*pulse });
    }

    (out, report)
}

/// Inverse-CDF draw from an exponential conditioned on being at most `max`.
fn truncated_exp<R: Rng>(rng: &mut R, rate: f64, max: f64) -> f64 {
    let cap = 1.0 - (-rate * max).exp();
    let u: f64 = rng.random::<f64>() * cap;
    -(-u).ln_1p() / rate
}

fn truncated_intensity<R: Rng>(
    rng: &mut R,
    family: &IntensityFamily<f64>,
    mean: f64,
    max: f64,
) -> f64 {
    for _ in 0..10_000 {
        let x = super::sample_intensity(rng, family, mean);
        if x <= max {
            return x;
        }
    }
    max
}

/// Resample offending quantities from their truncated distributions instead
/// of removing events.
///
/// A shortened storm window drops the cells generated beyond its new end;
/// shortened cells and windows clip the pulses of instantaneous variants.
/// Requires the generating parameters so that the right per-storm rates are
/// used; resampling is deterministic given the seed.
pub fn rejection_resample(
    series: &EventSeries,
    limits: &RejectionLimits,
    params: &crate::model::ValidatedParams<f64>,
    family: &IntensityFamily<f64>,
    seed: u64,
) -> (EventSeries, RejectionReport) {
    let mut rng = substream(seed, u64::MAX);
    let mut report = RejectionReport::default();
    let mut out = series.clone();

    // per-variant rate helpers
    let window_rate = |storm: &super::Storm| -> f64 {
        match (params.params(), storm.eta) {
            (crate::model::ModelParams::Blrp(p), _) => p.gamma,
            (crate::model::ModelParams::Blip(p), _) => p.gamma,
            (crate::model::ModelParams::Blrpr(p), Some(eta)) => p.phi * eta,
            (crate::model::ModelParams::BlrprX(p), Some(eta)) => p.phi * eta,
            (crate::model::ModelParams::Blipr(p), Some(eta)) => p.phi * eta,
            _ => unreachable!("eta recorded for random-eta variants"),
        }
    };
    let eta_rate = |storm: &super::Storm| -> f64 {
        match (params.params(), storm.eta) {
            (crate::model::ModelParams::Blrp(p), _) => p.eta,
            (crate::model::ModelParams::Blip(p), _) => p.eta,
            (_, Some(eta)) => eta,
            _ => unreachable!(),
        }
    };
    let mean_intensity = |storm: &super::Storm| -> f64 {
        match (params.params(), storm.eta) {
            (crate::model::ModelParams::Blrp(p), _) => p.mu_x,
            (crate::model::ModelParams::Blip(p), _) => p.mu_x,
            (crate::model::ModelParams::Blrpr(p), _) => p.mu_x,
            (crate::model::ModelParams::BlrprX(p), Some(eta)) => p.iota * eta,
            (crate::model::ModelParams::Blipr(p), _) => p.mu_x,
            _ => unreachable!(),
        }
    };

    if let Some(max_w) = limits.max_storm_duration_h {
        for i in 0..out.storms.len() {
            let duration = out.storms[i].window_end_h - out.storms[i].origin_h;
            if duration > max_w {
                report.storms += 1;
                let rate = window_rate(&out.storms[i]);
                let new_w = truncated_exp(&mut rng, rate, max_w);
                out.storms[i].window_end_h = out.storms[i].origin_h + new_w;
            }
        }
        // drop cells born beyond the (possibly shortened) windows
        let mut cell_map = vec![usize::MAX; out.cells.len()];
        let mut kept_cells = Vec::with_capacity(out.cells.len());
        for (i, cell) in out.cells.iter().enumerate() {
            let storm = &out.storms[cell.storm];
            if cell.origin_h <= storm.window_end_h {
                cell_map[i] = kept_cells.len();
                kept_cells.push(*cell);
            }
        }
        out.cells = kept_cells;
        out.pulses.retain_mut(|p| {
            if cell_map[p.cell] == usize::MAX {
                return false;
            }
            p.cell = cell_map[p.cell];
            true
        });
        // clip pulse streams and pulsed-cell ends to the new window
        for cell in &mut out.cells {
            if let CellKind::Pulsed { ref mut end_h } = cell.kind {
                *end_h = end_h.min(out.storms[cell.storm].window_end_h);
            }
        }
        let ends: Vec<f64> = out
            .cells
            .iter()
            .map(|c| match c.kind {
                CellKind::Pulsed { end_h } => end_h,
                CellKind::Rect { .. } => f64::INFINITY,
            })
            .collect();
        out.pulses.retain(|p| p.time_h <= ends[p.cell]);
    }

    if let Some(max_d) = limits.max_cell_duration_h {
        for i in 0..out.cells.len() {
            let storm = &out.storms[out.cells[i].storm];
            match out.cells[i].kind {
                CellKind::Rect { duration_h, intensity_mm_h } if duration_h > max_d => {
                    report.cells += 1;
                    let new_d = truncated_exp(&mut rng, eta_rate(storm), max_d);
                    out.cells[i].kind =
                        CellKind::Rect { duration_h: new_d, intensity_mm_h };
                }
                CellKind::Pulsed { end_h } if end_h - out.cells[i].origin_h > max_d => {
                    report.cells += 1;
                    let new_d = truncated_exp(&mut rng, eta_rate(storm), max_d);
                    let new_end = (out.cells[i].origin_h + new_d).min(storm.window_end_h);
                    out.cells[i].kind = CellKind::Pulsed { end_h: new_end };
                    let idx = i;
                    out.pulses.retain(|p| p.cell != idx || p.time_h <= new_end);
                }
                _ => {}
            }
        }
    }

    if let Some(max_x) = limits.max_intensity {
        for i in 0..out.cells.len() {
            if let CellKind::Rect { duration_h, intensity_mm_h } = out.cells[i].kind {
                if intensity_mm_h > max_x {
                    report.cells += 1;
                    let storm = &out.storms[out.cells[i].storm];
                    let x = truncated_intensity(&mut rng, family, mean_intensity(storm), max_x);
                    out.cells[i].kind = CellKind::Rect { duration_h, intensity_mm_h: x };
                }
            }
        }
        for i in 0..out.pulses.len() {
            if out.pulses[i].depth_mm > max_x {
                report.pulses += 1;
                let storm = &out.storms[out.cells[out.pulses[i].cell].storm];
                out.pulses[i].depth_mm =
                    truncated_intensity(&mut rng, family, mean_intensity(storm), max_x);
            }
        }
    }

    (out, report)
}
