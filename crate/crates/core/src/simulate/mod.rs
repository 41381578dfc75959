//! Event-level simulation of every model variant and aggregation of the
//! continuous-time process to discrete depth series.
//!
//! One seedable generator (ChaCha12) drives everything; replicate runs take
//! independent substreams derived from `(seed, replicate index)`, so results
//! are reproducible and replicates can be generated in any order or in
//! parallel.

mod aggregate;
mod reject;

pub use aggregate::{aggregate, AggregatedSeries};
pub use reject::{rejection_filter, rejection_resample, RejectionLimits, RejectionReport};

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma as GammaDist};
use thiserror::Error;

use crate::model::{
    derived_properties, IntensityFamily, ModelParams, PulseDepthDependence, ValidatedParams,
    Variant,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulateError {
    #[error("simulation horizon must be strictly positive (got {horizon_h})")]
    HorizonNonPositive { horizon_h: f64 },
    #[error("bin width {h_hours} h does not divide the horizon {horizon_h} h")]
    NonDividingBin { horizon_h: f64, h_hours: f64 },
}

/// One storm: cluster origin plus its cell-generation window. `eta` is the
/// per-storm cell duration rate for random-`eta` variants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Storm {
    pub origin_h: f64,
    pub eta: Option<f64>,
    pub window_end_h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellKind {
    /// Constant intensity over the cell lifetime. Rectangular cells survive
    /// the end of the storm window: the window stops cell *generation* only.
    Rect { duration_h: f64, intensity_mm_h: f64 },
    /// A stream of instantaneous pulses. Pulses stop at the cell end or the
    /// storm window end, whichever is sooner; `end_h` is that truncation.
    Pulsed { end_h: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub storm: usize,
    pub origin_h: f64,
    pub kind: CellKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub cell: usize,
    pub time_h: f64,
    pub depth_mm: f64,
}

/// A continuous-time realization before aggregation. Storm origins may be
/// negative: simulation starts a warm-up margin before time zero so that
/// the scoring window `[0, horizon)` is stationary.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSeries {
    pub variant: Variant,
    pub horizon_h: f64,
    pub storms: Vec<Storm>,
    pub cells: Vec<Cell>,
    pub pulses: Vec<Pulse>,
}

impl EventSeries {
    fn empty(variant: Variant, horizon_h: f64) -> Self {
        Self { variant, horizon_h, storms: Vec::new(), cells: Vec::new(), pulses: Vec::new() }
    }
}

/// Extra simulation knobs; the defaults follow the model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimOptions {
    /// Warm-up margin in hours before time zero. `None` derives one from the
    /// storm-extent tail of the variant (see [`default_warmup_h`]).
    pub warmup_h: Option<f64>,
    /// Truncate the per-storm `eta` distribution to `(epsilon, inf)` by
    /// redrawing; off by default.
    pub truncate_eta_below: Option<f64>,
}

/// Independent, reproducible substream for one replicate of a run.
pub fn substream(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Warm-up margin long enough that rain spilling into the scoring window
/// from storms older than the margin is negligible (relative mass below
/// roughly 1e-4).
///
/// Fixed-`eta` storm extents have exponential tails, so a small multiple of
/// the mean storm duration suffices. Random-`eta` extents are Pareto II with
/// shape `alpha`, so the margin has to grow like `mass^(-1/alpha)`.
pub fn default_warmup_h(params: &ValidatedParams<f64>) -> f64 {
    let d = derived_properties(params);
    let msd = d.msd_h;
    match params.alpha() {
        None => 10.0 * (msd + d.mcd_min / 60.0),
        Some(alpha) => {
            let target_mass: f64 = 1e-4;
            let factor = (alpha - 1.0) * (target_mass.powf(-1.0 / alpha) - 1.0);
            (factor * msd).max(10.0 * msd)
        }
    }
}

/// Exponential draw by inversion; `rate` per hour.
fn exp_draw<R: Rng>(rng: &mut R, rate: f64) -> f64 {
    let u: f64 = rng.random();
    -(-u).ln_1p() / rate
}

/// Draw one intensity (or pulse depth) with the given mean.
pub(crate) fn sample_intensity<R: Rng>(
    rng: &mut R,
    family: &IntensityFamily<f64>,
    mean: f64,
) -> f64 {
    match family {
        IntensityFamily::Exponential => exp_draw(rng, 1.0 / mean),
        IntensityFamily::Gamma { shape } => {
            let d = GammaDist::new(*shape, mean / shape).expect("valid gamma");
            d.sample(rng)
        }
        IntensityFamily::Weibull { shape } => {
            // mean-parameterized: scale = mean / Gamma(1 + 1/shape)
            let scale = mean / libm::exp(libm::lgamma(1.0 + 1.0 / shape));
            let u: f64 = rng.random();
            scale * (-(-u).ln_1p()).powf(1.0 / shape)
        }
    }
}

/// Per-storm rates resolved from the variant.
struct StormRates {
    eta: Option<f64>,
    cell_rate: f64,
    window_rate: f64,
    pulse_rate: f64,
    mean_intensity: f64,
}

fn storm_rates<R: Rng>(params: &ModelParams<f64>, opts: &SimOptions, rng: &mut R) -> StormRates {
    let draw_eta = |rng: &mut R, alpha: f64, nu: f64| -> f64 {
        let d = GammaDist::new(alpha, 1.0 / nu).expect("valid gamma");
        match opts.truncate_eta_below {
            None => d.sample(rng),
            Some(eps) => loop {
                let e = d.sample(rng);
                if e > eps {
                    break e;
                }
            },
        }
    };
    match params {
        ModelParams::Blrp(p) => StormRates {
            eta: None,
            cell_rate: p.beta,
            window_rate: p.gamma,
            pulse_rate: 0.0,
            mean_intensity: p.mu_x,
        },
        ModelParams::Blip(p) => StormRates {
            eta: None,
            cell_rate: p.beta,
            window_rate: p.gamma,
            pulse_rate: p.xi,
            mean_intensity: p.mu_x,
        },
        ModelParams::Blrpr(p) => {
            let eta = draw_eta(rng, p.alpha, p.nu);
            StormRates {
                eta: Some(eta),
                cell_rate: p.kappa * eta,
                window_rate: p.phi * eta,
                pulse_rate: 0.0,
                mean_intensity: p.mu_x,
            }
        }
        ModelParams::BlrprX(p) => {
            let eta = draw_eta(rng, p.alpha, p.nu);
            StormRates {
                eta: Some(eta),
                cell_rate: p.kappa * eta,
                window_rate: p.phi * eta,
                pulse_rate: 0.0,
                mean_intensity: p.iota * eta,
            }
        }
        ModelParams::Blipr(p) => {
            let eta = draw_eta(rng, p.alpha, p.nu);
            StormRates {
                eta: Some(eta),
                cell_rate: p.kappa * eta,
                window_rate: p.phi * eta,
                pulse_rate: p.omega * eta,
                mean_intensity: p.mu_x,
            }
        }
    }
}

/// Generate one continuous-time realization over `[0, horizon_h)`.
///
/// Deterministic given the seed. Storms arrive in a Poisson process of rate
/// `lambda` starting a warm-up margin before zero; per storm, cells arrive
/// in a Poisson process over an exponentially distributed generation window
/// (rectangular variants place an extra cell at the storm origin itself,
/// instantaneous ones do not). Cell durations are exponential with the
/// (possibly per-storm) rate `eta`. Rectangular cells carry an intensity
/// drawn from `family`; pulsed cells carry a Poisson stream of depths, drawn
/// independently or once per cell according to `dep`.
pub fn simulate(
    params: &ValidatedParams<f64>,
    family: &IntensityFamily<f64>,
    dep: PulseDepthDependence,
    horizon_h: f64,
    seed: u64,
) -> Result<EventSeries, SimulateError> {
    simulate_with(params, family, dep, horizon_h, &SimOptions::default(), &mut substream(seed, 0))
}

/// [`simulate`] with explicit options and generator (used by replicate
/// drivers to hand out substreams).
pub fn simulate_with(
    params: &ValidatedParams<f64>,
    family: &IntensityFamily<f64>,
    dep: PulseDepthDependence,
    horizon_h: f64,
    opts: &SimOptions,
    rng: &mut ChaCha12Rng,
) -> Result<EventSeries, SimulateError> {
    if !(horizon_h > 0.0) {
        return Err(SimulateError::HorizonNonPositive { horizon_h });
    }
    let variant = params.variant();
    let mut series = EventSeries::empty(variant, horizon_h);
    let lambda = params.lambda();
    if lambda <= 0.0 {
        return Ok(series);
    }
    let warmup = opts.warmup_h.unwrap_or_else(|| default_warmup_h(params));

    // storm origins over [-warmup, horizon)
    let mut t = -warmup;
    loop {
        t += exp_draw(rng, lambda);
        if t >= horizon_h {
            break;
        }
        let rates = storm_rates(params.params(), opts, rng);
        let window = exp_draw(rng, rates.window_rate);
        let window_end = t + window;
        let storm_idx = series.storms.len();
        series.storms.push(Storm { origin_h: t, eta: rates.eta, window_end_h: window_end });

        // cell arrival times first, bodies after, in arrival order
        let mut cell_origins = Vec::new();
        if variant.has_origin_cell() {
            cell_origins.push(t);
        }
        let mut ct = t;
        loop {
            ct += exp_draw(rng, rates.cell_rate);
            if ct >= window_end {
                break;
            }
            cell_origins.push(ct);
        }

        let eta_rate = match (rates.eta, params.params()) {
            (Some(eta), _) => eta,
            (None, ModelParams::Blrp(p)) => p.eta,
            (None, ModelParams::Blip(p)) => p.eta,
            _ => unreachable!("random-eta variants carry eta in their rates"),
        };

        for origin in cell_origins {
            let duration = exp_draw(rng, eta_rate);
            let cell_idx = series.cells.len();
            if variant.is_instantaneous() {
                // pulses stop at min(cell end, storm window end)
                let end = (origin + duration).min(window_end);
                series.cells.push(Cell {
                    storm: storm_idx,
                    origin_h: origin,
                    kind: CellKind::Pulsed { end_h: end },
                });
                let common_depth = match dep {
                    PulseDepthDependence::Common => {
                        Some(sample_intensity(rng, family, rates.mean_intensity))
                    }
                    PulseDepthDependence::Independent => None,
                };
                let mut pt = origin;
                loop {
                    pt += exp_draw(rng, rates.pulse_rate);
                    if pt >= end {
                        break;
                    }
                    let depth = match common_depth {
                        Some(d) => d,
                        None => sample_intensity(rng, family, rates.mean_intensity),
                    };
                    series.pulses.push(Pulse { cell: cell_idx, time_h: pt, depth_mm: depth });
                }
            } else {
                let intensity = sample_intensity(rng, family, rates.mean_intensity);
                series.cells.push(Cell {
                    storm: storm_idx,
                    origin_h: origin,
                    kind: CellKind::Rect { duration_h: duration, intensity_mm_h: intensity },
                });
            }
        }
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_params, BlrpParams, BlrprxParams, ConstraintSet};

    fn blrp_jan() -> ValidatedParams<f64> {
        let p = ModelParams::Blrp(BlrpParams {
            lambda: 0.022,
            mu_x: 0.960,
            beta: 5.422,
            gamma: 0.231,
            eta: 5.975,
        });
        validate_params(&p, &ConstraintSet::default()).unwrap()
    }

    fn blrprx_jan() -> ValidatedParams<f64> {
        let p = ModelParams::BlrprX(BlrprxParams {
            lambda: 0.022,
            iota: 0.164,
            alpha: 2.075,
            nu: 2.075 / 5.014,
            kappa: 0.996,
            phi: 0.042,
        });
        validate_params(&p, &ConstraintSet::default()).unwrap()
    }

    #[test]
    fn vanishing_lambda_gives_empty_series() {
        let mut raw = *blrp_jan().params();
        if let ModelParams::Blrp(ref mut p) = raw {
            p.lambda = 1e-300;
        }
        let v = validate_params(&raw, &ConstraintSet::default()).unwrap();
        let opts = SimOptions { warmup_h: Some(0.0), truncate_eta_below: None };
        let s = simulate_with(
            &v,
            &IntensityFamily::Exponential,
            PulseDepthDependence::Independent,
            10.0,
            &opts,
            &mut substream(7, 0),
        )
        .unwrap();
        assert!(s.storms.is_empty() && s.cells.is_empty() && s.pulses.is_empty());
    }

    #[test]
    fn same_seed_is_identical() {
        let v = blrprx_jan();
        let a = simulate(&v, &IntensityFamily::Exponential, PulseDepthDependence::Independent, 744.0, 42)
            .unwrap();
        let b = simulate(&v, &IntensityFamily::Exponential, PulseDepthDependence::Independent, 744.0, 42)
            .unwrap();
        assert_eq!(a, b);
        let c = simulate(&v, &IntensityFamily::Exponential, PulseDepthDependence::Independent, 744.0, 43)
            .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn nonpositive_horizon_rejected() {
        let v = blrp_jan();
        assert!(matches!(
            simulate(&v, &IntensityFamily::Exponential, PulseDepthDependence::Independent, 0.0, 1),
            Err(SimulateError::HorizonNonPositive { .. })
        ));
    }

    #[test]
    fn storm_count_matches_poisson_rate() {
        let v = blrp_jan();
        let horizon = 2000.0 * 744.0;
        let opts = SimOptions { warmup_h: Some(0.0), truncate_eta_below: None };
        let s = simulate_with(
            &v,
            &IntensityFamily::Exponential,
            PulseDepthDependence::Independent,
            horizon,
            &opts,
            &mut substream(11, 0),
        )
        .unwrap();
        let n = s.storms.len() as f64;
        let expected = 0.022 * horizon;
        let se = expected.sqrt();
        assert!((n - expected).abs() < 3.0 * se, "n={n}, expected={expected}");
    }

    #[test]
    fn cells_per_storm_matches_one_plus_beta_over_gamma() {
        let v = blrp_jan();
        let opts = SimOptions { warmup_h: Some(0.0), truncate_eta_below: None };
        let s = simulate_with(
            &v,
            &IntensityFamily::Exponential,
            PulseDepthDependence::Independent,
            200_000.0,
            &opts,
            &mut substream(5, 0),
        )
        .unwrap();
        let n_storms = s.storms.len() as f64;
        let mean_cells = s.cells.len() as f64 / n_storms;
        let expected = 1.0 + 5.422 / 0.231;
        let se = expected / n_storms.sqrt() * 1.5;
        assert!((mean_cells - expected).abs() < 3.0 * se, "{mean_cells} vs {expected}");
    }

    #[test]
    fn per_storm_eta_matches_gamma_mean() {
        let v = blrprx_jan();
        let opts = SimOptions { warmup_h: Some(0.0), truncate_eta_below: None };
        let s = simulate_with(
            &v,
            &IntensityFamily::Exponential,
            PulseDepthDependence::Independent,
            500_000.0,
            &opts,
            &mut substream(3, 0),
        )
        .unwrap();
        let etas: Vec<f64> = s.storms.iter().map(|st| st.eta.unwrap()).collect();
        let n = etas.len() as f64;
        let mean = etas.iter().sum::<f64>() / n;
        let sd = (etas.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n).sqrt();
        let expected = 5.014; // alpha / nu
        assert!((mean - expected).abs() < 3.0 * sd / n.sqrt(), "{mean} vs {expected}");
    }

    #[test]
    fn event_geometry_invariants() {
        let v = blrprx_jan();
        let s = simulate(&v, &IntensityFamily::Exponential, PulseDepthDependence::Common, 2000.0, 9)
            .unwrap();
        for c in &s.cells {
            let st = &s.storms[c.storm];
            assert!(c.origin_h >= st.origin_h && c.origin_h <= st.window_end_h);
        }
        let inst = simulate(
            &validate_params(
                &ModelParams::Blipr(crate::model::BliprParams {
                    lambda: 0.024,
                    mu_x: 0.001,
                    alpha: 2.147,
                    nu: 2.147 / 4.591,
                    kappa: 1.027,
                    phi: 0.046,
                    omega: 173.0,
                }),
                &ConstraintSet::default(),
            )
            .unwrap(),
            &IntensityFamily::Exponential,
            PulseDepthDependence::Common,
            744.0,
            21,
        )
        .unwrap();
        assert!(!inst.pulses.is_empty());
        for p in &inst.pulses {
            let c = &inst.cells[p.cell];
            let CellKind::Pulsed { end_h } = c.kind else { panic!("pulsed cell expected") };
            let st = &inst.storms[c.storm];
            assert!(p.time_h >= c.origin_h && p.time_h <= end_h);
            assert!(end_h <= st.window_end_h);
        }
    }

    #[test]
    fn truncated_eta_respects_floor() {
        let v = blrprx_jan();
        let opts = SimOptions { warmup_h: Some(0.0), truncate_eta_below: Some(2.0) };
        let s = simulate_with(
            &v,
            &IntensityFamily::Exponential,
            PulseDepthDependence::Independent,
            50_000.0,
            &opts,
            &mut substream(8, 0),
        )
        .unwrap();
        assert!(s.storms.iter().all(|st| st.eta.unwrap() > 2.0));
    }
}
