//! Closed-form moments of the aggregated rainfall process and the transforms
//! that turn them into the dimensionless fitting properties.

mod blipr;
mod blrprx;
pub mod kernel;

pub use blipr::blipr_moments;
pub use blrprx::blrprx_moments;
pub use kernel::gamma_expectation;

use serde::Serialize;
use thiserror::Error;

use crate::model::{IntensityFamily, ModelParams, PulseDepthDependence};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentsError {
    #[error("alpha = {alpha} too small: this expression requires alpha > {required}")]
    AlphaTooSmall { alpha: f64, required: f64 },
    #[error("variance is zero; coefficient of variation and autocorrelation are undefined")]
    ZeroVariance,
    #[error("non-finite or out-of-domain argument")]
    NonFiniteInput,
    #[error("model variant {variant} has no closed-form aggregated moments")]
    UnsupportedVariant { variant: &'static str },
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

/// Moments of the depth totals over consecutive intervals of width `h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregatedMoments<R> {
    /// Aggregation interval, hours.
    pub h: R,
    /// Mean depth per interval, mm.
    pub mean: R,
    /// Variance, mm^2.
    pub variance: R,
    /// Autocovariance at lags 1..=max_lag, mm^2.
    pub autocov: Vec<R>,
    /// Third central moment, mm^3.
    pub third_central: R,
}

/// Dimensionless fitting properties derived from per-timescale moments:
/// the hourly mean plus coefficient of variation, lag-1 autocorrelation and
/// skewness coefficient at each timescale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FittingProperties<R> {
    /// Mean depth of a one-hour interval, mm.
    pub mean_1h: R,
    pub scales: Vec<ScaleProperties<R>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleProperties<R> {
    /// Timescale, hours.
    pub h: R,
    pub cv: R,
    pub skewness: R,
    pub lag1: R,
}

/// Convert per-timescale aggregated moments into fitting properties.
///
/// The hourly mean is recovered from any entry because the aggregated mean
/// is proportional to `h`. Requires strictly positive variances and at least
/// one autocovariance lag per entry.
pub fn to_fitting_properties<R: Real>(
    per_scale: &[AggregatedMoments<R>],
) -> Result<FittingProperties<R>, MomentsError> {
    assert!(!per_scale.is_empty(), "at least one timescale is required");
    let first = &per_scale[0];
    if !(first.mean >= R::zero()) {
        return Err(MomentsError::ZeroVariance);
    }
    let mean_1h = first.mean / first.h;
    let mut scales = Vec::with_capacity(per_scale.len());
    for m in per_scale {
        if !(m.variance > R::zero()) {
            return Err(MomentsError::ZeroVariance);
        }
        let sd = m.variance.sqrt();
        let mean = if m.mean > R::zero() { m.mean } else { return Err(MomentsError::ZeroVariance) };
        let cov1 = *m.autocov.first().expect("lag-1 autocovariance required");
        scales.push(ScaleProperties {
            h: m.h,
            cv: sd / mean,
            skewness: m.third_central / (m.variance * sd),
            lag1: cov1 / m.variance,
        });
    }
    Ok(FittingProperties { mean_1h, scales })
}

/// Aggregated moments of any variant that has closed forms, at one timescale.
pub fn analytic_moments<R: Real>(
    params: &ModelParams<R>,
    family: &IntensityFamily<R>,
    dep: PulseDepthDependence,
    h: R,
    max_lag: usize,
) -> Result<AggregatedMoments<R>, MomentsError> {
    match params {
        ModelParams::Blipr(p) => blipr_moments(p, family, dep, h, max_lag),
        ModelParams::BlrprX(p) => blrprx_moments(p, family, h, max_lag),
        other => Err(MomentsError::UnsupportedVariant { variant: other.variant().name() }),
    }
}

/// Fitting properties of an analytic variant over a set of timescales
/// (hours). This is the model side `tau(theta)` of the fitting objective.
pub fn model_fitting_properties<R: Real>(
    params: &ModelParams<R>,
    family: &IntensityFamily<R>,
    dep: PulseDepthDependence,
    timescales_h: &[R],
) -> Result<FittingProperties<R>, MomentsError> {
    let per: Result<Vec<_>, _> = timescales_h
        .iter()
        .map(|&h| analytic_moments(params, family, dep, h, 1))
        .collect();
    to_fitting_properties(&per?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fitting_property_arithmetic() {
        let m = AggregatedMoments { h: 1.0, mean: 2.0, variance: 4.0, autocov: vec![2.0], third_central: 8.0 };
        let p = to_fitting_properties(&[m]).unwrap();
        assert_eq!(p.mean_1h, 2.0);
        assert_eq!(p.scales[0].cv, 1.0);
        assert_eq!(p.scales[0].skewness, 1.0);
        assert_eq!(p.scales[0].lag1, 0.5);
    }

    #[test]
    fn symmetric_process_has_zero_skewness() {
        let m = AggregatedMoments { h: 1.0, mean: 5.0, variance: 2.0, autocov: vec![0.5], third_central: 0.0 };
        let p = to_fitting_properties(&[m]).unwrap();
        assert_eq!(p.scales[0].skewness, 0.0);
    }

    #[test]
    fn zero_variance_is_an_error() {
        let m = AggregatedMoments { h: 1.0, mean: 5.0, variance: 0.0, autocov: vec![0.0], third_central: 0.0 };
        assert!(matches!(to_fitting_properties(&[m]), Err(MomentsError::ZeroVariance)));
    }

    #[test]
    fn composition_identity_for_fitted_row() {
        let params: ModelParams<f64> = ModelParams::BlrprX(crate::model::BlrprxParams {
            lambda: 0.022,
            iota: 0.164,
            alpha: 2.075,
            nu: 2.075 / 5.014,
            kappa: 0.996,
            phi: 0.042,
        });
        let fam = IntensityFamily::Exponential;
        let h = 1.0;
        let m = analytic_moments(&params, &fam, PulseDepthDependence::Common, h, 1).unwrap();
        let p =
            model_fitting_properties(&params, &fam, PulseDepthDependence::Common, &[h]).unwrap();
        assert!((p.scales[0].cv - m.variance.sqrt() / m.mean).abs() < 1e-15);
        assert!((p.scales[0].lag1 - m.autocov[0] / m.variance).abs() < 1e-15);
        assert!(
            (p.scales[0].skewness - m.third_central / m.variance.powf(1.5)).abs() < 1e-15
        );
    }

    #[test]
    fn analytic_moments_rejects_simulation_only_variants() {
        let params: ModelParams<f64> = ModelParams::Blrp(crate::model::BlrpParams {
            lambda: 0.022,
            mu_x: 0.96,
            beta: 5.422,
            gamma: 0.231,
            eta: 5.975,
        });
        assert!(matches!(
            analytic_moments(&params, &IntensityFamily::Exponential, PulseDepthDependence::Independent, 1.0, 1),
            Err(MomentsError::UnsupportedVariant { .. })
        ));
    }
}
