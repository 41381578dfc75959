//! Bartlett-Lewis clustered point-process rainfall models.
//!
//! The library covers the full workflow for fine-resolution stochastic
//! rainfall generation at a single site:
//!
//! * [`model`] — the five model variants, their parameter sets, intensity
//!   distributions and derived physical properties;
//! * [`moments`] — closed-form mean, variance, autocovariance and third
//!   central moment of the aggregated process for the two random-`eta`
//!   variants with analytic solutions;
//! * [`simulate`] — event-level simulation of every variant and exact
//!   aggregation to discrete depth series;
//! * [`stats`] — ingestion of 5-minute gauge records and computation of
//!   fitting statistics, wet/dry properties and annual maxima;
//! * [`fit`] — weighted least-squares calibration against observed
//!   statistics with two-stage optimization, profile objective curves,
//!   confidence intervals and parameter-uncertainty sampling.
//!
//! The analytic core is generic over the scalar type through
//! [`scalar::Real`]; the aliases below fix it to `f64`, which is what the
//! simulator, the fitter and the CLI use.
//!
//! Negated comparisons like `!(x > 0.0)` are used deliberately to treat NaN
//! as out-of-domain.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod fit;
pub mod model;
pub mod moments;
pub mod scalar;
pub mod simulate;
pub mod stats;

/// Tagged parameter set at working precision.
pub type ModelParams = model::ModelParams<f64>;
/// Validated parameter set at working precision.
pub type ValidatedParams = model::ValidatedParams<f64>;
/// Intensity/pulse-depth distribution family at working precision.
pub type IntensityFamily = model::IntensityFamily<f64>;
/// Intensity law (family plus mean) at working precision.
pub type IntensityLaw = model::IntensityLaw<f64>;
/// Constraint set at working precision.
pub type ConstraintSet = model::ConstraintSet<f64>;
/// Derived storm/cell summary properties at working precision.
pub type DerivedProps = model::DerivedProps<f64>;
/// Aggregated moments at working precision.
pub type AggregatedMoments = moments::AggregatedMoments<f64>;
/// Fitting properties at working precision.
pub type FittingProperties = moments::FittingProperties<f64>;

pub use model::{PulseDepthDependence, Variant};
