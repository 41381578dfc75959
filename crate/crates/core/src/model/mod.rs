//! Model variants, parameter sets, constraints and derived physical
//! properties.
//!
//! Five Bartlett-Lewis variants are supported. Storms always arrive in a
//! Poisson process of rate `lambda`; the variants differ in how cells rain
//! (constant-intensity rectangles vs streams of instantaneous pulses) and in
//! whether the cell-duration rate `eta` is fixed or redrawn per storm from a
//! gamma distribution with shape `alpha` and rate `nu` (in which case the
//! cell arrival, storm termination and pulse rates are tied to `eta` through
//! the dimensionless ratios `kappa`, `phi`, `omega`).

mod intensity;

pub use intensity::{intensity_moments, IntensityFamily, IntensityLaw, IntensityMoments, PulseDepthDependence};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{real, Real};

/// Margin added above the configured `alpha` minimum: several moment
/// expressions contain `nu/(alpha - 1)` and `Gamma(alpha - k)` poles.
pub const ALPHA_GUARD: f64 = 1e-6;

/// Which member of the model family a parameter set belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "BLRP")]
    Blrp,
    #[serde(rename = "BLRPR")]
    Blrpr,
    #[serde(rename = "BLRPR_X")]
    BlrprX,
    #[serde(rename = "BLIP")]
    Blip,
    #[serde(rename = "BLIPR")]
    Blipr,
}

impl Variant {
    /// Cell duration rate redrawn per storm.
    pub fn is_random_eta(self) -> bool {
        matches!(self, Variant::Blrpr | Variant::BlrprX | Variant::Blipr)
    }

    /// Cells are streams of instantaneous pulses rather than rectangles.
    pub fn is_instantaneous(self) -> bool {
        matches!(self, Variant::Blip | Variant::Blipr)
    }

    /// Rectangular variants place one cell at the storm origin itself;
    /// instantaneous variants do not.
    pub fn has_origin_cell(self) -> bool {
        !self.is_instantaneous()
    }

    /// Closed-form aggregated moments are available (other variants are
    /// supported through simulation only).
    pub fn has_analytic_moments(self) -> bool {
        matches!(self, Variant::BlrprX | Variant::Blipr)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Blrp => "BLRP",
            Variant::Blrpr => "BLRPR",
            Variant::BlrprX => "BLRPR_X",
            Variant::Blip => "BLIP",
            Variant::Blipr => "BLIPR",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "BLRP" => Ok(Variant::Blrp),
            "BLRPR" => Ok(Variant::Blrpr),
            "BLRPR_X" | "BLRPRX" => Ok(Variant::BlrprX),
            "BLIP" => Ok(Variant::Blip),
            "BLIPR" => Ok(Variant::Blipr),
            _ => Err(ModelError::UnknownVariant { name: s.to_string() }),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Fixed-`eta` rectangular pulse model. Rates are per hour, `mu_x` is a mean
/// cell intensity in mm/h.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlrpParams<R> {
    pub lambda: R,
    pub mu_x: R,
    pub beta: R,
    pub gamma: R,
    pub eta: R,
}

/// Random-`eta` rectangular pulse model with constant mean cell intensity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlrprParams<R> {
    pub lambda: R,
    pub mu_x: R,
    pub alpha: R,
    pub nu: R,
    pub kappa: R,
    pub phi: R,
}

/// Random-`eta` rectangular pulse model in which the mean cell intensity is
/// proportional to `eta`: `iota = mu_x / eta` (mm) is the constant, so storms
/// with short cells rain harder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlrprxParams<R> {
    pub lambda: R,
    pub iota: R,
    pub alpha: R,
    pub nu: R,
    pub kappa: R,
    pub phi: R,
}

/// Fixed-`eta` instantaneous pulse model. `mu_x` is a mean pulse depth in mm,
/// `xi` the within-cell pulse rate per hour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlipParams<R> {
    pub lambda: R,
    pub mu_x: R,
    pub beta: R,
    pub gamma: R,
    pub eta: R,
    pub xi: R,
}

/// Random-`eta` instantaneous pulse model; `omega = xi / eta` is constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BliprParams<R> {
    pub lambda: R,
    pub mu_x: R,
    pub alpha: R,
    pub nu: R,
    pub kappa: R,
    pub phi: R,
    pub omega: R,
}

/// Tagged parameter set for one model variant (conventionally one calendar
/// month). Serializes as a flat JSON object with an explicit `variant` tag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum ModelParams<R> {
    #[serde(rename = "BLRP")]
    Blrp(BlrpParams<R>),
    #[serde(rename = "BLRPR")]
    Blrpr(BlrprParams<R>),
    #[serde(rename = "BLRPR_X")]
    BlrprX(BlrprxParams<R>),
    #[serde(rename = "BLIP")]
    Blip(BlipParams<R>),
    #[serde(rename = "BLIPR")]
    Blipr(BliprParams<R>),
}

impl<R: Real> ModelParams<R> {
    pub fn variant(&self) -> Variant {
        match self {
            ModelParams::Blrp(_) => Variant::Blrp,
            ModelParams::Blrpr(_) => Variant::Blrpr,
            ModelParams::BlrprX(_) => Variant::BlrprX,
            ModelParams::Blip(_) => Variant::Blip,
            ModelParams::Blipr(_) => Variant::Blipr,
        }
    }

    pub fn lambda(&self) -> R {
        match self {
            ModelParams::Blrp(p) => p.lambda,
            ModelParams::Blrpr(p) => p.lambda,
            ModelParams::BlrprX(p) => p.lambda,
            ModelParams::Blip(p) => p.lambda,
            ModelParams::Blipr(p) => p.lambda,
        }
    }

    /// Gamma shape of the per-storm `eta` distribution, if randomised.
    pub fn alpha(&self) -> Option<R> {
        match self {
            ModelParams::Blrpr(p) => Some(p.alpha),
            ModelParams::BlrprX(p) => Some(p.alpha),
            ModelParams::Blipr(p) => Some(p.alpha),
            _ => None,
        }
    }

    /// Field names and values in declaration order, for validation messages.
    pub fn fields(&self) -> Vec<(&'static str, R)> {
        match self {
            ModelParams::Blrp(p) => vec![
                ("lambda", p.lambda),
                ("mu_x", p.mu_x),
                ("beta", p.beta),
                ("gamma", p.gamma),
                ("eta", p.eta),
            ],
            ModelParams::Blrpr(p) => vec![
                ("lambda", p.lambda),
                ("mu_x", p.mu_x),
                ("alpha", p.alpha),
                ("nu", p.nu),
                ("kappa", p.kappa),
                ("phi", p.phi),
            ],
            ModelParams::BlrprX(p) => vec![
                ("lambda", p.lambda),
                ("iota", p.iota),
                ("alpha", p.alpha),
                ("nu", p.nu),
                ("kappa", p.kappa),
                ("phi", p.phi),
            ],
            ModelParams::Blip(p) => vec![
                ("lambda", p.lambda),
                ("mu_x", p.mu_x),
                ("beta", p.beta),
                ("gamma", p.gamma),
                ("eta", p.eta),
                ("xi", p.xi),
            ],
            ModelParams::Blipr(p) => vec![
                ("lambda", p.lambda),
                ("mu_x", p.mu_x),
                ("alpha", p.alpha),
                ("nu", p.nu),
                ("kappa", p.kappa),
                ("phi", p.phi),
                ("omega", p.omega),
            ],
        }
    }
}

/// Validation errors for parameter sets and intensity laws.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("parameter `{field}` must be strictly positive (got {value})")]
    NonPositiveParameter { field: &'static str, value: f64 },
    #[error("alpha = {alpha} is below the configured minimum {minimum} (+{guard} guard)")]
    AlphaBelowMinimum { alpha: f64, minimum: f64, guard: f64 },
    #[error("intensity distribution shape must be strictly positive (got {shape})")]
    UnsupportedShape { shape: f64 },
    #[error("unknown model variant `{name}`")]
    UnknownVariant { name: String },
}

/// Constraints applied when validating a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet<R> {
    /// Lower bound for the gamma shape `alpha` of random-`eta` variants.
    /// A value of 1 keeps all moment integrals finite; 2 additionally keeps
    /// simulated storm and cell durations within realistic ranges.
    pub alpha_min: R,
}

impl<R: Real> ConstraintSet<R> {
    pub fn with_alpha_min(alpha_min: R) -> Self {
        Self { alpha_min }
    }
}

impl<R: Real> Default for ConstraintSet<R> {
    fn default() -> Self {
        Self { alpha_min: real(2.0) }
    }
}

/// A parameter set that has passed [`validate_params`]. Immutable; safe to
/// share across threads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidatedParams<R>(ModelParams<R>);

impl<R: Real> ValidatedParams<R> {
    pub fn params(&self) -> &ModelParams<R> {
        &self.0
    }

    pub fn variant(&self) -> Variant {
        self.0.variant()
    }
}

impl<R: Real> std::ops::Deref for ValidatedParams<R> {
    type Target = ModelParams<R>;

    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

/// Check positivity of every field and, for random-`eta` variants, that
/// `alpha` clears the configured minimum plus the pole guard.
pub fn validate_params<R: Real>(
    params: &ModelParams<R>,
    constraints: &ConstraintSet<R>,
) -> Result<ValidatedParams<R>, ModelError> {
    for (field, value) in params.fields() {
        if !(value > R::zero()) || !value.is_finite() {
            return Err(ModelError::NonPositiveParameter {
                field,
                value: value.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    if let Some(alpha) = params.alpha() {
        let floor = constraints.alpha_min + real(ALPHA_GUARD);
        if alpha <= floor {
            return Err(ModelError::AlphaBelowMinimum {
                alpha: alpha.to_f64().unwrap_or(f64::NAN),
                minimum: constraints.alpha_min.to_f64().unwrap_or(f64::NAN),
                guard: ALPHA_GUARD,
            });
        }
    }
    Ok(ValidatedParams(*params))
}

/// Interpretable storm/cell summary properties of a parameter set.
///
/// Durations of storms and cells are exponential given `eta`, so for
/// random-`eta` variants their unconditional means use
/// `E[1/eta] = nu/(alpha - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedProps<R> {
    /// Mean storm inter-arrival time, hours.
    pub msit_h: R,
    /// Mean duration of storm activity (the cell-generation window), hours.
    pub msd_h: R,
    /// Mean cell inter-arrival time, minutes.
    pub mcit_min: R,
    /// Mean cell duration, minutes.
    pub mcd_min: R,
    /// Mean number of cells per storm.
    pub mcs: R,
    /// Mean number of pulses per cell (instantaneous variants only).
    pub mpc: Option<R>,
}

/// Compute the summary properties for a validated parameter set.
pub fn derived_properties<R: Real>(params: &ValidatedParams<R>) -> DerivedProps<R> {
    let one = R::one();
    let sixty: R = real(60.0);
    match params.params() {
        ModelParams::Blrp(p) => DerivedProps {
            msit_h: one / p.lambda,
            msd_h: one / p.gamma,
            mcit_min: sixty / p.beta,
            mcd_min: sixty / p.eta,
            mcs: one + p.beta / p.gamma,
            mpc: None,
        },
        ModelParams::Blip(p) => DerivedProps {
            msit_h: one / p.lambda,
            msd_h: one / p.gamma,
            mcit_min: sixty / p.beta,
            mcd_min: sixty / p.eta,
            mcs: p.beta / p.gamma,
            // pulses run until the cell or the storm window ends, whichever
            // is sooner, so the pulse span is Exp(eta + gamma)
            mpc: Some(p.xi / (p.eta + p.gamma)),
        },
        ModelParams::Blrpr(p) => {
            let inv_eta = p.nu / (p.alpha - one);
            DerivedProps {
                msit_h: one / p.lambda,
                msd_h: inv_eta / p.phi,
                mcit_min: sixty * inv_eta / p.kappa,
                mcd_min: sixty * inv_eta,
                mcs: one + p.kappa / p.phi,
                mpc: None,
            }
        }
        ModelParams::BlrprX(p) => {
            let inv_eta = p.nu / (p.alpha - one);
            DerivedProps {
                msit_h: one / p.lambda,
                msd_h: inv_eta / p.phi,
                mcit_min: sixty * inv_eta / p.kappa,
                mcd_min: sixty * inv_eta,
                mcs: one + p.kappa / p.phi,
                mpc: None,
            }
        }
        ModelParams::Blipr(p) => {
            let inv_eta = p.nu / (p.alpha - one);
            DerivedProps {
                msit_h: one / p.lambda,
                msd_h: inv_eta / p.phi,
                mcit_min: sixty * inv_eta / p.kappa,
                mcd_min: sixty * inv_eta,
                mcs: p.kappa / p.phi,
                mpc: Some(p.omega / (one + p.phi)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blrprx_jan() -> ModelParams<f64> {
        ModelParams::BlrprX(BlrprxParams {
            lambda: 0.022,
            iota: 0.164,
            alpha: 2.075,
            nu: 2.075 / 5.014,
            kappa: 0.996,
            phi: 0.042,
        })
    }

    #[test]
    fn accepts_fitted_january_row() {
        let c = ConstraintSet::with_alpha_min(2.0);
        assert!(validate_params(&blrprx_jan(), &c).is_ok());
    }

    #[test]
    fn rejects_alpha_at_or_below_minimum() {
        let mut p = blrprx_jan();
        if let ModelParams::BlrprX(ref mut q) = p {
            q.alpha = 1.5;
        }
        let err = validate_params(&p, &ConstraintSet::with_alpha_min(2.0)).unwrap_err();
        assert!(matches!(err, ModelError::AlphaBelowMinimum { .. }));
    }

    #[test]
    fn rejects_degenerate_rate() {
        let p: ModelParams<f64> = ModelParams::Blrp(BlrpParams {
            lambda: 0.0,
            mu_x: 1.0,
            beta: 1.0,
            gamma: 1.0,
            eta: 1.0,
        });
        let err = validate_params(&p, &ConstraintSet::default()).unwrap_err();
        assert_eq!(
            err,
            ModelError::NonPositiveParameter { field: "lambda", value: 0.0 }
        );
    }

    #[test]
    fn derived_props_blrp_january() {
        let p: ModelParams<f64> = ModelParams::Blrp(BlrpParams {
            lambda: 0.022,
            mu_x: 0.960,
            beta: 5.422,
            gamma: 0.231,
            eta: 5.975,
        });
        let v = validate_params(&p, &ConstraintSet::default()).unwrap();
        let d = derived_properties(&v);
        assert!((d.msit_h - 45.45).abs() < 0.01);
        assert!((d.msd_h - 4.329).abs() < 0.001);
        assert!((d.mcit_min - 11.066).abs() < 0.001);
        assert!((d.mcd_min - 10.042).abs() < 0.001);
        assert!((d.mcs - 24.47).abs() < 0.01);
        assert!(d.mpc.is_none());
    }

    #[test]
    fn derived_props_blipr_january() {
        let p: ModelParams<f64> = ModelParams::Blipr(BliprParams {
            lambda: 0.024,
            mu_x: 0.001,
            alpha: 2.147,
            nu: 2.147 / 4.591,
            kappa: 1.027,
            phi: 0.046,
            omega: 173.0,
        });
        let v = validate_params(&p, &ConstraintSet::default()).unwrap();
        let d = derived_properties(&v);
        assert!((d.mcs - 22.33).abs() < 0.01);
        assert!((d.mpc.unwrap() - 165.39).abs() < 0.01);
        assert!((d.msd_h - 8.863).abs() < 0.01);
    }

    #[test]
    fn params_json_round_trips_exactly() {
        let p = blrprx_jan();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"variant\":\"BLRPR_X\""));
        let back: ModelParams<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(p, back);
    }
}
