//! Mapping between natural parameters and the unconstrained optimization
//! coordinates.
//!
//! Optimization runs on the logarithms of the parameters, with `alpha`
//! replaced by `ln(alpha - alpha_min)` so positivity and the `alpha` floor
//! hold for every real-valued coordinate vector.

use crate::model::{
    BliprParams, BlrprxParams, ModelParams, Variant, ALPHA_GUARD,
};

use super::FitError;

/// The free-parameter layout for one fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSpace {
    pub variant: Variant,
    pub names: Vec<&'static str>,
    pub alpha_index: usize,
    pub alpha_min: f64,
    /// `mu_x` held fixed at this value (instantaneous variants, where the
    /// product `mu_x * omega` is the effective parameter).
    pub fixed_mu_x: Option<f64>,
}

impl ParamSpace {
    pub fn new(
        variant: Variant,
        alpha_min: f64,
        fixed_mu_x: Option<f64>,
    ) -> Result<Self, FitError> {
        match variant {
            Variant::BlrprX => Ok(Self {
                variant,
                names: vec!["lambda", "iota", "alpha", "nu", "kappa", "phi"],
                alpha_index: 2,
                alpha_min,
                fixed_mu_x: None,
            }),
            Variant::Blipr => match fixed_mu_x {
                Some(mu) => Ok(Self {
                    variant,
                    names: vec!["lambda", "alpha", "nu", "kappa", "phi", "omega"],
                    alpha_index: 1,
                    alpha_min,
                    fixed_mu_x: Some(mu),
                }),
                None => Ok(Self {
                    variant,
                    names: vec!["lambda", "mu_x", "alpha", "nu", "kappa", "phi", "omega"],
                    alpha_index: 2,
                    alpha_min,
                    fixed_mu_x: None,
                }),
            },
            other => Err(FitError::UnsupportedVariant { variant: other.name() }),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Natural free-parameter values in layout order.
    pub fn natural_of(&self, params: &ModelParams<f64>) -> Result<Vec<f64>, FitError> {
        match (self.variant, params) {
            (Variant::BlrprX, ModelParams::BlrprX(p)) => {
                Ok(vec![p.lambda, p.iota, p.alpha, p.nu, p.kappa, p.phi])
            }
            (Variant::Blipr, ModelParams::Blipr(p)) => Ok(if self.fixed_mu_x.is_some() {
                vec![p.lambda, p.alpha, p.nu, p.kappa, p.phi, p.omega]
            } else {
                vec![p.lambda, p.mu_x, p.alpha, p.nu, p.kappa, p.phi, p.omega]
            }),
            _ => Err(FitError::UnsupportedVariant { variant: params.variant().name() }),
        }
    }

    /// Natural values -> unconstrained coordinates. Fails if any value is
    /// infeasible (non-positive, or `alpha` at or below the floor).
    pub fn to_x(&self, params: &ModelParams<f64>) -> Result<Vec<f64>, FitError> {
        let theta = self.natural_of(params)?;
        let mut x = Vec::with_capacity(theta.len());
        for (i, &v) in theta.iter().enumerate() {
            let feasible = if i == self.alpha_index { v - self.alpha_min } else { v };
            if !(feasible > ALPHA_GUARD.min(1e-300)) || !feasible.is_finite() {
                return Err(FitError::NoFeasibleStart {
                    reason: format!("{} = {v} is infeasible", self.names[i]),
                });
            }
            x.push(feasible.ln());
        }
        Ok(x)
    }

    /// Unconstrained coordinates -> natural values.
    pub fn natural(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, &v)| {
                if i == self.alpha_index {
                    self.alpha_min + v.exp()
                } else {
                    v.exp()
                }
            })
            .collect()
    }

    /// Unconstrained coordinates -> full parameter set.
    pub fn to_params(&self, x: &[f64]) -> ModelParams<f64> {
        let t = self.natural(x);
        match self.variant {
            Variant::BlrprX => ModelParams::BlrprX(BlrprxParams {
                lambda: t[0],
                iota: t[1],
                alpha: t[2],
                nu: t[3],
                kappa: t[4],
                phi: t[5],
            }),
            Variant::Blipr => match self.fixed_mu_x {
                Some(mu_x) => ModelParams::Blipr(BliprParams {
                    lambda: t[0],
                    mu_x,
                    alpha: t[1],
                    nu: t[2],
                    kappa: t[3],
                    phi: t[4],
                    omega: t[5],
                }),
                None => ModelParams::Blipr(BliprParams {
                    lambda: t[0],
                    mu_x: t[1],
                    alpha: t[2],
                    nu: t[3],
                    kappa: t[4],
                    phi: t[5],
                    omega: t[6],
                }),
            },
            _ => unreachable!("constructor rejects other variants"),
        }
    }
}
