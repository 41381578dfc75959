#![allow(clippy::needless_range_loop)]

//! Asymptotic parameter covariance and the sampler used for
//! simulation-with-uncertainty.

use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::model::ModelParams;
use crate::simulate::substream;

use super::linalg::Mat;
use super::objective::Objective;
use super::{FitError, FitResult, ObjectiveSpec, ParamSpace};

/// Covariance of the log-scale parameter estimate, in the sandwich form
/// `(J' W J)^-1 J' W Var(T) W J (J' W J)^-1` with `J` the numeric Jacobian
/// of the model properties at the estimate. With the default weights
/// `w_i = 1/Var(T_i)` this reduces to `(J' W J)^-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceEstimate {
    pub names: Vec<String>,
    /// Row-major covariance on the log-parameter scale.
    pub covariance_log: Vec<Vec<f64>>,
    /// Marginal standard errors on the log scale.
    pub se_log: Vec<f64>,
}

impl CovarianceEstimate {
    fn mat(&self) -> Mat {
        Mat::from_rows(&self.covariance_log)
    }

    pub fn is_symmetric_psd(&self) -> bool {
        let m = self.mat();
        for i in 0..m.rows {
            for j in 0..m.cols {
                if (m.get(i, j) - m.get(j, i)).abs() > 1e-12 * (1.0 + m.get(i, j).abs()) {
                    return false;
                }
            }
        }
        jittered_cholesky(&m).is_some()
    }
}

fn jittered_cholesky(m: &Mat) -> Option<Mat> {
    let scale = (0..m.rows).map(|i| m.get(i, i).abs()).fold(0.0f64, f64::max).max(1e-300);
    let mut jitter = 0.0;
    for _ in 0..8 {
        let mut a = m.clone();
        for i in 0..a.rows {
            a.set(i, i, a.get(i, i) + jitter);
        }
        if let Some(l) = a.cholesky() {
            return Some(l);
        }
        jitter = if jitter == 0.0 { scale * 1e-12 } else { jitter * 100.0 };
    }
    None
}

/// Sandwich-form covariance of the fitted log-parameters.
pub fn parameter_covariance(
    spec: &ObjectiveSpec,
    fit: &FitResult,
) -> Result<CovarianceEstimate, FitError> {
    let objective = Objective::new(spec)?;
    let space = objective.space.clone();
    let x_hat = space.to_x(&fit.params)?;
    let n_props = spec.statistics.entries.len();
    let dim = space.dim();

    // numeric Jacobian of tau with respect to the log-scale coordinates
    let step = 1e-5;
    let mut jac = Mat::zeros(n_props, dim);
    let mut xp = x_hat.clone();
    for j in 0..dim {
        xp[j] = x_hat[j] + step;
        let tp = objective.tau(&space.to_params(&xp)).map_err(|_| FitError::SingularCurvature)?;
        xp[j] = x_hat[j] - step;
        let tm = objective.tau(&space.to_params(&xp)).map_err(|_| FitError::SingularCurvature)?;
        xp[j] = x_hat[j];
        for i in 0..n_props {
            jac.set(i, j, (tp[i] - tm[i]) / (2.0 * step));
        }
    }

    let weights: Vec<f64> = spec.statistics.entries.iter().map(|e| e.weight).collect();
    let variances: Vec<f64> = spec.statistics.entries.iter().map(|e| e.variance).collect();

    let jt = jac.transpose();
    let a = jt.mul(&jac.scale_rows(&weights)); // J' W J
    let a_inv = a.symmetrized().inv_spd().ok_or(FitError::SingularCurvature)?;
    // J' W Sigma W J
    let wsw: Vec<f64> =
        weights.iter().zip(&variances).map(|(w, v)| w * v * w).collect();
    let b = jt.mul(&jac.scale_rows(&wsw));
    let cov = a_inv.mul(&b).mul(&a_inv).symmetrized();

    let se_log = (0..dim).map(|i| cov.get(i, i).max(0.0).sqrt()).collect();
    let covariance_log = (0..dim).map(|i| cov.row(i).to_vec()).collect();
    Ok(CovarianceEstimate {
        names: space.names.iter().map(|s| s.to_string()).collect(),
        covariance_log,
        se_log,
    })
}

/// Seeded multivariate-normal sampler over the log-parameters; draws come
/// back on the natural scale (lognormal parameters, with the `alpha` offset
/// respected).
pub struct ParamSampler {
    space: ParamSpace,
    mean_x: Vec<f64>,
    chol: Mat,
    rng: ChaCha12Rng,
}

impl ParamSampler {
    pub fn new(
        spec: &ObjectiveSpec,
        fit: &FitResult,
        cov: &CovarianceEstimate,
        seed: u64,
    ) -> Result<Self, FitError> {
        let space = ParamSpace::new(spec.variant, spec.alpha_min, spec.fixed_mu_x)?;
        let mean_x = space.to_x(&fit.params)?;
        let chol = jittered_cholesky(&cov.mat()).ok_or(FitError::SingularCurvature)?;
        Ok(Self { space, mean_x, chol, rng: substream(seed, 0) })
    }

    /// Draw on the log-coordinate scale.
    ///
    /// Deviations from the mean are clamped at ±20 log units per
    /// coordinate: when an estimate sits on a constraint boundary the
    /// asymptotic variance of its transformed coordinate diverges, and an
    /// unclamped lognormal draw would overflow.
    pub fn draw_x(&mut self) -> Vec<f64> {
        const MAX_LOG_DEVIATION: f64 = 20.0;
        let n = self.mean_x.len();
        let z: Vec<f64> = (0..n)
            .map(|_| {
                let v: f64 = StandardNormal.sample(&mut self.rng);
                v
            })
            .collect();
        let mut x = self.mean_x.clone();
        for i in 0..n {
            let mut dev = 0.0;
            for (j, zj) in z.iter().enumerate().take(i + 1) {
                dev += self.chol.get(i, j) * zj;
            }
            x[i] += dev.clamp(-MAX_LOG_DEVIATION, MAX_LOG_DEVIATION);
        }
        x
    }

    /// Draw a natural-scale parameter set.
    pub fn draw(&mut self) -> ModelParams<f64> {
        let x = self.draw_x();
        self.space.to_params(&x)
    }
}

/// Finite-difference consistency of the numeric gradient machinery: the
/// central-difference derivative of a smooth scalar field must match an
/// analytic derivative.
#[cfg(test)]
fn gradient_check<F: Fn(&[f64]) -> f64, G: Fn(&[f64]) -> Vec<f64>>(
    f: F,
    grad: G,
    x: &[f64],
    tol: f64,
) -> bool {
    let num = super::bfgs::gradient(&f, x, 1e-5);
    let ana = grad(x);
    num.iter().zip(&ana).all(|(a, b)| (a - b).abs() <= tol * (1.0 + b.abs()))
}
