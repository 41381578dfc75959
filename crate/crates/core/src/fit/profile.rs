//! Profile objective curves and the chi-square confidence intervals read
//! off them.

use serde::{Deserialize, Serialize};

use super::bfgs::{bfgs, BfgsOptions};
use super::nelder_mead::{nelder_mead, NmOptions};
use super::objective::Objective;
use super::{FitError, FitResult, ObjectiveSpec, ParamSpace};

/// 95% quantile of the chi-square distribution with one degree of freedom.
pub const CHI2_1_Q95: f64 = 3.841459;
/// Profile-objective threshold above the minimum for a 95% interval:
/// `2 (S_p - S_min)` is approximately chi-square with one degree of freedom,
/// so the interval is where `S_p <= S_min + q/2`.
pub const CI_OFFSET_95: f64 = CHI2_1_Q95 / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    /// Natural-scale value of the profiled parameter.
    pub value: f64,
    /// Objective minimized over the remaining parameters.
    pub s: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub param_index: usize,
    pub name: String,
    pub points: Vec<ProfilePoint>,
}

#[derive(Debug, Clone, Copy)]
pub struct ProfileOptions {
    /// When profiling `alpha` itself, its grid may cross the fitting floor;
    /// evaluation then uses this relaxed floor (the moment expressions need
    /// `alpha > 1`).
    pub alpha_floor: f64,
    pub inner_max_iters: usize,
    pub tol_rel: f64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self { alpha_floor: 1.0, inner_max_iters: 600, tol_rel: 1e-9 }
    }
}

/// Space used while one coordinate is pinned: for the `alpha` coordinate the
/// floor is relaxed so grids below the fitting constraint stay evaluable.
fn profile_space(spec: &ObjectiveSpec, param_index: usize, opts: &ProfileOptions) -> Result<ParamSpace, FitError> {
    let mut space = ParamSpace::new(spec.variant, spec.alpha_min, spec.fixed_mu_x)?;
    if param_index == space.alpha_index {
        space.alpha_min = space.alpha_min.min(opts.alpha_floor);
    }
    Ok(space)
}

/// Minimize over the remaining coordinates with `x[param_index]` held fixed.
fn inner_minimize(
    objective: &Objective<'_>,
    space: &ParamSpace,
    fixed_index: usize,
    fixed_coord: f64,
    warm: &[f64],
    opts: &ProfileOptions,
) -> (Vec<f64>, f64, bool) {
    let embed = |reduced: &[f64]| -> Vec<f64> {
        let mut full = Vec::with_capacity(reduced.len() + 1);
        full.extend_from_slice(&reduced[..fixed_index]);
        full.push(fixed_coord);
        full.extend_from_slice(&reduced[fixed_index..]);
        full
    };
    let eval = |reduced: &[f64]| -> f64 {
        let full = embed(reduced);
        // evaluate under the (possibly relaxed) profiling space
        objective.eval_x_in(space, &full)
    };
    let mut start: Vec<f64> = warm.to_vec();
    start.remove(fixed_index);

    let nm = nelder_mead(
        eval,
        &start,
        &NmOptions { max_iters: opts.inner_max_iters, tol_rel: opts.tol_rel, init_step: 0.15 },
    );
    let qb = bfgs(
        eval,
        &nm.x,
        &BfgsOptions { max_iters: opts.inner_max_iters, tol_rel: opts.tol_rel, grad_step: 1e-5 },
    );
    let (x_red, value, converged) =
        if qb.value <= nm.value { (qb.x, qb.value, qb.converged) } else { (nm.x, nm.value, nm.converged) };
    (embed(&x_red), value, converged && value.is_finite())
}

/// Profile objective curve for one parameter over a grid of natural-scale
/// values. Each grid point re-optimizes the remaining parameters, warm
/// starting from the neighbouring solution; failed points are marked, not
/// fatal.
pub fn profile(
    spec: &ObjectiveSpec,
    fit: &FitResult,
    param_index: usize,
    grid: &[f64],
    opts: &ProfileOptions,
) -> Result<ProfileCurve, FitError> {
    let objective = Objective::new(spec)?;
    let space = profile_space(spec, param_index, opts)?;
    assert!(param_index < space.dim(), "parameter index out of range");
    let x_hat = space.to_x(&fit.params)?;
    let theta_hat = space.natural(&x_hat);

    // coordinate value for a natural grid value
    let coord_of = |v: f64| -> Option<f64> {
        let feasible =
            if param_index == space.alpha_index { v - space.alpha_min } else { v };
        (feasible > 0.0).then(|| feasible.ln())
    };

    let mut points = vec![
        ProfilePoint { value: f64::NAN, s: f64::INFINITY, converged: false };
        grid.len()
    ];
    // sweep outward from the grid point nearest the estimate so warm starts
    // stay close
    let nearest = grid
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let da = (a.1 - theta_hat[param_index]).abs();
            let db = (b.1 - theta_hat[param_index]).abs();
            da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
        })
        .map(|(i, _)| i)
        .unwrap_or(0);

    let sweep = |indices: Vec<usize>, points: &mut Vec<ProfilePoint>| {
        let mut warm = x_hat.clone();
        for i in indices {
            let v = grid[i];
            match coord_of(v) {
                None => {
                    points[i] = ProfilePoint { value: v, s: f64::INFINITY, converged: false };
                }
                Some(coord) => {
                    let (x_full, s, converged) =
                        inner_minimize(&objective, &space, param_index, coord, &warm, opts);
                    points[i] = ProfilePoint { value: v, s, converged };
                    if s.is_finite() {
                        warm = x_full;
                    }
                }
            }
        }
    };
    sweep((nearest..grid.len()).collect(), &mut points);
    sweep((0..nearest).rev().collect(), &mut points);

    Ok(ProfileCurve {
        param_index,
        name: space.names[param_index].to_string(),
        points,
    })
}

/// A two-sided (or flagged one-sided) confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CiEstimate {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    /// `S_min + CI_OFFSET_95` used for the crossing search.
    pub threshold: f64,
}

impl CiEstimate {
    pub fn is_two_sided(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo.is_none_or(|lo| v >= lo) && self.hi.is_none_or(|hi| v <= hi)
    }
}

/// Read the 95% confidence interval off a profile curve: the region where
/// `S_p(v) <= S_min + 1.9207`, endpoints by linear interpolation between
/// grid points. A side that never crosses the threshold within the grid is
/// reported as `None`; if neither side crosses, the threshold is not
/// bracketed at all.
pub fn confidence_interval(curve: &ProfileCurve, s_min: f64) -> Result<CiEstimate, FitError> {
    let threshold = s_min + CI_OFFSET_95;
    let pts: Vec<&ProfilePoint> =
        curve.points.iter().filter(|p| p.s.is_finite() && p.value.is_finite()).collect();
    if pts.len() < 3 {
        return Err(FitError::ThresholdNotBracketed { param: curve.name.clone() });
    }
    let min_idx = pts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.s.partial_cmp(&b.1.s).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, _)| i)
        .unwrap();

    let cross = |a: &ProfilePoint, b: &ProfilePoint| -> f64 {
        // linear interpolation of the crossing between grid points
        let t = (threshold - a.s) / (b.s - a.s);
        a.value + t * (b.value - a.value)
    };

    let mut lo = None;
    for i in (1..=min_idx).rev() {
        if pts[i - 1].s > threshold && pts[i].s <= threshold {
            lo = Some(cross(pts[i], pts[i - 1]));
            break;
        }
    }
    let mut hi = None;
    for i in min_idx..pts.len() - 1 {
        if pts[i].s <= threshold && pts[i + 1].s > threshold {
            hi = Some(cross(pts[i], pts[i + 1]));
            break;
        }
    }
    if lo.is_none() && hi.is_none() {
        return Err(FitError::ThresholdNotBracketed { param: curve.name.clone() });
    }
    Ok(CiEstimate { lo, hi, threshold })
}

/// Profile-based 95% intervals for every free parameter with automatic grid
/// construction: log-spaced grids centred on the estimate, widened up to
/// five times when the threshold is not bracketed. Sides that stay
/// unbracketed come back as `None` (a flat profile is an identifiability
/// signal, not an error here).
pub(super) fn confidence_intervals_auto(
    spec: &ObjectiveSpec,
    fit: &FitResult,
    grid_points: usize,
    opts: &ProfileOptions,
) -> Vec<(String, super::ParamCi)> {
    let Ok(space_full) = ParamSpace::new(spec.variant, spec.alpha_min, spec.fixed_mu_x) else {
        return Vec::new();
    };
    let dim = space_full.dim();
    let se: Vec<f64> = fit
        .covariance
        .as_ref()
        .map(|c| c.se_log.clone())
        .unwrap_or_else(|| vec![0.35; dim]);
    let grid_points = grid_points.max(5);
    let mut out = Vec::with_capacity(dim);
    for p in 0..dim {
        let name = space_full.names[p].to_string();
        let Ok(pspace) = profile_space(spec, p, opts) else { continue };
        let Ok(x_hat) = pspace.to_x(&fit.params) else { continue };
        let c_hat = x_hat[p];
        let theta_hat = pspace.natural(&x_hat)[p];
        let mut span = (3.5 * se[p].clamp(0.05, 1.0)).max(0.4);
        let mut best: Option<CiEstimate> = None;
        for _ in 0..5 {
            let grid: Vec<f64> = (0..grid_points)
                .map(|i| {
                    let t = i as f64 / (grid_points - 1) as f64;
                    let c = c_hat - span + 2.0 * span * t;
                    if p == pspace.alpha_index {
                        pspace.alpha_min + c.exp()
                    } else {
                        c.exp()
                    }
                })
                .collect();
            let attempt = profile(spec, fit, p, &grid, opts)
                .and_then(|curve| confidence_interval(&curve, fit.s_value));
            match attempt {
                Ok(ci) if ci.is_two_sided() => {
                    best = Some(ci);
                    break;
                }
                Ok(ci) => {
                    best = Some(ci);
                    span *= 1.8;
                }
                Err(_) => span *= 1.8,
            }
        }
        out.push((
            name,
            super::ParamCi {
                estimate: theta_hat,
                lo: best.and_then(|c| c.lo),
                hi: best.and_then(|c| c.hi),
            },
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve_from(values: &[(f64, f64)]) -> ProfileCurve {
        ProfileCurve {
            param_index: 0,
            name: "lambda".into(),
            points: values
                .iter()
                .map(|&(value, s)| ProfilePoint { value, s, converged: true })
                .collect(),
        }
    }

    #[test]
    fn interval_straddles_minimum() {
        // parabola S = (v - 2)^2 around minimum 0
        let pts: Vec<(f64, f64)> =
            (0..41).map(|i| 0.1 * f64::from(i)).map(|v| (v, (v - 2.0).powi(2))).collect();
        let ci = confidence_interval(&curve_from(&pts), 0.0).unwrap();
        let half = CI_OFFSET_95.sqrt();
        assert!(ci.is_two_sided());
        assert!((ci.lo.unwrap() - (2.0 - half)).abs() < 0.02);
        assert!((ci.hi.unwrap() - (2.0 + half)).abs() < 0.02);
        assert!(ci.contains(2.0));
    }

    #[test]
    fn flat_profile_is_one_sided_or_unbracketed() {
        let flat: Vec<(f64, f64)> = (0..10).map(|i| (f64::from(i), 0.5)).collect();
        assert!(matches!(
            confidence_interval(&curve_from(&flat), 0.5),
            Err(FitError::ThresholdNotBracketed { .. })
        ));
        // rising on the right only
        let mut half_flat = flat.clone();
        for (v, s) in half_flat.iter_mut() {
            if *v > 5.0 {
                *s += (*v - 5.0) * 10.0;
            }
        }
        let ci = confidence_interval(&curve_from(&half_flat), 0.5).unwrap();
        assert!(ci.lo.is_none());
        assert!(ci.hi.is_some());
    }

    #[test]
    fn threshold_offset_is_half_chi2_quantile() {
        assert!((CI_OFFSET_95 - 1.9207295).abs() < 1e-6);
        assert!((CHI2_1_Q95 - 3.841459).abs() < 1e-6);
    }
}
