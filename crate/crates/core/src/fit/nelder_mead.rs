//! Nelder-Mead simplex minimization.
//!
//! Robust derivative-free stage used to locate promising regions before the
//! quasi-Newton refinement takes over.

#[derive(Debug, Clone, Copy)]
pub struct NmOptions {
    pub max_iters: usize,
    /// Converged when the simplex value spread falls below
    /// `tol_rel * (|f_best| + tol_abs_floor)`.
    pub tol_rel: f64,
    /// Initial simplex step along each coordinate.
    pub init_step: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        Self { max_iters: 2000, tol_rel: 1e-8, init_step: 0.25 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

const TOL_ABS_FLOOR: f64 = 1e-12;

pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], opts: &NmOptions) -> OptimResult {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.init_step;
        let v = f(&x);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iters {
        iterations += 1;
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if best.is_finite()
            && worst.is_finite()
            && (worst - best) <= opts.tol_rel * (best.abs() + TOL_ABS_FLOOR)
        {
            converged = true;
            break;
        }

        // centroid of all but the worst
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let second_worst = simplex[n - 1].1;
        let point = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let xr = point(1.0);
        let fr = f(&xr);
        if fr < best {
            let xe = point(2.0);
            let fe = f(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < second_worst {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst {
            let x = point(0.5);
            let v = f(&x);
            (x, v)
        } else {
            let x: Vec<f64> =
                centroid.iter().zip(&simplex[n].0).map(|(c, w)| c - 0.5 * (c - w)).collect();
            let v = f(&x);
            (x, v)
        };
        if fc < worst.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let best_x = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            let x: Vec<f64> =
                entry.0.iter().zip(&best_x).map(|(xi, bi)| bi + 0.5 * (xi - bi)).collect();
            let v = f(&x);
            *entry = (x, v);
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, value) = simplex.swap_remove(0);
    OptimResult { x, value, iterations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let r = nelder_mead(f, &[4.0, 4.0], &NmOptions::default());
        assert!(r.converged);
        assert!((r.x[0] - 1.5).abs() < 1e-4);
        assert!((r.x[1] + 0.5).abs() < 1e-4);
    }

    #[test]
    fn escapes_infinite_plateau() {
        // infinite value outside a disc; start on the edge of feasibility
        let f = |x: &[f64]| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            if r2 > 25.0 {
                f64::INFINITY
            } else {
                r2
            }
        };
        let r = nelder_mead(f, &[4.9, 0.0], &NmOptions::default());
        assert!(r.value < 1e-6);
    }

    #[test]
    fn respects_iteration_budget() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let opts = NmOptions { max_iters: 3, ..Default::default() };
        let r = nelder_mead(f, &[1.0, 1.0, 1.0], &opts);
        assert_eq!(r.iterations, 3);
        assert!(!r.converged);
    }

    #[test]
    fn rosenbrock_two_dims() {
        let f =
            |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NmOptions { max_iters: 5000, tol_rel: 1e-12, init_step: 0.5 };
        let r = nelder_mead(f, &[-1.2, 1.0], &opts);
        assert!(r.value < 1e-8, "f = {}", r.value);
    }
}
