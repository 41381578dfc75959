//! Quasi-Newton refinement with numeric gradients.
//!
//! BFGS with central-difference gradients and Armijo backtracking; powerful
//! once the simplex stage has delivered a good starting point.

use super::nelder_mead::OptimResult;

#[derive(Debug, Clone, Copy)]
pub struct BfgsOptions {
    pub max_iters: usize,
    /// Converged when the improvement falls below `tol_rel * (|f| + floor)`.
    pub tol_rel: f64,
    /// Central-difference step on the (log) coordinate scale.
    pub grad_step: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self { max_iters: 2000, tol_rel: 1e-8, grad_step: 1e-5 }
    }
}

pub fn gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], step: f64) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        xp[i] = x[i] + step;
        let fp = f(&xp);
        xp[i] = x[i] - step;
        let fm = f(&xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * step);
    }
    g
}

pub fn bfgs<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], opts: &BfgsOptions) -> OptimResult {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    if !fx.is_finite() {
        return OptimResult { x, value: fx, iterations: 0, converged: false };
    }
    let mut g = gradient(&f, &x, opts.grad_step);
    // inverse Hessian approximation
    let mut h = vec![vec![0.0; n]; n];
    for (i, row) in h.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iters {
        iterations += 1;
        // d = -H g
        let mut d = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                d[i] -= h[i][j] * g[j];
            }
        }
        let slope: f64 = d.iter().zip(&g).map(|(di, gi)| di * gi).sum();
        if !slope.is_finite() || slope >= 0.0 {
            // reset to steepest descent
            for (i, row) in h.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = if i == j { 1.0 } else { 0.0 };
                }
            }
            for (di, gi) in d.iter_mut().zip(&g) {
                *di = -gi;
            }
        }
        let slope: f64 = d.iter().zip(&g).map(|(di, gi)| di * gi).sum();
        if slope.abs() < 1e-18 {
            converged = true;
            break;
        }

        // Armijo backtracking
        let mut t = 1.0;
        let mut x_new = Vec::new();
        let mut f_new = f64::INFINITY;
        let mut ok = false;
        for _ in 0..60 {
            x_new = x.iter().zip(&d).map(|(xi, di)| xi + t * di).collect();
            f_new = f(&x_new);
            if f_new.is_finite() && f_new <= fx + 1e-4 * t * slope {
                ok = true;
                break;
            }
            t *= 0.5;
        }
        if !ok {
            converged = true; // no progress possible along this direction
            break;
        }

        let g_new = gradient(&f, &x_new, opts.grad_step);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-12 {
            // BFGS update of the inverse Hessian
            let rho = 1.0 / sy;
            let mut hy = vec![0.0; n];
            for i in 0..n {
                for j in 0..n {
                    hy[i] += h[i][j] * y[j];
                }
            }
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            for i in 0..n {
                for j in 0..n {
                    h[i][j] += (sy + yhy) * rho * rho * s[i] * s[j]
                        - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }

        let improvement = fx - f_new;
        x = x_new;
        fx = f_new;
        g = g_new;
        if improvement <= opts.tol_rel * (fx.abs() + 1e-12) {
            converged = true;
            break;
        }
    }

    OptimResult { x, value: fx, iterations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quadratic() {
        let f = |x: &[f64]| (x[0] - 3.0).powi(2) + 10.0 * (x[1] + 1.0).powi(2) + 0.5;
        let r = bfgs(f, &[0.0, 0.0], &BfgsOptions::default());
        assert!(r.converged);
        assert!((r.x[0] - 3.0).abs() < 1e-5);
        assert!((r.x[1] + 1.0).abs() < 1e-5);
        assert!((r.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn rosenbrock_to_high_accuracy() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = BfgsOptions { max_iters: 5000, tol_rel: 1e-14, grad_step: 1e-6 };
        let r = bfgs(f, &[-1.2, 1.0], &opts);
        assert!(r.value < 1e-10, "f = {}", r.value);
    }

    #[test]
    fn infinite_start_returns_unconverged() {
        let f = |_: &[f64]| f64::INFINITY;
        let r = bfgs(f, &[1.0], &BfgsOptions::default());
        assert!(!r.converged);
    }

    #[test]
    fn cliff_is_respected() {
        let f = |x: &[f64]| {
            if x[0] > 1.0 {
                f64::INFINITY
            } else {
                (x[0] - 0.5).powi(2)
            }
        };
        let r = bfgs(f, &[0.9], &BfgsOptions::default());
        assert!(r.value < 1e-8);
        assert!(r.x[0] <= 1.0);
    }
}
