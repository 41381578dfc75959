//! Test oracles and fixtures shared by the workspace test suites.
//!
//! Everything here is deliberately independent of the library code it is
//! used to check: the integrator is a plain panel-split adaptive Simpson
//! rule, the Monte Carlo summaries are direct sample statistics, and the
//! parameter tables are published values retyped as data.

pub mod fixtures;

/// Adaptive Simpson integration of `f` over `[a, b]` with a *relative*
/// error target.
///
/// The interval is pre-split into 64 panels before adapting, so narrow
/// features cannot be missed by a coarse first pass; the panel sums of that
/// first pass also set the absolute tolerance scale.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) * (fa + 4.0 * fm + fb) / 6.0
    }
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1)
        }
    }

    let panels = 64;
    let mut coarse = Vec::with_capacity(panels as usize);
    let mut scale = 0.0f64;
    for i in 0..panels {
        let pa = a + (b - a) * f64::from(i) / f64::from(panels);
        let pb = a + (b - a) * f64::from(i + 1) / f64::from(panels);
        let pm = 0.5 * (pa + pb);
        let (fa, fm, fb) = (f(pa), f(pm), f(pb));
        let whole = simpson(fa, fm, fb, pa, pb);
        scale += whole.abs();
        coarse.push((pa, pb, fa, fm, fb, whole));
    }
    let tol = rel_tol * scale.max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    for (pa, pb, fa, fm, fb, whole) in coarse {
        total += rec(f, pa, pb, fa, fm, fb, whole, tol / f64::from(panels), 32);
    }
    total
}

/// Quadrature evaluation of `E[eta^{-k} e^{-eta s}]` for
/// `eta ~ Gamma(shape alpha, rate nu)`, the oracle for the closed-form
/// kernel. Uses the substitution `u = eta^(alpha-k)` when the integrand is
/// singular at zero.
pub fn gamma_expectation_quadrature(k: u32, s: f64, alpha: f64, nu: f64) -> f64 {
    let c = nu + s;
    let p = alpha - f64::from(k); // eta exponent + 1
    assert!(p > 0.0, "alpha must exceed k");
    let norm = (alpha * nu.ln() - libm::lgamma(alpha)).exp();
    let upper_eta = (alpha + 50.0 * alpha.sqrt() + 80.0) / c;
    let integral = if p < 1.0 {
        // integrand ~ eta^(p-1) is singular at zero; substitute u = eta^p
        let upper_u = upper_eta.powf(p);
        integrate(&|u: f64| (-c * u.powf(1.0 / p)).exp(), 0.0, upper_u, 1e-12) / p
    } else {
        integrate(&|eta: f64| eta.powf(p - 1.0) * (-c * eta).exp(), 0.0, upper_eta, 1e-12)
    };
    norm * integral
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McStat {
    pub value: f64,
    pub se: f64,
}

impl McStat {
    /// Distance from a reference value in standard errors.
    pub fn z(&self, reference: f64) -> f64 {
        (reference - self.value) / self.se
    }
}

/// Grand-mean-centred aggregated-moment estimates across replicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McMoments {
    pub mean: McStat,
    pub variance: McStat,
    pub autocov1: McStat,
    pub third: McStat,
}

fn stat_of(values: &[f64]) -> McStat {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    McStat { value: mean, se: (var / n).sqrt() }
}

/// Summarize per-replicate bin series into mean, variance, lag-1
/// autocovariance and third central moment with standard errors across
/// replicates. Centring uses the pooled grand mean, so the higher-moment
/// estimators are unbiased to O(1/total sample size) even though bins are
/// autocorrelated within a replicate.
pub fn mc_moments(replicates: &[Vec<f64>]) -> McMoments {
    let total: usize = replicates.iter().map(Vec::len).sum();
    let grand = replicates.iter().flatten().sum::<f64>() / total as f64;
    let mut means = Vec::with_capacity(replicates.len());
    let mut vars = Vec::with_capacity(replicates.len());
    let mut covs = Vec::with_capacity(replicates.len());
    let mut thirds = Vec::with_capacity(replicates.len());
    for bins in replicates {
        let n = bins.len() as f64;
        means.push(bins.iter().sum::<f64>() / n);
        vars.push(bins.iter().map(|y| (y - grand).powi(2)).sum::<f64>() / n);
        thirds.push(bins.iter().map(|y| (y - grand).powi(3)).sum::<f64>() / n);
        let pairs = bins.windows(2).map(|w| (w[0] - grand) * (w[1] - grand)).sum::<f64>();
        covs.push(pairs / (n - 1.0));
    }
    McMoments {
        mean: stat_of(&means),
        variance: stat_of(&vars),
        autocov1: stat_of(&covs),
        third: stat_of(&thirds),
    }
}

/// Range of a monotone-in-each-argument function over the box
/// `value_i ± quantum_i / 2`, evaluated at all corners. Used to tolerate
/// the rounding of published parameter tables.
pub fn corner_interval(inputs: &[(f64, f64)], f: &dyn Fn(&[f64]) -> f64) -> (f64, f64) {
    let n = inputs.len();
    assert!(n <= 16, "too many corners");
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut point = vec![0.0; n];
    for mask in 0..(1u32 << n) {
        for (i, (v, q)) in inputs.iter().enumerate() {
            point[i] = if mask & (1 << i) != 0 { v + q / 2.0 } else { v - q / 2.0 };
        }
        let y = f(&point);
        lo = lo.min(y);
        hi = hi.max(y);
    }
    (lo, hi)
}

/// Check a published value against a computed interval: the value (within
/// one unit of its last digit) must intersect the interval induced by the
/// rounding of the inputs.
pub fn published_matches(published: f64, unit: f64, computed: (f64, f64)) -> bool {
    published + unit >= computed.0 && published - unit <= computed.1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_functions() {
        let v = integrate(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn quadrature_normalizes_to_one() {
        for (alpha, nu) in [(1.1, 0.1), (2.0, 1.0), (10.0, 0.1), (10.0, 10.0)] {
            let v = gamma_expectation_quadrature(0, 0.0, alpha, nu);
            assert!((v - 1.0).abs() < 1e-9, "alpha={alpha}, nu={nu}: {v}");
        }
    }

    #[test]
    fn quadrature_handles_singular_branch() {
        // alpha - k = 0.1: integrable singularity at zero
        let v = gamma_expectation_quadrature(1, 0.5, 1.1, 1.0);
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn corner_interval_brackets_monotone_ratio() {
        let (lo, hi) = corner_interval(&[(1.0, 0.01), (2.0, 0.01)], &|x| x[0] / x[1]);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((lo - 0.995 / 2.005).abs() < 1e-12);
        assert!((hi - 1.005 / 1.995).abs() < 1e-12);
    }

    #[test]
    fn mc_moments_on_iid_noise() {
        // deterministic LCG noise, known moments
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / (1u64 << 53) as f64
        };
        let reps: Vec<Vec<f64>> = (0..200).map(|_| (0..500).map(|_| next()).collect()).collect();
        let m = mc_moments(&reps);
        assert!(m.mean.z(0.5).abs() < 4.0);
        assert!(m.variance.z(1.0 / 12.0).abs() < 4.0);
        assert!(m.autocov1.z(0.0).abs() < 4.0);
        assert!(m.third.z(0.0).abs() < 4.0);
    }
}
