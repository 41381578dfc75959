//! Closed-form special functions against independent quadrature oracles.

use blrain::model::IntensityFamily;
use blrain::moments::gamma_expectation;
use blrain_testkit::{gamma_expectation_quadrature, integrate};

#[test]
fn kernel_matches_quadrature_on_grid() {
    let alphas = [1.1, 1.5, 2.0, 3.0, 5.0, 10.0];
    let nus = [0.1, 0.5, 1.0, 2.0, 10.0];
    let ss = [0.0, 0.1, 1.0, 10.0, 100.0];
    for &alpha in &alphas {
        for &nu in &nus {
            for &s in &ss {
                for k in 0..=1u32 {
                    let closed: f64 = gamma_expectation(k, s, alpha, nu).unwrap();
                    let quad = gamma_expectation_quadrature(k, s, alpha, nu);
                    let rel = (closed - quad).abs() / quad.abs().max(1e-300);
                    assert!(
                        rel < 1e-8,
                        "k={k} s={s} alpha={alpha} nu={nu}: closed={closed} quad={quad} rel={rel}"
                    );
                }
            }
        }
    }
}

#[test]
fn frozen_derived_kernel_value() {
    // k=1, s=1, alpha=2, nu=1: quadrature oracle value frozen at 0.5
    let quad = gamma_expectation_quadrature(1, 1.0, 2.0, 1.0);
    assert!((quad - 0.5).abs() < 1e-10);
    let closed: f64 = gamma_expectation(1, 1.0, 2.0, 1.0).unwrap();
    assert!((closed - quad).abs() < 1e-10);
}

fn weibull_raw_moment_quadrature(mean: f64, shape: f64, r: i32) -> f64 {
    // E[X^r] of a Weibull with the given mean, by integrating the density
    // under the substitution u = (x/scale)^shape
    let scale = mean / libm::exp(libm::lgamma(1.0 + 1.0 / shape));
    integrate(&|u: f64| (scale * u.powf(1.0 / shape)).powi(r) * (-u).exp(), 0.0, 250.0, 1e-13)
}

#[test]
fn weibull_moment_ratios_match_quadrature() {
    let fam: IntensityFamily<f64> = IntensityFamily::Weibull { shape: 0.6 };
    let f1: f64 = fam.moment_ratio(2).unwrap();
    let f2: f64 = fam.moment_ratio(3).unwrap();
    let q1 = weibull_raw_moment_quadrature(1.0, 0.6, 2);
    let q2 = weibull_raw_moment_quadrature(1.0, 0.6, 3);
    assert!((f1 - q1).abs() / q1 < 1e-9, "f1={f1} quad={q1}");
    assert!((f2 - q2).abs() / q2 < 1e-9, "f2={f2} quad={q2}");
    // frozen oracle values
    assert!((q1 - 4.090795761378).abs() < 1e-8);
    assert!((q2 - 35.232162413754).abs() < 1e-7);
    // unit mean sanity
    let q0 = weibull_raw_moment_quadrature(1.0, 0.6, 1);
    assert!((q0 - 1.0).abs() < 1e-10);
}

#[test]
fn gamma_family_moments_match_quadrature() {
    let shape = 2.7;
    let mean = 1.9;
    let fam: IntensityFamily<f64> = IntensityFamily::Gamma { shape };
    // integrate x^r * gamma density via u = x * shape / mean substitution
    let scale = mean / shape;
    let raw = |r: i32| -> f64 {
        let norm = libm::exp(-libm::lgamma(shape));
        integrate(
            &|u: f64| norm * (scale * u).powi(r) * u.powf(shape - 1.0) * (-u).exp(),
            0.0,
            120.0,
            1e-13,
        )
    };
    let f1: f64 = fam.moment_ratio(2).unwrap();
    let f2: f64 = fam.moment_ratio(3).unwrap();
    assert!((f1 - raw(2) / mean.powi(2)).abs() < 1e-9);
    assert!((f2 - raw(3) / mean.powi(3)).abs() < 1e-9);
}
