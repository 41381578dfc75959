//! Closed-form aggregated moments against the event-level simulator.
//!
//! These are reduced-replicate versions of the full acceptance checks: wide
//! enough to catch transcription errors in the moment expressions, small
//! enough to run in the regular test suite.

use blrain::model::{validate_params, ConstraintSet, ModelParams, PulseDepthDependence};
use blrain::moments::analytic_moments;
use blrain::simulate::{aggregate, simulate_with, substream, SimOptions};
use blrain::IntensityFamily;
use blrain_testkit::fixtures::{BLIPR_TABLE, BLRPRX_TABLE};
use blrain_testkit::mc_moments;

const JANUARY_HOURS: f64 = 744.0;

fn simulated_bins(
    params: &blrain::ValidatedParams,
    dep: PulseDepthDependence,
    h: f64,
    replicates: usize,
    seed: u64,
) -> Vec<Vec<f64>> {
    let fam = IntensityFamily::Exponential;
    (0..replicates)
        .map(|r| {
            let mut rng = substream(seed, r as u64);
            let series = simulate_with(
                params,
                &fam,
                dep,
                JANUARY_HOURS,
                &SimOptions::default(),
                &mut rng,
            )
            .unwrap();
            aggregate(&series, h).unwrap().depths
        })
        .collect()
}

fn check_model(params: &ModelParams<f64>, dep: PulseDepthDependence, seed: u64, reps: usize) {
    let v = validate_params(params, &ConstraintSet::with_alpha_min(1.0)).unwrap();
    let fam = IntensityFamily::Exponential;
    for h in [1.0 / 12.0, 1.0] {
        let analytic = analytic_moments(params, &fam, dep, h, 1).unwrap();
        let mc = mc_moments(&simulated_bins(&v, dep, h, reps, seed));
        // 4 standard errors at reduced replicate counts keeps the check
        // sharp without being flaky; the acceptance suite runs the full
        // 2000-replicate, 3-SE contract
        assert!(
            mc.mean.z(analytic.mean).abs() < 4.0,
            "mean h={h}: analytic={} mc={}±{}",
            analytic.mean,
            mc.mean.value,
            mc.mean.se
        );
        assert!(
            mc.variance.z(analytic.variance).abs() < 4.0,
            "variance h={h}: analytic={} mc={}±{}",
            analytic.variance,
            mc.variance.value,
            mc.variance.se
        );
        assert!(
            mc.autocov1.z(analytic.autocov[0]).abs() < 4.0,
            "autocov1 h={h}: analytic={} mc={}±{}",
            analytic.autocov[0],
            mc.autocov1.value,
            mc.autocov1.se
        );
        assert!(
            mc.third.z(analytic.third_central).abs() < 4.0,
            "third h={h}: analytic={} mc={}±{}",
            analytic.third_central,
            mc.third.value,
            mc.third.se
        );
    }
}

#[test]
fn blrprx_january_row() {
    let row = &BLRPRX_TABLE[0];
    let params = ModelParams::BlrprX(blrain::model::BlrprxParams {
        lambda: row.lambda,
        iota: row.iota,
        alpha: row.alpha,
        nu: row.nu(),
        kappa: row.kappa,
        phi: row.phi,
    });
    check_model(&params, PulseDepthDependence::Independent, 2024, 500);
}

#[test]
fn blipr_january_row_common_depths() {
    let row = &BLIPR_TABLE[0];
    let params = ModelParams::Blipr(blrain::model::BliprParams {
        lambda: row.lambda,
        mu_x: row.mu_x,
        alpha: row.alpha,
        nu: row.nu(),
        kappa: row.kappa,
        phi: row.phi,
        omega: row.omega,
    });
    check_model(&params, PulseDepthDependence::Common, 7031, 250);
}

#[test]
fn blipr_independent_depths_differ_only_in_dependent_terms() {
    // with independent depths the lag-1 autocovariance and variance shrink
    let row = &BLIPR_TABLE[0];
    let params = ModelParams::Blipr(blrain::model::BliprParams {
        lambda: row.lambda,
        mu_x: row.mu_x,
        alpha: row.alpha,
        nu: row.nu(),
        kappa: row.kappa,
        phi: row.phi,
        omega: row.omega,
    });
    let fam = IntensityFamily::Exponential;
    let common = analytic_moments(&params, &fam, PulseDepthDependence::Common, 1.0, 1).unwrap();
    let indep =
        analytic_moments(&params, &fam, PulseDepthDependence::Independent, 1.0, 1).unwrap();
    assert_eq!(common.mean, indep.mean);
    assert!(common.variance > indep.variance);
    assert!(common.third_central > indep.third_central);
}
