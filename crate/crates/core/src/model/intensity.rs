//! Cell-intensity / pulse-depth distributions and within-cell dependence.

use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::scalar::{real, Real};

/// One-parameter family for the random intensity (rectangular variants, mm/h)
/// or pulse depth (instantaneous variants, mm). The mean is supplied per use;
/// any shape parameter is fixed by configuration, not fitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum IntensityFamily<R> {
    Exponential,
    Gamma { shape: R },
    Weibull { shape: R },
}

impl<R: Real> IntensityFamily<R> {
    pub fn name(&self) -> &'static str {
        match self {
            IntensityFamily::Exponential => "exponential",
            IntensityFamily::Gamma { .. } => "gamma",
            IntensityFamily::Weibull { .. } => "weibull",
        }
    }

    fn shape_checked(&self) -> Result<Option<R>, ModelError> {
        let shape = match self {
            IntensityFamily::Exponential => return Ok(None),
            IntensityFamily::Gamma { shape } => *shape,
            IntensityFamily::Weibull { shape } => *shape,
        };
        if !(shape > R::zero()) || !shape.is_finite() {
            return Err(ModelError::UnsupportedShape {
                shape: shape.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Some(shape))
    }

    /// Raw moment `E[X^r]` for a member of the family with unit mean.
    ///
    /// Exponential: `r!`. Weibull with shape `k` and mean-one scale
    /// `1/Gamma(1 + 1/k)`: `Gamma(1 + r/k) / Gamma(1 + 1/k)^r`. Gamma with
    /// shape `s`: `prod_{i<r} (1 + i/s)`.
    fn unit_moment(&self, r: u32) -> Result<R, ModelError> {
        let one = R::one();
        match self.shape_checked()? {
            None => Ok(real(match r {
                0 => 1.0,
                1 => 1.0,
                2 => 2.0,
                3 => 6.0,
                _ => (1..=r).map(f64::from).product(),
            })),
            Some(shape) => match self {
                IntensityFamily::Gamma { .. } => {
                    let mut m = one;
                    for i in 0..r {
                        m *= one + real::<R>(f64::from(i)) / shape;
                    }
                    Ok(m)
                }
                IntensityFamily::Weibull { .. } => {
                    let rr: R = real(f64::from(r));
                    let ln = (one + rr / shape).ln_gamma() - rr * (one + one / shape).ln_gamma();
                    Ok(ln.exp())
                }
                IntensityFamily::Exponential => unreachable!(),
            },
        }
    }

    /// Moment ratio `f_r = E[X^r] / E[X]^r`; scale-free, so it depends only
    /// on the family and shape.
    pub fn moment_ratio(&self, r: u32) -> Result<R, ModelError> {
        self.unit_moment(r)
    }
}

/// A family together with its mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntensityLaw<R> {
    #[serde(flatten)]
    pub family: IntensityFamily<R>,
    pub mean: R,
}

/// First three raw moments of an intensity law plus the dimensionless ratios
/// `f1 = E[X^2]/mu^2` and `f2 = E[X^3]/mu^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntensityMoments<R> {
    pub mean: R,
    pub second: R,
    pub third: R,
    pub f1: R,
    pub f2: R,
}

/// Closed-form moments of the chosen family at the law's mean.
pub fn intensity_moments<R: Real>(law: &IntensityLaw<R>) -> Result<IntensityMoments<R>, ModelError> {
    let f1 = law.family.moment_ratio(2)?;
    let f2 = law.family.moment_ratio(3)?;
    let mu = law.mean;
    Ok(IntensityMoments {
        mean: mu,
        second: f1 * mu * mu,
        third: f2 * mu * mu * mu,
        f1,
        f2,
    })
}

/// Dependence structure of pulse depths within a single cell (instantaneous
/// variants). Depths from distinct cells are always independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseDepthDependence {
    /// Every pulse draws its own depth.
    Independent,
    /// All pulses of a cell share one drawn depth (the most extreme form of
    /// within-cell dependence).
    Common,
}

impl PulseDepthDependence {
    /// `E[X_ijk X_ijl]` for two distinct pulses of the same cell.
    pub fn product2<R: Real>(self, m: &IntensityMoments<R>) -> R {
        match self {
            PulseDepthDependence::Independent => m.mean * m.mean,
            PulseDepthDependence::Common => m.second,
        }
    }

    /// `E[X_ijk X_ijl X_ijm]` for three distinct pulses of the same cell.
    pub fn product3<R: Real>(self, m: &IntensityMoments<R>) -> R {
        match self {
            PulseDepthDependence::Independent => m.mean * m.mean * m.mean,
            PulseDepthDependence::Common => m.third,
        }
    }

    /// `E[X_ijk^2 X_ijl]` for two distinct pulses of the same cell.
    pub fn product2_1<R: Real>(self, m: &IntensityMoments<R>) -> R {
        match self {
            PulseDepthDependence::Independent => m.second * m.mean,
            PulseDepthDependence::Common => m.third,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_moments() {
        let law: IntensityLaw<f64> = IntensityLaw { family: IntensityFamily::Exponential, mean: 2.0 };
        let m = intensity_moments(&law).unwrap();
        assert_eq!(m.second, 8.0);
        assert_eq!(m.third, 48.0);
        assert_eq!(m.f1, 2.0);
        assert_eq!(m.f2, 6.0);
    }

    #[test]
    fn weibull_shape_one_is_exponential() {
        let law: IntensityLaw<f64> = IntensityLaw { family: IntensityFamily::Weibull { shape: 1.0 }, mean: 3.0 };
        let m = intensity_moments(&law).unwrap();
        assert!((m.f1 - 2.0).abs() < 1e-12);
        assert!((m.f2 - 6.0).abs() < 1e-12);
    }

    #[test]
    fn weibull_heavy_shape_ratios() {
        // Frozen from numerical integration of the Weibull density
        // (panel-split adaptive Simpson, rel. tol. 1e-12).
        let fam = IntensityFamily::Weibull { shape: 0.6f64 };
        assert!((fam.moment_ratio(2).unwrap() - 4.090795761378).abs() < 1e-9);
        assert!((fam.moment_ratio(3).unwrap() - 35.232162413754).abs() < 1e-8);
    }

    #[test]
    fn gamma_moment_product_form() {
        // shape 2, mean 3: E X^2 = 9 * (1 + 1/2) = 13.5, E X^3 = 27 * 1.5 * 2 = 81
        let law: IntensityLaw<f64> = IntensityLaw { family: IntensityFamily::Gamma { shape: 2.0 }, mean: 3.0 };
        let m = intensity_moments(&law).unwrap();
        assert!((m.second - 13.5).abs() < 1e-12);
        assert!((m.third - 81.0).abs() < 1e-12);
    }

    #[test]
    fn nonpositive_shape_rejected() {
        let fam = IntensityFamily::Weibull { shape: 0.0f64 };
        assert!(matches!(fam.moment_ratio(2), Err(ModelError::UnsupportedShape { .. })));
    }

    #[test]
    fn jensen_consistency_across_families() {
        let families: Vec<IntensityFamily<f64>> = vec![
            IntensityFamily::Exponential,
            IntensityFamily::Gamma { shape: 0.7 },
            IntensityFamily::Gamma { shape: 4.0 },
            IntensityFamily::Weibull { shape: 0.6 },
            IntensityFamily::Weibull { shape: 2.5 },
        ];
        for fam in families {
            let f1 = fam.moment_ratio(2).unwrap();
            let f2 = fam.moment_ratio(3).unwrap();
            assert!(f1 >= 1.0, "{fam:?}");
            assert!(f2 >= f1, "{fam:?}");
        }
    }

    #[test]
    fn common_dominates_independent_products() {
        let laws: [IntensityLaw<f64>; 3] = [
            IntensityLaw { family: IntensityFamily::Exponential, mean: 0.8 },
            IntensityLaw { family: IntensityFamily::Weibull { shape: 0.6 }, mean: 1.7 },
            IntensityLaw { family: IntensityFamily::Gamma { shape: 3.0 }, mean: 0.2 },
        ];
        for law in laws {
            let m = intensity_moments(&law).unwrap();
            let c = PulseDepthDependence::Common;
            let i = PulseDepthDependence::Independent;
            assert!(c.product2(&m) >= i.product2(&m));
            assert!(c.product3(&m) >= i.product3(&m));
            assert!(c.product2_1(&m) >= i.product2_1(&m));
        }
    }
}
