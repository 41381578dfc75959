//! Scalar abstraction for the analytic core.
//!
//! The closed-form moment expressions are ordinary real arithmetic plus
//! log-gamma, so they are written once over [`Real`] and instantiated at
//! `f64` (the default used by the simulator, fitter and CLI) or `f32`.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar with the special functions the moment formulas need.
pub trait Real:
    Float
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Natural log of the gamma function.
    fn ln_gamma(self) -> Self;
}

impl Real for f64 {
    fn ln_gamma(self) -> Self {
        libm::lgamma(self)
    }
}

impl Real for f32 {
    fn ln_gamma(self) -> Self {
        libm::lgammaf(self)
    }
}

/// Convert an `f64` literal into the working scalar type.
///
/// Panics only if the literal is not representable, which cannot happen for
/// the in-range constants used by this crate.
#[inline]
pub fn real<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("literal must be representable in the scalar type")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_matches_factorials() {
        for (n, fact) in [(1.0, 1.0), (2.0, 1.0), (3.0, 2.0), (5.0, 24.0), (7.0, 720.0)] {
            let lg: f64 = Real::ln_gamma(n);
            assert!((lg - f64::ln(fact)).abs() < 1e-12, "lgamma({n})");
        }
    }

    #[test]
    fn f32_ln_gamma_consistent_with_f64() {
        for x in [0.5f32, 1.3, 2.7, 6.0, 9.5] {
            let a = Real::ln_gamma(x);
            let b = Real::ln_gamma(x as f64) as f32;
            assert!((a - b).abs() <= 1e-4 * (1.0 + b.abs()));
        }
    }
}
