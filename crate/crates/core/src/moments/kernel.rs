//! Gamma-expectation kernel shared by all random-`eta` moment expressions.

use super::MomentsError;
use crate::scalar::{real, Real};

/// Pole guard: `alpha` must clear `k` by at least this margin before we
/// evaluate `Gamma(alpha - k)`.
pub const ALPHA_KERNEL_GUARD: f64 = 1e-6;

/// `E[eta^{-k} e^{-eta s}]` for `eta ~ Gamma(shape alpha, rate nu)`:
///
/// `nu^alpha * Gamma(alpha - k) / (Gamma(alpha) * (nu + s)^(alpha - k))`
///
/// Evaluated as a log-gamma difference so that large `alpha` does not
/// overflow. Requires `alpha > k` (the defining integral diverges at zero
/// otherwise) and `s >= 0`, `nu > 0`.
pub fn gamma_expectation<R: Real>(k: u32, s: R, alpha: R, nu: R) -> Result<R, MomentsError> {
    let kr: R = real(f64::from(k));
    if alpha - kr < real(ALPHA_KERNEL_GUARD) {
        return Err(MomentsError::AlphaTooSmall {
            alpha: alpha.to_f64().unwrap_or(f64::NAN),
            required: f64::from(k),
        });
    }
    if !(nu > R::zero()) || !nu.is_finite() || !(s >= R::zero()) || !alpha.is_finite() {
        // unvalidated parameter vectors from optimizer exploration can
        // underflow or overflow; report rather than produce NaN
        return Err(MomentsError::NonFiniteInput);
    }
    let log = alpha * nu.ln() + (alpha - kr).ln_gamma() - alpha.ln_gamma()
        - (alpha - kr) * (nu + s).ln();
    Ok(log.exp())
}
