//! Special functions behind the displaced-oscillator matrix elements:
//! associated Laguerre polynomials, log-factorials, and matrix elements
//! of the displacement operator exp[α(a† − a)] between Fock states.
//!
//! Everything here is pure and stateless.

use crate::{RabiError, Result};

/// Associated Laguerre polynomial L_n^k(x) by the upward three-term
/// recurrence
///
/// ```text
/// m L_m^k(x) = (2m - 1 + k - x) L_{m-1}^k(x) - (m - 1 + k) L_{m-2}^k(x)
/// ```
///
/// which is stable for x ≥ 0, the only regime that occurs here (the
/// arguments are 4λ²).
pub fn laguerre(n: usize, k: usize, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(RabiError::InvalidArgument(format!(
            "laguerre argument must be finite and non-negative, got {x}"
        )));
    }
    if n > 500 {
        return Err(RabiError::InvalidArgument(format!(
            "laguerre degree {n} exceeds the supported maximum 500"
        )));
    }
    let k = k as f64;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0; // L_0
    let mut cur = 1.0 + k - x; // L_1
    for m in 2..=n {
        let m = m as f64;
        let next = ((2.0 * m - 1.0 + k - x) * cur - (m - 1.0 + k) * prev) / m;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// ln(n!), evaluated through the log-gamma function so that factorial
/// ratios like √(M!/N!) never overflow.
pub fn log_factorial(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    statrs::function::gamma::ln_gamma(n as f64 + 1.0)
}

/// Matrix element ⟨N| exp[α(a† − a)] |M⟩ of the displacement operator
/// between Fock states, for real α:
///
/// ```text
/// ⟨N|D(α)|M⟩ = √(M!/N!) α^{N-M} e^{-α²/2} L_M^{N-M}(α²)    (N ≥ M)
/// ⟨N|D(α)|M⟩ = (-1)^{M-N} ⟨M|D(α)|N⟩                        (N < M)
/// ```
///
/// The magnitude goes through log space; only the sign is assembled
/// separately.
pub fn displacement_element(alpha: f64, n: usize, m: usize) -> f64 {
    if n < m {
        let sign = if (m - n) % 2 == 0 { 1.0 } else { -1.0 };
        return sign * displacement_element(alpha, m, n);
    }
    let d = n - m;
    if alpha == 0.0 {
        return if d == 0 { 1.0 } else { 0.0 };
    }
    // laguerre cannot fail here: α² is finite and non-negative, M ≤ 500
    // for any truncation used in this crate.
    let lag = laguerre(m, d, alpha * alpha).expect("laguerre on valid displacement argument");
    let log_mag = 0.5 * (log_factorial(m) - log_factorial(n)) + (d as f64) * alpha.abs().ln()
        - 0.5 * alpha * alpha;
    let alpha_sign = if alpha < 0.0 && d % 2 == 1 { -1.0 } else { 1.0 };
    alpha_sign * lag * log_mag.exp()
}
