//! Large-`n` expansions, used to validate the recurrence far beyond the range
//! of any direct check. With `1/b = x − n + 1 > 0`:
//!
//! ```text
//! f_n(x) ≈ √(1+nb) / (√2 n! e^{1/b}) · (2e/(π n b))^{n/2} · [1 + (1/12 + 1/b + 3/(2b²))/n]
//! V_n(x) ≈ n^{1/2} b^{−(n−1)/2} / ((n−1)! e^{1/b}) · [1 + (3/2)(1/b + 1/b²)/(n−1)]
//! ```
//!
//! with `V_n` the simplex content `2⁻ⁿ n! S_n f_n`. Both are assembled in log
//! space; `log10 f_10000(10000)` is about −42000.

use std::f64::consts::{LN_2, PI};

use crate::schlafli::{ln_factorial, ln_gamma};
use crate::{Error, LogScaledReal, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEstimate {
    pub n: u32,
    pub x: Real,
    /// Leading term, correction bracket set to 1.
    pub leading: LogScaledReal,
    pub with_correction: LogScaledReal,
    pub b: Real,
}

fn inverse_b(n: u32, x: Real) -> Result<Real> {
    let inv_b = x - Real::from(n) + 1.0;
    if inv_b > 0.0 && inv_b.is_finite() {
        Ok(inv_b)
    } else {
        Err(Error::Domain(format!(
            "expansion needs x − n + 1 > 0, got x = {x} for n = {n}"
        )))
    }
}

/// First-order correction factor of the `f_n` expansion.
pub fn rogers_correction(n: u32, b: Real) -> Real {
    1.0 + (1.0 / 12.0 + 1.0 / b + 1.5 / (b * b)) / Real::from(n)
}

/// Rogers' expansion of `f_n(x)`.
pub fn rogers_asymptotic(n: u32, x: Real) -> Result<AsymptoticEstimate> {
    if n < 1 {
        return Err(Error::Domain("expansion needs n >= 1".into()));
    }
    let inv_b = inverse_b(n, x)?;
    let b = 1.0 / inv_b;
    let nf = Real::from(n);
    let ln_leading = 0.5 * (1.0 + nf * b).ln() - 0.5 * LN_2 - ln_factorial(n) - inv_b
        + 0.5 * nf * (2.0 / (PI * nf * b)).ln()
        + 0.5 * nf;
    let ln_corrected = ln_leading + rogers_correction(n, b).ln();
    Ok(AsymptoticEstimate {
        n,
        x,
        leading: LogScaledReal::positive_ln(ln_leading),
        with_correction: LogScaledReal::positive_ln(ln_corrected),
        b,
    })
}

/// Marshall's expansion of the simplex content, with its first correction.
pub fn marshall_volume(n: u32, x: Real) -> Result<LogScaledReal> {
    if n < 2 {
        return Err(Error::Domain("expansion needs n >= 2".into()));
    }
    let inv_b = inverse_b(n, x)?;
    let nf = Real::from(n);
    let ln_leading = 0.5 * nf.ln() + 0.5 * (nf - 1.0) * inv_b.ln() - ln_gamma(nf) - inv_b;
    let correction = 1.0 + 1.5 * (inv_b + inv_b * inv_b) / (nf - 1.0);
    Ok(LogScaledReal::positive_ln(ln_leading + correction.ln()))
}
