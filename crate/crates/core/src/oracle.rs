//! Reference values of `f_n` for `4 ≤ n ≤ 7` by direct nested quadrature of
//!
//! ```text
//! f_n(x) = (1/π) ∫_{n−1}^{x} f_{n−2}(z−2) / (z √(z²−1)) dz
//! ```
//!
//! `f_2`/`f_3` are closed forms, so `n = 4, 5` need one integral and `n = 6, 7`
//! two. Nothing here touches the Chebyshev machinery.
//!
//! Near `z = n−1` the inner factor behaves like `(z−n+1)^{(n−3)/2}`, which for
//! `n = 4, 6` is a half-integer power. Substituting `z = n−1+s²` makes every
//! integrand smooth in `s`.

use std::f64::consts::PI;

use crate::quad::{integrate, QuadOptions};
use crate::schlafli::{arcsec, f_closed, ln_prefactor};
use crate::{Error, Real, Result};

/// Absolute error target for integrals over closed-form integrands.
pub const DEPTH1_ABS_TOL: Real = 1e-10;
/// Absolute error target for the outer integral of `n = 6, 7`.
pub const DEPTH2_ABS_TOL: Real = 1e-8;
/// Relative error target applied alongside the absolute ones.
pub const REL_TOL: Real = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub n: u32,
    pub x: Real,
    pub value: Real,
    pub quad_err: Real,
}

fn check(n: u32, x: Real) -> Result<()> {
    if !(4..=7).contains(&n) {
        return Err(Error::Domain(format!(
            "quadrature reference covers 4 <= n <= 7, got {n}"
        )));
    }
    let nf = Real::from(n);
    if !(nf - 1.0..=nf + 1.0).contains(&x) {
        return Err(Error::out_of_range(
            format!("x for f_{n}"),
            x,
            nf - 1.0,
            nf + 1.0,
        ));
    }
    Ok(())
}

/// `f_n(x)` for `n ∈ {4, 5, 6, 7}` and `x ∈ [n−1, n+1]`.
pub fn oracle_f(n: u32, x: Real) -> Result<OracleResult> {
    check(n, x)?;
    let nf = Real::from(n);
    let lower = nf - 1.0;
    let s_max = (x - lower).sqrt();
    let depth2 = n >= 6;
    let opts = QuadOptions {
        abs_tol: if depth2 {
            DEPTH2_ABS_TOL
        } else {
            DEPTH1_ABS_TOL
        },
        rel_tol: REL_TOL,
        max_panels: 500,
    };
    let mut inner_err: Real = 0.0;
    let r = integrate(
        |s| {
            let z = lower + s * s;
            let inner = if depth2 {
                let r = oracle_f(n - 2, (z - 2.0).max(nf - 3.0))?;
                inner_err = inner_err.max(r.quad_err);
                r.value
            } else {
                f_closed(n - 2, z - 2.0)?
            };
            Ok(2.0 * s * inner / (PI * z * ((z - 1.0) * (z + 1.0)).sqrt()))
        },
        0.0,
        s_max,
        &opts,
    )?;
    // The weight 1/(π z √(z²−1)) integrates to (arcsec x − arcsec(n−1))/π.
    let weight = (arcsec(x)? - arcsec(lower)?) / PI;
    Ok(OracleResult {
        n,
        x,
        value: r.value,
        quad_err: r.error + inner_err * weight,
    })
}

/// `q_n(x) = f_n(x) / (P_n (x−n+1)^{(n−1)/2})` from [`oracle_f`]; needs `x > n−1`.
pub fn oracle_qn(n: u32, x: Real) -> Result<OracleResult> {
    check(n, x)?;
    let nf = Real::from(n);
    if x <= nf - 1.0 {
        return Err(Error::Domain(format!(
            "q_{n} at the left endpoint is 1 by normalization; the quadrature ratio needs x > {}",
            nf - 1.0
        )));
    }
    let f = oracle_f(n, x)?;
    let scale = (ln_prefactor(n)? + 0.5 * (nf - 1.0) * (x - nf + 1.0).ln()).exp();
    Ok(OracleResult {
        n,
        x,
        value: f.value / scale,
        quad_err: f.quad_err / scale,
    })
}
