//! Parity identities with tanh-series coefficients:
//!
//! ```text
//! f_n(x) = f_{n−1}(x) − (1/3) f_{n−3}(x) + (2/15) f_{n−5}(x) − …     n odd
//! f_n(n) = (1/3) f_{n−2}(n) − (2/15) f_{n−4}(n) + (17/315) f_{n−6}(n) − …   n even
//! ```
//!
//! Both end at `f_0 = 1`. An odd `f_n` computed on the odd chain is compared
//! against a combination of even-chain values, so the identities tie the two
//! chains together.
//!
//! Most terms sit outside their own `[m−1, m+1]` window. Under
//! [`TermPolicy::Strict`] such a term is a domain error. Under
//! [`TermPolicy::Continued`] it is carried to the right of its window by
//! integrating the Schläfli recurrence from the window's right end,
//!
//! ```text
//! f_m(x) = f_m(m+1) + (1/π) ∫_{m+1}^{x} f_{m−2}(z−2) / (z √(z²−1)) dz,
//! ```
//!
//! where the inner term is again either in its window, a closed form, or
//! continued the same way.

use std::f64::consts::PI;

use num_rational::Ratio;

use crate::quad::{integrate, QuadOptions};
use crate::schlafli::{f_closed, SchlafliEvaluator};
use crate::{Error, Real, Result};

/// Highest power of the tanh series whose coefficient is tabulated.
pub const MAX_TANH_ORDER: u32 = 25;

/// Absolute value of the tanh Maclaurin coefficients of `x, x³, x⁵, …`:
/// `1, 1/3, 2/15, 17/315, 62/2835, …`, exactly.
///
/// Uses the tangent numbers `T_k = tan^{(2k−1)}(0)` from the in-place
/// recurrence `T_j ← (j−k) T_{j−1} + (j−k+2) T_j` and divides by `(2k−1)!`.
pub fn tanh_coefficients(count: usize) -> Result<Vec<Ratio<u128>>> {
    if count > (MAX_TANH_ORDER as usize).div_ceil(2) {
        return Err(Error::Domain(format!(
            "tanh coefficients are tabulated up to order {MAX_TANH_ORDER}"
        )));
    }
    let mut t = vec![0u128; count + 1];
    if count > 0 {
        t[1] = 1;
    }
    for k in 2..=count {
        t[k] = (k as u128 - 1) * t[k - 1];
    }
    for k in 2..=count {
        for j in k..=count {
            t[j] = (j - k) as u128 * t[j - 1] + (j - k + 2) as u128 * t[j];
        }
    }
    let mut factorial: u128 = 1;
    let mut out = Vec::with_capacity(count);
    for (k, &tk) in t.iter().enumerate().skip(1) {
        let odd = 2 * k as u128 - 1;
        if k > 1 {
            factorial *= (odd - 1) * odd;
        }
        out.push(Ratio::new(tk, factorial));
    }
    Ok(out)
}

fn ratio_to_real(r: &Ratio<u128>) -> Real {
    *r.numer() as Real / *r.denom() as Real
}

/// How to treat a term `f_m(x)` whose `x` lies outside `[m−1, m+1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermPolicy {
    /// Reject it with a domain error naming the term.
    Strict,
    /// Continue `f_m` to the right by quadrature, anchored at `f_m(m+1)`.
    Continued,
}

/// Both sides of an identity, with an error estimate for their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: Real,
    pub rhs: Real,
    pub err_estimate: Real,
}

impl IdentityCheck {
    pub fn residual(&self) -> Real {
        (self.lhs - self.rhs).abs()
    }
}

const CONTINUATION_OPTS: QuadOptions = QuadOptions {
    abs_tol: 1e-13,
    rel_tol: 1e-12,
    max_panels: 200,
};

/// `f_m(x)` under `policy`, with an absolute error estimate.
///
/// Closed forms for `m ≤ 3`, the Chebyshev solution inside `[m−1, m+1]`,
/// and the continuation integral beyond `m+1` when allowed.
pub fn term_value(
    eval: &mut SchlafliEvaluator,
    m: u32,
    x: Real,
    policy: TermPolicy,
) -> Result<(Real, Real)> {
    if m <= 3 {
        return Ok((f_closed(m, x)?, 4.0 * Real::EPSILON));
    }
    let mf = Real::from(m);
    if (mf - 1.0..=mf + 1.0).contains(&x) {
        let v = eval.f(m, x)?;
        return Ok((v.to_real(), v.abs_err_estimate));
    }
    if policy == TermPolicy::Strict || x < mf - 1.0 {
        return Err(Error::Domain(format!(
            "term f_{m}({x}) lies outside [{}, {}]",
            mf - 1.0,
            mf + 1.0
        )));
    }
    let anchor = eval.f(m, mf + 1.0)?;
    let mut inner_err: Real = 0.0;
    let r = integrate(
        |z| {
            let (v, e) = term_value(eval, m - 2, z - 2.0, policy)?;
            inner_err = inner_err.max(e);
            Ok(v / (PI * z * ((z - 1.0) * (z + 1.0)).sqrt()))
        },
        mf + 1.0,
        x,
        &CONTINUATION_OPTS,
    )?;
    let weight = (f_closed(2, x)? - f_closed(2, mf + 1.0)?).abs();
    Ok((
        anchor.to_real() + r.value,
        anchor.abs_err_estimate + r.error + inner_err * weight,
    ))
}

/// Odd-`n` identity at `x ∈ [n−1, n+1]`: `lhs = f_n(x)` from the odd chain,
/// `rhs = Σ_j (−1)^j t_j f_{n−1−2j}(x)` from even-chain values and `f_0 = 1`.
pub fn identity_check_odd(
    eval: &mut SchlafliEvaluator,
    n: u32,
    x: Real,
    policy: TermPolicy,
) -> Result<IdentityCheck> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "odd identity needs odd n >= 5, got {n}"
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
    let coeffs = tanh_coefficients(n.div_ceil(2) as usize)?;
    let lhs = eval.f(n, x)?;
    let mut rhs = 0.0;
    let mut err = lhs.abs_err_estimate;
    for (j, t) in coeffs.iter().enumerate() {
        let m = n - 1 - 2 * j as u32;
        let (v, e) = term_value(eval, m, x, policy)?;
        let t = ratio_to_real(t);
        let signed = if j % 2 == 0 { t } else { -t };
        rhs += signed * v;
        err += t * e;
    }
    Ok(IdentityCheck {
        lhs: lhs.to_real(),
        rhs,
        err_estimate: err,
    })
}

/// Even-`n` endpoint identity: `lhs = f_n(n)`,
/// `rhs = Σ_{j≥1} (−1)^{j+1} t_j f_{n−2j}(n)`.
///
/// Under [`TermPolicy::Strict`] only `n = 4` is fully evaluable; `n = 6` fails
/// on `f_4(6)`.
pub fn even_endpoint_identity(
    eval: &mut SchlafliEvaluator,
    n: u32,
    policy: TermPolicy,
) -> Result<IdentityCheck> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::Domain(format!(
            "endpoint identity needs even n >= 4, got {n}"
        )));
    }
    let x = Real::from(n);
    let coeffs = tanh_coefficients(n as usize / 2 + 1)?;
    let lhs = eval.f(n, x)?;
    let mut rhs = 0.0;
    let mut err = lhs.abs_err_estimate;
    for (j, t) in coeffs.iter().enumerate().skip(1) {
        let m = n - 2 * j as u32;
        let (v, e) = term_value(eval, m, x, policy)?;
        let t = ratio_to_real(t);
        let signed = if j % 2 == 1 { t } else { -t };
        rhs += signed * v;
        err += t * e;
    }
    Ok(IdentityCheck {
        lhs: lhs.to_real(),
        rhs,
        err_estimate: err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schlafli::arcsec;

    #[test]
    fn tanh_series() {
        let c = tanh_coefficients(6).unwrap();
        let expected = [
            (1, 1),
            (1, 3),
            (2, 15),
            (17, 315),
            (62, 2835),
            (1382, 155_925),
        ];
        for (got, (p, q)) in c.iter().zip(expected) {
            assert_eq!(*got, Ratio::new(p, q));
        }
        assert_eq!(tanh_coefficients(13).unwrap().len(), 13);
        assert!(tanh_coefficients(14).is_err());
    }

    #[test]
    fn tanh_series_matches_function() {
        // Σ (−1)^k c_k x^{2k+1} at x = 0.3 against tanh itself.
        let c = tanh_coefficients(13).unwrap();
        let x: Real = 0.3;
        let s: Real = c
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * ratio_to_real(r) * x.powi(2 * k as i32 + 1)
            })
            .sum();
        assert!((s - x.tanh()).abs() < 1e-15);
    }

    #[test]
    fn endpoint_identity_n4() {
        let mut ev = SchlafliEvaluator::new(30).unwrap();
        let r = even_endpoint_identity(&mut ev, 4, TermPolicy::Strict).unwrap();
        let closed = arcsec(4.0).unwrap() / (3.0 * PI) - 2.0 / 15.0;
        assert!((r.rhs - closed).abs() < 1e-15);
        assert!((r.rhs - 0.006_523_1).abs() < 1e-7);
        assert!(r.residual() < 1e-10);
    }

    #[test]
    fn endpoint_identity_n6_strict_names_term() {
        let mut ev = SchlafliEvaluator::new(30).unwrap();
        let err = even_endpoint_identity(&mut ev, 6, TermPolicy::Strict).unwrap_err();
        assert!(err.to_string().contains("f_4(6)"), "{err}");
    }

    #[test]
    fn endpoint_identity_continued() {
        let mut ev = SchlafliEvaluator::new(30).unwrap();
        for n in [6, 8, 10] {
            let r = even_endpoint_identity(&mut ev, n, TermPolicy::Continued).unwrap();
            assert!(r.residual() < 1e-10, "n = {n}: {r:?}");
        }
    }

    #[test]
    fn odd_identity_strict() {
        let mut ev = SchlafliEvaluator::new(30).unwrap();
        let r = identity_check_odd(&mut ev, 5, 4.5, TermPolicy::Strict).unwrap();
        assert!(r.residual() < 1e-9);
        let at_left = identity_check_odd(&mut ev, 5, 4.0, TermPolicy::Strict).unwrap();
        assert_eq!(at_left.lhs, 0.0);
        assert!(at_left.rhs.abs() < 1e-14);
        let err = identity_check_odd(&mut ev, 5, 5.5, TermPolicy::Strict).unwrap_err();
        assert!(err.to_string().contains("f_4"), "{err}");
        assert!(identity_check_odd(&mut ev, 7, 6.5, TermPolicy::Strict).is_err());
        assert!(identity_check_odd(&mut ev, 6, 6.0, TermPolicy::Strict).is_err());
    }

    #[test]
    fn odd_identity_continued() {
        let mut ev = SchlafliEvaluator::new(30).unwrap();
        let r = identity_check_odd(&mut ev, 7, 6.5, TermPolicy::Continued).unwrap();
        assert!(r.residual() < 1e-8, "{r:?}");
        let r = identity_check_odd(&mut ev, 5, 5.8, TermPolicy::Continued).unwrap();
        assert!(r.residual() < 1e-8, "{r:?}");
    }
}
