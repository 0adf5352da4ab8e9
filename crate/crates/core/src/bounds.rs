//! Sphere-packing, kissing-number and quantizer bounds from `f_n(n)`.

use serde::Serialize;

use crate::schlafli::{ln_ball_volume, ln_factorial, SchlafliEvaluator, SchlafliValue};
use crate::{Error, LogScaledReal, Real, Result};

/// `H_m = Σ_{i=1..m} 1/i`, summed left to right.
pub fn harmonic(m: u64) -> Real {
    (1..=m).map(|i| 1.0 / i as Real).sum()
}

/// Rogers' density bound `2^{−3n/2} (n+1)^{1/2} (n!)² f_n(n) [V_n]`.
pub fn rogers_bound(
    eval: &mut SchlafliEvaluator,
    n: u32,
    include_vn: bool,
) -> Result<LogScaledReal> {
    let f = eval.f(n, Real::from(n))?;
    Ok(rogers_from(n, &f, include_vn))
}

fn rogers_from(n: u32, f_nn: &SchlafliValue, include_vn: bool) -> LogScaledReal {
    let nf = Real::from(n);
    let mut ln = -1.5 * nf * std::f64::consts::LN_2 + 0.5 * (nf + 1.0).ln() + 2.0 * ln_factorial(n);
    if include_vn {
        ln += ln_ball_volume(n);
    }
    f_nn.value * LogScaledReal::positive_ln(ln)
}

/// Coxeter's kissing-number bound `⌊2 f_{n−1}(n) / f_n(n)⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoxeterBound {
    pub value: u64,
    /// `2 f_{n−1}(n) / f_n(n)` before flooring.
    pub ratio: Real,
    pub ratio_err: Real,
    /// The ratio sits within `10·ratio_err` of an integer, so the floor is not
    /// certain.
    pub ambiguous: bool,
}

pub fn coxeter_bound(eval: &mut SchlafliEvaluator, n: u32) -> Result<CoxeterBound> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "Coxeter bound needs n >= 3, got {n}"
        )));
    }
    let x = Real::from(n);
    let upper = eval.f(n - 1, x)?;
    let lower = eval.f(n, x)?;
    Ok(coxeter_from(&upper, &lower))
}

fn coxeter_from(f_prev: &SchlafliValue, f_nn: &SchlafliValue) -> CoxeterBound {
    let ratio = 2.0 * (f_prev.value / f_nn.value).to_real();
    let ratio_err = ratio * (f_prev.rel_err_estimate + f_nn.rel_err_estimate);
    let ambiguous = (ratio - ratio.round()).abs() < 10.0 * ratio_err;
    CoxeterBound {
        value: ratio.floor() as u64,
        ratio,
        ratio_err,
        ambiguous,
    }
}

/// Conway–Sloane lower bound on the mean-squared error of an optimal quantizer,
/// `(n+3−2H_{n+2}) / (4n(n+1)) · (n+1)^{1/n} (n!)^{4/n} f_n(n)^{2/n}`.
pub fn quantizer_bound(eval: &mut SchlafliEvaluator, n: u32) -> Result<Real> {
    if n < 1 {
        return Err(Error::Domain("quantizer bound needs n >= 1".into()));
    }
    let f = eval.f(n, Real::from(n))?;
    Ok(quantizer_from(n, &f))
}

fn quantizer_from(n: u32, f_nn: &SchlafliValue) -> Real {
    let nf = Real::from(n);
    let lead = (nf + 3.0 - 2.0 * harmonic(u64::from(n) + 2)) / (4.0 * nf * (nf + 1.0));
    let ln_rest = ((nf + 1.0).ln() + 4.0 * ln_factorial(n) + 2.0 * f_nn.value.ln_abs()) / nf;
    lead * ln_rest.exp()
}

/// All three bounds for one `n`, with the Schläfli values they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub n: u32,
    /// Rogers bound including the unit-ball factor `V_n`.
    pub rogers_density: LogScaledReal,
    /// Rogers bound without `V_n`.
    pub rogers_density_no_vn: LogScaledReal,
    /// `None` for `n < 3`.
    pub coxeter: Option<CoxeterBound>,
    pub quantizer_msre: Real,
    pub f_n_n: SchlafliValue,
    pub f_nm1_n: Option<SchlafliValue>,
}

pub fn bounds_report(eval: &mut SchlafliEvaluator, n: u32) -> Result<BoundsReport> {
    if n < 1 {
        return Err(Error::Domain("bounds need n >= 1".into()));
    }
    let x = Real::from(n);
    let f_n_n = eval.f(n, x)?;
    let f_nm1_n = if n >= 3 {
        Some(eval.f(n - 1, x)?)
    } else {
        None
    };
    Ok(BoundsReport {
        n,
        rogers_density: rogers_from(n, &f_n_n, true),
        rogers_density_no_vn: rogers_from(n, &f_n_n, false),
        coxeter: f_nm1_n.as_ref().map(|prev| coxeter_from(prev, &f_n_n)),
        quantizer_msre: quantizer_from(n, &f_n_n),
        f_n_n,
        f_nm1_n,
    })
}
