//! The Schläfli function `f_n(x)` and the simplex content built from it.
//!
//! For `n ≥ 4` the value on `[n−1, n+1]` is assembled as
//!
//! ```text
//! f_n(x) = P_n · (x − n + 1)^{(n−1)/2} · q_n(x)
//! P_n    = 2ⁿ √n (n/2)! / (π^{n/2} (n!)²)             n even
//! P_n    = √n / (π^{(n−1)/2} n! ((n−1)/2)!)           n odd
//! ```
//!
//! entirely in log space, since `(n!)²` leaves the `f64` range near `n = 85`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::recurrence::{seed_q2, seed_q3, Parity, QnChain, QnSolution};
use crate::{Error, LogScaledReal, Real, Result};

/// `ln Γ(x)`.
pub fn ln_gamma(x: Real) -> Real {
    libm::lgamma(x)
}

/// `ln n!`.
pub fn ln_factorial(n: u32) -> Real {
    ln_gamma(Real::from(n) + 1.0)
}

/// `arcsec x ∈ [0, π]` for `|x| ≥ 1`.
///
/// Evaluated as `atan √((x−1)(x+1))` (reflected for `x ≤ −1`), which stays
/// accurate right up to `|x| = 1` and tends to `π/2` as `|x| → ∞`.
pub fn arcsec(x: Real) -> Result<Real> {
    if x.is_nan() || x.abs() < 1.0 {
        return Err(Error::Domain(format!("arcsec needs |x| >= 1, got {x}")));
    }
    let principal = ((x - 1.0) * (x + 1.0)).sqrt().atan();
    Ok(if x > 0.0 { principal } else { PI - principal })
}

/// Closed forms: `f_0 = f_1 = 1`, `f_2 = arcsec(x)/π`, `f_3 = arcsec(x)/π − 1/3`.
pub fn f_closed(n: u32, x: Real) -> Result<Real> {
    match n {
        0 | 1 => Ok(1.0),
        2 => Ok(arcsec(x)? / PI),
        3 => Ok(arcsec(x)? / PI - 1.0 / 3.0),
        _ => Err(Error::Domain(format!("no closed form for n = {n}"))),
    }
}

/// `ln P_n`, the parity-dependent prefactor. Requires `n ≥ 2`.
pub fn ln_prefactor(n: u32) -> Result<Real> {
    if n < 2 {
        return Err(Error::Domain(format!("prefactor needs n >= 2, got {n}")));
    }
    let nf = Real::from(n);
    let ln_pi = PI.ln();
    Ok(if n.is_multiple_of(2) {
        nf * std::f64::consts::LN_2 + 0.5 * nf.ln() + ln_factorial(n / 2)
            - 0.5 * nf * ln_pi
            - 2.0 * ln_factorial(n)
    } else {
        0.5 * nf.ln() - 0.5 * (nf - 1.0) * ln_pi - ln_factorial(n) - ln_factorial((n - 1) / 2)
    })
}

/// [`ln_prefactor`] as a [`LogScaledReal`].
pub fn log_prefactor(n: u32) -> Result<LogScaledReal> {
    ln_prefactor(n).map(LogScaledReal::positive_ln)
}

/// `ln S_n`, with `S_n = 2π^{n/2}/Γ(n/2)` the content of the unit sphere in `ℝⁿ`.
pub fn ln_sphere_content(n: u32) -> Real {
    let nf = Real::from(n);
    std::f64::consts::LN_2 + 0.5 * nf * PI.ln() - ln_gamma(0.5 * nf)
}

/// `ln V_n`, with `V_n = π^{n/2}/Γ(n/2+1)` the volume of the unit ball in `ℝⁿ`.
pub fn ln_ball_volume(n: u32) -> Real {
    let nf = Real::from(n);
    0.5 * nf * PI.ln() - ln_gamma(0.5 * nf + 1.0)
}

/// A value of `f_n(x)` with its propagated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchlafliValue {
    pub n: u32,
    pub x: Real,
    pub value: LogScaledReal,
    /// Absolute error estimate; underflows to 0 together with the value.
    pub abs_err_estimate: Real,
    /// Relative error estimate, `ε / q_n(x)`.
    pub rel_err_estimate: Real,
}

impl SchlafliValue {
    pub fn to_real(&self) -> Real {
        self.value.to_real()
    }
}

/// Evaluates `f_n`, `q_n` and simplex contents, caching one chain per parity.
///
/// Every solution on a chain is kept, so asking for `n` and later `n − 2` or
/// `n + 2` costs nothing extra. Not shared between threads; build one per
/// worker.
#[derive(Debug, Clone)]
pub struct SchlafliEvaluator {
    order: usize,
    even: QnChain,
    odd: QnChain,
    solved: BTreeMap<u32, QnSolution>,
}

impl SchlafliEvaluator {
    pub fn new(order: usize) -> Result<Self> {
        Ok(Self {
            order,
            even: QnChain::new(Parity::Even, order)?,
            odd: QnChain::new(Parity::Odd, order)?,
            solved: BTreeMap::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The `q_n` series for `n ≥ 4`.
    pub fn solution(&mut self, n: u32) -> Result<&QnSolution> {
        if n < 4 {
            return Err(Error::Domain(format!(
                "q_n series exist for n >= 4, got {n}"
            )));
        }
        if !self.solved.contains_key(&n) {
            let chain = match Parity::of(n) {
                Parity::Even => &mut self.even,
                Parity::Odd => &mut self.odd,
            };
            for sol in chain.by_ref() {
                let sol = sol?;
                let done = sol.n == n;
                self.solved.insert(sol.n, sol);
                if done {
                    break;
                }
            }
        }
        Ok(&self.solved[&n])
    }

    /// `q_n(x)` on `[n−1, n+1]` for `n ≥ 2`; `n = 2, 3` use the closed seeds.
    pub fn q(&mut self, n: u32, x: Real) -> Result<Real> {
        match n {
            2 | 3 => {
                let nf = Real::from(n);
                if !(nf - 1.0..=nf + 1.0).contains(&x) {
                    return Err(Error::out_of_range(
                        format!("x for q_{n}"),
                        x,
                        nf - 1.0,
                        nf + 1.0,
                    ));
                }
                let y = (x - nf).clamp(-1.0, 1.0);
                if n == 2 {
                    seed_q2(y)
                } else {
                    seed_q3(y)
                }
            }
            0 | 1 => Err(Error::Domain(format!("q_n is defined for n >= 2, got {n}"))),
            _ => self.solution(n)?.eval(x),
        }
    }

    /// `f_n(x)`. For `n ≥ 4`, `x` must lie in `[n−1, n+1]`; smaller `n` use the
    /// closed forms wherever those are defined.
    pub fn f(&mut self, n: u32, x: Real) -> Result<SchlafliValue> {
        if n <= 3 {
            let v = f_closed(n, x)?;
            return Ok(SchlafliValue {
                n,
                x,
                value: LogScaledReal::from_real(v),
                abs_err_estimate: 4.0 * Real::EPSILON * v.abs(),
                rel_err_estimate: 4.0 * Real::EPSILON,
            });
        }
        let sol = self.solution(n)?;
        let q = sol.eval(x)?;
        let eps = sol.err_estimate;
        Ok(assemble(n, x, q, eps))
    }

    /// Simplex content `2⁻ⁿ n! S_n f_n(x)`.
    pub fn simplex_content(&mut self, n: u32, x: Real) -> Result<LogScaledReal> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "simplex content needs n >= 2, got {n}"
            )));
        }
        let f = self.f(n, x)?;
        let nf = Real::from(n);
        let scale = -nf * std::f64::consts::LN_2 + ln_factorial(n) + ln_sphere_content(n);
        Ok(f.value * LogScaledReal::positive_ln(scale))
    }
}

/// Combines `q_n(x)` and its error into `f_n(x)`.
pub(crate) fn assemble(n: u32, x: Real, q: Real, eps: Real) -> SchlafliValue {
    let nf = Real::from(n);
    let offset = x - nf + 1.0;
    if offset <= 0.0 {
        return SchlafliValue {
            n,
            x,
            value: LogScaledReal::ZERO,
            abs_err_estimate: 0.0,
            rel_err_estimate: 0.0,
        };
    }
    let ln_scale = ln_prefactor(n).expect("n >= 2") + 0.5 * (nf - 1.0) * offset.ln();
    let scale = LogScaledReal::positive_ln(ln_scale);
    SchlafliValue {
        n,
        x,
        value: scale * q,
        abs_err_estimate: (scale * eps).to_real(),
        rel_err_estimate: eps / q.abs(),
    }
}

/// One-shot `f_n(x)` with a fresh evaluator of the given series order.
pub fn f_n(n: u32, x: Real, order: usize) -> Result<SchlafliValue> {
    SchlafliEvaluator::new(order)?.f(n, x)
}

/// One-shot simplex content.
pub fn simplex_content(n: u32, x: Real, order: usize) -> Result<LogScaledReal> {
    SchlafliEvaluator::new(order)?.simplex_content(n, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4_at_4() -> Real {
        arcsec(4.0).unwrap() / (3.0 * PI) - 2.0 / 15.0
    }

    #[test]
    fn arcsec_branches() {
        assert_eq!(arcsec(1.0).unwrap(), 0.0);
        assert!((arcsec(2.0).unwrap() - PI / 3.0).abs() < 1e-15);
        assert!((arcsec(-2.0).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((arcsec(-1.0).unwrap() - PI).abs() < 1e-15);
        assert_eq!(arcsec(f64::INFINITY).unwrap(), PI / 2.0);
        assert!(arcsec(0.5).is_err());
        for x in [1.001, 1.5, 3.0, 17.0] {
            assert!((arcsec(x).unwrap() - (1.0 / x).acos()).abs() < 1e-13);
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(f_closed(2, 1.0).unwrap(), 0.0);
        assert!(f_closed(3, 2.0).unwrap().abs() < 1e-16);
        assert!((f_closed(2, 1e300).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(f_closed(0, -7.0).unwrap(), 1.0);
        assert!(f_closed(2, 0.3).is_err());
        assert!(f_closed(4, 4.0).is_err());
    }

    #[test]
    fn prefactor_values() {
        let p4 = log_prefactor(4).unwrap();
        assert!((p4.to_real() * 9.0 * PI * PI - 1.0).abs() < 1e-13);
        let p3 = log_prefactor(3).unwrap().to_real();
        assert!((p3 - 3f64.sqrt() / (6.0 * PI)).abs() < 1e-15);
        let p2 = log_prefactor(2).unwrap().to_real();
        assert!((p2 - 2f64.sqrt() / PI).abs() < 1e-15);
        assert!(log_prefactor(1).is_err());
    }

    #[test]
    fn half_integer_gamma_ladder() {
        // Γ(k + 1/2) = (2k)! √π / (4^k k!)
        let mut exact = PI.sqrt();
        for k in 0..30u32 {
            let x = Real::from(k) + 0.5;
            assert!((ln_gamma(x) - exact.ln()).abs() < 1e-13, "k = {k}");
            exact *= x;
        }
    }

    #[test]
    fn prefactor_matches_plain_products() {
        for n in 2..=80u32 {
            let fact = |m: u32| (1..=m).map(Real::from).product::<Real>();
            let nf = Real::from(n);
            let direct = if n % 2 == 0 {
                2f64.powi(n as i32) * nf.sqrt() * fact(n / 2)
                    / (PI.powf(nf / 2.0) * fact(n) * fact(n))
            } else {
                nf.sqrt() / (PI.powf((nf - 1.0) / 2.0) * fact(n) * fact((n - 1) / 2))
            };
            let logged = log_prefactor(n).unwrap().to_real();
            assert!(((logged - direct) / direct).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn f4_against_closed_form() {
        let v = f_n(4, 4.0, 30).unwrap();
        assert!((v.to_real() - f4_at_4()).abs() < 1e-14);
        assert!((f4_at_4() - 6.5231e-3).abs() < 1e-7);
        assert!(v.abs_err_estimate >= 0.0);
        assert!(f_n(4, 3.0, 30).unwrap().value.is_zero());
        assert!(matches!(f_n(4, 5.5, 30), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn sign_positivity_monotonicity() {
        let mut ev = SchlafliEvaluator::new(30).unwrap();
        for n in [4u32, 5, 8, 13, 40, 201] {
            let nf = Real::from(n);
            assert!(ev.f(n, nf - 1.0).unwrap().value.is_zero());
            let mut last = LogScaledReal::ZERO;
            for i in 1..=20 {
                let x = nf - 1.0 + Real::from(i) / 10.0;
                let v = ev.f(n, x).unwrap().value;
                assert_eq!(v.sign, 1);
                assert!(
                    last.is_zero() || v.log10_mag > last.log10_mag,
                    "n = {n}, x = {x}"
                );
                last = v;
            }
        }
    }

    #[test]
    fn q_for_small_n_uses_seeds() {
        let mut ev = SchlafliEvaluator::new(20).unwrap();
        assert_eq!(ev.q(2, 1.0).unwrap(), 1.0);
        assert_eq!(ev.q(3, 2.0).unwrap(), 1.0);
        // q_2 = π f_2 / (√2 √(x−1))
        let x = 2.5;
        let expected = PI * f_closed(2, x).unwrap() / (2f64.sqrt() * (x - 1.0).sqrt());
        assert!((ev.q(2, x).unwrap() - expected).abs() < 1e-15);
        assert!(ev.q(2, 3.5).is_err());
        assert!(ev.q(1, 1.0).is_err());
    }

    #[test]
    fn evaluator_reuses_chain() {
        let mut ev = SchlafliEvaluator::new(30).unwrap();
        let a = ev.solution(12).unwrap().clone();
        let b = ev.solution(8).unwrap().clone();
        let fresh = crate::recurrence::run_pipeline(
            &crate::recurrence::RecurrenceConfig::new(8, 30).unwrap(),
        )
        .unwrap();
        assert_eq!(b, fresh);
        assert_eq!(a.n, 12);
        assert!(ev.solution(3).is_err());
    }

    #[test]
    fn simplex_content_small_n() {
        // n = 2: an arc of length 2α with x = sec 2α.
        let alpha: Real = 0.6;
        let v = simplex_content(2, 1.0 / (2.0 * alpha).cos(), 20).unwrap();
        assert!((v.to_real() - 2.0 * alpha).abs() < 1e-14);
        assert!(simplex_content(3, 2.0, 20).unwrap().is_zero());
        // Right-angled equilateral triangle: an octant of the sphere.
        let octant = simplex_content(3, 1e12, 20).unwrap().to_real();
        assert!((octant - PI / 2.0).abs() < 1e-10);
    }
}
