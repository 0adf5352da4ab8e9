//! Chebyshev series on `y ∈ [−1, 1]`.
//!
//! Coefficients follow the halved-first-term convention: a series of order `N`
//! with coefficients `a_1 … a_N` represents
//!
//! ```text
//! a_1/2 + Σ_{k=2..N} a_k T_{k−1}(y)
//! ```
//!
//! Storage is 0-based, so `coeffs()[i]` holds `a_{i+1}` and multiplies `T_i`.
//! Every public item below states indices in the 1-based form.

use serde::{Deserialize, Serialize};

use crate::{Error, Real, Result};

/// Trailing coefficients summed by [`ChebyshevSeries::error_estimate`].
pub const DEFAULT_TAIL: usize = 3;

/// `cos(π·num/den)` with the angle reduced in integer arithmetic first.
///
/// The reduced angle always lies in `[0, π/4]`, where both `cos` and `sin` are
/// accurate to an ulp or so.
pub(crate) fn cos_pi_ratio(num: u64, den: u64) -> Real {
    use std::f64::consts::PI;
    // cos has period 2π: num mod 2·den.
    let mut m = num % (2 * den);
    if m > den {
        m = 2 * den - m;
    }
    // Now angle = π m/den ∈ [0, π]; fold onto [0, π/2] and track the sign.
    let (m, sign) = if 2 * m > den {
        (den - m, -1.0)
    } else {
        (m, 1.0)
    };
    // angle ∈ [0, π/2]; beyond π/4 switch to sin of the complement.
    let value = if 4 * m <= den {
        (PI * m as Real / den as Real).cos()
    } else {
        (PI * (den - 2 * m) as Real / (2 * den) as Real).sin()
    };
    sign * value
}

/// Zeros of `T_N`, `y_k = cos[(π/N)(k − 1/2)]` for `k = 1..N`, together with the
/// table `T_{i−1}(y_k)` used by [`ChebNodes::fit`].
#[derive(Debug, Clone)]
pub struct ChebNodes {
    nodes: Vec<Real>,
    // Row-major: basis[(i-1)*N + (k-1)] = T_{i-1}(y_k).
    basis: Vec<Real>,
}

impl ChebNodes {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidSeries(format!(
                "series order must be at least 2, got {order}"
            )));
        }
        let n = order as u64;
        // y_k = cos(π (2k−1) / (2N)); T_j(y_k) = cos(π j (2k−1) / (2N)).
        let nodes = (1..=n).map(|k| cos_pi_ratio(2 * k - 1, 2 * n)).collect();
        let mut basis = Vec::with_capacity(order * order);
        for j in 0..n {
            for k in 1..=n {
                basis.push(cos_pi_ratio(j * (2 * k - 1), 2 * n));
            }
        }
        Ok(Self { nodes, basis })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// The nodes `y_1 > y_2 > … > y_N`.
    pub fn nodes(&self) -> &[Real] {
        &self.nodes
    }

    /// Fits `f` by `a_i = (2/N) Σ_k f(y_k) T_{i−1}(y_k)`.
    ///
    /// The result reproduces `f` exactly at every node, up to rounding.
    pub fn fit<F>(&self, f: F) -> Result<ChebyshevSeries>
    where
        F: Fn(Real) -> Real,
    {
        let values = self.sample(|y| Ok(f(y)))?;
        Ok(self.fit_values(&values))
    }

    /// Like [`ChebNodes::fit`], for functions that can fail.
    pub fn try_fit<F>(&self, f: F) -> Result<ChebyshevSeries>
    where
        F: Fn(Real) -> Result<Real>,
    {
        let values = self.sample(f)?;
        Ok(self.fit_values(&values))
    }

    fn sample<F>(&self, f: F) -> Result<Vec<Real>>
    where
        F: Fn(Real) -> Result<Real>,
    {
        self.nodes
            .iter()
            .enumerate()
            .map(|(k, &y)| {
                let value = f(y)?;
                if value.is_finite() {
                    Ok(value)
                } else {
                    Err(Error::Evaluation {
                        index: k + 1,
                        y,
                        value,
                    })
                }
            })
            .collect()
    }

    fn fit_values(&self, values: &[Real]) -> ChebyshevSeries {
        let n = self.order();
        let scale = 2.0 / n as Real;
        let coeffs = self
            .basis
            .chunks_exact(n)
            .map(|row| scale * row.iter().zip(values).map(|(t, v)| t * v).sum::<Real>())
            .collect();
        ChebyshevSeries { coeffs }
    }
}

/// Fits `f` on the zeros of `T_N`. Convenience wrapper over [`ChebNodes`].
pub fn fit<F>(f: F, order: usize) -> Result<ChebyshevSeries>
where
    F: Fn(Real) -> Real,
{
    ChebNodes::new(order)?.fit(f)
}

/// A truncated Chebyshev series `a_1/2 + Σ_{k=2..N} a_k T_{k−1}(y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Real>", into = "Vec<Real>")]
pub struct ChebyshevSeries {
    coeffs: Vec<Real>,
}

impl TryFrom<Vec<Real>> for ChebyshevSeries {
    type Error = Error;

    fn try_from(coeffs: Vec<Real>) -> Result<Self> {
        Self::new(coeffs)
    }
}

impl From<ChebyshevSeries> for Vec<Real> {
    fn from(series: ChebyshevSeries) -> Self {
        series.coeffs
    }
}

impl ChebyshevSeries {
    /// Wraps `a_1 … a_N`. Requires `N ≥ 2` and finite entries.
    pub fn new(coeffs: Vec<Real>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidSeries(format!(
                "need at least 2 coefficients, got {}",
                coeffs.len()
            )));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "coefficient a_{} is not finite ({})",
                i + 1,
                coeffs[i]
            )));
        }
        Ok(Self { coeffs })
    }

    /// Series with only `a_j = 1` (1-based), i.e. `T_{j−1}` itself, or the
    /// constant 1/2 when `j = 1`.
    pub fn unit(order: usize, j: usize) -> Result<Self> {
        if j == 0 || j > order {
            return Err(Error::Domain(format!("index {j} not in 1..={order}")));
        }
        let mut coeffs = vec![0.0; order];
        coeffs[j - 1] = 1.0;
        Self::new(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    /// Coefficient `a_i`, 1-based.
    pub fn a(&self, i: usize) -> Real {
        self.coeffs[i - 1]
    }

    /// Clenshaw's recurrence:
    ///
    /// ```text
    /// r_{N+1} = r_{N+2} = 0
    /// r_i     = 2y r_{i+1} − r_{i+2} + a_i,   i = N … 2
    /// value   = y r_2 − r_3 + a_1/2
    /// ```
    ///
    /// No extrapolation: `y` must lie in `[−1, 1]`.
    pub fn eval(&self, y: Real) -> Result<Real> {
        if !(-1.0..=1.0).contains(&y) {
            return Err(Error::out_of_range("y", y, -1.0, 1.0));
        }
        Ok(self.eval_unchecked(y))
    }

    pub(crate) fn eval_unchecked(&self, y: Real) -> Real {
        let two_y = 2.0 * y;
        let (mut r1, mut r2) = (0.0, 0.0);
        for &a in self.coeffs[1..].iter().rev() {
            let r = two_y * r1 - r2 + a;
            r2 = r1;
            r1 = r;
        }
        y * r1 - r2 + 0.5 * self.coeffs[0]
    }

    /// Coefficients `b_i` of the derivative, from
    /// `2(k−1) a_k = b_{k−1} − b_{k+1}` solved downward with `b_{N+1} = b_{N+2} = 0`.
    ///
    /// The relation is used for `k = 2 … N+1` only. At `k = 1` it reads
    /// `0 = b_0 − b_2` and carries no information; `b_1` comes out of the `k = 2`
    /// step and already obeys the halved-first-term convention, so the
    /// derivative series is read exactly like any other series.
    pub fn derivative(&self) -> ChebyshevSeries {
        let n = self.order();
        // 1-based b_1..b_{N+2}, stored at b[0..N+2].
        let mut b = vec![0.0; n + 2];
        for k in (2..=n).rev() {
            b[k - 2] = b[k] + 2.0 * (k - 1) as Real * self.a(k);
        }
        b.truncate(n);
        ChebyshevSeries { coeffs: b }
    }

    /// Coefficients `d_k` of the product `c(y)·a(y)`, truncated to order `N`:
    ///
    /// ```text
    /// d_1 = ½ c_1 a_1 + Σ_{i=2..N} c_i a_i
    /// d_2 = ½ Σ_{i=2..N} (c_i a_{i−1} + c_{i−1} a_i)
    /// d_k = ½ Σ_{i=2..k−1} c_i a_{k+1−i} + ½ Σ_{i=k..N} (c_i a_{i−k+1} + c_{i−k+1} a_i),  k ≥ 3
    /// ```
    ///
    /// `self` plays the role of `c`.
    pub fn product(&self, other: &ChebyshevSeries) -> Result<ChebyshevSeries> {
        let n = self.order();
        if other.order() != n {
            return Err(Error::Shape {
                left: n,
                right: other.order(),
            });
        }
        let c = |i: usize| self.coeffs[i - 1];
        let a = |i: usize| other.coeffs[i - 1];

        let mut d = Vec::with_capacity(n);
        d.push(0.5 * c(1) * a(1) + (2..=n).map(|i| c(i) * a(i)).sum::<Real>());
        d.push(
            0.5 * (2..=n)
                .map(|i| c(i) * a(i - 1) + c(i - 1) * a(i))
                .sum::<Real>(),
        );
        for k in 3..=n {
            let low: Real = (2..k).map(|i| c(i) * a(k + 1 - i)).sum();
            let high: Real = (k..=n)
                .map(|i| c(i) * a(i - k + 1) + c(i - k + 1) * a(i))
                .sum();
            d.push(0.5 * low + 0.5 * high);
        }
        Ok(ChebyshevSeries { coeffs: d })
    }

    /// Sum of `|a_i|` over the last `tail` coefficients, a computable stand-in
    /// for the sum of the omitted coefficients. Requires `1 ≤ tail < N`.
    pub fn truncation_error(&self, tail: usize) -> Result<Real> {
        let n = self.order();
        if tail == 0 || tail >= n {
            return Err(Error::Domain(format!("tail must be in 1..{n}, got {tail}")));
        }
        Ok(self.coeffs[n - tail..].iter().map(|a| a.abs()).sum())
    }

    /// [`truncation_error`](Self::truncation_error) with the default tail.
    pub fn error_estimate(&self) -> Real {
        let tail = DEFAULT_TAIL.min(self.order() - 1);
        self.coeffs[self.order() - tail..]
            .iter()
            .map(|a| a.abs())
            .sum()
    }

    /// `Σ |a_i|`, a bound on `|series(y)|` over the interval.
    pub fn abs_sum(&self) -> Real {
        self.coeffs.iter().map(|a| a.abs()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g4(y: Real) -> Real {
        let x = y + 4.0;
        9.0 * 8f64.sqrt() / (x * (x * x - 1.0).sqrt())
    }

    #[test]
    fn cos_reduction_matches_naive() {
        for den in [6u64, 40, 114] {
            for num in 0..(5 * den) {
                let naive = (std::f64::consts::PI * num as f64 / den as f64).cos();
                assert!(
                    (cos_pi_ratio(num, den) - naive).abs() < 1e-14,
                    "{num}/{den}"
                );
            }
        }
        assert_eq!(cos_pi_ratio(1, 2), 0.0);
        assert_eq!(cos_pi_ratio(2, 2), -1.0);
    }

    #[test]
    fn nodes_are_zeros_of_t_n() {
        let nodes = ChebNodes::new(9).unwrap();
        let y = nodes.nodes();
        for (k, &yk) in y.iter().enumerate() {
            let expected = (std::f64::consts::PI / 9.0 * (k as f64 + 0.5)).cos();
            assert!((yk - expected).abs() < 1e-15);
            assert!((9.0 * yk.acos()).cos().abs() < 1e-14);
        }
        assert!(y.windows(2).all(|w| w[0] > w[1]));
        assert!(y.iter().all(|v| v.abs() < 1.0));
    }

    #[test]
    fn fit_constant() {
        let s = fit(|_| 1.0, 8).unwrap();
        assert!((s.a(1) - 2.0).abs() < 1e-15);
        assert!(s.coeffs()[1..].iter().all(|a| a.abs() < 1e-15));
    }

    #[test]
    fn fit_t2() {
        let s = fit(|y| 2.0 * y * y - 1.0, 8).unwrap();
        for (i, &a) in s.coeffs().iter().enumerate() {
            let expected = if i == 2 { 1.0 } else { 0.0 };
            assert!((a - expected).abs() < 1e-15, "a_{} = {a}", i + 1);
        }
    }

    #[test]
    fn fit_g4_decays() {
        let s20 = fit(g4, 20).unwrap();
        let s40 = fit(g4, 40).unwrap();
        assert!(s20.a(20).abs() < 1e-10 * s20.a(1).abs());
        // Aliasing at N = 20 is below the target, so both fits share their first 20 terms.
        for i in 1..=20 {
            assert!((s20.a(i) - s40.a(i)).abs() < 1e-12, "a_{i}");
        }
    }

    #[test]
    fn fit_reports_bad_node() {
        let err = fit(|y| if y < -0.9 { Real::NAN } else { y }, 10).unwrap_err();
        match err {
            Error::Evaluation { index, y, .. } => {
                assert_eq!(index, 10);
                assert!(y < -0.9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn clenshaw_basics() {
        let t3 = ChebyshevSeries::unit(6, 4).unwrap();
        assert!((t3.eval(0.5).unwrap() + 1.0).abs() < 1e-15);
        let one = ChebyshevSeries::new(vec![2.0, 0.0, 0.0]).unwrap();
        assert_eq!(one.eval(0.3).unwrap(), 1.0);
        assert!(matches!(
            one.eval(1.0 + 1e-12),
            Err(Error::OutOfRange { .. })
        ));
        assert!(one.eval(-1.0).is_ok());
    }

    #[test]
    fn clenshaw_exact_at_nodes() {
        let nodes = ChebNodes::new(20).unwrap();
        let s = nodes.fit(g4).unwrap();
        for &y in nodes.nodes() {
            let v = s.eval(y).unwrap();
            assert!((v - g4(y)).abs() <= 10.0 * f64::EPSILON * g4(y).abs().max(1.0));
        }
    }

    #[test]
    fn derivative_of_t1_and_t2() {
        let d1 = ChebyshevSeries::unit(5, 2).unwrap().derivative();
        assert_eq!(d1.coeffs(), &[2.0, 0.0, 0.0, 0.0, 0.0]);
        let d2 = ChebyshevSeries::unit(5, 3).unwrap().derivative();
        assert_eq!(d2.coeffs(), &[0.0, 4.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn derivative_vs_finite_difference() {
        // A smooth stand-in with geometric coefficient decay.
        let f = |y: Real| (0.7 * y).exp() / (y + 3.0);
        let s = fit(f, 30).unwrap();
        let ds = s.derivative();
        let h = 1e-5;
        let fd = (s.eval(h).unwrap() - s.eval(-h).unwrap()) / (2.0 * h);
        assert!((ds.eval(0.0).unwrap() - fd).abs() < 1e-6);
    }

    #[test]
    fn product_with_one_is_identity() {
        let a = fit(|y| (y + 2.0).ln(), 12).unwrap();
        let one = ChebyshevSeries::new({
            let mut v = vec![0.0; 12];
            v[0] = 2.0;
            v
        })
        .unwrap();
        let d = one.product(&a).unwrap();
        for (x, y) in d.coeffs().iter().zip(a.coeffs()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn product_t1_squared() {
        let t1 = ChebyshevSeries::unit(6, 2).unwrap();
        let d = t1.product(&t1).unwrap();
        assert_eq!(d.coeffs(), &[1.0, 0.0, 0.5, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn product_shape_mismatch() {
        let a = ChebyshevSeries::unit(6, 2).unwrap();
        let b = ChebyshevSeries::unit(7, 2).unwrap();
        assert_eq!(a.product(&b), Err(Error::Shape { left: 6, right: 7 }));
    }

    #[test]
    fn truncation_error_cases() {
        let one = fit(|_| 1.0, 8).unwrap();
        assert!(one.truncation_error(3).unwrap() < 1e-15);
        let s = fit(|y| (y * 1.3).sin() + 0.2, 10).unwrap();
        let all: Real = s.coeffs()[1..].iter().map(|a| a.abs()).sum();
        assert_eq!(s.truncation_error(9).unwrap(), all);
        assert!(s.truncation_error(10).is_err());
        assert!(s.truncation_error(0).is_err());
    }

    #[test]
    fn series_validation() {
        assert!(ChebyshevSeries::new(vec![1.0]).is_err());
        assert!(ChebyshevSeries::new(vec![1.0, f64::INFINITY]).is_err());
        let s: std::result::Result<ChebyshevSeries, _> = serde_json::from_str("[1.0]");
        assert!(s.is_err());
    }
}
