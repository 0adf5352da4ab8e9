//! The `q_{n−2} → q_n` coefficient recurrence.
//!
//! On `y = x − n ∈ [−1, 1]`, `Q_n(y) = q_n(y + n)` obeys the first-order ODE
//!
//! ```text
//! 2(1+y) Q_n'(y) + (n−1) Q_n(y) = G_n(y) Q_{n−2}(y)
//! ```
//!
//! which is singular at `y = −1`. Writing every function as a Chebyshev series
//! turns it into a three-term recurrence on the coefficients of `Q_n` that is
//! solved from the top index down. The chain starts at `n = 4` from the closed
//! form `Q_2` or at `n = 5` from `Q_3`, and each step climbs two dimensions.
//! The boundary value `Q_n(−1) = 1` is never imposed; the singular point forces
//! it, which makes it a useful check on the whole chain.

use crate::cheb::{ChebNodes, ChebyshevSeries};
use crate::{Error, Real, Result, DEFAULT_ORDER};

/// Smallest series order the pipeline accepts.
pub const MIN_ORDER: usize = 8;

/// `atan(h)/h`, with a four-term series once `|h| < 1e-4`.
fn atan_ratio(h: Real) -> Real {
    if h.abs() < 1e-4 {
        let h2 = h * h;
        1.0 - h2 * (1.0 / 3.0 - h2 * (1.0 / 5.0 - h2 / 7.0))
    } else {
        h.atan() / h
    }
}

fn check_unit_interval(y: Real) -> Result<()> {
    if (-1.0..=1.0).contains(&y) {
        Ok(())
    } else {
        Err(Error::out_of_range("y", y, -1.0, 1.0))
    }
}

/// Source term `G_n(y) = (n−1)² √(n(n−2)) / [(y+n) √((y+n)² − 1)]` for `n ≥ 4`.
pub fn g_source(n: u32, y: Real) -> Result<Real> {
    if n < 4 {
        return Err(Error::Domain(format!("source term needs n >= 4, got {n}")));
    }
    check_unit_interval(y)?;
    let nf = Real::from(n);
    let x = y + nf;
    let m = nf - 1.0;
    Ok(m * m * (nf * (nf - 2.0)).sqrt() / (x * ((x - 1.0) * (x + 1.0)).sqrt()))
}

/// Seed `Q_2(y) = arcsec(y+2) / √(2+2y)`, equal to 1 at `y = −1`.
///
/// With `t = y+1` and `h = √(t(t+2))`, `arcsec(y+2) = atan h` and the seed is
/// `(atan h / h)·√((t+2)/2)`, which has no cancellation anywhere on the interval.
pub fn seed_q2(y: Real) -> Result<Real> {
    check_unit_interval(y)?;
    let t = y + 1.0;
    let h = (t * (t + 2.0)).sqrt();
    Ok(atan_ratio(h) * ((t + 2.0) / 2.0).sqrt())
}

/// Seed `Q_3(y) = 2√3 (arcsec(y+3) − π/3) / (y+1)`, equal to 1 at `y = −1`.
///
/// The difference of arcsecants is taken as a single arctangent,
/// `atan a − atan √3 = atan(t(t+4) / ((a+√3)(1+√3 a)))` with `t = y+1` and
/// `a = √((t+2)² − 1)`, so the factor `t` cancels exactly against the
/// denominator.
pub fn seed_q3(y: Real) -> Result<Real> {
    check_unit_interval(y)?;
    let sqrt3 = Real::sqrt(3.0);
    let t = y + 1.0;
    let a2 = (t + 1.0) * (t + 3.0);
    let denom = (a2.sqrt() + sqrt3) * (1.0 + (3.0 * a2).sqrt());
    let h = t * (t + 4.0) / denom;
    Ok(2.0 * sqrt3 * atan_ratio(h) * (t + 4.0) / denom)
}

/// Solves for the coefficients of `Q_n` given `d`, the coefficients of
/// `G_n·Q_{n−2}`:
///
/// ```text
/// a_k = (d_k − d_{k+2} + (n−2k−3) a_{k+2} − 4k a_{k+1}) / (2k+n−3),   k = N … 1
/// ```
///
/// with `d_{N+1} = d_{N+2} = a_{N+1} = a_{N+2} = 0`. The first two steps reduce
/// to `a_N = d_N/(2N+n−3)` and `a_{N−1} = (d_{N−1} − 4(N−1)a_N)/(2N+n−5)`.
pub fn solve_step(n: u32, d: &ChebyshevSeries) -> Result<ChebyshevSeries> {
    if n < 4 {
        return Err(Error::Domain(format!(
            "recurrence step needs n >= 4, got {n}"
        )));
    }
    let order = d.order();
    let nf = Real::from(n);
    // 1-based with two zero pads: index k lives at k-1, entries N and N+1 are 0.
    let mut dd = d.coeffs().to_vec();
    dd.extend([0.0, 0.0]);
    let mut a = vec![0.0; order + 2];
    for k in (1..=order).rev() {
        let kf = k as Real;
        a[k - 1] = (dd[k - 1] - dd[k + 1] + (nf - 2.0 * kf - 3.0) * a[k + 1] - 4.0 * kf * a[k])
            / (2.0 * kf + nf - 3.0);
    }
    a.truncate(order);
    ChebyshevSeries::new(a)
}

/// Residuals of `(2k−n+3)a_{k+2} + 4k a_{k+1} + (2k+n−3)a_k − (d_k − d_{k+2})`
/// for `k = 1 … N`, with zero padding beyond `N`.
pub fn recurrence_residuals(n: u32, a: &ChebyshevSeries, d: &ChebyshevSeries) -> Vec<Real> {
    let nf = Real::from(n);
    let at = |s: &ChebyshevSeries, i: usize| if i <= s.order() { s.a(i) } else { 0.0 };
    (1..=a.order())
        .map(|k| {
            let kf = k as Real;
            (2.0 * kf - nf + 3.0) * at(a, k + 2)
                + 4.0 * kf * at(a, k + 1)
                + (2.0 * kf + nf - 3.0) * at(a, k)
                - (at(d, k) - at(d, k + 2))
        })
        .collect()
}

/// Pipeline settings: series order `N` and the target dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecurrenceConfig {
    pub order: usize,
    pub target_n: u32,
}

impl RecurrenceConfig {
    pub fn new(target_n: u32, order: usize) -> Result<Self> {
        let cfg = Self { order, target_n };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_default_order(target_n: u32) -> Result<Self> {
        Self::new(target_n, DEFAULT_ORDER)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < MIN_ORDER {
            return Err(Error::Domain(format!(
                "series order must be at least {MIN_ORDER}, got {}",
                self.order
            )));
        }
        if self.target_n < 4 {
            return Err(Error::Domain(format!(
                "the recurrence covers n >= 4, got {} (use the closed forms below)",
                self.target_n
            )));
        }
        Ok(())
    }
}

/// `q_n` on `[n−1, n+1]` as a Chebyshev series in `y = x − n`.
#[derive(Debug, Clone, PartialEq)]
pub struct QnSolution {
    pub n: u32,
    pub series: ChebyshevSeries,
    /// Sum of the last three coefficient magnitudes.
    pub err_estimate: Real,
}

impl QnSolution {
    /// Interval `[n−1, n+1]` covered by the series.
    pub fn interval(&self) -> (Real, Real) {
        let n = Real::from(self.n);
        (n - 1.0, n + 1.0)
    }

    /// `q_n(x)` for `x ∈ [n−1, n+1]`; no extrapolation.
    pub fn eval(&self, x: Real) -> Result<Real> {
        let (lo, hi) = self.interval();
        if !(lo..=hi).contains(&x) {
            return Err(Error::out_of_range(
                format!("x for q_{}", self.n),
                x,
                lo,
                hi,
            ));
        }
        // Clamp guards the last ulp of x − n at the endpoints.
        let y = (x - Real::from(self.n)).clamp(-1.0, 1.0);
        self.series.eval(y)
    }

    /// `Q_n(y)` for `y ∈ [−1, 1]`.
    pub fn eval_y(&self, y: Real) -> Result<Real> {
        self.series.eval(y)
    }
}

/// Which seed a chain starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// `Q_2` seed, yields `n = 4, 6, 8, …`.
    Even,
    /// `Q_3` seed, yields `n = 5, 7, 9, …`.
    Odd,
}

impl Parity {
    pub fn of(n: u32) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Iterator over `q_4, q_6, …` or `q_5, q_7, …`.
///
/// Keeps only the latest coefficient vector. The `k`-th item is the same bit
/// pattern no matter how far the iteration is taken afterwards.
#[derive(Debug, Clone)]
pub struct QnChain {
    nodes: ChebNodes,
    next_n: u32,
    current: Option<ChebyshevSeries>,
    failed: bool,
}

impl QnChain {
    pub fn new(parity: Parity, order: usize) -> Result<Self> {
        if order < MIN_ORDER {
            return Err(Error::Domain(format!(
                "series order must be at least {MIN_ORDER}, got {order}"
            )));
        }
        Ok(Self {
            nodes: ChebNodes::new(order)?,
            next_n: match parity {
                Parity::Even => 4,
                Parity::Odd => 5,
            },
            current: None,
            failed: false,
        })
    }

    pub fn order(&self) -> usize {
        self.nodes.order()
    }

    fn advance(&mut self) -> Result<QnSolution> {
        let n = self.next_n;
        let d = match &self.current {
            None => {
                let seed = if n == 4 { seed_q2 } else { seed_q3 };
                self.nodes.try_fit(|y| Ok(g_source(n, y)? * seed(y)?))?
            }
            Some(prev) => {
                let c = self.nodes.try_fit(|y| g_source(n, y))?;
                c.product(prev)?
            }
        };
        let series = solve_step(n, &d)?;
        let err_estimate = series.error_estimate();
        self.current = Some(series.clone());
        self.next_n += 2;
        Ok(QnSolution {
            n,
            series,
            err_estimate,
        })
    }

    /// Advances to `n` (same parity, not yet passed) and returns that solution.
    pub fn advance_to(&mut self, n: u32) -> Result<QnSolution> {
        if n < self.next_n || !(n - self.next_n).is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "chain is at n = {}, cannot reach {n}",
                self.next_n
            )));
        }
        loop {
            let sol = self.advance()?;
            if sol.n == n {
                return Ok(sol);
            }
        }
    }
}

impl Iterator for QnChain {
    type Item = Result<QnSolution>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let item = self.advance();
        self.failed = item.is_err();
        Some(item)
    }
}

/// Runs the chain of the target's parity up to `cfg.target_n`.
pub fn run_pipeline(cfg: &RecurrenceConfig) -> Result<QnSolution> {
    cfg.validate()?;
    QnChain::new(Parity::of(cfg.target_n), cfg.order)?.advance_to(cfg.target_n)
}

/// Free-function form of [`QnSolution::eval`].
pub fn eval_qn(sol: &QnSolution, x: Real) -> Result<Real> {
    sol.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cheb::fit;

    fn pipeline(n: u32, order: usize) -> QnSolution {
        run_pipeline(&RecurrenceConfig::new(n, order).unwrap()).unwrap()
    }

    #[test]
    fn source_term_values() {
        assert!((g_source(4, -1.0).unwrap() - 3.0).abs() < 1e-15);
        assert!((g_source(10, -1.0).unwrap() - 9.0).abs() < 1e-14);
        // 9·√8 / (4·√15)
        assert!((g_source(4, 0.0).unwrap() - 1.643_167_672_515_498).abs() < 1e-14);
        assert!(g_source(3, 0.0).is_err());
        assert!(g_source(4, 1.5).is_err());
    }

    #[test]
    fn seed_values() {
        assert_eq!(seed_q2(-1.0).unwrap(), 1.0);
        let pi = std::f64::consts::PI;
        assert!((seed_q2(0.0).unwrap() - pi / 3.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((seed_q2(1.0).unwrap() - (1.0f64 / 3.0).acos() / 2.0).abs() < 1e-15);

        assert_eq!(seed_q3(-1.0).unwrap(), 1.0);
        let at_one = 3f64.sqrt() * (0.25f64.acos() - pi / 3.0);
        assert!((seed_q3(1.0).unwrap() - at_one).abs() < 1e-15);
        // Away from the endpoint the direct formula is well conditioned.
        for y in [-0.5, 0.0, 0.3, 0.9] {
            let direct = 2.0 * 3f64.sqrt() / (y + 1.0) * ((1.0 / (y + 3.0)).acos() - pi / 3.0);
            assert!((seed_q3(y).unwrap() - direct).abs() < 1e-14, "{y}");
        }
        assert!(seed_q2(-1.5).is_err());
    }

    #[test]
    fn seed_q3_near_endpoint() {
        // Q_3 is smooth at t = 0 with a slope of order one.
        let v = seed_q3(-1.0 + 1e-8).unwrap();
        assert!((v - 1.0).abs() < 1e-7);
        let w = seed_q3(-1.0 + 1e-5).unwrap();
        assert!(v > w && w < 1.0);
    }

    #[test]
    fn constant_source_gives_constant_solution() {
        let mut d = vec![0.0; 12];
        d[0] = 6.0;
        let a = solve_step(4, &ChebyshevSeries::new(d).unwrap()).unwrap();
        assert!((a.a(1) - 2.0).abs() < 1e-15);
        assert!(a.coeffs()[1..].iter().all(|c| c.abs() < 1e-15));
        assert!((a.eval(-1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn first_step_from_product_of_fits() {
        let c = fit(|y| g_source(4, y).unwrap(), 30).unwrap();
        let q2 = fit(|y| seed_q2(y).unwrap(), 30).unwrap();
        let a = solve_step(4, &c.product(&q2).unwrap()).unwrap();
        assert!((a.eval(-1.0).unwrap() - 1.0).abs() < 1e-10);
        assert!((a.eval(0.0).unwrap() - 0.579_426_020_542).abs() < 1e-10);
    }

    #[test]
    fn solution_satisfies_recurrence() {
        let nodes = ChebNodes::new(30).unwrap();
        let mut chain = QnChain::new(Parity::Even, 30).unwrap();
        let q4 = chain.next().unwrap().unwrap();
        let c6 = nodes.fit(|y| g_source(6, y).unwrap()).unwrap();
        let d6 = c6.product(&q4.series).unwrap();
        let a6 = solve_step(6, &d6).unwrap();
        let scale = d6.abs_sum();
        for (k, r) in recurrence_residuals(6, &a6, &d6).iter().enumerate() {
            assert!(r.abs() <= 1e-12 * scale, "k = {}: {r}", k + 1);
        }
        assert_eq!(chain.next().unwrap().unwrap().series, a6);
    }

    #[test]
    fn table_values_small_n() {
        let q4 = pipeline(4, 30);
        assert!((q4.eval(4.0).unwrap() - 0.579_426_020_542).abs() < 1e-10);
        let q11 = pipeline(11, 30);
        assert!((q11.eval(12.0).unwrap() - 0.235_093_699_164).abs() < 1e-9);
    }

    #[test]
    fn eval_domain() {
        let q = pipeline(100, 30);
        assert!((q.eval(99.0).unwrap() - 1.0).abs() < 1e-9);
        assert!((q.eval(100.0).unwrap() - 0.378_685_839_168).abs() < 1e-9);
        assert!(matches!(
            q.eval(101.0 + 1e-9),
            Err(Error::OutOfRange { .. })
        ));
        assert!(q.eval(98.9).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(RecurrenceConfig::new(3, 30).is_err());
        assert!(RecurrenceConfig::new(4, 7).is_err());
        assert_eq!(RecurrenceConfig::with_default_order(4).unwrap().order, 57);
        assert!(run_pipeline(&RecurrenceConfig {
            order: 30,
            target_n: 2
        })
        .is_err());
    }

    #[test]
    fn intermediates_are_bit_identical() {
        let direct = pipeline(20, 30);
        let mut chain = QnChain::new(Parity::Even, 30).unwrap();
        let via_chain: Vec<_> = chain.by_ref().take(10).map(|r| r.unwrap()).collect();
        assert_eq!(via_chain[8], direct);
        assert_eq!(via_chain[9].n, 22);
        assert!(chain.advance_to(22).is_err());
    }

    #[test]
    fn solutions_positive_and_decreasing() {
        for n in [4, 5, 9, 30, 77] {
            let q = pipeline(n, 30);
            let values: Vec<Real> = (0..16)
                .map(|i| q.eval_y(-1.0 + 2.0 * i as Real / 15.0).unwrap())
                .collect();
            assert!(values.iter().all(|&v| v > 0.0));
            assert!(values.windows(2).all(|w| w[0] > w[1]), "n = {n}");
        }
    }

    #[test]
    fn normalization_and_error_are_consistent() {
        for n in 4..=60 {
            let q = pipeline(n, 30);
            assert!(q.err_estimate >= 0.0 && q.err_estimate.is_finite());
            let gap = (q.eval_y(-1.0).unwrap() - 1.0).abs();
            assert!(
                gap <= 100.0 * q.err_estimate + 1e3 * f64::EPSILON,
                "n = {n}: {gap}"
            );
        }
    }
}
