//! Globally adaptive 15-point Gauss–Kronrod quadrature.
//!
//! Panels are bisected largest-error first. The per-panel error estimate and
//! the roundoff floor follow QUADPACK's `qk15`. Panel totals are summed in
//! left-to-right order, so the result does not depend on the bisection history
//! beyond the final partition.

use crate::{Error, Real, Result};

const XGK: [Real; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [Real; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [Real; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: Real,
    pub rel_tol: Real,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_panels: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Real,
    pub error: Real,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: Real,
    b: Real,
    value: Real,
    error: Real,
    // Roundoff floor, 50 ε ∫|f|.
    floor: Real,
}

fn kronrod15<F>(f: &mut F, a: Real, b: Real) -> Result<Panel>
where
    F: FnMut(Real) -> Result<Real>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre)?;
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx)?;
        let f2 = f(centre + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * Real::EPSILON * res_abs;
    if res_abs > Real::MIN_POSITIVE / (50.0 * Real::EPSILON) {
        error = error.max(floor);
    }
    if !value.is_finite() {
        return Err(Error::Domain(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    Ok(Panel {
        a,
        b,
        value,
        error,
        floor,
    })
}

/// `∫_a^b f`, refining until the error estimate drops below
/// `min(abs_tol, rel_tol·|I|)` or reaches the roundoff floor.
///
/// On failure the error carries the best estimate found.
pub fn integrate<F>(mut f: F, a: Real, b: Real, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(Real) -> Result<Real>,
{
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut panels = vec![kronrod15(&mut f, a, b)?];
    let mut evaluations = 15;
    loop {
        let value: Real = panels.iter().map(|p| p.value).sum();
        let error: Real = panels.iter().map(|p| p.error).sum();
        let floor: Real = panels.iter().map(|p| p.floor).sum();
        let target = opts.abs_tol.min(opts.rel_tol * value.abs()).max(floor);
        if error <= target {
            return Ok(QuadResult {
                value,
                error,
                evaluations,
            });
        }
        // Panels already at their roundoff floor cannot improve.
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.error > p.floor)
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let Some(worst) = worst.filter(|_| panels.len() < opts.max_panels) else {
            return Err(Error::Quadrature {
                estimate: value,
                error,
                tolerance: target,
            });
        };
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::Quadrature {
                estimate: value,
                error,
                tolerance: target,
            });
        }
        let left = kronrod15(&mut f, p.a, mid)?;
        let right = kronrod15(&mut f, mid, p.b)?;
        evaluations += 30;
        panels[worst] = left;
        panels.insert(worst + 1, right);
    }
}
