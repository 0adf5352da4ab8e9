//! Sign plus base-10 log magnitude, for values far outside the `f64` range.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::Real;

const LN_10: Real = std::f64::consts::LN_10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogScaledReal {
    /// −1, 0 or +1.
    pub sign: i8,
    /// `log10 |value|`; meaningless (stored as −∞) when `sign == 0`.
    #[serde(rename = "log10")]
    pub log10_mag: Real,
}

impl LogScaledReal {
    pub const ZERO: Self = Self {
        sign: 0,
        log10_mag: Real::NEG_INFINITY,
    };

    pub const ONE: Self = Self {
        sign: 1,
        log10_mag: 0.0,
    };

    pub fn from_real(value: Real) -> Self {
        match value.partial_cmp(&0.0) {
            Some(Ordering::Greater) => Self::positive_log10(value.log10()),
            Some(Ordering::Less) => Self {
                sign: -1,
                log10_mag: (-value).log10(),
            },
            _ => Self::ZERO,
        }
    }

    /// `+10^log10`.
    pub fn positive_log10(log10: Real) -> Self {
        Self {
            sign: 1,
            log10_mag: log10,
        }
    }

    /// `+e^ln`.
    pub fn positive_ln(ln: Real) -> Self {
        Self::positive_log10(ln / LN_10)
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Natural log of the magnitude.
    pub fn ln_abs(&self) -> Real {
        self.log10_mag * LN_10
    }

    /// Materializes the value; overflows to ±∞ and underflows to 0 like `f64`.
    pub fn to_real(&self) -> Real {
        if self.sign == 0 {
            0.0
        } else {
            Real::from(self.sign) * Real::powf(10.0, self.log10_mag)
        }
    }

    /// `Some(value)` when the magnitude is a normal `f64`.
    pub fn to_real_checked(&self) -> Option<Real> {
        let v = self.to_real();
        (v == 0.0 && self.sign == 0 || v.is_normal()).then_some(v)
    }

    /// `|self|^exponent`, keeping the sign only for a zero base.
    pub fn abs_powf(&self, exponent: Real) -> Self {
        if self.sign == 0 {
            return if exponent == 0.0 {
                Self::ONE
            } else {
                Self::ZERO
            };
        }
        Self::positive_log10(self.log10_mag * exponent)
    }

    pub fn abs(&self) -> Self {
        Self {
            sign: self.sign.abs(),
            log10_mag: self.log10_mag,
        }
    }
}

impl Mul for LogScaledReal {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let sign = self.sign * rhs.sign;
        if sign == 0 {
            return Self::ZERO;
        }
        Self {
            sign,
            log10_mag: self.log10_mag + rhs.log10_mag,
        }
    }
}

impl Mul<Real> for LogScaledReal {
    type Output = Self;

    fn mul(self, rhs: Real) -> Self {
        self * Self::from_real(rhs)
    }
}

impl Div for LogScaledReal {
    type Output = Self;

    /// Division by zero yields a signed infinite magnitude.
    fn div(self, rhs: Self) -> Self {
        if self.sign == 0 {
            return Self::ZERO;
        }
        if rhs.sign == 0 {
            return Self {
                sign: self.sign,
                log10_mag: Real::INFINITY,
            };
        }
        Self {
            sign: self.sign * rhs.sign,
            log10_mag: self.log10_mag - rhs.log10_mag,
        }
    }
}

impl fmt::Display for LogScaledReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        let exponent = self.log10_mag.floor();
        let mantissa = Real::powf(10.0, self.log10_mag - exponent);
        let sign = if self.sign < 0 { "-" } else { "" };
        write!(f, "{sign}{mantissa:.12}e{exponent}")
    }
}
