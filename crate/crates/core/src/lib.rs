//! Numerical evaluation of the Schläfli function `f_n(x)` on `x ∈ [n−1, n+1]`.
//!
//! The function is the normalized content of a regular spherical simplex with
//! dihedral angle `2α`, written in terms of `x = sec 2α`. Closed forms exist for
//! `n ≤ 3`; for larger `n` the crate computes the regular companion `q_n(x)` as a
//! Chebyshev series, obtained by a coefficient recurrence that climbs from the
//! seeds `q_2`/`q_3` two dimensions at a time, and then restores the branch
//! factor `(x−n+1)^{(n−1)/2}` and the parity prefactor in log space.
//!
//! Layout:
//!
//! * [`cheb`]: Chebyshev fitting on the zeros of `T_N`, Clenshaw evaluation,
//!   derivative and product coefficients.
//! * [`recurrence`]: source terms, seeds and the `q_{n−2} → q_n` coefficient
//!   solve, plus the chain driver.
//! * [`schlafli`]: `f_n`, prefactors, closed forms and simplex content.
//! * [`identities`]: the odd/even tanh-series identities used as cross-checks.
//! * [`bounds`]: Rogers, Coxeter and Conway–Sloane bounds.
//! * [`asymptotics`]: large-`n` expansions of `f_n` and of the simplex volume.
//! * [`oracle`]: independent nested-quadrature values for `n ≤ 7`.
//! * [`cli`]: the command layer behind the `schlafli` binary.

pub mod asymptotics;
pub mod bounds;
pub mod cheb;
pub mod cli;
mod error;
pub mod identities;
pub mod logscale;
pub mod oracle;
pub mod quad;
pub mod recurrence;
pub mod schlafli;

pub use error::{Error, Result};
pub use logscale::LogScaledReal;

/// Working real type. Every numeric path in the crate goes through this alias.
pub type Real = f64;

/// Series order used when none is given.
pub const DEFAULT_ORDER: usize = 57;
