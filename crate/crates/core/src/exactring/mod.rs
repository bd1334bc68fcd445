//! Exact ring of truncated formal power series.
//!
//! A [`FormalSeries`] maps [`TMonomial`]s (products of `t_k` and `t̄_k`) to
//! [`T0Poly`] coefficients, which are finite sums `c · t0^a · (log t0)^e` with
//! `e ∈ {0, 1}` and `a` any integer. Truncation is by level, independently on
//! the unbarred and barred sides.

mod algebra;
mod monomial;
mod series;
mod t0;

pub use algebra::Algebra;
pub use monomial::{Side, TMonomial};
pub use series::{CombineMode, FormalSeries, Var};
pub use t0::{T0Monomial, T0Poly};

use num_bigint::BigInt;
use num_traits::One;

/// Exact rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
