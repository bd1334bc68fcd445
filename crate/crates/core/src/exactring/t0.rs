use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use super::{int, Rational};
use crate::{Error, Result};

/// A single term `coeff · t0^t0_exp · (log t0)^log_pow`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct T0Monomial {
    pub coeff: Rational,
    pub t0_exp: i32,
    pub log_pow: u8,
}

impl T0Monomial {
    pub fn new(coeff: Rational, t0_exp: i32, log_pow: u8) -> Self {
        Self { coeff, t0_exp, log_pow }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }
}

impl fmt::Display for T0Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if self.t0_exp != 0 {
            write!(f, "*t0^{}", self.t0_exp)?;
        }
        if self.log_pow == 1 {
            f.write_str("*log(t0)")?;
        }
        Ok(())
    }
}

/// Finite sum of [`T0Monomial`]s, keyed by `(t0_exp, log_pow)`. Zero
/// coefficients are never stored and `log_pow ≤ 1` always.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct T0Poly {
    terms: BTreeMap<(i32, u8), Rational>,
}

impl T0Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(int(1), 0, 0)
    }

    pub fn monomial(coeff: Rational, t0_exp: i32, log_pow: u8) -> Self {
        assert!(log_pow <= 1, "log t0 appears with power at most 1");
        let mut p = Self::zero();
        p.add_term(coeff, t0_exp, log_pow);
        p
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = T0Monomial>) -> Result<Self> {
        let mut p = Self::zero();
        for t in terms {
            if t.log_pow > 1 {
                return Err(Error::LogOverflow);
            }
            p.add_term(t.coeff, t.t0_exp, t.log_pow);
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_log(&self) -> bool {
        self.terms.keys().any(|&(_, l)| l > 0)
    }

    /// Terms in canonical order (ascending t0 exponent, then log power).
    pub fn terms(&self) -> impl Iterator<Item = T0Monomial> + '_ {
        self.terms.iter().map(|(&(e, l), c)| T0Monomial::new(c.clone(), e, l))
    }

    pub fn coeff(&self, t0_exp: i32, log_pow: u8) -> Rational {
        self.terms
            .get(&(t0_exp, log_pow))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, coeff: Rational, t0_exp: i32, log_pow: u8) {
        if coeff.is_zero() {
            return;
        }
        let key = (t0_exp, log_pow);
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (&(e, l), c) in &other.terms {
            self.add_term(c.clone(), e, l);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (&(e, l), c) in &other.terms {
            self.add_term(c * factor, e, l);
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &int(-1));
        out
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&k, c)| (k, c * factor)).collect(),
        }
    }

    /// Multiplies by `t0^shift`.
    pub fn shift_t0(&self, shift: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(e, l), c)| ((e + shift, l), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (&(e1, l1), c1) in &self.terms {
            for (&(e2, l2), c2) in &other.terms {
                if l1 + l2 > 1 {
                    return Err(Error::LogOverflow);
                }
                out.add_term(c1 * c2, e1 + e2, l1 + l2);
            }
        }
        Ok(out)
    }

    /// `d/dt0`, with `d/dt0 [t0^a log t0] = a t0^(a-1) log t0 + t0^(a-1)`.
    pub fn d_dt0(&self) -> Self {
        let mut out = Self::zero();
        for (&(e, l), c) in &self.terms {
            out.add_term(c * int(e as i64), e - 1, l);
            if l == 1 {
                out.add_term(c.clone(), e - 1, 0);
            }
        }
        out
    }

    /// Splits off the `log t0` part: returns `(κ, rest)` where `κ log t0` was
    /// the only log term. Fails when log terms carry a t0 power.
    pub fn split_log(&self) -> Result<(Rational, Self)> {
        let mut kappa = Rational::zero();
        let mut rest = Self::zero();
        for (&(e, l), c) in &self.terms {
            if l == 1 {
                if e != 0 {
                    return Err(Error::ExpDomain(alloc::format!("log term carries t0^{e}")));
                }
                kappa = c.clone();
            } else {
                rest.add_term(c.clone(), e, 0);
            }
        }
        Ok((kappa, rest))
    }

    pub fn eval(&self, t0: f64) -> Result<f64> {
        if t0.is_nan() || t0 <= 0.0 {
            return Err(Error::NonPositiveT0(t0));
        }
        let log_t0 = libm_ln(t0);
        let mut acc = 0.0;
        for (&(e, l), c) in &self.terms {
            let mut term = rational_to_f64(c) * libm_powi(t0, e);
            if l == 1 {
                term *= log_t0;
            }
            acc += term;
        }
        if !acc.is_finite() {
            return Err(Error::Overflow("t0 polynomial"));
        }
        Ok(acc)
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // huge numerator or denominator: scale both down first
            let bits = r.numer().bits().max(r.denom().bits()) as i64 - 900;
            let shift = bits.max(0) as usize;
            let n = (r.numer().abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            let v = n / d;
            if r.is_negative() {
                -v
            } else {
                v
            }
        }
    }
}

fn libm_ln(x: f64) -> f64 {
    num_traits::Float::ln(x)
}

fn libm_powi(x: f64, e: i32) -> f64 {
    num_traits::Float::powi(x, e)
}

impl fmt::Display for T0Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<_> = self.terms().collect();
        for (n, t) in terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::rat;

    fn leading() -> T0Poly {
        let mut p = T0Poly::monomial(rat(1, 2), 2, 1);
        p.add_term(rat(-3, 4), 2, 0);
        p
    }

    #[test]
    fn derivative_of_leading_term() {
        let d1 = leading().d_dt0();
        let mut expected = T0Poly::monomial(int(-1), 1, 0);
        expected.add_term(int(1), 1, 1);
        assert_eq!(d1, expected);
        assert_eq!(d1.d_dt0(), T0Poly::monomial(int(1), 0, 1));
    }

    #[test]
    fn log_overflow_rejected() {
        let l = T0Poly::monomial(int(1), 0, 1);
        assert_eq!(l.mul(&l), Err(Error::LogOverflow));
        assert!(l.mul(&T0Poly::monomial(int(3), -2, 0)).is_ok());
    }

    #[test]
    fn eval_needs_positive_t0() {
        assert!((leading().eval(1.0).unwrap() + 0.75).abs() < 1e-15);
        assert!(leading().eval(0.0).is_err());
    }

    #[test]
    fn huge_rationals_convert() {
        use num_bigint::BigInt;
        let big = BigInt::from(10).pow(400);
        let r = Rational::new(big.clone() * 3 + 1, big * 4);
        assert!((rational_to_f64(&r) - 0.75).abs() < 1e-15);
    }
}
