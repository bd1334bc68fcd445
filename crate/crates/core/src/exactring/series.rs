use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{int, Rational, Side, T0Poly, TMonomial};
use crate::riemann::MomentVector;
use crate::{Error, Result};

/// Differentiation variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T0,
    T(u32),
    TBar(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    Add,
    Mul,
}

/// Truncated formal power series in `t_k`, `t̄_k` with [`T0Poly`]
/// coefficients.
///
/// Every stored monomial has unbarred and barred level at most `cutoff`;
/// zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    cutoff: u32,
    terms: BTreeMap<TMonomial, T0Poly>,
}

impl FormalSeries {
    pub fn zero(cutoff: u32) -> Self {
        Self {
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(cutoff: u32) -> Self {
        Self::constant(cutoff, T0Poly::one())
    }

    pub fn constant(cutoff: u32, c: T0Poly) -> Self {
        let mut s = Self::zero(cutoff);
        s.add_term(TMonomial::one(), &c);
        s
    }

    pub fn term(cutoff: u32, mono: TMonomial, c: T0Poly) -> Self {
        let mut s = Self::zero(cutoff);
        s.add_term(mono, &c);
        s
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TMonomial, &T0Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &TMonomial) -> Option<&T0Poly> {
        self.terms.get(mono)
    }

    pub fn fits(&self, mono: &TMonomial) -> bool {
        mono.level(Side::Unbarred) <= self.cutoff && mono.level(Side::Barred) <= self.cutoff
    }

    /// Adds `c · mono`; monomials above the cutoff are dropped.
    pub fn add_term(&mut self, mono: TMonomial, c: &T0Poly) {
        if c.is_zero() || !self.fits(&mono) {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(existing) => {
                existing.add_assign(c);
                if existing.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c.clone());
            }
        }
    }

    /// Sum; the result carries the smaller of the two cutoffs.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.with_cutoff(self.cutoff.min(other.cutoff));
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.cutoff);
        }
        Self {
            cutoff: self.cutoff,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(factor))).collect(),
        }
    }

    pub fn scale_poly(&self, factor: &T0Poly) -> Result<Self> {
        let mut out = Self::zero(self.cutoff);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.mul(factor)?);
        }
        Ok(out)
    }

    /// Product truncated at the smaller cutoff.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_filtered(other, |_| true)
    }

    /// Product keeping only monomials accepted by `keep` (and within the
    /// cutoff).
    pub fn mul_filtered(&self, other: &Self, keep: impl Fn(&TMonomial) -> bool) -> Result<Self> {
        let cutoff = self.cutoff.min(other.cutoff);
        let mut out = Self::zero(cutoff);
        for (m1, c1) in &self.terms {
            let (u1, b1) = (m1.level(Side::Unbarred), m1.level(Side::Barred));
            if u1 > cutoff || b1 > cutoff {
                continue;
            }
            for (m2, c2) in &other.terms {
                if u1 + m2.level(Side::Unbarred) > cutoff || b1 + m2.level(Side::Barred) > cutoff {
                    continue;
                }
                let m = m1.mul(m2);
                if !keep(&m) {
                    continue;
                }
                out.add_term(m, &c1.mul(c2)?);
            }
        }
        Ok(out)
    }

    /// Add or multiply two series sharing a cutoff.
    pub fn combine(a: &Self, b: &Self, mode: CombineMode) -> Result<Self> {
        if a.cutoff != b.cutoff {
            return Err(Error::CutoffMismatch(a.cutoff, b.cutoff));
        }
        match mode {
            CombineMode::Add => Ok(a.add(b)),
            CombineMode::Mul => a.mul(b),
        }
    }

    pub fn retain(&self, keep: impl Fn(&TMonomial) -> bool) -> Self {
        Self {
            cutoff: self.cutoff,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-truncates to a new cutoff (coefficients above it are dropped).
    pub fn with_cutoff(&self, cutoff: u32) -> Self {
        let mut out = Self::zero(cutoff);
        out.terms = self
            .terms
            .iter()
            .filter(|(m, _)| out.fits(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        out
    }

    /// Swaps the barred and unbarred variables.
    pub fn conjugate(&self) -> Self {
        Self {
            cutoff: self.cutoff,
            terms: self.terms.iter().map(|(m, c)| (m.conjugate(), c.clone())).collect(),
        }
    }

    pub fn max_index(&self) -> u32 {
        self.terms.keys().map(TMonomial::max_index).max().unwrap_or(0)
    }

    pub fn diff(&self, var: Var) -> Self {
        let mut out = Self::zero(self.cutoff);
        match var {
            Var::T0 => {
                for (m, c) in &self.terms {
                    out.add_term(m.clone(), &c.d_dt0());
                }
            }
            Var::T(k) | Var::TBar(k) => {
                let side = if matches!(var, Var::T(_)) {
                    Side::Unbarred
                } else {
                    Side::Barred
                };
                for (m, c) in &self.terms {
                    if let Some((mult, rest)) = m.remove_one(side, k) {
                        out.add_term(rest, &c.scale(&int(mult as i64)));
                    }
                }
            }
        }
        out
    }

    /// Applies the derivatives in `vars` in order.
    pub fn diff_many(&self, vars: &[Var]) -> Self {
        vars.iter().fold(self.clone(), |acc, &v| acc.diff(v))
    }

    /// Exponential of `κ log t0 + R`, returned as `t0^κ exp(R)`.
    ///
    /// `κ` must be a nonnegative integer, the log term must sit on the
    /// constant monomial, and `R` must have no `t`-free part.
    pub fn exp(&self) -> Result<Self> {
        let mut regular = self.clone();
        let head = regular.terms.remove(&TMonomial::one()).unwrap_or_default();
        let (kappa, rest) = head.split_log()?;
        if !rest.is_zero() {
            return Err(Error::ExpDomain(format!("t-free part {rest} has no exact exponential")));
        }
        if !kappa.is_integer() || kappa.is_negative() {
            return Err(Error::ExpDomain(format!(
                "log t0 coefficient {kappa} is not a nonnegative integer"
            )));
        }
        if let Some((m, _)) = regular.terms.iter().find(|(_, c)| c.has_log()) {
            return Err(Error::ExpDomain(format!("log t0 attached to monomial {m}")));
        }
        let kappa = kappa
            .to_integer()
            .to_i32()
            .ok_or(Error::ExpDomain(format!("log t0 coefficient {kappa} too large")))?;

        let mut result = Self::one(self.cutoff);
        let mut power = Self::one(self.cutoff);
        let mut n: i64 = 1;
        loop {
            power = power.mul(&regular)?.scale(&Rational::new(One::one(), n.into()));
            if power.is_zero() {
                break;
            }
            result = result.add(&power);
            n += 1;
        }
        if kappa != 0 {
            for c in result.terms.values_mut() {
                *c = c.shift_t0(kappa);
            }
        }
        Ok(result)
    }

    /// Floating-point value at the given moments, summed in canonical term
    /// order.
    pub fn eval(&self, m: &MomentVector) -> Result<Complex64> {
        if m.t0.is_nan() || m.t0 <= 0.0 {
            return Err(Error::NonPositiveT0(m.t0));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (mono, c) in &self.terms {
            let mut x = Complex64::new(c.eval(m.t0)?, 0.0);
            for &k in mono.unbarred() {
                x *= m.t(k).ok_or(Error::MissingMoment(k))?;
            }
            for &k in mono.barred() {
                x *= m.tbar(k).ok_or(Error::MissingMoment(k))?;
            }
            acc += x;
        }
        if !(acc.re.is_finite() && acc.im.is_finite()) {
            return Err(Error::Overflow("series"));
        }
        Ok(acc)
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<_> = self.terms.iter().collect();
        for (n, (m, c)) in parts.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}
