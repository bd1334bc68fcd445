use super::{FormalSeries, Rational, T0Poly};
use crate::Result;

/// The commutative operations needed to evaluate the coefficient polynomials
/// of the reconstruction formulas over different coefficient rings.
pub trait Algebra: Clone {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn scale(&self, factor: &Rational) -> Self;
    fn vanishes(&self) -> bool;
}

impl Algebra for Rational {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn scale(&self, factor: &Rational) -> Self {
        self * factor
    }
    fn vanishes(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

impl Algebra for T0Poly {
    fn add(&self, other: &Self) -> Self {
        T0Poly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        T0Poly::mul(self, other)
    }
    fn scale(&self, factor: &Rational) -> Self {
        T0Poly::scale(self, factor)
    }
    fn vanishes(&self) -> bool {
        T0Poly::is_zero(self)
    }
}

impl Algebra for FormalSeries {
    fn add(&self, other: &Self) -> Self {
        FormalSeries::add(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        FormalSeries::mul(self, other)
    }
    fn scale(&self, factor: &Rational) -> Self {
        FormalSeries::scale(self, factor)
    }
    fn vanishes(&self) -> bool {
        FormalSeries::is_zero(self)
    }
}
