use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::factorial;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Unbarred,
    Barred,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Unbarred => Side::Barred,
            Side::Barred => Side::Unbarred,
        }
    }
}

/// A monomial `t_{i_1} ⋯ t_{i_k} · t̄_{ī_1} ⋯ t̄_{ī_k̄}` stored as two sorted
/// multisets of indices.
///
/// Ordered by unbarred level, then barred level, then the index vectors
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TMonomial {
    unbarred: Vec<u32>,
    barred: Vec<u32>,
}

impl TMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(mut unbarred: Vec<u32>, mut barred: Vec<u32>) -> Result<Self> {
        if unbarred.iter().chain(barred.iter()).any(|&i| i == 0) {
            return Err(Error::ZeroIndex);
        }
        unbarred.sort_unstable();
        barred.sort_unstable();
        Ok(Self { unbarred, barred })
    }

    pub fn from_slices(unbarred: &[u32], barred: &[u32]) -> Result<Self> {
        Self::new(unbarred.to_vec(), barred.to_vec())
    }

    pub fn unbarred(&self) -> &[u32] {
        &self.unbarred
    }

    pub fn barred(&self) -> &[u32] {
        &self.barred
    }

    pub fn side(&self, side: Side) -> &[u32] {
        match side {
            Side::Unbarred => &self.unbarred,
            Side::Barred => &self.barred,
        }
    }

    pub fn is_one(&self) -> bool {
        self.unbarred.is_empty() && self.barred.is_empty()
    }

    /// Σ (index · multiplicity) on one side.
    pub fn level(&self, side: Side) -> u32 {
        self.side(side).iter().sum()
    }

    /// Total number of factors, `k + k̄`.
    pub fn degree(&self) -> usize {
        self.unbarred.len() + self.barred.len()
    }

    pub fn multiplicity(&self, side: Side, index: u32) -> u32 {
        self.side(side).iter().filter(|&&i| i == index).count() as u32
    }

    /// The product `∏ n_j! · ∏ n̄_j!` of multiplicity factorials.
    pub fn multiplicity_factorials(&self) -> BigInt {
        let mut acc = BigInt::one();
        for indices in [&self.unbarred, &self.barred] {
            for run in indices.chunk_by(|a, b| a == b) {
                acc *= factorial(run.len() as u32);
            }
        }
        acc
    }

    /// Mirror image: barred and unbarred sides swapped.
    pub fn conjugate(&self) -> Self {
        Self {
            unbarred: self.barred.clone(),
            barred: self.unbarred.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            unbarred: merge_sorted(&self.unbarred, &other.unbarred),
            barred: merge_sorted(&self.barred, &other.barred),
        }
    }

    /// Removes one factor `t_index` (or `t̄_index`), returning its former
    /// multiplicity alongside the quotient. `None` when the factor is absent.
    pub fn remove_one(&self, side: Side, index: u32) -> Option<(u32, Self)> {
        let indices = self.side(side);
        let pos = indices.iter().position(|&i| i == index)?;
        let mult = self.multiplicity(side, index);
        let mut out = self.clone();
        match side {
            Side::Unbarred => out.unbarred.remove(pos),
            Side::Barred => out.barred.remove(pos),
        };
        Some((mult, out))
    }

    pub fn max_index(&self) -> u32 {
        self.unbarred
            .last()
            .copied()
            .unwrap_or(0)
            .max(self.barred.last().copied().unwrap_or(0))
    }
}

fn merge_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Ord for TMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level(Side::Unbarred)
            .cmp(&other.level(Side::Unbarred))
            .then_with(|| self.level(Side::Barred).cmp(&other.level(Side::Barred)))
            .then_with(|| self.unbarred.cmp(&other.unbarred))
            .then_with(|| self.barred.cmp(&other.barred))
    }
}

impl PartialOrd for TMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (prefix, indices) in [("t", &self.unbarred), ("tb", &self.barred)] {
            for run in indices.chunk_by(|a, b| a == b) {
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "{}{}", prefix, run[0])?;
                if run.len() > 1 {
                    write!(f, "^{}", run.len())?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn canonical_order_and_levels() {
        let m = TMonomial::new(vec![2, 1, 1], vec![3]).unwrap();
        assert_eq!(m.unbarred(), &[1, 1, 2]);
        assert_eq!(m.level(Side::Unbarred), 4);
        assert_eq!(m.level(Side::Barred), 3);
        assert_eq!(m.multiplicity(Side::Unbarred, 1), 2);
        assert_eq!(m.multiplicity_factorials(), BigInt::from(2));
        assert!(TMonomial::new(vec![0], vec![]).is_err());
    }

    #[test]
    fn ordering_is_level_first() {
        let a = TMonomial::new(vec![1, 1], vec![2]).unwrap();
        let b = TMonomial::new(vec![2], vec![1, 1]).unwrap();
        let c = TMonomial::new(vec![3], vec![1]).unwrap();
        assert!(a < b);
        assert!(b < c);
        assert!(TMonomial::one() < a);
    }

    #[test]
    fn remove_one_reports_multiplicity() {
        let m = TMonomial::new(vec![1, 1, 2], vec![]).unwrap();
        let (n, q) = m.remove_one(Side::Unbarred, 1).unwrap();
        assert_eq!(n, 2);
        assert_eq!(q.unbarred(), &[1, 2]);
        assert!(m.remove_one(Side::Barred, 1).is_none());
    }

    #[test]
    fn display() {
        let m = TMonomial::new(vec![1, 1, 2], vec![3]).unwrap();
        assert_eq!(alloc::format!("{m}"), "t1^2*t2*tb3");
    }
}
