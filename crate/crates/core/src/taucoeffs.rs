//! The coefficient engine: Cauchy data of the disk solution, the mixed
//! derivatives `N(I | Ī)` at `t = 0`, reconstruction of pure derivatives
//! from one-point functions, and assembly of the truncated free energy.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinatorics::{
    bounded_compositions, compositions_into, multiset_block_sequences, partitions, s_weight, TowerKey, TowerTables,
};
use crate::exactring::{factorial, rat, Algebra, FormalSeries, Rational, Side, T0Monomial, T0Poly, TMonomial};
use crate::{Error, Result};

/// A mixed derivative `∂_{i_1}⋯∂_{i_k} ∂̄_{ī_1}⋯∂̄_{ī_k̄}`, both multisets
/// sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffKey {
    unbarred: Vec<u32>,
    barred: Vec<u32>,
}

impl CoeffKey {
    pub fn new(mut unbarred: Vec<u32>, mut barred: Vec<u32>) -> Result<Self> {
        if unbarred.iter().chain(&barred).any(|&i| i == 0) {
            return Err(Error::ZeroIndex);
        }
        unbarred.sort_unstable();
        barred.sort_unstable();
        Ok(Self { unbarred, barred })
    }

    pub fn unbarred(&self) -> &[u32] {
        &self.unbarred
    }

    pub fn barred(&self) -> &[u32] {
        &self.barred
    }

    pub fn level(&self, side: Side) -> u32 {
        match side {
            Side::Unbarred => self.unbarred.iter().sum(),
            Side::Barred => self.barred.iter().sum(),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            unbarred: self.barred.clone(),
            barred: self.unbarred.clone(),
        }
    }

    pub fn monomial(&self) -> TMonomial {
        TMonomial::from_slices(&self.unbarred, &self.barred).expect("indices validated")
    }

    /// The t0 exponent `i − (k + k̄) + 2` carried by `N(I | Ī)`.
    pub fn t0_exponent(&self) -> i32 {
        self.level(Side::Unbarred) as i32 - (self.unbarred.len() + self.barred.len()) as i32 + 2
    }
}

impl From<&TMonomial> for CoeffKey {
    fn from(m: &TMonomial) -> Self {
        Self {
            unbarred: m.unbarred().to_vec(),
            barred: m.barred().to_vec(),
        }
    }
}

/// One-point functions `∂_0^ℓ ∂_s v |_{t=0}` as functions of `t0`.
///
/// `s = 0` stands for pure `t0` derivatives, so `(2, 0)` is `∂_0² v|`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CauchyData {
    entries: BTreeMap<(u32, u32), T0Poly>,
}

impl CauchyData {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, ell: u32, s: u32, value: T0Poly) {
        self.entries.insert((ell, s), value);
    }

    pub fn get(&self, ell: u32, s: u32) -> Result<&T0Poly> {
        self.entries.get(&(ell, s)).ok_or(Error::MissingCauchyDatum { ell, s })
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), &T0Poly)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    /// Fills every `∂_0^ℓ ∂_s v` with `ℓ ≥ 2` by differentiating the supplied
    /// `ℓ = 1` entry, up to `max_ell`.
    pub fn extend_t0_derivatives(&mut self, max_ell: u32) {
        let seeds: Vec<(u32, T0Poly)> = self
            .entries
            .iter()
            .filter(|(&(ell, s), _)| ell == 1 && s > 0)
            .map(|(&(_, s), p)| (s, p.clone()))
            .collect();
        for (s, mut p) in seeds {
            for ell in 2..=max_ell {
                p = p.d_dt0();
                self.entries.entry((ell, s)).or_insert_with(|| p.clone());
            }
        }
    }
}

/// Cauchy data of the disk (all moments `t_k = 0`):
/// `∂_0 v = −t0 + t0 log t0`, `∂_0² v = log t0`, and every `∂_0^ℓ ∂_s v = 0`
/// for `s ≥ 1`.
pub fn riemann_cauchy_data(cutoff: u32) -> Result<CauchyData> {
    if cutoff == 0 {
        return Err(Error::ZeroCutoff);
    }
    let mut data = CauchyData::new();
    let mut v = T0Poly::monomial(rat(1, 2), 2, 1);
    v.add_term(rat(-3, 4), 2, 0);
    for ell in 0..=cutoff + 1 {
        data.insert(ell, 0, v.clone());
        v = v.d_dt0();
    }
    for s in 1..=cutoff {
        for ell in 0..=cutoff {
            data.insert(ell, s, T0Poly::zero());
        }
    }
    Ok(data)
}

/// `∂_i ∂̄_{j_1}⋯∂̄_{j_n} v |_{t=0} = j_1⋯j_n · i!/(i − n + 1)! · t0^(i − n + 1)`
/// when `Σ j = i`, zero otherwise. Symmetric under swapping sides.
pub fn single_index_derivative(i: u32, others: &[u32]) -> T0Monomial {
    let n = others.len() as i64;
    let exp = i as i64 - n + 1;
    if others.is_empty() || others.iter().sum::<u32>() != i || exp < 0 {
        return T0Monomial::new(Rational::zero(), exp as i32, 0);
    }
    let prod: BigInt = others.iter().map(|&j| BigInt::from(j)).product();
    let c = Rational::new(prod * factorial(i), factorial(exp as u32));
    T0Monomial::new(c, exp as i32, 0)
}

/// Memoizing engine for the coefficients of the free energy.
#[derive(Clone, Debug, Default)]
pub struct CoeffEngine {
    tables: TowerTables,
}

impl CoeffEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tables(&self) -> &TowerTables {
        &self.tables
    }

    pub fn tables_mut(&mut self) -> &mut TowerTables {
        &mut self.tables
    }

    /// `∂_I ∂̄_Ī v |_{t=0}` as a single t0-monomial; `N(I | Ī) · t0^(i−k−k̄+2)`.
    ///
    /// Zero unless both levels agree. With a single unbarred index the
    /// closed form of [`single_index_derivative`] applies; otherwise the sum
    /// runs over parts `s`, exponents `ℓ` and block partitions of `Ī`:
    /// `∏ I · ∏ Ī · Σ T_I(s; ℓ) · S_Ī(s; ℓ)`.
    pub fn n_coeff(&mut self, key: &CoeffKey) -> Result<T0Monomial> {
        let exp = key.t0_exponent();
        let level = key.level(Side::Unbarred);
        let zero = T0Monomial::new(Rational::zero(), exp, 0);
        if key.unbarred.is_empty() || key.barred.is_empty() || level != key.level(Side::Barred) {
            return Ok(zero);
        }
        let k = key.unbarred.len() as u32;
        if k == 1 {
            return Ok(single_index_derivative(level, &key.barred));
        }

        // (s, ℓ) pairs with a nonzero block weight
        let mut candidates: BTreeSet<(Vec<u32>, Vec<u32>)> = BTreeSet::new();
        for blocks in multiset_block_sequences(&key.barred) {
            let m = blocks.len() as u32;
            let parts: Vec<u32> = blocks.iter().map(|b| b.iter().sum()).collect();
            let upper: Vec<u32> = blocks
                .iter()
                .zip(&parts)
                .map(|(b, &s)| (s + 1).saturating_sub(b.len() as u32))
                .collect();
            if upper.contains(&0) {
                continue;
            }
            for ells in bounded_compositions(m + k - 2, &upper) {
                candidates.insert((parts.clone(), ells));
            }
        }

        let mut total = Rational::zero();
        for (parts, ells) in candidates {
            let s = s_weight(&key.barred, &parts, &ells);
            if s.is_zero() {
                continue;
            }
            let tower = TowerKey::new(key.unbarred.clone(), parts, ells)?;
            let t = self.tables.t_multi(&tower)?;
            total += t * s;
        }
        let prod: BigInt = key
            .unbarred
            .iter()
            .chain(&key.barred)
            .map(|&i| BigInt::from(i))
            .product();
        Ok(T0Monomial::new(total * Rational::from_integer(prod), exp, 0))
    }

    /// `∂_I ∂̄_Ī v |_{t=0}`, using the closed form whenever one side has a
    /// single index and [`Self::n_coeff`] otherwise.
    pub fn axis_mixed_derivative(&mut self, unbarred: &[u32], barred: &[u32]) -> Result<T0Monomial> {
        let key = CoeffKey::new(unbarred.to_vec(), barred.to_vec())?;
        if key.unbarred.is_empty() || key.barred.is_empty() {
            return Ok(T0Monomial::new(Rational::zero(), key.t0_exponent(), 0));
        }
        if key.unbarred.len() == 1 {
            return Ok(single_index_derivative(key.unbarred[0], &key.barred));
        }
        if key.barred.len() == 1 {
            return Ok(single_index_derivative(key.barred[0], &key.unbarred));
        }
        self.n_coeff(&key)
    }

    /// `∂_{i_1}⋯∂_{i_k} v` as the polynomial
    /// `Σ (∏ i / ∏ s) T_I(s; ℓ) ∏_p ∂_0^{ℓ_p} ∂_{s_p} v`
    /// in one-point functions supplied by `factor(ℓ, s)`. For `k = 1` the
    /// result is `factor(0, i)` itself.
    pub fn reconstruct_with<A: Algebra>(
        &mut self,
        indices: &[u32],
        zero: &A,
        mut factor: impl FnMut(u32, u32) -> Result<A>,
    ) -> Result<A> {
        let mut indices = indices.to_vec();
        indices.sort_unstable();
        if indices.contains(&0) {
            return Err(Error::ZeroIndex);
        }
        match indices.len() {
            0 => return Ok(zero.clone()),
            1 => return factor(0, indices[0]),
            _ => {}
        }
        let k = indices.len() as u32;
        let level: u32 = indices.iter().sum();
        let prod: BigInt = indices.iter().map(|&i| BigInt::from(i)).product();
        let mut acc = zero.clone();
        for m in 1..=level {
            for parts in compositions_into(level, m) {
                for ells in compositions_into(m + k - 2, m) {
                    let key = TowerKey::new(indices.clone(), parts.clone(), ells.clone())?;
                    let t = self.tables.t_multi(&key)?;
                    if t.is_zero() {
                        continue;
                    }
                    let denom: BigInt = parts.iter().map(|&s| BigInt::from(s)).product();
                    let coeff = t * Rational::new(prod.clone(), denom);
                    let mut term: Option<A> = None;
                    for (&s, &ell) in parts.iter().zip(&ells) {
                        let f = factor(ell, s)?;
                        term = Some(match term {
                            None => f,
                            Some(acc) => acc.mul(&f)?,
                        });
                    }
                    let term = term.expect("at least one part");
                    if !term.vanishes() {
                        acc = acc.add(&term.scale(&coeff));
                    }
                }
            }
        }
        Ok(acc)
    }

    /// [`Self::reconstruct_with`] on t0-valued Cauchy data.
    pub fn reconstruct_pure_derivative(&mut self, indices: &[u32], data: &CauchyData) -> Result<T0Poly> {
        self.reconstruct_with(indices, &T0Poly::zero(), |ell, s| data.get(ell, s).cloned())
    }

    /// Every `N(I | Ī)` with `|I| = |Ī| ≤ cutoff`, in canonical monomial order,
    /// zeros included.
    pub fn coefficient_table(&mut self, cutoff: u32) -> Result<Vec<(CoeffKey, T0Monomial)>> {
        if cutoff == 0 {
            return Err(Error::ZeroCutoff);
        }
        let mut rows = BTreeMap::new();
        for level in 1..=cutoff {
            let parts = partitions(level);
            for unbarred in &parts {
                for barred in &parts {
                    let key = CoeffKey::new(unbarred.clone(), barred.clone())?;
                    let value = self.n_coeff(&key)?;
                    rows.insert(key.monomial(), (key, value));
                }
            }
        }
        Ok(rows.into_values().collect())
    }

    /// The truncated free energy
    /// `v = ½ t0² log t0 − ¾ t0² + Σ N(I|Ī) / (∏ n_j! ∏ n̄_j!) · t0^(i−k−k̄+2) t^I t̄^Ī`.
    pub fn tau_series(&mut self, cutoff: u32) -> Result<FormalSeries> {
        let mut v = FormalSeries::constant(cutoff.max(1), leading_term());
        for (key, n) in self.coefficient_table(cutoff)? {
            if n.is_zero() {
                continue;
            }
            let mono = key.monomial();
            let c = n.coeff / Rational::from_integer(mono.multiplicity_factorials());
            v.add_term(mono, &T0Poly::monomial(c, n.t0_exp, 0));
        }
        Ok(v)
    }
}

/// `½ t0² log t0 − ¾ t0²`.
pub fn leading_term() -> T0Poly {
    let mut p = T0Poly::monomial(rat(1, 2), 2, 1);
    p.add_term(rat(-3, 4), 2, 0);
    p
}

/// Terms violating `2·t0_exp + Σ(2 − i_j) + Σ(2 − ī_j) = 4`. Log-bearing
/// terms are checked on their power part only.
pub fn homogeneity_violations(v: &FormalSeries) -> Vec<(TMonomial, T0Monomial)> {
    let mut out = Vec::new();
    for (mono, poly) in v.terms() {
        let weight: i64 = mono.unbarred().iter().chain(mono.barred()).map(|&i| 2 - i as i64).sum();
        for t in poly.terms() {
            if 2 * t.t0_exp as i64 + weight != 4 {
                out.push((mono.clone(), t));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::int;
    use alloc::vec;

    fn key(u: &[u32], b: &[u32]) -> CoeffKey {
        CoeffKey::new(u.to_vec(), b.to_vec()).unwrap()
    }

    fn t0m(c: Rational, e: i32) -> T0Monomial {
        T0Monomial::new(c, e, 0)
    }

    #[test]
    fn riemann_data() {
        let d = riemann_cauchy_data(4).unwrap();
        let mut d0v = T0Poly::monomial(int(-1), 1, 0);
        d0v.add_term(int(1), 1, 1);
        assert_eq!(d.get(1, 0).unwrap(), &d0v);
        assert!(d.get(1, 3).unwrap().is_zero());
        assert_eq!(d.get(2, 0).unwrap(), &T0Poly::monomial(int(1), 0, 1));
        assert!(matches!(d.get(1, 9), Err(Error::MissingCauchyDatum { ell: 1, s: 9 })));
    }

    #[test]
    fn axis_values() {
        let mut e = CoeffEngine::new();
        assert_eq!(e.axis_mixed_derivative(&[1], &[1]).unwrap(), t0m(int(1), 1));
        assert_eq!(e.axis_mixed_derivative(&[2], &[2]).unwrap(), t0m(int(2), 2));
        assert_eq!(e.axis_mixed_derivative(&[1, 1], &[2]).unwrap(), t0m(int(2), 1));
        assert!(e.axis_mixed_derivative(&[1], &[2]).unwrap().is_zero());
    }

    #[test]
    fn n_coeff_examples() {
        let mut e = CoeffEngine::new();
        assert_eq!(e.n_coeff(&key(&[1], &[1])).unwrap(), t0m(int(1), 1));
        assert_eq!(e.n_coeff(&key(&[1, 1], &[2])).unwrap(), t0m(int(2), 1));
        assert_eq!(e.n_coeff(&key(&[2], &[1, 1])).unwrap(), t0m(int(2), 1));
        assert!(e.n_coeff(&key(&[1, 1], &[1, 1])).unwrap().is_zero());
        assert!(e.n_coeff(&key(&[1, 2], &[2])).unwrap().is_zero());
        // ∂0² v = log t0 − log(1 − 4 t2 t̄2) for the ellipse family fixes
        // the t2² t̄2² coefficient: N / (2!·2!) · 2 = 8
        assert_eq!(e.n_coeff(&key(&[2, 2], &[2, 2])).unwrap(), t0m(int(16), 2));
    }

    #[test]
    fn reconstruct_examples() {
        let mut e = CoeffEngine::new();
        let riemann = riemann_cauchy_data(4).unwrap();
        assert!(e.reconstruct_pure_derivative(&[1, 1], &riemann).unwrap().is_zero());

        // ∂1² v = ½ ∂0∂2 v − ½ (∂0∂1 v)²
        let mut data = CauchyData::new();
        data.insert(1, 1, T0Poly::monomial(int(1), 1, 0));
        data.insert(1, 2, T0Poly::zero());
        assert_eq!(
            e.reconstruct_pure_derivative(&[1, 1], &data).unwrap(),
            T0Poly::monomial(rat(-1, 2), 2, 0)
        );
        let mut data = CauchyData::new();
        data.insert(0, 3, T0Poly::monomial(int(7), 1, 0));
        assert_eq!(
            e.reconstruct_pure_derivative(&[3], &data).unwrap(),
            T0Poly::monomial(int(7), 1, 0)
        );
        let empty = CauchyData::new();
        assert!(matches!(
            e.reconstruct_pure_derivative(&[1, 1], &empty),
            Err(Error::MissingCauchyDatum { .. })
        ));
    }

    #[test]
    fn tau_series_low_coefficients() {
        let mut e = CoeffEngine::new();
        let v = e.tau_series(3).unwrap();
        let m = |u: &[u32], b: &[u32]| TMonomial::from_slices(u, b).unwrap();
        assert_eq!(v.coeff(&TMonomial::one()), Some(&leading_term()));
        assert_eq!(v.coeff(&m(&[1], &[1])), Some(&T0Poly::monomial(int(1), 1, 0)));
        assert_eq!(v.coeff(&m(&[1, 1], &[2])), Some(&T0Poly::monomial(int(1), 1, 0)));
        assert_eq!(v.coeff(&m(&[2], &[2])), Some(&T0Poly::monomial(int(2), 2, 0)));
        assert!(homogeneity_violations(&v).is_empty());
    }

    #[test]
    fn coefficient_table_w2() {
        let mut e = CoeffEngine::new();
        let table = e.coefficient_table(2).unwrap();
        let got: Vec<_> = table
            .iter()
            .map(|(k, n)| (k.unbarred().to_vec(), k.barred().to_vec(), n.coeff.clone(), n.t0_exp))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![1], vec![1], int(1), 1),
                (vec![1, 1], vec![1, 1], int(0), 0),
                (vec![1, 1], vec![2], int(2), 1),
                (vec![2], vec![1, 1], int(2), 1),
                (vec![2], vec![2], int(2), 2),
            ]
        );
        assert_eq!(e.coefficient_table(1).unwrap().len(), 1);
        assert!(e.coefficient_table(0).is_err());
    }

    #[test]
    fn homogeneity_flags_violator() {
        let bad = FormalSeries::term(
            2,
            TMonomial::from_slices(&[1], &[1]).unwrap(),
            T0Poly::monomial(int(1), 3, 0),
        );
        assert_eq!(homogeneity_violations(&bad).len(), 1);
        assert!(homogeneity_violations(&FormalSeries::constant(2, leading_term())).is_empty());
    }
}
