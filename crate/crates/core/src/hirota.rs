//! Residual checks of the dispersionless Hirota equations on a truncated
//! free energy.
//!
//! ```text
//! (1)  (z − ξ) e^{D(z)D(ξ)v} = z e^{−∂0 D(z)v} − ξ e^{−∂0 D(ξ)v}
//! (2)  the same with D̄ in place of D
//! (3)  1 − e^{−D(z)D̄(ξ̄)v} = (z ξ̄)^{−1} e^{∂0(∂0 + D(z) + D̄(ξ̄))v}
//! ```
//!
//! with `D(z) = Σ z^{−k}/k ∂_{t_k}`. Both sides are expanded in `z^{−a}ξ^{−b}`
//! over the exact ring and compared coefficient by coefficient. A truncated
//! `v` only determines coefficients whose inputs all lie below the cutoff, so
//! each check restricts itself to an exactness window and reports every
//! nonzero residual inside it.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{compositions_into, count_bounded_compositions, CompositionQuery, TowerTables};
use crate::exactring::{factorial, int, Algebra, FormalSeries, Rational, Side, T0Monomial, T0Poly, TMonomial, Var};
use crate::taucoeffs::{homogeneity_violations, CauchyData};
use crate::{Error, Result};

/// Coefficients of `z^{−a} ξ^{−b}`, each a [`FormalSeries`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateExpansion {
    cutoff: u32,
    cells: BTreeMap<(i32, i32), FormalSeries>,
}

impl BivariateExpansion {
    pub fn zero(cutoff: u32) -> Self {
        Self {
            cutoff,
            cells: BTreeMap::new(),
        }
    }

    pub fn one(cutoff: u32) -> Self {
        let mut e = Self::zero(cutoff);
        e.add_cell(0, 0, &FormalSeries::one(cutoff));
        e
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn cell(&self, a: i32, b: i32) -> Option<&FormalSeries> {
        self.cells.get(&(a, b))
    }

    pub fn cells(&self) -> impl Iterator<Item = ((i32, i32), &FormalSeries)> {
        self.cells.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn add_cell(&mut self, a: i32, b: i32, series: &FormalSeries) {
        if series.is_zero() {
            return;
        }
        let entry = self
            .cells
            .entry((a, b))
            .or_insert_with(|| FormalSeries::zero(series.cutoff()));
        *entry = entry.add(series);
        if entry.is_zero() {
            self.cells.remove(&(a, b));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), s) in &other.cells {
            out.add_cell(a, b, s);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut out = Self::zero(self.cutoff);
        for (&(a, b), s) in &self.cells {
            out.add_cell(a, b, &s.scale(factor));
        }
        out
    }

    /// Multiplies by `z^{−da} ξ^{−db}`.
    pub fn shift(&self, da: i32, db: i32) -> Self {
        Self {
            cutoff: self.cutoff,
            cells: self
                .cells
                .iter()
                .map(|(&(a, b), s)| ((a + da, b + db), s.clone()))
                .collect(),
        }
    }

    pub fn retain(&self, keep: &dyn Fn(i32, i32, &TMonomial) -> bool) -> Self {
        let mut out = Self::zero(self.cutoff);
        for (&(a, b), s) in &self.cells {
            out.add_cell(a, b, &s.retain(|m| keep(a, b, m)));
        }
        out
    }

    /// Product keeping only `(a, b, monomial)` accepted by `keep`.
    pub fn mul(&self, other: &Self, keep: &dyn Fn(i32, i32, &TMonomial) -> bool) -> Result<Self> {
        let mut out = Self::zero(self.cutoff.min(other.cutoff));
        for (&(a1, b1), s1) in &self.cells {
            for (&(a2, b2), s2) in &other.cells {
                let (a, b) = (a1 + a2, b1 + b2);
                let p = s1.mul_filtered(s2, |m| keep(a, b, m))?;
                out.add_cell(a, b, &p);
            }
        }
        Ok(out)
    }

    /// `exp` of an expansion whose `(0, 0)` cell may hold `κ log t0` with
    /// `κ` a nonnegative integer; the result is `t0^κ exp(rest)`. Every other
    /// piece must be free of `log t0`, and the `(0, 0)` cell must have no
    /// `t`-free part besides the log. `keep` must bound the expansion for the
    /// Taylor sum to terminate.
    pub fn exp(&self, keep: &dyn Fn(i32, i32, &TMonomial) -> bool) -> Result<Self> {
        let mut regular = self.clone();
        let mut kappa = 0i32;
        if let Some(head) = regular.cells.remove(&(0, 0)) {
            let log_part = FormalSeries::constant(
                head.cutoff(),
                head.coeff(&TMonomial::one()).cloned().unwrap_or_default(),
            );
            let factor = log_part.exp()?;
            kappa = factor
                .coeff(&TMonomial::one())
                .and_then(|p| p.terms().next())
                .map(|t| t.t0_exp)
                .unwrap_or(0);
            let rest = head.retain(|m| !m.is_one());
            regular.add_cell(0, 0, &rest);
        }
        for (&(a, b), s) in &regular.cells {
            if s.terms().any(|(_, c)| c.has_log()) {
                return Err(Error::ExpDomain(alloc::format!(
                    "log t0 in cell ({a}, {b}) of the exponent"
                )));
            }
        }
        let mut result = Self::one(self.cutoff).retain(keep);
        let mut power = result.clone();
        let mut n: i64 = 1;
        while !power.is_zero() {
            power = power
                .mul(&regular, keep)?
                .scale(&Rational::new(BigInt::one(), BigInt::from(n)));
            result = result.add(&power);
            n += 1;
        }
        if kappa != 0 {
            let t0k = T0Poly::monomial(int(1), kappa, 0);
            let mut shifted = Self::zero(result.cutoff);
            for (&(a, b), s) in &result.cells {
                shifted.add_cell(a, b, &s.scale_poly(&t0k)?);
            }
            result = shifted;
        }
        Ok(result)
    }
}

/// `D(z) v` (or `D̄(z̄) v`): the `z^{−k}` coefficient is `∂_{t_k} v / k`,
/// placed in cells `(k, 0)` for `k ≤ order`.
pub fn apply_d(series: &FormalSeries, side: Side, order: u32) -> BivariateExpansion {
    let mut out = BivariateExpansion::zero(series.cutoff());
    for k in 1..=order {
        let d = series
            .diff(var(side, k))
            .scale(&Rational::new(BigInt::one(), BigInt::from(k)));
        out.add_cell(k as i32, 0, &d);
    }
    out
}

/// `D_z D_ξ v` with the given sides: cell `(i, j)` is `∂_i ∂_j v / (i j)`.
fn apply_d_pair(series: &FormalSeries, first: Side, second: Side, max_a: u32, max_b: u32) -> BivariateExpansion {
    let mut out = BivariateExpansion::zero(series.cutoff());
    for i in 1..=max_a {
        let di = series.diff(var(first, i));
        if di.is_zero() {
            continue;
        }
        for j in 1..=max_b {
            let d = di
                .diff(var(second, j))
                .scale(&Rational::new(BigInt::one(), BigInt::from(i * j)));
            out.add_cell(i as i32, j as i32, &d);
        }
    }
    out
}

fn var(side: Side, k: u32) -> Var {
    match side {
        Side::Unbarred => Var::T(k),
        Side::Barred => Var::TBar(k),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Equation {
    Hirota1,
    Hirota2,
    Hirota3,
    Toda,
    Dkp,
    Homogeneity,
}

impl Equation {
    pub fn id(self) -> &'static str {
        match self {
            Equation::Hirota1 => "1",
            Equation::Hirota2 => "2",
            Equation::Hirota3 => "3",
            Equation::Toda => "toda",
            Equation::Dkp => "dkp",
            Equation::Homogeneity => "homogeneity",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualEntry {
    pub a: i32,
    pub b: i32,
    pub monomial: TMonomial,
    pub term: T0Monomial,
}

/// Nonzero residual coefficients of one check. Empty means pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualReport {
    pub equation: Equation,
    pub checked_order: u32,
    pub entries: Vec<ResidualEntry>,
}

impl ResidualReport {
    fn from_expansion(equation: Equation, checked_order: u32, residual: &BivariateExpansion) -> Self {
        let mut entries = Vec::new();
        for ((a, b), s) in residual.cells() {
            for (m, c) in s.terms() {
                for term in c.terms() {
                    entries.push(ResidualEntry {
                        a,
                        b,
                        monomial: m.clone(),
                        term,
                    });
                }
            }
        }
        Self {
            equation,
            checked_order,
            entries,
        }
    }

    pub fn passed(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Which Hirota equation, and the sides its two spectral variables act on.
fn hirota_sides(eq: u8) -> Result<(Equation, Side, Side)> {
    match eq {
        1 => Ok((Equation::Hirota1, Side::Unbarred, Side::Unbarred)),
        2 => Ok((Equation::Hirota2, Side::Barred, Side::Barred)),
        3 => Ok((Equation::Hirota3, Side::Unbarred, Side::Barred)),
        _ => Err(Error::InvalidParameter(alloc::format!("no Hirota equation ({eq})"))),
    }
}

/// Largest derivative order a Hirota check can use at a given cutoff.
pub fn max_hirota_order(eq: u8, cutoff: u32) -> u32 {
    if eq == 3 {
        2 * cutoff
    } else {
        cutoff
    }
}

/// Whether the residual coefficient of `z^{−a} ξ^{−b}` at `m` in equation
/// `eq` is determined by a free energy truncated at `cutoff`, within the
/// derivative-order bound `order` (`a + b + 1` for (1) and (2), `a + b` for
/// (3)). With `u`, `ū` the unbarred and barred levels of `m`:
/// * (1): `u + a + b + 1 ≤ W`; (2) is the mirror image with `ū`.
/// * (3): `u + a ≤ W` and `ū + b ≤ W`.
///
/// Inside these windows every derivative of `v` that contributes is taken of
/// a stored coefficient, so the values do not depend on the cutoff.
pub fn in_window(eq: u8, cutoff: u32, order: u32, a: i32, b: i32, m: &TMonomial) -> bool {
    let (w, ord) = (cutoff as i32, order as i32);
    let u = m.level(Side::Unbarred) as i32;
    let ub = m.level(Side::Barred) as i32;
    match eq {
        1 => a + b < ord && u + a + b < w,
        2 => a + b < ord && ub + a + b < w,
        3 => a + b <= ord && u + a <= w && ub + b <= w,
        _ => false,
    }
}

/// Left and right sides of one Hirota equation as expansions in
/// `z^{−a} ξ^{−b}`, restricted to [`in_window`].
pub fn hirota_sides_expanded(v: &FormalSeries, eq: u8, order: u32) -> Result<(BivariateExpansion, BivariateExpansion)> {
    let (_, s1, s2) = hirota_sides(eq)?;
    let cutoff = v.cutoff();
    let max = max_hirota_order(eq, cutoff);
    if order > max {
        return Err(Error::WindowExceeded { order, max, cutoff });
    }
    let keep = move |a: i32, b: i32, m: &TMonomial| in_window(eq, cutoff, order, a, b, m);
    let w = cutoff as i32;
    let ord = order as i32;
    if eq == 3 {
        let dd = apply_d_pair(v, s1, s2, order.min(cutoff), order.min(cutoff)).retain(&keep);
        let lhs = BivariateExpansion::one(cutoff)
            .sub(&dd.scale(&int(-1)).exp(&keep)?)
            .retain(&keep);

        // exponent ∂0(∂0 + D(z) + D̄(ξ̄))v, cells shifted by (1, 1) afterwards
        let keep_rhs = move |a: i32, b: i32, m: &TMonomial| keep(a + 1, b + 1, m);
        let d0 = v.diff(Var::T0);
        let mut y = BivariateExpansion::zero(cutoff);
        y.add_cell(0, 0, &d0.diff(Var::T0));
        y = y.add(&apply_d(&d0, Side::Unbarred, cutoff));
        y = y.add(&apply_d(&d0, Side::Barred, cutoff).transpose());
        let rhs = y.retain(&keep_rhs).exp(&keep_rhs)?.shift(1, 1).retain(&keep);
        return Ok((lhs, rhs));
    }

    let side = s1;
    // F = e^{D D v} and G = e^{−∂0 D v}, with cells of total order a + b
    let keep_inner = move |a: i32, b: i32, m: &TMonomial| a + b <= ord && m.level(side) as i32 + a + b <= w;
    let dd = apply_d_pair(v, s1, s2, order, order).retain(&keep_inner);
    let f = dd.exp(&keep_inner)?;
    let d0 = v.diff(Var::T0);
    let g = apply_d(&d0, side, order)
        .scale(&int(-1))
        .retain(&keep_inner)
        .exp(&keep_inner)?;

    // coefficient of z^{−a} ξ^{−b}: (z − ξ)F → F_{a+1,b} − F_{a,b+1}
    let lhs = f.shift(-1, 0).sub(&f.shift(0, -1)).retain(&keep);
    let g_xi = g.transpose();
    let rhs = g.shift(-1, 0).sub(&g_xi.shift(0, -1)).retain(&keep);
    Ok((lhs, rhs))
}

impl BivariateExpansion {
    /// Swaps the roles of the two spectral variables.
    pub fn transpose(&self) -> Self {
        Self {
            cutoff: self.cutoff,
            cells: self.cells.iter().map(|(&(a, b), s)| ((b, a), s.clone())).collect(),
        }
    }
}

/// Residual of Hirota equation `eq ∈ {1, 2, 3}` up to derivative order
/// `order` (see [`hirota_sides_expanded`] for the windows).
pub fn hirota_residual(v: &FormalSeries, eq: u8, order: u32) -> Result<ResidualReport> {
    let (equation, _, _) = hirota_sides(eq)?;
    let (lhs, rhs) = hirota_sides_expanded(v, eq, order)?;
    Ok(ResidualReport::from_expansion(equation, order, &lhs.sub(&rhs)))
}

/// `∂_1 ∂̄_1 v − e^{∂_0² v}` on all monomials of level `≤ W − 1` per side:
/// the leading coefficient of the mixed Hirota equation.
pub fn toda_field_residual(v: &FormalSeries) -> Result<ResidualReport> {
    let w = v.cutoff();
    let inside = |m: &TMonomial| m.level(Side::Unbarred) < w && m.level(Side::Barred) < w;
    let lhs = v.diff(Var::T(1)).diff(Var::TBar(1));
    let rhs = v.diff(Var::T0).diff(Var::T0).exp()?;
    let residual = lhs.sub(&rhs).retain(inside);
    let mut expansion = BivariateExpansion::zero(w);
    expansion.add_cell(1, 1, &residual);
    Ok(ResidualReport::from_expansion(
        Equation::Toda,
        w.saturating_sub(1),
        &expansion,
    ))
}

/// Terms violating `2·t0_exp + Σ(2 − i_j) + Σ(2 − ī_j) = 4`.
pub fn homogeneity_check(v: &FormalSeries) -> ResidualReport {
    let entries = homogeneity_violations(v)
        .into_iter()
        .map(|(monomial, term)| ResidualEntry {
            a: 0,
            b: 0,
            monomial,
            term,
        })
        .collect();
    ResidualReport {
        equation: Equation::Homogeneity,
        checked_order: v.cutoff(),
        entries,
    }
}

/// Polynomial in the one-point functions `x_p = ∂_0 ∂_p v`, keyed by the
/// sorted multiset of `p`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OnePointPoly {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl OnePointPoly {
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mut vars: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        vars.sort_unstable();
        let e = self.terms.entry(vars.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&vars);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut k = k1.clone();
                k.extend_from_slice(k2);
                out.add_term(k, c1 * c2);
            }
        }
        out
    }

    /// Substitutes `x_p ↦ factor(p)`.
    pub fn eval<A: Algebra>(&self, zero: &A, mut factor: impl FnMut(u32) -> Result<A>) -> Result<A> {
        let mut acc = zero.clone();
        for (vars, c) in &self.terms {
            let mut term: Option<A> = None;
            for &p in vars {
                let f = factor(p)?;
                term = Some(match term {
                    None => f,
                    Some(t) => t.mul(&f)?,
                });
            }
            if let Some(t) = term {
                acc = acc.add(&t.scale(c));
            }
        }
        Ok(acc)
    }
}

/// `∂_1 ∂_n v = Σ_m (−1)^{m+1}/m! Σ_{k_1+…+k_m = n+1} n/(k_1⋯k_m) ∏ x_{k_c}`.
pub fn d1_dn_via_one_point(n: u32) -> OnePointPoly {
    let mut out = OnePointPoly::default();
    for m in 1..=n + 1 {
        let sign = if m % 2 == 1 { int(1) } else { int(-1) };
        let base = sign * Rational::new(BigInt::from(n), factorial(m));
        for ks in compositions_into(n + 1, m) {
            let denom: BigInt = ks.iter().map(|&k| BigInt::from(k)).product();
            out.add_term(ks, base.clone() / Rational::from_integer(denom));
        }
    }
    out
}

/// `∂_i ∂_j v` through the composition counts `P`, each `∂_1 ∂_n v`
/// expanded by [`d1_dn_via_one_point`]:
/// `Σ_m (−1)^{m+1}/m Σ_{s_1+…+s_m = i+j, s_c ≥ 2} i j/∏(s_c − 1) · P · ∏ ∂_1 ∂_{s_c − 1} v`.
pub fn dkp_route_compositions(i: u32, j: u32) -> OnePointPoly {
    let total = i + j;
    let mut out = OnePointPoly::default();
    let one_point: Vec<OnePointPoly> = (0..total).map(d1_dn_via_one_point).collect();
    for m in 1..=total / 2 {
        let sign = if m % 2 == 1 { int(1) } else { int(-1) };
        for parts in compositions_into(total, m) {
            if parts.iter().any(|&s| s < 2) {
                continue;
            }
            let bounds: Vec<u32> = parts.iter().map(|&s| s - 1).collect();
            let count = count_bounded_compositions(&CompositionQuery::new(i, bounds.clone()));
            if count == 0 {
                continue;
            }
            let denom: BigInt = bounds.iter().map(|&b| BigInt::from(b)).product::<BigInt>() * BigInt::from(m);
            let c = sign.clone() * Rational::new(BigInt::from(i * j) * BigInt::from(count), denom);
            let mut prod = OnePointPoly::default();
            prod.add_term(Vec::new(), c);
            for &b in &bounds {
                prod = prod.mul(&one_point[b as usize]);
            }
            for (k, v) in prod.terms {
                out.add_term(k, v);
            }
        }
    }
    out
}

/// `∂_i ∂_j v = Σ_{p_1+…+p_m = i+j} i j/∏ p · T_ij(p) ∏ x_p`.
pub fn dkp_route_tower(tables: &mut TowerTables, i: u32, j: u32) -> Result<OnePointPoly> {
    let total = i + j;
    let mut out = OnePointPoly::default();
    for m in 1..=total {
        for parts in compositions_into(total, m) {
            let t = tables.t_pair(i, j, &parts)?;
            if t.is_zero() {
                continue;
            }
            let denom: BigInt = parts.iter().map(|&p| BigInt::from(p)).product();
            out.add_term(parts, t * Rational::new(BigInt::from(i * j), denom));
        }
    }
    Ok(out)
}

/// Difference of the two dKP routes as a polynomial in the one-point
/// functions; zero when the two formulas agree identically.
pub fn dkp_polynomial_residual(tables: &mut TowerTables, i: u32, j: u32) -> Result<OnePointPoly> {
    Ok(dkp_route_compositions(i, j).sub(&dkp_route_tower(tables, i, j)?))
}

/// dKP consistency of `∂_i ∂_j v` on a truncated free energy.
///
/// Reports, in cell `(i, j)`:
/// * the polynomial difference of the two routes, with each term's one-point
///   indices in the unbarred slot of the monomial and `t0^0`;
/// * both routes evaluated with `x_p = ∂_0 ∂_p v` and compared with each
///   other and with `∂_i ∂_j v` taken directly, on monomials with
///   `u + i + j ≤ W` where all three are exact.
pub fn dkp_consistency(tables: &mut TowerTables, i: u32, j: u32, v: &FormalSeries) -> Result<ResidualReport> {
    if i == 0 || j == 0 {
        return Err(Error::ZeroIndex);
    }
    let w = v.cutoff();
    if i + j > w {
        return Err(Error::WindowExceeded {
            order: i + j,
            max: w,
            cutoff: w,
        });
    }
    let route_a = dkp_route_compositions(i, j);
    let route_b = dkp_route_tower(tables, i, j)?;
    let mut entries = Vec::new();
    for (vars, c) in route_a.sub(&route_b).terms() {
        entries.push(ResidualEntry {
            a: i as i32,
            b: j as i32,
            monomial: TMonomial::from_slices(vars, &[])?,
            term: T0Monomial::new(c.clone(), 0, 0),
        });
    }

    let d0 = v.diff(Var::T0);
    let x = |p: u32| Ok(d0.diff(Var::T(p)));
    let zero = FormalSeries::zero(w);
    let a = route_a.eval(&zero, x)?;
    let b = route_b.eval(&zero, x)?;
    let direct = v.diff(Var::T(i)).diff(Var::T(j));
    let inside = |m: &TMonomial| m.level(Side::Unbarred) + i + j <= w;
    let mut residual = BivariateExpansion::zero(w);
    residual.add_cell(i as i32, j as i32, &a.sub(&b).retain(inside));
    residual.add_cell(i as i32, j as i32, &direct.sub(&b).retain(inside));
    entries.extend(ResidualReport::from_expansion(Equation::Dkp, i + j, &residual).entries);
    Ok(ResidualReport {
        equation: Equation::Dkp,
        checked_order: i + j,
        entries,
    })
}

/// Both dKP routes evaluated on t0-valued one-point functions
/// `x_p = data(1, p)`; entries hold the difference.
pub fn dkp_consistency_on_data(tables: &mut TowerTables, i: u32, j: u32, data: &CauchyData) -> Result<ResidualReport> {
    let zero = T0Poly::zero();
    let x = |p: u32| data.get(1, p).cloned();
    let a = dkp_route_compositions(i, j).eval(&zero, x)?;
    let b = dkp_route_tower(tables, i, j)?.eval(&zero, x)?;
    let entries = a
        .sub(&b)
        .terms()
        .map(|term| ResidualEntry {
            a: i as i32,
            b: j as i32,
            monomial: TMonomial::one(),
            term,
        })
        .collect();
    Ok(ResidualReport {
        equation: Equation::Dkp,
        checked_order: i + j,
        entries,
    })
}

/// Adds `delta · t0^e · mono` to the first t0 term stored on `mono`.
pub fn perturb(v: &FormalSeries, mono: &TMonomial, delta: &Rational) -> FormalSeries {
    let mut out = v.clone();
    if let Some(c) = v.coeff(mono) {
        if let Some(t) = c.terms().next() {
            out.add_term(mono.clone(), &T0Poly::monomial(delta.clone(), t.t0_exp, t.log_pow));
        }
    }
    out
}

/// Largest `|coefficient|` numerator bit length in a report (diagnostics).
pub fn max_residual_bits(report: &ResidualReport) -> u64 {
    report
        .entries
        .iter()
        .map(|e| e.term.coeff.numer().abs().bits())
        .max()
        .unwrap_or(0)
}
