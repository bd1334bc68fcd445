//! Composition counts, the coefficient towers `T`, and block-partition
//! weights `S`.
//!
//! All values are exact. `T` values are memoized in [`TowerTables`], sharded
//! by total level.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactring::{factorial, int, Rational};
use crate::{Error, Result};

/// Integer partitions of `n`, each sorted ascending, in lexicographic order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in min..=n {
            if n - p != 0 && n - p < p {
                continue;
            }
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, 1, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// All compositions (ordered partitions) of `n`.
pub fn compositions(n: u32) -> Vec<Vec<u32>> {
    (1..=n.max(1)).flat_map(|m| compositions_into(n, m)).collect()
}

/// Compositions of `n` into exactly `m` positive parts.
pub fn compositions_into(n: u32, m: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, m: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if m == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if n < m {
            return;
        }
        for first in 1..=n - (m - 1) {
            cur.push(first);
            rec(n - first, m - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m, &mut Vec::new(), &mut out);
    out
}

/// Compositions of `target` with `1 ≤ x_p ≤ upper[p]`.
pub fn bounded_compositions(target: u32, upper: &[u32]) -> Vec<Vec<u32>> {
    fn rec(left: u32, upper: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&ub, rest)) = upper.split_first() else {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        };
        let rest_min = rest.len() as u32;
        let rest_max: u32 = rest.iter().sum();
        for x in 1..=ub.min(left.saturating_sub(rest_min)) {
            if left - x > rest_max {
                continue;
            }
            cur.push(x);
            rec(left - x, rest, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if upper.iter().all(|&u| u >= 1) {
        rec(target, upper, &mut Vec::new(), &mut out);
    }
    out
}

/// Ordered sequences of nonempty sub-multisets that together exhaust the
/// multiset `items`. Each block is returned sorted.
pub fn multiset_block_sequences(items: &[u32]) -> Vec<Vec<Vec<u32>>> {
    fn rec(remaining: &mut Vec<(u32, u32)>, cur: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if remaining.iter().all(|&(_, c)| c == 0) {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        // every nonempty sub-multiset of what is left
        let caps: Vec<u32> = remaining.iter().map(|&(_, c)| c).collect();
        let mut take = vec![0u32; caps.len()];
        loop {
            let mut v = 0;
            while v < take.len() {
                if take[v] < caps[v] {
                    take[v] += 1;
                    break;
                }
                take[v] = 0;
                v += 1;
            }
            if v == take.len() {
                break;
            }
            let mut block = Vec::new();
            for (slot, &t) in take.iter().enumerate() {
                block.extend(core::iter::repeat_n(remaining[slot].0, t as usize));
                remaining[slot].1 -= t;
            }
            cur.push(block);
            rec(remaining, cur, out);
            cur.pop();
            for (slot, &t) in take.iter().enumerate() {
                remaining[slot].1 += t;
            }
        }
    }
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let mut remaining: Vec<(u32, u32)> = sorted.chunk_by(|a, b| a == b).map(|r| (r[0], r.len() as u32)).collect();
    let mut out = Vec::new();
    rec(&mut remaining, &mut Vec::new(), &mut out);
    out
}

/// Query for [`count_bounded_compositions`]: tuples `(x_1..x_m)` with
/// `1 ≤ x_k ≤ bounds[k]` summing to `total`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionQuery {
    pub total: u32,
    pub bounds: Vec<u32>,
}

impl CompositionQuery {
    pub fn new(total: u32, bounds: Vec<u32>) -> Self {
        Self { total, bounds }
    }
}

/// Number of ordered tuples `1 ≤ x_k ≤ a_k` with `Σ x_k = total`.
pub fn count_bounded_compositions(q: &CompositionQuery) -> u64 {
    let total = q.total as usize;
    let mut ways = vec![0u64; total + 1];
    ways[0] = 1;
    for &bound in &q.bounds {
        let mut next = vec![0u64; total + 1];
        for (sum, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for x in 1..=bound as usize {
                if sum + x > total {
                    break;
                }
                next[sum + x] += w;
            }
        }
        ways = next;
    }
    ways[total]
}

/// Key of the multi-index tower `T_{i_1..i_k}(s_1..s_m; ℓ_1..ℓ_m)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TowerKey {
    indices: Vec<u32>,
    parts: Vec<u32>,
    ells: Vec<u32>,
}

impl TowerKey {
    /// Checks `Σ s = Σ i`, `Σ ℓ = m + k − 2`, all entries positive, `k ≥ 2`.
    pub fn new(indices: Vec<u32>, parts: Vec<u32>, ells: Vec<u32>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidTowerKey(format!("{msg}: {indices:?} {parts:?} {ells:?}")));
        if indices.len() < 2 {
            return bad("need at least two indices");
        }
        if parts.is_empty() || parts.len() != ells.len() {
            return bad("parts and ells must be nonempty and of equal length");
        }
        if indices.iter().chain(&parts).chain(&ells).any(|&x| x == 0) {
            return bad("entries must be positive");
        }
        if parts.iter().sum::<u32>() != indices.iter().sum::<u32>() {
            return bad("parts must sum to the index total");
        }
        let ell_sum: u32 = ells.iter().sum();
        if ell_sum as usize != parts.len() + indices.len() - 2 {
            return bad("ells must sum to m + k - 2");
        }
        Ok(Self { indices, parts, ells })
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn ells(&self) -> &[u32] {
        &self.ells
    }

    fn level(&self) -> usize {
        self.parts.iter().sum::<u32>() as usize
    }
}

/// Memo tables for `T_ij` and `T_{i_1..i_k}`.
///
/// Values depend only on the key, so a table may be shared or rebuilt freely;
/// results are identical either way.
#[derive(Clone, Debug, Default)]
pub struct TowerTables {
    pair: Vec<BTreeMap<(u32, Vec<u32>), Rational>>,
    multi: Vec<BTreeMap<TowerKey, Rational>>,
}

impl TowerTables {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of memoized entries (pairwise, multi-index).
    pub fn sizes(&self) -> (usize, usize) {
        (
            self.pair.iter().map(BTreeMap::len).sum(),
            self.multi.iter().map(BTreeMap::len).sum(),
        )
    }

    /// Entries of the multi-index table in canonical key order.
    pub fn multi_entries(&self) -> impl Iterator<Item = (&TowerKey, &Rational)> {
        self.multi.iter().flat_map(|shard| shard.iter())
    }

    /// `T_ij(p_1..p_m)`: sum over compositions `(n_1..n_q)` of `m` of
    /// `(−1)^(m+1)/q · 1/∏ n_a! · P_ij(g_1 − 1, …, g_q − 1)` where `g_a` are
    /// the sums of consecutive groups of sizes `n_a`.
    pub fn t_pair(&mut self, i: u32, j: u32, parts: &[u32]) -> Result<Rational> {
        if i == 0 || j == 0 || parts.contains(&0) {
            return Err(Error::ZeroIndex);
        }
        let total: u32 = parts.iter().sum();
        if total != i + j {
            return Err(Error::PartSum {
                expected: i + j,
                got: total,
            });
        }
        let level = total as usize;
        if self.pair.len() <= level {
            self.pair.resize_with(level + 1, BTreeMap::new);
        }
        let key = (i, parts.to_vec());
        if let Some(v) = self.pair[level].get(&key) {
            return Ok(v.clone());
        }
        let v = t_pair_uncached(i, parts);
        self.pair[level].insert(key, v.clone());
        Ok(v)
    }

    /// `T_{i_1..i_k}(s; ℓ)`.
    ///
    /// For `k = 2` this is `T_{i_1 i_2}(s)` when every `ℓ = 1` and zero
    /// otherwise. For `k ≥ 3` the last index `i_k` is peeled off: each window
    /// `[a, b]` of positions merges into a single factor `(s, ℓ)` of the
    /// `k − 1` tower, with `s = Σ_window s − i_k`, `ℓ = Σ_window (ℓ − 1)`,
    /// weighted by `T_{s, i_k}(window) · ℓ! / ∏ (ℓ_c − 1)!`.
    ///
    /// Windows with `ℓ = 0` are skipped: every factor of a tower with
    /// `k ≥ 2` carries at least one `∂_0`, so a merged factor with no `∂_0`
    /// cannot occur. The sum `T((Σ i); (k − 1)) = 1` pins this down.
    pub fn t_multi(&mut self, key: &TowerKey) -> Result<Rational> {
        let level = key.level();
        if let Some(v) = self.multi.get(level).and_then(|t| t.get(key)) {
            return Ok(v.clone());
        }
        let value = self.t_multi_uncached(key)?;
        if self.multi.len() <= level {
            self.multi.resize_with(level + 1, BTreeMap::new);
        }
        self.multi[level].insert(key.clone(), value.clone());
        Ok(value)
    }

    fn t_multi_uncached(&mut self, key: &TowerKey) -> Result<Rational> {
        let k = key.indices.len();
        if k == 2 {
            if key.ells.iter().all(|&l| l == 1) {
                return self.t_pair(key.indices[0], key.indices[1], &key.parts);
            }
            return Ok(Rational::zero());
        }
        let last = key.indices[k - 1];
        let head = &key.indices[..k - 1];
        let m = key.parts.len();
        let mut total = Rational::zero();
        for a in 0..m {
            let mut window_sum = 0u32;
            let mut ell = 0u32;
            for b in a..m {
                window_sum += key.parts[b];
                ell += key.ells[b] - 1;
                if window_sum <= last || ell == 0 {
                    continue;
                }
                let s = window_sum - last;
                let mut parts = Vec::with_capacity(m - (b - a));
                parts.extend_from_slice(&key.parts[..a]);
                parts.push(s);
                parts.extend_from_slice(&key.parts[b + 1..]);
                let mut ells = Vec::with_capacity(m - (b - a));
                ells.extend_from_slice(&key.ells[..a]);
                ells.push(ell);
                ells.extend_from_slice(&key.ells[b + 1..]);
                let sub_key = TowerKey {
                    indices: head.to_vec(),
                    parts,
                    ells,
                };
                let sub = self.t_multi(&sub_key)?;
                if sub.is_zero() {
                    continue;
                }
                let pair = self.t_pair(s, last, &key.parts[a..=b])?;
                if pair.is_zero() {
                    continue;
                }
                let mut multinomial = factorial(ell);
                for &l in &key.ells[a..=b] {
                    multinomial /= factorial(l - 1);
                }
                total += sub * pair * Rational::from_integer(multinomial);
            }
        }
        Ok(total)
    }
}

fn t_pair_uncached(i: u32, parts: &[u32]) -> Rational {
    let m = parts.len() as u32;
    let sign = if m % 2 == 1 { int(1) } else { int(-1) };
    let mut total = Rational::zero();
    for groups in compositions(m) {
        let mut bounds = Vec::with_capacity(groups.len());
        let mut denom = BigInt::one();
        let mut pos = 0usize;
        for &n in &groups {
            let end = pos + n as usize;
            bounds.push(parts[pos..end].iter().sum::<u32>() - 1);
            pos = end;
            denom *= factorial(n);
        }
        let count = count_bounded_compositions(&CompositionQuery::new(i, bounds));
        if count == 0 {
            continue;
        }
        denom *= BigInt::from(groups.len());
        total += Rational::new(BigInt::from(count), denom);
    }
    total * sign
}

/// Labeled partitions of `items` into `sums.len()` ordered nonempty blocks,
/// block `p` summing to `sums[p]`. Blocks hold item positions.
pub fn ordered_block_partitions(items: &[u32], sums: &[u32]) -> Vec<Vec<Vec<usize>>> {
    fn rec(
        items: &[u32],
        pos: usize,
        remaining: &mut [u32],
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if pos == items.len() {
            if remaining.iter().all(|&r| r == 0) && blocks.iter().all(|b| !b.is_empty()) {
                out.push(blocks.clone());
            }
            return;
        }
        for p in 0..blocks.len() {
            if remaining[p] >= items[pos] {
                remaining[p] -= items[pos];
                blocks[p].push(pos);
                rec(items, pos + 1, remaining, blocks, out);
                blocks[p].pop();
                remaining[p] += items[pos];
            }
        }
    }
    let mut out = Vec::new();
    if items.iter().sum::<u32>() != sums.iter().sum::<u32>() || sums.is_empty() {
        return out;
    }
    let mut remaining = sums.to_vec();
    let mut blocks = vec![Vec::new(); sums.len()];
    rec(items, 0, &mut remaining, &mut blocks, &mut out);
    out
}

/// Factor `(s − 1)! / (s − n + 1 − ℓ)!` of one block of size `n`; zero when
/// the denominator argument is negative.
pub fn block_factor(s: u32, n: u32, ell: u32) -> Rational {
    let arg = s as i64 - n as i64 + 1 - ell as i64;
    if arg < 0 || s == 0 {
        return Rational::zero();
    }
    Rational::new(factorial(s - 1), factorial(arg as u32))
}

/// `S_{ī}(s; ℓ)`: sum over labeled ordered block partitions of `barred` with
/// block sums `parts` of `∏_p (s_p − 1)! / (s_p − n_p + 1 − ℓ_p)!`.
///
/// Enumerates block contents as sub-multisets and weights each by its number
/// of labeled realizations, rather than visiting every labeled partition.
pub fn s_weight(barred: &[u32], parts: &[u32], ells: &[u32]) -> Rational {
    if parts.len() != ells.len() || parts.is_empty() || barred.iter().sum::<u32>() != parts.iter().sum::<u32>() {
        return Rational::zero();
    }
    let mut values: Vec<(u32, u32)> = Vec::new();
    let mut sorted = barred.to_vec();
    sorted.sort_unstable();
    for run in sorted.chunk_by(|a, b| a == b) {
        values.push((run[0], run.len() as u32));
    }
    let mut remaining: Vec<u32> = values.iter().map(|&(_, c)| c).collect();
    let labeled: BigInt = values.iter().map(|&(_, c)| factorial(c)).product();
    let mut acc = Rational::zero();
    s_weight_blocks(&values, &mut remaining, parts, ells, Rational::one(), &mut acc);
    acc * Rational::from_integer(labeled)
}

fn s_weight_blocks(
    values: &[(u32, u32)],
    remaining: &mut [u32],
    parts: &[u32],
    ells: &[u32],
    weight: Rational,
    acc: &mut Rational,
) {
    let Some((&s, rest_parts)) = parts.split_first() else {
        if remaining.iter().all(|&r| r == 0) {
            *acc += weight;
        }
        return;
    };
    let ell = ells[0];
    let mut take = vec![0u32; values.len()];
    // choose how many copies of each distinct value go into this block
    fn choose(
        v: usize,
        left: u32,
        values: &[(u32, u32)],
        remaining: &mut [u32],
        take: &mut [u32],
        ctx: (&[u32], &[u32], u32, u32, &Rational),
        acc: &mut Rational,
    ) {
        let (rest_parts, rest_ells, s, ell, weight) = ctx;
        if left == 0 {
            let n: u32 = take.iter().sum();
            let factor = block_factor(s, n, ell);
            if factor.is_zero() {
                return;
            }
            let mut inv = BigInt::one();
            for &t in take.iter() {
                inv *= factorial(t);
            }
            let w = weight * factor / Rational::from_integer(inv);
            s_weight_blocks(values, remaining, rest_parts, rest_ells, w, acc);
            return;
        }
        if v == values.len() {
            return;
        }
        let (value, _) = values[v];
        let max = remaining[v].min(left / value);
        for t in 0..=max {
            remaining[v] -= t;
            take[v] = t;
            choose(v + 1, left - t * value, values, remaining, take, ctx, acc);
            remaining[v] += t;
        }
        take[v] = 0;
    }
    choose(
        0,
        s,
        values,
        remaining,
        &mut take,
        (rest_parts, &ells[1..], s, ell, &weight),
        acc,
    );
}
