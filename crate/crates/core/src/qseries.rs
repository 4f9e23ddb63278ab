//! Exact truncated series in a fractional power of `q`.
//!
//! A [`FormalQSeries`] lives in powers of `q^(1/D)`. Coefficients are exact
//! for every exponent strictly below the truncation order; nothing at or
//! above the order is stored or claimed. Only non-zero coefficients are kept,
//! which matters once `D` reaches the 10^5 range needed to mix characters of
//! several minimal models.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratio;

/// Exponents are small exact rationals.
pub type Exponent = Ratio<i64>;

#[derive(Clone)]
pub struct FormalQSeries {
    denom: i64,
    /// Lower bound for the exponents of non-zero terms, in units of `1/denom`.
    valuation: i64,
    /// Exclusive truncation bound, in units of `1/denom`.
    order: i64,
    terms: BTreeMap<i64, BigInt>,
}

fn checked_lcm(a: i64, b: i64) -> Result<i64> {
    (a / a.gcd(&b)).checked_mul(b).ok_or(Error::DenominatorOverflow)
}

fn scaled(x: Exponent, denom: i64) -> Result<i64> {
    debug_assert_eq!(denom % x.denom(), 0);
    x.numer()
        .checked_mul(denom / x.denom())
        .ok_or(Error::DenominatorOverflow)
}

impl FormalQSeries {
    /// Builds a series from `(exponent, coefficient)` pairs; repeated exponents
    /// accumulate, and terms at or beyond `order` are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, BigInt)>, order: Exponent) -> Result<Self> {
        let terms: Vec<(Exponent, BigInt)> = terms.into_iter().collect();
        let mut denom = *order.denom();
        for (e, _) in &terms {
            denom = checked_lcm(denom, *e.denom())?;
        }
        let order_n = scaled(order, denom)?;
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            let k = scaled(e, denom)?;
            if k < order_n {
                *map.entry(k).or_insert_with(BigInt::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        let valuation = map.keys().next().copied().unwrap_or(order_n);
        Ok(Self {
            denom,
            valuation,
            order: order_n,
            terms: map,
        })
    }

    pub fn zero(order: Exponent) -> Self {
        Self::from_terms(std::iter::empty(), order).expect("single denominator")
    }

    pub fn one(order: Exponent) -> Result<Self> {
        Self::from_terms([(Exponent::zero(), BigInt::one())], order)
    }

    pub fn monomial(exponent: Exponent, coeff: BigInt, order: Exponent) -> Result<Self> {
        Self::from_terms([(exponent, coeff)], order)
    }

    /// The exponent step `1/D` is `1 / denom()`.
    pub fn denom(&self) -> i64 {
        self.denom
    }

    /// Lower bound on exponents of non-zero terms (the leading exponent when
    /// that term is non-zero).
    pub fn offset(&self) -> Exponent {
        Exponent::new(self.valuation, self.denom)
    }

    /// Every exponent strictly below the order is exact.
    pub fn order(&self) -> Exponent {
        Exponent::new(self.order, self.denom)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored non-zero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Non-zero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &BigInt)> + '_ {
        self.terms.iter().map(|(&k, c)| (Exponent::new(k, self.denom), c))
    }

    pub fn leading_term(&self) -> Option<(Exponent, &BigInt)> {
        self.terms().next()
    }

    /// The coefficient of `q^e`. Exponents off the `1/D` grid have coefficient
    /// zero; exponents at or beyond the order are unknown.
    pub fn coefficient(&self, e: Exponent) -> Result<BigInt> {
        if e >= self.order() {
            return Err(Error::BeyondTruncation(ratio::format_small(e)));
        }
        if self.denom % e.denom() != 0 {
            return Ok(BigInt::zero());
        }
        let k = scaled(e, self.denom)?;
        Ok(self.terms.get(&k).cloned().unwrap_or_default())
    }

    /// Re-expresses the series over a denominator that is a multiple of the
    /// current one.
    pub fn rescale(&self, denom: i64) -> Result<Self> {
        if denom % self.denom != 0 {
            return Err(Error::Precondition(format!(
                "{denom} is not a multiple of {}",
                self.denom
            )));
        }
        let f = denom / self.denom;
        let mul = |x: i64| x.checked_mul(f).ok_or(Error::DenominatorOverflow);
        let mut terms = BTreeMap::new();
        for (&k, c) in &self.terms {
            terms.insert(mul(k)?, c.clone());
        }
        Ok(Self {
            denom,
            valuation: mul(self.valuation)?,
            order: mul(self.order)?,
            terms,
        })
    }

    fn align(a: &Self, b: &Self) -> Result<(Self, Self)> {
        let d = checked_lcm(a.denom, b.denom)?;
        Ok((a.rescale(d)?, b.rescale(d)?))
    }

    /// Lowers the order to `min(order, self.order())`.
    pub fn truncated(&self, order: Exponent) -> Result<Self> {
        let d = checked_lcm(self.denom, *order.denom())?;
        let mut out = self.rescale(d)?;
        out.order = out.order.min(scaled(order, d)?);
        let bound = out.order;
        out.terms.retain(|&k, _| k < bound);
        out.valuation = out.valuation.min(out.order);
        Ok(out)
    }

    /// Coefficient-wise sum; the order is the smaller of the two.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = Self::align(self, other)?;
        a.order = a.order.min(b.order);
        a.valuation = a.valuation.min(b.valuation).min(a.order);
        for (k, c) in b.terms {
            *a.terms.entry(k).or_insert_with(BigInt::zero) += c;
        }
        let bound = a.order;
        a.terms.retain(|&k, c| k < bound && !c.is_zero());
        Ok(a)
    }

    /// Cauchy product. With valuations `va`, `vb` and orders `A`, `B`, every
    /// coefficient below `min(A + vb, B + va)` is exact, and that is the order
    /// of the result.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::align(self, other)?;
        let add = |x: i64, y: i64| x.checked_add(y).ok_or(Error::DenominatorOverflow);
        let order = add(a.order, b.valuation)?.min(add(b.order, a.valuation)?);
        let valuation = add(a.valuation, b.valuation)?.min(order);
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (&ka, ca) in &a.terms {
            for (&kb, cb) in &b.terms {
                let k = ka + kb;
                if k >= order {
                    break;
                }
                *terms.entry(k).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Self {
            denom: a.denom,
            valuation,
            order,
            terms,
        })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = self.clone();
        if k.is_zero() {
            out.terms.clear();
        } else {
            out.terms.values_mut().for_each(|c| *c *= k);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    /// The first exponent below both orders where the coefficients differ.
    pub fn first_difference(&self, other: &Self) -> Result<Option<(Exponent, BigInt, BigInt)>> {
        let (a, b) = Self::align(self, other)?;
        let bound = a.order.min(b.order);
        let keys = a.terms.keys().chain(b.terms.keys()).filter(|&&k| k < bound);
        let first = keys.filter(|k| a.terms.get(k) != b.terms.get(k)).min().copied();
        Ok(first.map(|k| {
            (
                Exponent::new(k, a.denom),
                a.terms.get(&k).cloned().unwrap_or_default(),
                b.terms.get(&k).cloned().unwrap_or_default(),
            )
        }))
    }

    /// True when all coefficients are non-negative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// When every term sits at `offset + integer`, returns the coefficient of
    /// each integer step from the offset up to the order, zeros included.
    pub fn integral_steps(&self) -> Option<Vec<(Exponent, BigInt)>> {
        let v = self.valuation;
        if self.terms.keys().any(|k| (k - v) % self.denom != 0) {
            return None;
        }
        let mut out = Vec::new();
        let mut k = v;
        while k < self.order {
            out.push((
                Exponent::new(k, self.denom),
                self.terms.get(&k).cloned().unwrap_or_default(),
            ));
            k += self.denom;
        }
        Some(out)
    }
}

impl PartialEq for FormalQSeries {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order()
            && self.terms.len() == other.terms.len()
            && self.terms().zip(other.terms()).all(|(x, y)| x == y)
    }
}

impl fmt::Debug for FormalQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalQSeries[")?;
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}q^{}", ratio::format_small(e))?;
        }
        write!(f, "; O(q^{})]", ratio::format_small(self.order()))
    }
}

impl fmt::Display for FormalQSeries {
    /// One `exponent<TAB>coefficient` line per non-zero term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.terms() {
            writeln!(f, "{}\t{}", ratio::format_small(e), c)?;
        }
        Ok(())
    }
}

impl Add for &FormalQSeries {
    type Output = FormalQSeries;

    fn add(self, rhs: Self) -> FormalQSeries {
        self.checked_add(rhs).expect("exponent denominator overflow")
    }
}

impl Mul for &FormalQSeries {
    type Output = FormalQSeries;

    fn mul(self, rhs: Self) -> FormalQSeries {
        self.checked_mul(rhs).expect("exponent denominator overflow")
    }
}

pub fn series_add(a: &FormalQSeries, b: &FormalQSeries) -> Result<FormalQSeries> {
    a.checked_add(b)
}

pub fn series_mul(a: &FormalQSeries, b: &FormalQSeries) -> Result<FormalQSeries> {
    a.checked_mul(b)
}

/// `η(q) = q^{1/24} prod_{n>=1} (1 - q^n)`, via Euler's pentagonal theorem.
/// Exact below `q^{1/24 + depth}`.
pub fn eta_series(depth: Exponent) -> Result<FormalQSeries> {
    let shift = Exponent::new(1, 24);
    let order = shift + depth;
    let mut terms = Vec::new();
    for k in 0i64.. {
        let mut any = false;
        for j in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = shift + Exponent::from_integer(j * (3 * j - 1) / 2);
            if e < order {
                any = true;
                let sign = if j % 2 == 0 { 1 } else { -1 };
                terms.push((e, BigInt::from(sign)));
            }
        }
        if !any {
            break;
        }
    }
    FormalQSeries::from_terms(terms, order)
}

/// `η(q)^{-1} = q^{-1/24} sum_n p(n) q^n`, exact below `q^{-1/24 + depth}`.
pub fn eta_inverse_series(depth: Exponent) -> Result<FormalQSeries> {
    let shift = Exponent::new(-1, 24);
    let order = shift + depth;
    let count = depth.ceil().to_integer().max(0) as usize;
    let parts = partition_numbers(count);
    FormalQSeries::from_terms(
        parts
            .into_iter()
            .enumerate()
            .map(|(n, p)| (shift + Exponent::from_integer(n as i64), p)),
        order,
    )
}

/// `η^{-n}` by repeated multiplication, exact below `q^{-n/24 + depth}`.
pub fn eta_inverse_power(n: u32, depth: Exponent) -> Result<FormalQSeries> {
    if n == 0 {
        return FormalQSeries::one(depth);
    }
    let base = eta_inverse_series(depth)?;
    let mut acc = base.clone();
    for _ in 1..n {
        acc = acc.checked_mul(&base)?;
    }
    Ok(acc)
}

/// Partition numbers `p(0), ..., p(count - 1)` by Euler's recurrence.
pub fn partition_numbers(count: usize) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = Vec::with_capacity(count);
    for n in 0..count as i64 {
        if n == 0 {
            p.push(BigInt::one());
            continue;
        }
        let mut acc = BigInt::zero();
        for k in 1i64.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let sign_pos = k % 2 == 1;
            let mut term = p[(n - g1) as usize].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                term += &p[(n - g2) as usize];
            }
            if sign_pos {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    p
}

/// Sum of cubes of the divisors of `n`.
pub fn sigma3(n: u64) -> BigInt {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| BigInt::from(d).pow(3))
        .sum()
}

/// Number of E8 vectors of norm `2n`, `n = 0..=max_n`, from `240 σ_3(n)`.
pub fn e8_counts_by_divisor_sums(max_n: usize) -> Vec<BigInt> {
    (0..=max_n as u64)
        .map(|n| if n == 0 { BigInt::one() } else { sigma3(n) * 240 })
        .collect()
}

/// Number of E8 vectors of norm `2n` counted coordinate by coordinate in the
/// model `E8 = D8 ∪ (D8 + (1/2)^8)`.
pub fn e8_counts_by_coordinates(max_n: usize) -> Vec<BigInt> {
    // Integer part: x in Z^8, sum(x) even, |x|^2 = 2n.
    let cap = 2 * max_n as i64;
    let radius = (cap as f64).sqrt() as i64 + 1;
    let mut dp: BTreeMap<(i64, i64), BigInt> = BTreeMap::from([((0, 0), BigInt::one())]);
    for _ in 0..8 {
        let mut next: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
        for ((norm, parity), c) in &dp {
            for x in -radius..=radius {
                let n2 = norm + x * x;
                if n2 <= cap {
                    *next.entry((n2, (parity + x).rem_euclid(2))).or_default() += c;
                }
            }
        }
        dp = next;
    }
    let mut counts = vec![BigInt::zero(); max_n + 1];
    for ((norm, parity), c) in &dp {
        if *parity == 0 && norm % 2 == 0 {
            counts[(*norm / 2) as usize] += c;
        }
    }

    // Half-integer part: x = t/2 with t odd, |x|^2 = 2n <=> sum t^2 = 8n,
    // and x - (1/2)^8 in D8 <=> sum t = 0 mod 4.
    let cap = 8 * max_n as i64;
    let radius = (cap as f64).sqrt() as i64 + 1;
    let mut dp: BTreeMap<(i64, i64), BigInt> = BTreeMap::from([((0, 0), BigInt::one())]);
    for _ in 0..8 {
        let mut next: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
        for ((norm, residue), c) in &dp {
            for t in (-radius..=radius).filter(|t| t % 2 != 0) {
                let n2 = norm + t * t;
                if n2 <= cap {
                    *next.entry((n2, (residue + t).rem_euclid(4))).or_default() += c;
                }
            }
        }
        dp = next;
    }
    for ((norm, residue), c) in &dp {
        if *residue == 0 && norm % 8 == 0 {
            counts[(*norm / 8) as usize] += c;
        }
    }
    counts
}

/// Cartan matrix of E8 (Bourbaki labelling), the Gram matrix of the simple roots.
pub const E8_CARTAN: [[i64; 8]; 8] = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
];

/// Number of E8 vectors of norm `2n`, `n = 0..=max_n`, by Fincke-Pohst
/// enumeration of integer coefficient vectors against [`E8_CARTAN`].
pub fn e8_counts_by_gram_enumeration(max_n: usize) -> Vec<u64> {
    const N: usize = 8;
    let g: [[f64; N]; N] = E8_CARTAN.map(|row| row.map(|x| x as f64));
    // Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2
    let mut mu = [[0.0f64; N]; N];
    let mut d = [0.0f64; N];
    let mut a = g;
    for i in 0..N {
        d[i] = a[i][i];
        for j in (i + 1)..N {
            mu[i][j] = a[i][j] / d[i];
        }
        for j in (i + 1)..N {
            for k in (i + 1)..N {
                a[j][k] -= d[i] * mu[i][j] * mu[i][k];
            }
        }
    }

    let bound = 2 * max_n as i64;
    let mut counts = vec![0u64; max_n + 1];
    let mut x = [0i64; N];

    fn exact_norm(x: &[i64; 8]) -> i64 {
        let mut s = 0;
        for i in 0..8 {
            for j in 0..8 {
                s += x[i] * E8_CARTAN[i][j] * x[j];
            }
        }
        s
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        i: usize,
        remaining: f64,
        x: &mut [i64; 8],
        mu: &[[f64; 8]; 8],
        d: &[f64; 8],
        bound: i64,
        counts: &mut [u64],
    ) {
        let center: f64 = -((i + 1)..8).map(|j| mu[i][j] * x[j] as f64).sum::<f64>();
        let width = (remaining.max(0.0) / d[i]).sqrt() + 1e-9;
        let lo = (center - width).ceil() as i64;
        let hi = (center + width).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let t = v as f64 - center;
            let rest = remaining - d[i] * t * t;
            if rest < -1e-9 {
                continue;
            }
            if i == 0 {
                let norm = exact_norm(x);
                if norm <= bound {
                    counts[(norm / 2) as usize] += 1;
                }
            } else {
                recurse(i - 1, rest, x, mu, d, bound, counts);
            }
        }
        x[i] = 0;
    }

    recurse(N - 1, bound as f64 + 1e-6, &mut x, &mu, &d, bound, &mut counts);
    counts
}

/// `Θ_{√2 E8}(q) = Θ_{E8}(q^2)`, exact below `q^depth`. Coefficients come
/// from `240 σ_3` and are checked against the coordinate count before
/// returning.
pub fn theta_sqrt2_e8(depth: Exponent) -> Result<FormalQSeries> {
    let order = depth;
    if order <= Exponent::zero() {
        return Ok(FormalQSeries::zero(order));
    }
    // q^{2n} < order
    let max_n = ((order.ceil().to_integer() - 1).max(0) / 2) as usize;
    let by_sigma = e8_counts_by_divisor_sums(max_n);
    let by_coords = e8_counts_by_coordinates(max_n);
    if by_sigma != by_coords {
        return Err(Error::OracleMismatch("E8 theta coefficients".into()));
    }
    FormalQSeries::from_terms(
        by_sigma
            .into_iter()
            .enumerate()
            .map(|(n, c)| (Exponent::from_integer(2 * n as i64), c)),
        order,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    fn int(n: i64) -> Exponent {
        Exponent::from_integer(n)
    }

    /// Brute-force partition count: number of non-increasing sequences
    /// summing to `n` with parts at most `max`.
    fn count_partitions(n: u32, max: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|k| count_partitions(n - k, k)).sum()
    }

    #[test]
    fn add_zero() {
        let a = eta_series(int(5)).unwrap();
        assert_eq!(&a + &FormalQSeries::zero(a.order()), a);
    }

    #[test]
    fn half_times_half() {
        let h = FormalQSeries::monomial(e(1, 2), BigInt::one(), int(3)).unwrap();
        let p = &h * &h;
        assert_eq!(p.terms().collect::<Vec<_>>(), vec![(int(1), &BigInt::one())]);
        let mixed = FormalQSeries::monomial(e(1, 3), BigInt::one(), int(3)).unwrap();
        assert_eq!((&h * &mixed).denom(), 6);
    }

    #[test]
    fn eta_times_inverse_is_one() {
        let a = eta_series(int(10)).unwrap();
        let b = eta_inverse_series(int(10)).unwrap();
        assert_eq!(a.offset(), e(1, 24));
        assert_eq!(b.offset(), e(-1, 24));
        let p = &a * &b;
        assert_eq!(p.order(), int(10));
        assert_eq!(p, FormalQSeries::one(int(10)).unwrap());
    }

    #[test]
    fn eta_matches_product_expansion() {
        // prod_{n<20} (1 - q^n) expanded by repeated multiplication.
        let order = int(20);
        let mut prod = FormalQSeries::one(order).unwrap();
        for n in 1..20 {
            let f = FormalQSeries::from_terms([(int(0), BigInt::one()), (int(n), BigInt::from(-1))], order).unwrap();
            prod = &prod * &f;
        }
        let shift = FormalQSeries::monomial(e(1, 24), BigInt::one(), order + e(1, 24)).unwrap();
        let eta = eta_series(order).unwrap();
        assert_eq!(eta, &prod * &shift);
    }

    #[test]
    fn partitions_match_brute_force() {
        let p = partition_numbers(51);
        for n in 0..=50u32 {
            assert_eq!(p[n as usize], BigInt::from(count_partitions(n, n)), "p({n})");
        }
        let inv = eta_inverse_series(int(7)).unwrap();
        let first: Vec<BigInt> = inv.terms().take(7).map(|(_, c)| c.clone()).collect();
        let want: Vec<BigInt> = [1, 1, 2, 3, 5, 7, 11].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(first, want);
    }

    #[test]
    fn truncation_is_explicit() {
        let a = eta_inverse_series(int(3)).unwrap();
        assert_eq!(a.order(), int(3) - e(1, 24));
        assert!(a.coefficient(int(3) - e(1, 24)).is_err());
        assert_eq!(a.coefficient(e(-1, 24)).unwrap(), BigInt::one());
        assert_eq!(a.coefficient(e(1, 7)).unwrap(), BigInt::zero());
        let b = eta_inverse_series(int(8)).unwrap();
        assert_eq!((&a + &b).order(), int(3) - e(1, 24));
    }

    #[test]
    fn product_order_accounts_for_negative_valuation() {
        let a = eta_inverse_series(int(5)).unwrap();
        let b = eta_inverse_series(int(5)).unwrap();
        assert_eq!((&a * &b).order(), int(5) - e(2, 24));
        assert_eq!(&a * &b, eta_inverse_power(2, int(5)).unwrap());
    }

    #[test]
    fn denominator_overflow_is_an_error() {
        let big = i64::MAX / 3;
        let a = FormalQSeries::monomial(Exponent::new(1, big), BigInt::one(), int(1)).unwrap();
        let b = FormalQSeries::monomial(Exponent::new(1, big - 1), BigInt::one(), int(1)).unwrap();
        assert_eq!(a.checked_add(&b), Err(Error::DenominatorOverflow));
    }

    #[test]
    fn e8_cartan_is_unimodular() {
        // Integer Gaussian elimination via fractions.
        let mut m: Vec<Vec<Ratio<i64>>> = E8_CARTAN
            .iter()
            .map(|r| r.iter().map(|&x| Ratio::from_integer(x)).collect())
            .collect();
        let mut det = Ratio::from_integer(1);
        for i in 0..8 {
            det *= m[i][i];
            for j in (i + 1)..8 {
                let f = m[j][i] / m[i][i];
                let pivot = m[i].clone();
                for (x, v) in m[j].iter_mut().zip(pivot).skip(i) {
                    *x -= f * v;
                }
            }
        }
        assert_eq!(det, Ratio::from_integer(1));
    }

    #[test]
    fn e8_three_ways() {
        let n = 6;
        let sigma = e8_counts_by_divisor_sums(n);
        let coords = e8_counts_by_coordinates(n);
        let gram: Vec<BigInt> = e8_counts_by_gram_enumeration(n).into_iter().map(BigInt::from).collect();
        assert_eq!(sigma, coords);
        assert_eq!(sigma, gram);
        assert_eq!(sigma[1], BigInt::from(240));
        assert_eq!(sigma[2], BigInt::from(2160));
    }

    #[test]
    fn theta_coefficients() {
        let t = theta_sqrt2_e8(int(7)).unwrap();
        assert_eq!(t.coefficient(int(0)).unwrap(), BigInt::one());
        assert_eq!(t.coefficient(int(1)).unwrap(), BigInt::zero());
        assert_eq!(t.coefficient(int(2)).unwrap(), BigInt::from(240));
        assert_eq!(t.coefficient(int(4)).unwrap(), BigInt::from(2160));
        assert_eq!(t.coefficient(int(6)).unwrap(), BigInt::from(6720));
    }

    #[test]
    fn integral_steps_include_zeros() {
        let t = theta_sqrt2_e8(int(5)).unwrap();
        let steps = t.integral_steps().unwrap();
        assert_eq!(steps.len(), 5);
        assert!(steps[1].1.is_zero());
    }

    fn small_series() -> impl Strategy<Value = FormalQSeries> {
        (proptest::collection::vec((0i64..40, -5i64..6), 0..8), 1i64..4).prop_map(|(terms, d)| {
            FormalQSeries::from_terms(
                terms
                    .into_iter()
                    .map(|(k, c)| (Exponent::new(k, d * 2), BigInt::from(c))),
                int(8),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn mul_commutes_and_distributes(a in small_series(), b in small_series(), c in small_series()) {
            prop_assert_eq!(&a * &b, &b * &a);
            let lhs = &a * &(&b + &c);
            let rhs = &(&a * &b) + &(&a * &c);
            prop_assert_eq!(lhs.first_difference(&rhs).unwrap(), None);
        }

        #[test]
        fn rescale_preserves_terms(a in small_series(), k in 1i64..5) {
            let r = a.rescale(a.denom() * k).unwrap();
            prop_assert_eq!(r, a);
        }
    }
}
