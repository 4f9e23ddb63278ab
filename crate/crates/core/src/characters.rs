//! Characters of minimal-model modules and identities between them.
//!
//! The character of `L(c_m, h_{r,s})` is
//!
//! `χ_{r,s}(q) = η(q)^{-1} Σ_{n ∈ Z} [q^{(2pqn + qr - ps)^2 / 4pq} - q^{(2pqn + qr + ps)^2 / 4pq}]`
//!
//! with leading term `q^{h - c/24}`. Every evaluation here takes a depth
//! measured from the leading exponent of the expression being evaluated, and the
//! result is exact below `leading + depth`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kac::{MinimalModel, PrimaryField};
use crate::qseries::{eta_inverse_power, eta_inverse_series, theta_sqrt2_e8, Exponent, FormalQSeries};
use crate::ratio;

/// A symbolic character, evaluated on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharacterSpec {
    /// `ch L(c_m, h_{r,s})`.
    Minimal(PrimaryField),
    /// `η^{-n}`.
    EtaInversePower(u32),
    /// `Θ_{√2 E8}`.
    ThetaSqrt2E8,
    /// Product of the factors.
    Tensor(Vec<CharacterSpec>),
    /// Sum of the summands.
    Sum(Vec<CharacterSpec>),
}

fn small(x: &num_rational::BigRational) -> Exponent {
    ratio::to_small(x).expect("minimal-model weights fit in i64")
}

impl CharacterSpec {
    /// Exponent of the leading term.
    pub fn leading_exponent(&self) -> Result<Exponent> {
        match self {
            Self::Minimal(f) => Ok(small(&f.leading_exponent())),
            Self::EtaInversePower(n) => Ok(Exponent::new(-i64::from(*n), 24)),
            Self::ThetaSqrt2E8 => Ok(Exponent::zero()),
            Self::Tensor(fs) => fs
                .iter()
                .try_fold(Exponent::zero(), |acc, f| Ok(acc + f.leading_exponent()?)),
            Self::Sum(ss) => ss
                .iter()
                .map(Self::leading_exponent)
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .ok_or_else(|| Error::Precondition("empty character sum".into())),
        }
    }

    /// Lowest conformal weight of the module described. Eta and theta
    /// factors contribute zero.
    pub fn lowest_weight(&self) -> Result<Exponent> {
        match self {
            Self::Minimal(f) => Ok(small(&f.conformal_weight())),
            Self::EtaInversePower(_) | Self::ThetaSqrt2E8 => Ok(Exponent::zero()),
            Self::Tensor(fs) => fs
                .iter()
                .try_fold(Exponent::zero(), |acc, f| Ok(acc + f.lowest_weight()?)),
            Self::Sum(ss) => ss
                .iter()
                .map(Self::lowest_weight)
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .ok_or_else(|| Error::Precondition("empty character sum".into())),
        }
    }

    /// Exact below `leading_exponent() + depth`.
    pub fn evaluate(&self, depth: Exponent) -> Result<FormalQSeries> {
        let lead = self.leading_exponent()?;
        let order = lead + depth;
        if depth <= Exponent::zero() {
            return Ok(FormalQSeries::zero(order));
        }
        let out = match self {
            Self::Minimal(f) => minimal_character(f, depth)?,
            Self::EtaInversePower(n) => eta_inverse_power(*n, depth)?,
            Self::ThetaSqrt2E8 => theta_sqrt2_e8(depth)?,
            Self::Tensor(fs) => {
                let mut acc = FormalQSeries::one(depth)?;
                for f in fs {
                    acc = acc.checked_mul(&f.evaluate(depth)?)?;
                }
                acc
            }
            Self::Sum(ss) => {
                let mut acc = FormalQSeries::zero(order);
                for s in ss {
                    acc = acc.checked_add(&s.evaluate_below(order)?)?;
                }
                acc
            }
        };
        if out.order() < order {
            return Err(Error::OracleMismatch(format!(
                "evaluation reached only {} of {}",
                ratio::format_small(out.order()),
                ratio::format_small(order)
            )));
        }
        out.truncated(order)
    }

    /// Exact below the absolute exponent `bound`.
    pub fn evaluate_below(&self, bound: Exponent) -> Result<FormalQSeries> {
        self.evaluate(bound - self.leading_exponent()?)
    }
}

/// The character of `field`, exact below `h - c/24 + depth`.
pub fn minimal_character(field: &PrimaryField, depth: Exponent) -> Result<FormalQSeries> {
    raw_minimal_character(field.model(), field.r(), field.s(), depth)
}

/// The character for a raw, uncanonicalized label `(r, s)`.
pub fn raw_minimal_character(model: MinimalModel, r: i64, s: i64, depth: Exponent) -> Result<FormalQSeries> {
    let (p, q) = (model.p(), model.q());
    if !(1..p).contains(&r) || !(1..q).contains(&s) {
        return Err(Error::LabelOutOfRange { m: model.m(), r, s });
    }
    let h = crate::kac::raw_conformal_weight(model, r, s);
    let lead = small(&(h - model.central_charge() / num_rational::BigRational::from_integer(24.into())));
    let order = lead + depth;
    if depth <= Exponent::zero() {
        return Ok(FormalQSeries::zero(order));
    }
    // Bound for the theta part, which is multiplied by η^{-1} = q^{-1/24}(1 + ...).
    let theta_order = order + Exponent::new(1, 24);
    let four_pq = 4 * p * q;
    let radius = (four_pq as f64 * *theta_order.numer() as f64 / *theta_order.denom() as f64).sqrt() + 1.0;
    let mut terms: Vec<(Exponent, BigInt)> = Vec::new();
    for (a, sign) in [(q * r - p * s, 1), (q * r + p * s, -1)] {
        let lo = ((-radius - a as f64) / (2 * p * q) as f64).floor() as i64 - 1;
        let hi = ((radius - a as f64) / (2 * p * q) as f64).ceil() as i64 + 1;
        for n in lo..=hi {
            let x = 2 * p * q * n + a;
            let e = Exponent::new(x * x, four_pq);
            if e < theta_order {
                terms.push((e, BigInt::from(sign)));
            }
        }
    }
    let theta = FormalQSeries::from_terms(terms, theta_order)?;
    let out = theta.checked_mul(&eta_inverse_series(depth)?)?;
    out.truncated(order)
}

/// `ch L(c_m, h_{r,s})` as a [`CharacterSpec`], for a raw label.
pub fn minimal_spec(m: u32, r: i64, s: i64) -> Result<CharacterSpec> {
    Ok(CharacterSpec::Minimal(PrimaryField::new(MinimalModel::new(m)?, r, s)?))
}

/// Which way to evaluate the right-hand side of the E8 identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumRoute {
    /// Every tuple separately, in parallel.
    Tuples,
    /// Contract the chain slot by slot, summing over one index at a time.
    Chain,
}

/// Outcome of comparing `Θ_{√2E8} η^{-8}` with the sum of product characters.
#[derive(Debug, Clone)]
pub struct DecompositionReport {
    /// Integer steps compared beyond the leading term.
    pub depth: u32,
    pub leading_exponent: Exponent,
    /// `Σ_{m=1}^8 c_m + c_U = 8`, checked exactly.
    pub central_charge_balanced: bool,
    pub tuple_count: usize,
    pub lhs: FormalQSeries,
    pub rhs: FormalQSeries,
    /// `(exponent, lhs, rhs)` at the first disagreement.
    pub first_mismatch: Option<(Exponent, BigInt, BigInt)>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.central_charge_balanced && self.tuple_count == E8_TUPLE_COUNT && self.first_mismatch.is_none()
    }
}

/// `Π_{j=0}^{8} (⌊(j+1)/2⌋ + 1)`.
pub const E8_TUPLE_COUNT: usize = 14400;

/// The even values `0, 2, ..., ≤ j + 1` allowed for `k_j`.
fn k_range(j: u32) -> Vec<u32> {
    (0..=j + 1).step_by(2).collect()
}

/// All tuples `(k_0, ..., k_8)` with `k_j` even and `0 <= k_j <= j + 1`.
pub fn e8_tuples() -> Vec<[u32; 9]> {
    let mut out = vec![[0u32; 9]];
    for j in 0..9 {
        out = out
            .into_iter()
            .flat_map(|t| {
                k_range(j as u32).into_iter().map(move |k| {
                    let mut t = t;
                    t[j] = k;
                    t
                })
            })
            .collect();
    }
    out
}

/// Checks `Θ_{√2E8} η^{-8} = Σ_k Π_{m=1}^8 χ(L(c_m, h^m_{k_{m-1}+1, k_m+1})) χ_{U(k_8)}`
/// through `depth` integer steps past the leading exponent `-1/3`, inclusive.
///
/// `u_specs[i]` is the character of `U(2i)` and must have central charge
/// `c_u` (the balance check uses it).
pub fn verify_e8_decomposition_with(
    u_specs: &[CharacterSpec],
    c_u: &num_rational::BigRational,
    depth: u32,
    route: SumRoute,
) -> Result<DecompositionReport> {
    if u_specs.len() != 5 {
        return Err(Error::Precondition(format!(
            "need 5 U characters, got {}",
            u_specs.len()
        )));
    }
    let lead = Exponent::new(-1, 3);
    let bound = lead + Exponent::from_integer(i64::from(depth) + 1);

    let models: Vec<MinimalModel> = (1..=8).map(|m| MinimalModel::new(m).expect("m >= 1")).collect();
    let mut charges: Vec<Exponent> = models.iter().map(|md| small(&md.central_charge())).collect();
    charges.push(small(c_u));
    let total: Exponent = charges.iter().copied().sum();
    let central_charge_balanced = total == Exponent::from_integer(8);

    // Each slot only needs the range that can reach below `bound` once the
    // other slots contribute at least their minimal exponent `-c/24`.
    let min_sum: Exponent = charges.iter().map(|c| -*c / 24).sum();
    let slot_bound = |slot: usize| bound - (min_sum + charges[slot] / 24);

    // chars[m-1][(k_prev, k)] for the minimal-model slots.
    let mut chars: Vec<BTreeMap<(u32, u32), FormalQSeries>> = Vec::with_capacity(8);
    for (idx, md) in models.iter().enumerate() {
        let m = md.m();
        let mut table = BTreeMap::new();
        for kp in k_range(m - 1) {
            for k in k_range(m) {
                let f = PrimaryField::new(*md, i64::from(kp) + 1, i64::from(k) + 1)?;
                let spec = CharacterSpec::Minimal(f);
                table.insert((kp, k), spec.evaluate_below(slot_bound(idx))?);
            }
        }
        chars.push(table);
    }
    let u_chars: Vec<FormalQSeries> = u_specs
        .iter()
        .map(|s| s.evaluate_below(slot_bound(8)))
        .collect::<Result<_>>()?;

    let tuples = e8_tuples();
    let rhs = match route {
        SumRoute::Tuples => tuples
            .par_iter()
            .map(|t| {
                let mut acc = u_chars[(t[8] / 2) as usize].clone();
                for m in 1..=8usize {
                    acc = acc.checked_mul(&chars[m - 1][&(t[m - 1], t[m])])?;
                }
                Ok(acc)
            })
            .try_reduce(|| FormalQSeries::zero(bound), |a, b| a.checked_add(&b))?,
        SumRoute::Chain => {
            let mut front: BTreeMap<u32, FormalQSeries> = BTreeMap::new();
            front.insert(0, FormalQSeries::one(bound - min_sum)?);
            for m in 1..=8u32 {
                let mut next: BTreeMap<u32, FormalQSeries> = BTreeMap::new();
                for k in k_range(m) {
                    let mut acc: Option<FormalQSeries> = None;
                    for (kp, f) in &front {
                        let term = f.checked_mul(&chars[(m - 1) as usize][&(*kp, k)])?;
                        acc = Some(match acc {
                            None => term,
                            Some(a) => a.checked_add(&term)?,
                        });
                    }
                    next.insert(k, acc.expect("k_{m-1} range is non-empty"));
                }
                front = next;
            }
            let mut acc = FormalQSeries::zero(bound);
            for (k, f) in &front {
                acc = acc.checked_add(&f.checked_mul(&u_chars[(*k / 2) as usize])?)?;
            }
            acc
        }
    };
    if rhs.order() < bound {
        return Err(Error::OracleMismatch("right-hand side truncated too early".into()));
    }
    let rhs = rhs.truncated(bound)?;

    let lhs_spec = CharacterSpec::Tensor(vec![CharacterSpec::ThetaSqrt2E8, CharacterSpec::EtaInversePower(8)]);
    let lhs = lhs_spec.evaluate_below(bound)?;
    let first_mismatch = lhs.first_difference(&rhs)?;
    Ok(DecompositionReport {
        depth,
        leading_exponent: lead,
        central_charge_balanced,
        tuple_count: tuples.len(),
        lhs,
        rhs,
        first_mismatch,
    })
}

/// [`verify_e8_decomposition_with`] on the bundled `U(2i)` characters, using
/// the chain route.
pub fn verify_e8_decomposition(depth: u32) -> Result<DecompositionReport> {
    let data = crate::threec::ThreeCDataset::bundled()?;
    verify_e8_decomposition_with(
        &data.u_character_specs()?,
        &data.u_central_charge(),
        depth,
        SumRoute::Chain,
    )
}

/// Labels whose lowest weight is not positive, excluding `vacuum`, and the
/// vacuum itself when its lowest weight is not zero.
pub fn verify_weight_positivity(specs: &[(String, CharacterSpec)], vacuum: &str) -> Result<Vec<String>> {
    let weights = specs
        .iter()
        .map(|(l, s)| Ok((l.clone(), ratio::from_small(s.lowest_weight()?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(crate::commutant::weight_positivity_violations(&weights, vacuum))
}

/// The coefficients of `series` at `offset + n`, `n = 0, 1, ...`, below its
/// order. Fails if a term sits off that grid.
pub fn integer_step_coefficients(series: &FormalQSeries, offset: Exponent) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut e = offset;
    while e < series.order() {
        out.push(series.coefficient(e)?);
        e += Exponent::one();
    }
    let on_grid = series.terms().all(|(x, _)| (x - offset).is_integer() && x >= offset);
    if !on_grid {
        return Err(Error::Precondition("terms off the integer grid".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::partition_numbers;
    use proptest::prelude::*;

    fn int(n: i64) -> Exponent {
        Exponent::from_integer(n)
    }

    fn coeffs(f: &PrimaryField, depth: i64) -> Vec<i64> {
        let ch = minimal_character(f, int(depth)).unwrap();
        integer_step_coefficients(&ch, small(&f.leading_exponent()))
            .unwrap()
            .into_iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    /// Coefficients of `Π_{n>=1} (1 + q^{n - 1/2})` in powers of `q^{1/2}`.
    fn free_fermion(half_steps: usize) -> Vec<i64> {
        let mut poly = vec![0i64; half_steps];
        poly[0] = 1;
        for odd in (1..half_steps).step_by(2) {
            for k in (odd..half_steps).rev() {
                poly[k] += poly[k - odd];
            }
        }
        poly
    }

    /// `Π_{n>=1} (1 + q^n)`.
    fn distinct_parts(count: usize) -> Vec<i64> {
        let mut poly = vec![0i64; count];
        poly[0] = 1;
        for n in 1..count {
            for k in (n..count).rev() {
                poly[k] += poly[k - n];
            }
        }
        poly
    }

    fn ising(label: &str) -> PrimaryField {
        label.parse().unwrap()
    }

    #[test]
    fn ising_characters_match_free_fermion() {
        let ff = free_fermion(60);
        let even: Vec<i64> = ff.iter().step_by(2).copied().collect();
        let odd: Vec<i64> = ff.iter().skip(1).step_by(2).copied().collect();
        assert_eq!(coeffs(&ising("1:1.1"), 30), even[..30]);
        assert_eq!(coeffs(&ising("1:1.3"), 29), odd[..29]);
        assert_eq!(coeffs(&ising("1:1.2"), 30), distinct_parts(30));
        assert_eq!(coeffs(&ising("1:1.1"), 7), [1, 0, 1, 1, 2, 2, 3]);
        assert_eq!(small(&ising("1:1.1").leading_exponent()), Exponent::new(-1, 48));
    }

    #[test]
    fn generic_fields_subtract_two_null_vectors() {
        let p = partition_numbers(200);
        for m in [2u32, 5, 9] {
            for f in MinimalModel::new(m).unwrap().primaries() {
                let (pp, qq) = (f.model().p(), f.model().q());
                let x = (f.r() * qq - f.s() * pp).abs();
                let levels = [f.r() * f.s(), (pp - f.r()) * (qq - f.s())];
                let valid = (pp * qq - x).min(40);
                let got = coeffs(&f, valid);
                for n in 0..valid {
                    let mut want = i64::try_from(p[n as usize].clone()).unwrap();
                    for l in levels {
                        if n >= l {
                            want -= i64::try_from(p[(n - l) as usize].clone()).unwrap();
                        }
                    }
                    assert_eq!(got[n as usize], want, "{f} level {n}");
                }
            }
        }
    }

    #[test]
    fn vacuum_of_m9_is_virasoro_vacuum_module() {
        // No further null vectors below level 110 = (p-1)(q-1).
        let got = coeffs(&PrimaryField::vacuum(MinimalModel::new(9).unwrap()), 25);
        let p = partition_numbers(25);
        let mut want = Vec::new();
        for n in 0..25usize {
            let v = &p[n] - if n >= 1 { p[n - 1].clone() } else { BigInt::zero() };
            want.push(i64::try_from(v).unwrap());
        }
        assert_eq!(got, want);
    }

    #[test]
    fn weight_eight_field() {
        let f: PrimaryField = "9:1.7".parse().unwrap();
        let ch = minimal_character(&f, int(3)).unwrap();
        let (e, c) = ch.leading_term().unwrap();
        assert_eq!(e, int(8) - Exponent::new(7, 176));
        assert!(c.is_one());
    }

    #[test]
    fn tensor_leading_exponents() {
        let s = CharacterSpec::Tensor(vec![minimal_spec(1, 1, 2).unwrap(), minimal_spec(9, 1, 1).unwrap()]);
        assert_eq!(
            s.leading_exponent().unwrap(),
            Exponent::new(1, 16) - Exponent::new(1, 48) - Exponent::new(7, 176)
        );
        assert_eq!(s.lowest_weight().unwrap(), Exponent::new(1, 16));
        let ch = s.evaluate(int(4)).unwrap();
        assert_eq!(ch.leading_term().unwrap().0, s.leading_exponent().unwrap());
        assert_eq!(ch.order(), s.leading_exponent().unwrap() + int(4));
        assert!(CharacterSpec::Sum(vec![]).leading_exponent().is_err());
    }

    #[test]
    fn sum_spec_spans_classes() {
        let a = minimal_spec(1, 1, 1).unwrap();
        let b = minimal_spec(1, 1, 3).unwrap();
        let sum = CharacterSpec::Sum(vec![a.clone(), b.clone()]).evaluate(int(5)).unwrap();
        let ff = free_fermion(10);
        let got: Vec<i64> = (0..10)
            .map(|k| i64::try_from(sum.coefficient(Exponent::new(-1, 48) + Exponent::new(k, 2)).unwrap()).unwrap())
            .collect();
        assert_eq!(got, ff);
    }

    #[test]
    fn tuple_enumeration() {
        let t = e8_tuples();
        assert_eq!(t.len(), E8_TUPLE_COUNT);
        assert!(t
            .iter()
            .all(|t| t.iter().enumerate().all(|(j, &k)| k % 2 == 0 && k as usize <= j + 1)));
        assert!(t.iter().all(|t| t[0] == 0));
    }

    #[test]
    fn lhs_leading_terms() {
        let lhs = CharacterSpec::Tensor(vec![CharacterSpec::ThetaSqrt2E8, CharacterSpec::EtaInversePower(8)])
            .evaluate(int(3))
            .unwrap();
        let c = integer_step_coefficients(&lhs, Exponent::new(-1, 3)).unwrap();
        // η^{-8} = 1 + 8q + 44q^2 + ..., Θ = 1 + 240 q^2 + ...
        assert_eq!(c, [BigInt::from(1), BigInt::from(8), BigInt::from(44 + 240)]);
    }

    proptest! {
        #[test]
        fn characters_have_nonnegative_coefficients(m in 1u32..=9, idx in 0usize..55) {
            let fields = MinimalModel::new(m).unwrap().primaries();
            let f = fields[idx % fields.len()];
            let ch = minimal_character(&f, int(12)).unwrap();
            prop_assert!(ch.is_nonnegative());
            let (e, c) = ch.leading_term().unwrap();
            prop_assert_eq!(e, small(&f.leading_exponent()));
            prop_assert!(c.is_one());
        }

        #[test]
        fn kac_mirror_gives_same_character(m in 1u32..=9, r in 1i64..11, s in 1i64..12) {
            let md = MinimalModel::new(m).unwrap();
            prop_assume!(r < md.p() && s < md.q());
            let a = raw_minimal_character(md, r, s, int(8)).unwrap();
            let b = raw_minimal_character(md, md.p() - r, md.q() - s, int(8)).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
