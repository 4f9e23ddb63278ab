//! Finite commutative fusion rings with non-negative integer structure
//! constants `N_{ab}^c`, the admissible-triple fusion criterion of the
//! minimal models, and exhaustive ring-axiom checks.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kac::{MinimalModel, PrimaryField};

/// A based ring on a finite label set. Constants are stored sparsely; an
/// absent key means zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRing {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    unit: usize,
    constants: BTreeMap<(usize, usize, usize), u64>,
}

impl FusionRing {
    /// Creates a ring with the given labels and no non-zero constants.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>, unit: &str) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let unit = *index.get(unit).ok_or_else(|| Error::UnknownLabel(unit.to_string()))?;
        Ok(Self {
            labels,
            index,
            unit,
            constants: BTreeMap::new(),
        })
    }

    /// Returns a copy with `N_{ab}^c = n` (indices). Setting zero removes the entry.
    pub fn with_constant(mut self, a: usize, b: usize, c: usize, n: u64) -> Self {
        self.put(a, b, c, n);
        self
    }

    pub(crate) fn put(&mut self, a: usize, b: usize, c: usize, n: u64) {
        assert!(a < self.rank() && b < self.rank() && c < self.rank());
        if n == 0 {
            self.constants.remove(&(a, b, c));
        } else {
            self.constants.insert((a, b, c), n);
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn unit_label(&self) -> &str {
        &self.labels[self.unit]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// `N_{ab}^c` by index.
    pub fn coefficient(&self, a: usize, b: usize, c: usize) -> u64 {
        self.constants.get(&(a, b, c)).copied().unwrap_or(0)
    }

    /// `N_{ab}^c` by label.
    pub fn n(&self, a: &str, b: &str, c: &str) -> Result<u64> {
        Ok(self.coefficient(self.index_of(a)?, self.index_of(b)?, self.index_of(c)?))
    }

    /// Non-zero constants as `(a, b, c, n)` in index order.
    pub fn constants(&self) -> impl Iterator<Item = (usize, usize, usize, u64)> + '_ {
        self.constants.iter().map(|(&(a, b, c), &n)| (a, b, c, n))
    }

    /// The decomposition of `a ⊠ b` as `(c, N_{ab}^c)` with `N > 0`, ordered by `c`.
    pub fn product(&self, a: usize, b: usize) -> Vec<(usize, u64)> {
        self.constants
            .range((a, b, 0)..=(a, b, usize::MAX))
            .map(|(&(_, _, c), &n)| (c, n))
            .collect()
    }

    /// Bilinear extension of the product to multisets. Inputs list labels with
    /// repetition; the output gives each label with non-zero multiplicity in
    /// ring order.
    pub fn fuse(&self, a: &[&str], b: &[&str]) -> Result<Vec<(String, u64)>> {
        let a = self.multiplicities(a)?;
        let b = self.multiplicities(b)?;
        let mut out = vec![0u64; self.rank()];
        for (&x, &mx) in &a {
            for (&y, &my) in &b {
                for (c, n) in self.product(x, y) {
                    out[c] += mx * my * n;
                }
            }
        }
        Ok(out
            .into_iter()
            .enumerate()
            .filter(|&(_, n)| n > 0)
            .map(|(c, n)| (self.labels[c].clone(), n))
            .collect())
    }

    fn multiplicities(&self, xs: &[&str]) -> Result<BTreeMap<usize, u64>> {
        let mut m = BTreeMap::new();
        for x in xs {
            *m.entry(self.index_of(x)?).or_insert(0) += 1;
        }
        Ok(m)
    }

    /// Relabels every label through `f`, keeping constants. Fails if `f` is not
    /// injective on the labels.
    pub fn relabel(&self, mut f: impl FnMut(&str) -> String) -> Result<Self> {
        let labels: Vec<String> = self.labels.iter().map(|l| f(l)).collect();
        let unit = labels[self.unit].clone();
        let mut out = Self::new(labels, &unit)?;
        out.constants = self.constants.clone();
        Ok(out)
    }

    /// True when `map[i]` (an index into `other`) carries every constant of
    /// `self` onto the matching constant of `other`.
    pub fn embeds_into(&self, other: &FusionRing, map: &[usize]) -> bool {
        let n = self.rank();
        map.len() == n
            && map[self.unit] == other.unit
            && (0..n).all(|a| {
                (0..n).all(|b| (0..n).all(|c| self.coefficient(a, b, c) == other.coefficient(map[a], map[b], map[c])))
            })
    }

    /// Frobenius-Perron dimensions by power iteration on `sum_a N_a`. The
    /// returned vector is normalized so the unit has dimension 1.
    pub fn frobenius_perron_dimensions(&self) -> Vec<f64> {
        let n = self.rank();
        let mut total = vec![vec![0.0f64; n]; n];
        for (_, b, c, k) in self.constants() {
            total[b][c] += k as f64;
        }
        let mut v = vec![1.0f64; n];
        for _ in 0..10_000 {
            let mut w: Vec<f64> = total
                .iter()
                .map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum())
                .collect();
            let norm = w[self.unit];
            w.iter_mut().for_each(|x| *x /= norm);
            let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            v = w;
            if delta < 1e-15 {
                break;
            }
        }
        v
    }

    pub fn to_json(&self) -> FusionRingJson {
        FusionRingJson {
            labels: self.labels.clone(),
            unit: self.unit_label().to_string(),
            constants: self
                .constants()
                .map(|(a, b, c, n)| ConstantJson {
                    a: self.labels[a].clone(),
                    b: self.labels[b].clone(),
                    c: self.labels[c].clone(),
                    n,
                })
                .collect(),
        }
    }

    pub fn from_json(json: &FusionRingJson) -> Result<Self> {
        let mut ring = Self::new(json.labels.iter().cloned(), &json.unit)?;
        for k in &json.constants {
            let (a, b, c) = (ring.index_of(&k.a)?, ring.index_of(&k.b)?, ring.index_of(&k.c)?);
            ring.put(a, b, c, k.n);
        }
        Ok(ring)
    }

    /// Renders the multiplication table as a markdown matrix whose cells list
    /// the summands of `a ⊠ b`.
    pub fn markdown_table(&self) -> String {
        let mut out = String::from("| ⊠ |");
        for l in &self.labels {
            out.push_str(&format!(" {l} |"));
        }
        out.push('\n');
        out.push_str("|---|");
        out.push_str(&"---|".repeat(self.rank()));
        out.push('\n');
        for a in 0..self.rank() {
            out.push_str(&format!("| **{}** |", self.labels[a]));
            for b in 0..self.rank() {
                out.push_str(&format!(" {} |", self.format_sum(&self.product(a, b))));
            }
            out.push('\n');
        }
        out
    }

    /// `c1 + 2·c2 + ...`, or `0` for an empty sum.
    pub fn format_sum(&self, terms: &[(usize, u64)]) -> String {
        if terms.is_empty() {
            return "0".to_string();
        }
        terms
            .iter()
            .map(|&(c, n)| {
                if n == 1 {
                    self.labels[c].clone()
                } else {
                    format!("{n}·{}", self.labels[c])
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// JSON form of a [`FusionRing`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionRingJson {
    pub labels: Vec<String>,
    pub unit: String,
    pub constants: Vec<ConstantJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantJson {
    pub a: String,
    pub b: String,
    pub c: String,
    pub n: u64,
}

/// One failed ring axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `N_{1,b}^c != δ_{bc}`.
    Unit { b: String, c: String, value: u64 },
    /// `N_{ab}^c != N_{ba}^c`.
    Commutativity { a: String, b: String, c: String },
    /// `(a ⊠ b) ⊠ c` and `a ⊠ (b ⊠ c)` differ in the multiplicity of `d`.
    Associativity {
        a: String,
        b: String,
        c: String,
        d: String,
        left: u64,
        right: u64,
    },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Unit { b, c, value } => write!(f, "unit: N(1,{b};{c}) = {value}"),
            Self::Commutativity { a, b, c } => write!(f, "commutativity: N({a},{b};{c}) != N({b},{a};{c})"),
            Self::Associativity {
                a,
                b,
                c,
                d,
                left,
                right,
            } => write!(
                f,
                "associativity: ({a}·{b})·{c} has {left}×{d}, {a}·({b}·{c}) has {right}×{d}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks unit, commutativity and associativity over every label triple and
/// quadruple.
pub fn check_axioms(ring: &FusionRing) -> AxiomReport {
    let n = ring.rank();
    let l = |i: usize| ring.labels[i].clone();
    let mut violations = Vec::new();

    for b in 0..n {
        for c in 0..n {
            let value = ring.coefficient(ring.unit, b, c);
            if value != u64::from(b == c) {
                violations.push(AxiomViolation::Unit {
                    b: l(b),
                    c: l(c),
                    value,
                });
            }
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            for c in 0..n {
                if ring.coefficient(a, b, c) != ring.coefficient(b, a, c) {
                    violations.push(AxiomViolation::Commutativity {
                        a: l(a),
                        b: l(b),
                        c: l(c),
                    });
                }
            }
        }
    }

    let products: Vec<Vec<Vec<(usize, u64)>>> = (0..n).map(|a| (0..n).map(|b| ring.product(a, b)).collect()).collect();
    let mut left = vec![0u64; n];
    let mut right = vec![0u64; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                left.iter_mut().for_each(|x| *x = 0);
                right.iter_mut().for_each(|x| *x = 0);
                for &(e, k) in &products[a][b] {
                    for &(d, j) in &products[e][c] {
                        left[d] += k * j;
                    }
                }
                for &(f, k) in &products[b][c] {
                    for &(d, j) in &products[a][f] {
                        right[d] += k * j;
                    }
                }
                for d in 0..n {
                    if left[d] != right[d] {
                        violations.push(AxiomViolation::Associativity {
                            a: l(a),
                            b: l(b),
                            c: l(c),
                            d: l(d),
                            left: left[d],
                            right: right[d],
                        });
                    }
                }
            }
        }
    }
    AxiomReport { violations }
}

/// Largest deviation from `d_a d_b = sum_c N_{ab}^c d_c`, with the pair that
/// attains it.
pub fn dimension_homomorphism_defect(ring: &FusionRing, dims: &[f64]) -> (f64, Option<(usize, usize)>) {
    let mut worst = (0.0, None);
    for a in 0..ring.rank() {
        for b in 0..ring.rank() {
            let rhs: f64 = ring.product(a, b).iter().map(|&(c, k)| k as f64 * dims[c]).sum();
            let dev = (dims[a] * dims[b] - rhs).abs();
            if dev > worst.0 || worst.1.is_none() {
                worst = (dev, Some((a, b)));
            }
        }
    }
    worst
}

/// An ordered triple of Kac labels together with the pair `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmissibleTriple {
    pub p: i64,
    pub q: i64,
    pub pairs: [(i64, i64); 3],
}

impl AdmissibleTriple {
    pub fn new(p: i64, q: i64, pairs: [(i64, i64); 3]) -> Self {
        Self { p, q, pairs }
    }

    /// The twelve conditions: range bounds, sum bounds, the three triangle
    /// inequalities in each coordinate, and odd coordinate sums.
    pub fn is_admissible(&self) -> Result<bool> {
        let (p, q) = (self.p, self.q);
        if p < 2 || q < 2 || p.gcd(&q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        let [(r1, s1), (r2, s2), (r3, s3)] = self.pairs;
        let rs = [r1, r2, r3];
        let ss = [s1, s2, s3];
        Ok(coordinate_ok(rs, p) && coordinate_ok(ss, q))
    }
}

fn coordinate_ok([x, y, z]: [i64; 3], bound: i64) -> bool {
    let sum = x + y + z;
    [x, y, z].iter().all(|&v| 0 < v && v < bound)
        && sum < 2 * bound
        && x + y > z
        && x + z > y
        && y + z > x
        && sum % 2 == 1
}

pub fn is_admissible(triple: &AdmissibleTriple) -> Result<bool> {
    triple.is_admissible()
}

/// Admissibility of all eight representative choices for a triple of Kac
/// orbits. Bit `k` of the index selects the mirrored representative of the
/// `k`-th field.
pub fn representative_admissibility(fields: [&PrimaryField; 3]) -> [bool; 8] {
    let model = fields[0].model();
    let (p, q) = (model.p(), model.q());
    let mut out = [false; 8];
    for (mask, slot) in out.iter_mut().enumerate() {
        let pick = |k: usize| fields[k].representatives()[(mask >> k) & 1];
        *slot = AdmissibleTriple::new(p, q, [pick(0), pick(1), pick(2)])
            .is_admissible()
            .expect("p, q = m + 2, m + 3 are coprime");
    }
    out
}

/// The fusion ring of `L(c_m, 0)`: `N_{ab}^c = 1` when some choice of
/// representatives of the three Kac orbits is admissible.
pub fn minimal_model_fusion(model: MinimalModel) -> FusionRing {
    let fields = model.primaries();
    let labels: Vec<String> = fields.iter().map(ToString::to_string).collect();
    let unit = PrimaryField::vacuum(model).to_string();
    let mut ring = FusionRing::new(labels, &unit).expect("canonical labels are distinct");
    for (a, fa) in fields.iter().enumerate() {
        for (b, fb) in fields.iter().enumerate() {
            for (c, fc) in fields.iter().enumerate() {
                if representative_admissibility([fa, fb, fc]).iter().any(|&x| x) {
                    ring.put(a, b, c, 1);
                }
            }
        }
    }
    ring
}
