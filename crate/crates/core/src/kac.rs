//! Central charges, conformal weights and the Kac table of the unitary
//! minimal models `L(c_m, 0)`, `m = 1, 2, 3, ...`.
//!
//! A model is fixed by `m`; write `p = m + 2` and `q = m + 3`. Primary fields
//! carry a Kac label `(r, s)` with `1 <= r <= p - 1`, `1 <= s <= q - 1`, and the
//! labels `(r, s)` and `(p - r, q - s)` name the same module. [`PrimaryField`]
//! always stores the lexicographically smallest of the two.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinimalModel {
    m: u32,
}

impl MinimalModel {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidModel(0));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn p(&self) -> i64 {
        i64::from(self.m) + 2
    }

    pub fn q(&self) -> i64 {
        i64::from(self.m) + 3
    }

    /// `c_m = 1 - 6 / ((m + 2)(m + 3))`.
    pub fn central_charge(&self) -> BigRational {
        BigRational::from_integer(1.into()) - ratio::from_i64(6, self.p() * self.q())
    }

    /// Number of inequivalent irreducible modules, `(p - 1)(q - 1) / 2`.
    pub fn rank(&self) -> usize {
        ((self.p() - 1) * (self.q() - 1) / 2) as usize
    }

    /// Canonical representatives of all Kac orbits, sorted by `(h, r, s)`.
    pub fn primaries(&self) -> Vec<PrimaryField> {
        let mut out = Vec::with_capacity(self.rank());
        for r in 1..self.p() {
            for s in 1..self.q() {
                let f = PrimaryField::new(*self, r, s).expect("label in range");
                if f.r == r as u32 && f.s == s as u32 {
                    out.push(f);
                }
            }
        }
        out.sort_by(|a, b| {
            a.conformal_weight()
                .cmp(&b.conformal_weight())
                .then(a.r.cmp(&b.r))
                .then(a.s.cmp(&b.s))
        });
        out
    }

    /// Finds the primary with conformal weight exactly `h`, if any.
    pub fn field_with_weight(&self, h: &BigRational) -> Option<PrimaryField> {
        self.primaries().into_iter().find(|f| &f.conformal_weight() == h)
    }

    /// Finds `m` with `c_m = c` by scanning up to `max_m`.
    pub fn from_central_charge(c: &BigRational, max_m: u32) -> Option<Self> {
        (1..=max_m)
            .map(|m| Self { m })
            .find(|model| &model.central_charge() == c)
    }
}

impl fmt::Display for MinimalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({},{})", self.p(), self.q())
    }
}

/// `c_m` as an exact rational.
pub fn central_charge(model: MinimalModel) -> BigRational {
    model.central_charge()
}

/// The canonical Kac labels of `model`, sorted by `(h, r, s)`.
pub fn enumerate_primaries(model: MinimalModel) -> Vec<PrimaryField> {
    model.primaries()
}

/// A Kac label in canonical form. Serialized as `m:r.s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimaryField {
    model: MinimalModel,
    r: u32,
    s: u32,
}

impl PrimaryField {
    /// Builds the field for a raw label `(r, s)`, canonicalizing under the Kac
    /// symmetry.
    pub fn new(model: MinimalModel, r: i64, s: i64) -> Result<Self> {
        let (p, q) = (model.p(), model.q());
        if !(1..p).contains(&r) || !(1..q).contains(&s) {
            return Err(Error::LabelOutOfRange { m: model.m, r, s });
        }
        let (r, s) = std::cmp::min((r, s), (p - r, q - s));
        Ok(Self {
            model,
            r: r as u32,
            s: s as u32,
        })
    }

    pub fn vacuum(model: MinimalModel) -> Self {
        Self { model, r: 1, s: 1 }
    }

    pub fn model(&self) -> MinimalModel {
        self.model
    }

    pub fn r(&self) -> i64 {
        i64::from(self.r)
    }

    pub fn s(&self) -> i64 {
        i64::from(self.s)
    }

    /// The other raw label of the Kac orbit, `(p - r, q - s)`.
    pub fn mirror(&self) -> (i64, i64) {
        (self.model.p() - self.r(), self.model.q() - self.s())
    }

    /// Both raw labels of the orbit, canonical one first.
    pub fn representatives(&self) -> [(i64, i64); 2] {
        [(self.r(), self.s()), self.mirror()]
    }

    pub fn is_vacuum(&self) -> bool {
        self.r == 1 && self.s == 1
    }

    /// `h = ((r q - s p)^2 - 1) / (4 p q)`.
    pub fn conformal_weight(&self) -> BigRational {
        raw_conformal_weight(self.model, self.r(), self.s())
    }

    /// `h - c/24`, the leading exponent of the character.
    pub fn leading_exponent(&self) -> BigRational {
        self.conformal_weight() - self.model.central_charge() / BigRational::from_integer(24.into())
    }

    /// `r.s` without the model prefix.
    pub fn short_label(&self) -> String {
        format!("{}.{}", self.r, self.s)
    }

    /// Parses `r.s` relative to a known model.
    pub fn parse_short(model: MinimalModel, s: &str) -> Result<Self> {
        let err = || Error::Parse {
            kind: "field label",
            input: s.to_string(),
        };
        let (r, t) = s.trim().split_once('.').ok_or_else(err)?;
        let r: i64 = r.parse().map_err(|_| err())?;
        let t: i64 = t.parse().map_err(|_| err())?;
        Self::new(model, r, t)
    }
}

/// Conformal weight of an uncanonicalized label. Kac-symmetric by construction.
pub fn raw_conformal_weight(model: MinimalModel, r: i64, s: i64) -> BigRational {
    let (p, q) = (model.p(), model.q());
    let x = r * q - s * p;
    ratio::from_i64(x * x - 1, 4 * p * q)
}

pub fn conformal_weight(field: &PrimaryField) -> BigRational {
    field.conformal_weight()
}

impl fmt::Display for PrimaryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}.{}", self.model.m, self.r, self.s)
    }
}

impl FromStr for PrimaryField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            kind: "primary field",
            input: s.to_string(),
        };
        let (m, rest) = s.trim().split_once(':').ok_or_else(err)?;
        let m: u32 = m.parse().map_err(|_| err())?;
        Self::parse_short(MinimalModel::new(m)?, rest)
    }
}

impl PartialOrd for PrimaryField {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimaryField {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.model, self.r, self.s).cmp(&(other.model, other.r, other.s))
    }
}
