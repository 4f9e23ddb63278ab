//! The bundled 3C-algebra dataset.
//!
//! The 3C-algebra `U` has central charge `16/11` and five irreducible modules
//! `U(0), U(2), U(4), U(6), U(8)`. Under the Ising subalgebra `L(1/2, 0)` and
//! its commutant `M`, each splits as
//!
//! `U(2i) = L(1/2,0)⊗M_{i,0} ⊕ L(1/2,1/2)⊗M_{i,1} ⊕ L(1/2,1/16)⊗M_{i,2}`
//!
//! and every `M_{i,l}` is a sum of two `L(21/22, h)` modules. The branching
//! table lives in `data/threec.json`; the `c = 21/22` weights of each `M_{i,l}`
//! live in `data/threec_weights.json`.
//!
//! `U(2i)` fuses like the `(2i+1, 1)` field of `L(21/22, 0)` (the model with
//! `p = 11`, `q = 12`). The `2i` in the label is the su(2) weight, not the Kac
//! index.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Deserialize;

use crate::characters::CharacterSpec;
use crate::commutant::{derive_commutant_ring, BranchingTable};
use crate::error::{Error, Result};
use crate::fusion::{minimal_model_fusion, AdmissibleTriple, FusionRing};
use crate::kac::{MinimalModel, PrimaryField};
use crate::modular::{s_matrix, ModularData};
use crate::ratio;

const TABLE_JSON: &str = include_str!("../data/threec.json");
const WEIGHTS_JSON: &str = include_str!("../data/threec_weights.json");

/// Shown wherever `U(2i)` labels meet Kac labels.
pub const U_INDEXING_NOTE: &str =
    "U(2i) fuses as the (2i+1, 1) field of L(21/22, 0); the label 2i is the su(2) weight, not a Kac index";

/// `m` of the model with `c = 21/22`.
pub const C21_22_M: u32 = 9;

/// Number of `U` modules.
pub const U_RANK: usize = 5;

#[derive(Debug, Deserialize)]
struct WeightsJson {
    sub_weights: BTreeMap<String, String>,
    constituents: BTreeMap<String, Vec<String>>,
}

/// One summand `L(1/2, h_α) ⊗ L(21/22, h)` of a `U` module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constituent {
    pub ising: PrimaryField,
    pub c21_22: PrimaryField,
}

#[derive(Debug, Clone)]
pub struct ThreeCDataset {
    table: BranchingTable,
    sub_fields: BTreeMap<String, PrimaryField>,
    constituents: BTreeMap<String, Vec<PrimaryField>>,
}

fn ising() -> MinimalModel {
    MinimalModel::new(1).expect("m = 1")
}

fn c21_22() -> MinimalModel {
    MinimalModel::new(C21_22_M).expect("m = 9")
}

/// The field of `model` with weight exactly `h`.
pub fn kac_search(model: MinimalModel, h: &BigRational) -> Result<PrimaryField> {
    model.field_with_weight(h).ok_or_else(|| {
        Error::Dataset(format!(
            "weight {} is not in the Kac table of {model}",
            ratio::format(h)
        ))
    })
}

/// `U(2i)` for `i` in `0..5`.
pub fn u_label(i: usize) -> String {
    format!("U({})", 2 * i)
}

/// The `(2i+1, 1)` field of `L(21/22, 0)` that `U(2i)` fuses like.
pub fn u_field(i: usize) -> PrimaryField {
    PrimaryField::new(c21_22(), 2 * i as i64 + 1, 1).expect("2i+1 < 11")
}

/// Fusion ring of `U`, read off the `(2i+1, 1)` fields of the `c = 21/22`
/// model.
pub fn build_u_ring() -> Result<FusionRing> {
    let big = minimal_model_fusion(c21_22());
    let idx: Vec<usize> = (0..U_RANK)
        .map(|i| big.index_of(&u_field(i).to_string()))
        .collect::<Result<_>>()?;
    let mut ring = FusionRing::new((0..U_RANK).map(u_label), &u_label(0))?;
    for (a, &x) in idx.iter().enumerate() {
        for (b, &y) in idx.iter().enumerate() {
            for (z, n) in big.product(x, y) {
                let c = idx.iter().position(|&w| w == z).ok_or_else(|| {
                    Error::OracleMismatch(format!("{} ⊠ {} leaves the (odd, 1) fields", u_label(a), u_label(b)))
                })?;
                ring.put(a, b, c, n);
            }
        }
    }
    Ok(ring)
}

/// `k` with `((2i+1,1), (2j+1,1), (2k+1,1))` admissible in `M(11, 12)`.
pub fn u_fusion_support(i: usize, j: usize) -> Result<Vec<usize>> {
    let md = c21_22();
    let mut out = Vec::new();
    for k in 0..U_RANK {
        let triple = AdmissibleTriple::new(
            md.p(),
            md.q(),
            [(2 * i as i64 + 1, 1), (2 * j as i64 + 1, 1), (2 * k as i64 + 1, 1)],
        );
        if triple.is_admissible()? {
            out.push(k);
        }
    }
    Ok(out)
}

/// `M_{i,l}`, with `l` indexing the Ising module (`0`: h = 0, `1`: h = 1/2,
/// `2`: h = 1/16).
pub fn m_label(i: usize, l: usize) -> String {
    format!("M_{{{i},{l}}}")
}

/// The summands of `M_{i,l} ⊠ M_{j,l'}` as predicted by the closed-form rule
/// families, ordered as `(k, l'')`.
pub fn m_product_rule(i: usize, l: usize, j: usize, l2: usize) -> Result<Vec<(usize, usize)>> {
    let ks = u_fusion_support(i, j)?;
    let ising_part: Vec<usize> = match (l.min(l2), l.max(l2)) {
        (0, x) => vec![x],
        (1, 1) => vec![0],
        (1, 2) => vec![2],
        (2, 2) => vec![0, 1],
        _ => return Err(Error::Precondition(format!("Ising index out of range: {l}, {l2}"))),
    };
    let mut out: Vec<(usize, usize)> = ks
        .iter()
        .flat_map(|&k| ising_part.iter().map(move |&x| (k, x)))
        .collect();
    out.sort();
    Ok(out)
}

/// Pairs `(M_{i,l}, M_{j,l'})` where `ring` differs from [`m_product_rule`].
pub fn check_m_product_rules(ring: &FusionRing) -> Result<Vec<(String, String)>> {
    let mut bad = Vec::new();
    for i in 0..U_RANK {
        for l in 0..3 {
            for j in 0..U_RANK {
                for l2 in 0..3 {
                    let (a, b) = (m_label(i, l), m_label(j, l2));
                    let mut want: Vec<(String, u64)> = m_product_rule(i, l, j, l2)?
                        .into_iter()
                        .map(|(k, x)| (m_label(k, x), 1))
                        .collect();
                    want.sort();
                    let mut got = ring.fuse(&[&a], &[&b])?;
                    got.sort();
                    if got != want {
                        bad.push((a, b));
                    }
                }
            }
        }
    }
    Ok(bad)
}

impl ThreeCDataset {
    /// The dataset compiled into the crate.
    pub fn bundled() -> Result<Self> {
        Self::from_json_strs(TABLE_JSON, WEIGHTS_JSON)
    }

    /// Parses a branching table and its weight sidecar, resolving every weight
    /// to a Kac label.
    pub fn from_json_strs(table: &str, weights: &str) -> Result<Self> {
        let table = BranchingTable::from_json_str(table)?;
        let weights: WeightsJson = serde_json::from_str(weights).map_err(|e| Error::Dataset(e.to_string()))?;

        let mut sub_fields = BTreeMap::new();
        for a in table.sub_labels() {
            let h = weights
                .sub_weights
                .get(a)
                .ok_or_else(|| Error::Dataset(format!("no weight for {a}")))?;
            let f: PrimaryField = a.parse()?;
            if f.model() != ising() || f.conformal_weight() != ratio::parse(h)? {
                return Err(Error::Dataset(format!("{a} does not have weight {h}")));
            }
            sub_fields.insert(a.clone(), f);
        }

        let mut constituents = BTreeMap::new();
        for label in table.commutant_labels() {
            let hs = weights
                .constituents
                .get(label)
                .ok_or_else(|| Error::Dataset(format!("no constituents for {label}")))?;
            let fields = hs
                .iter()
                .map(|h| kac_search(c21_22(), &ratio::parse(h)?))
                .collect::<Result<Vec<_>>>()?;
            if fields.is_empty() {
                return Err(Error::Dataset(format!("{label} has no constituents")));
            }
            constituents.insert(label.to_string(), fields);
        }
        Ok(Self {
            table,
            sub_fields,
            constituents,
        })
    }

    pub fn table(&self) -> &BranchingTable {
        &self.table
    }

    pub fn u_central_charge(&self) -> BigRational {
        ising().central_charge() + c21_22().central_charge()
    }

    pub fn ising_ring(&self) -> FusionRing {
        minimal_model_fusion(ising())
    }

    pub fn ising_data(&self) -> Result<ModularData> {
        s_matrix(ising())
    }

    pub fn u_ring(&self) -> Result<FusionRing> {
        build_u_ring()
    }

    /// The 15-module fusion ring of `M`.
    pub fn m_ring(&self) -> Result<FusionRing> {
        derive_commutant_ring(&self.table, &self.u_ring()?, &self.ising_ring())
    }

    /// The `c = 21/22` fields making up a commutant module.
    pub fn m_fields(&self, label: &str) -> Result<&[PrimaryField]> {
        self.constituents
            .get(label)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Every `L(1/2, h_α) ⊗ L(21/22, h)` summand of a `U` module.
    pub fn u_constituents(&self, u: &str) -> Result<Vec<Constituent>> {
        let mut out = Vec::new();
        for (a, label) in self.table.row(u)? {
            let ising = self.sub_fields[a];
            for &c in self.m_fields(label)? {
                out.push(Constituent { ising, c21_22: c });
            }
        }
        Ok(out)
    }

    pub fn m_character_spec(&self, label: &str) -> Result<CharacterSpec> {
        Ok(CharacterSpec::Sum(
            self.m_fields(label)?
                .iter()
                .map(|&f| CharacterSpec::Minimal(f))
                .collect(),
        ))
    }

    pub fn u_character_spec(&self, u: &str) -> Result<CharacterSpec> {
        Ok(CharacterSpec::Sum(
            self.u_constituents(u)?
                .into_iter()
                .map(|c| CharacterSpec::Tensor(vec![CharacterSpec::Minimal(c.ising), CharacterSpec::Minimal(c.c21_22)]))
                .collect(),
        ))
    }

    /// Characters of `U(0), ..., U(8)` in that order.
    pub fn u_character_specs(&self) -> Result<Vec<CharacterSpec>> {
        self.table
            .big_labels()
            .iter()
            .map(|u| self.u_character_spec(u))
            .collect()
    }

    /// `(label, spec)` for every commutant module, in table order.
    pub fn m_character_specs(&self) -> Result<Vec<(String, CharacterSpec)>> {
        self.table
            .commutant_labels()
            .into_iter()
            .map(|l| Ok((l.to_string(), self.m_character_spec(l)?)))
            .collect()
    }

    /// Lowest conformal weight of each commutant module.
    pub fn m_lowest_weights(&self) -> Result<Vec<(String, BigRational)>> {
        self.m_character_specs()?
            .into_iter()
            .map(|(l, s)| Ok((l, ratio::from_small(s.lowest_weight()?))))
            .collect()
    }

    /// Lowest conformal weight of each `U` module.
    pub fn u_lowest_weights(&self) -> Result<Vec<(String, BigRational)>> {
        self.table
            .big_labels()
            .iter()
            .map(|u| Ok((u.clone(), ratio::from_small(self.u_character_spec(u)?.lowest_weight()?))))
            .collect()
    }

    /// Quantum dimensions of the `U` modules, as those of the `(2i+1, 1)` fields.
    pub fn u_qdims(&self) -> Result<Vec<f64>> {
        let data = s_matrix(c21_22())?;
        (0..U_RANK).map(|i| data.qdim_of(&u_field(i).to_string())).collect()
    }
}
