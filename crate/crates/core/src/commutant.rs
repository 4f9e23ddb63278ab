//! Fusion rules of a commutant subalgebra from a branching decomposition.
//!
//! Each irreducible module `M^i` of the big algebra splits over the pair
//! (subalgebra, commutant) as `M^i = ⊕_{α ∈ J_i} W^α ⊗ M^(i,α)`. When the
//! vacuum row already contains every subalgebra module (`J_1 = J`), every row
//! does, the `M^(i,α)` exhaust the commutant's simple modules, and
//!
//! `N_{(i,α),(j,β)}^{(k,γ)} = N_{ij}^k · N_{αβ}^γ`.
//!
//! [`validate`] checks the combinatorial hypotheses, [`derive_commutant_ring`]
//! builds the product ring, and the remaining checks confirm its expected
//! structure.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{check_axioms, dimension_homomorphism_defect, FusionRing};
use crate::modular::ModularData;

/// Absolute tolerance for the dimension relations.
pub const DIMENSION_TOL: f64 = 1e-8;

/// A multiplicity-free branching decomposition. The first label of `I` and of
/// `J` is the vacuum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingTable {
    big: Vec<String>,
    sub: Vec<String>,
    rows: Vec<Vec<(String, String)>>,
}

/// JSON form: `{"I": [...], "J": [...], "rows": {"i": [["alpha", "label"], ...]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingTableJson {
    #[serde(rename = "I")]
    pub big: Vec<String>,
    #[serde(rename = "J")]
    pub sub: Vec<String>,
    pub rows: BTreeMap<String, Vec<(String, String)>>,
}

impl BranchingTable {
    /// Rows are given in the order of `big`. Labels inside rows are not
    /// checked here; [`validate`] reports on them.
    pub fn new(big: Vec<String>, sub: Vec<String>, rows: Vec<Vec<(String, String)>>) -> Result<Self> {
        if big.is_empty() || sub.is_empty() {
            return Err(Error::Dataset("I and J must be non-empty".into()));
        }
        if rows.len() != big.len() {
            return Err(Error::Dataset(format!("{} rows for {} modules", rows.len(), big.len())));
        }
        for labels in [&big, &sub] {
            let mut seen = BTreeSet::new();
            for l in labels {
                if !seen.insert(l) {
                    return Err(Error::DuplicateLabel(l.clone()));
                }
            }
        }
        Ok(Self { big, sub, rows })
    }

    /// Rows absent from the JSON object become empty rows.
    pub fn from_json(json: &BranchingTableJson) -> Result<Self> {
        for key in json.rows.keys() {
            if !json.big.contains(key) {
                return Err(Error::UnknownLabel(key.clone()));
            }
        }
        let rows = json
            .big
            .iter()
            .map(|i| json.rows.get(i).cloned().unwrap_or_default())
            .collect();
        Self::new(json.big.clone(), json.sub.clone(), rows)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: BranchingTableJson = serde_json::from_str(text).map_err(|e| Error::Dataset(e.to_string()))?;
        Self::from_json(&json)
    }

    pub fn to_json(&self) -> BranchingTableJson {
        BranchingTableJson {
            big: self.big.clone(),
            sub: self.sub.clone(),
            rows: self.big.iter().cloned().zip(self.rows.iter().cloned()).collect(),
        }
    }

    pub fn big_labels(&self) -> &[String] {
        &self.big
    }

    pub fn sub_labels(&self) -> &[String] {
        &self.sub
    }

    pub fn big_vacuum(&self) -> &str {
        &self.big[0]
    }

    pub fn sub_vacuum(&self) -> &str {
        &self.sub[0]
    }

    /// The `(α, commutant label)` pairs of row `i`.
    pub fn row(&self, i: &str) -> Result<&[(String, String)]> {
        let k = self.big_index(i)?;
        Ok(&self.rows[k])
    }

    fn big_index(&self, i: &str) -> Result<usize> {
        self.big
            .iter()
            .position(|l| l == i)
            .ok_or_else(|| Error::UnknownLabel(i.to_string()))
    }

    /// `J_i`, in row order.
    pub fn j_set(&self, i: &str) -> Result<Vec<&str>> {
        Ok(self.row(i)?.iter().map(|(a, _)| a.as_str()).collect())
    }

    pub fn commutant_label(&self, i: &str, alpha: &str) -> Option<&str> {
        self.row(i)
            .ok()?
            .iter()
            .find(|(a, _)| a == alpha)
            .map(|(_, l)| l.as_str())
    }

    /// Every commutant label, row by row.
    pub fn commutant_labels(&self) -> Vec<&str> {
        self.rows.iter().flatten().map(|(_, l)| l.as_str()).collect()
    }

    /// Returns a copy with the pair for `(i, alpha)` removed.
    pub fn without_entry(&self, i: &str, alpha: &str) -> Result<Self> {
        let k = self.big_index(i)?;
        let mut out = self.clone();
        out.rows[k].retain(|(a, _)| a != alpha);
        Ok(out)
    }

    /// Returns a copy in which row `i` is empty.
    pub fn without_row(&self, i: &str) -> Result<Self> {
        let k = self.big_index(i)?;
        let mut out = self.clone();
        out.rows[k].clear();
        Ok(out)
    }
}

/// `Σ_{β ∈ J_1} d_β^2` against `Σ_{γ ∈ J_i} d_γ^2` for one row.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionCheck {
    pub module: String,
    pub vacuum_sum: f64,
    pub row_sum: f64,
    /// `vacuum_sum <= row_sum` within [`DIMENSION_TOL`].
    pub inequality_holds: bool,
    /// `|vacuum_sum - row_sum| <= DIMENSION_TOL`.
    pub equality_holds: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// Disagreements between the table's label sets and the input rings.
    pub label_mismatches: Vec<String>,
    pub empty_rows: Vec<String>,
    pub vacuum_pair_present: bool,
    /// `(i, α)` with `α` not in `J`.
    pub unknown_sub_labels: Vec<(String, String)>,
    /// `(i, α)` occurring twice in the same row.
    pub repeated_sub_labels: Vec<(String, String)>,
    pub j1_equals_j: bool,
    /// Rows with `J_i != J`, with the missing labels.
    pub incomplete_rows: Vec<(String, Vec<String>)>,
    pub dimension_checks: Vec<DimensionCheck>,
    pub duplicate_commutant_labels: Vec<String>,
    pub commutant_count: usize,
    pub expected_count: usize,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.label_mismatches.is_empty()
            && self.empty_rows.is_empty()
            && self.vacuum_pair_present
            && self.unknown_sub_labels.is_empty()
            && self.repeated_sub_labels.is_empty()
            && self.j1_equals_j
            && self.incomplete_rows.is_empty()
            && self
                .dimension_checks
                .iter()
                .all(|d| d.inequality_holds && d.equality_holds)
            && self.duplicate_commutant_labels.is_empty()
            && self.commutant_count == self.expected_count
    }

    /// One line per failed check.
    pub fn findings(&self) -> Vec<String> {
        let mut out = Vec::new();
        out.extend(self.label_mismatches.iter().cloned());
        out.extend(self.empty_rows.iter().map(|i| format!("row {i} is empty")));
        if !self.vacuum_pair_present {
            out.push("vacuum row lacks the (vacuum, vacuum) pair".into());
        }
        out.extend(
            self.unknown_sub_labels
                .iter()
                .map(|(i, a)| format!("row {i}: unknown subalgebra label {a}")),
        );
        out.extend(
            self.repeated_sub_labels
                .iter()
                .map(|(i, a)| format!("row {i}: subalgebra label {a} repeated")),
        );
        if !self.j1_equals_j {
            out.push("J_1 != J".into());
        }
        out.extend(
            self.incomplete_rows
                .iter()
                .map(|(i, miss)| format!("J_{i} != J (missing {})", miss.join(", "))),
        );
        for d in &self.dimension_checks {
            if !d.inequality_holds {
                out.push(format!(
                    "dimension inequality fails for {}: {} > {}",
                    d.module, d.vacuum_sum, d.row_sum
                ));
            } else if !d.equality_holds {
                out.push(format!(
                    "dimension sums differ for {}: {} vs {}",
                    d.module, d.vacuum_sum, d.row_sum
                ));
            }
        }
        out.extend(
            self.duplicate_commutant_labels
                .iter()
                .map(|l| format!("commutant label {l} occurs more than once")),
        );
        if self.commutant_count != self.expected_count {
            out.push(format!(
                "{} commutant labels, expected |I|·|J| = {}",
                self.commutant_count, self.expected_count
            ));
        }
        out
    }
}

fn same_set(a: &[String], b: &[String]) -> bool {
    a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>() && a.len() == b.len()
}

/// Checks the hypotheses of the product rule on `table`.
pub fn validate(table: &BranchingTable, big_ring: &FusionRing, sub_data: &ModularData) -> ValidationReport {
    let mut report = ValidationReport {
        expected_count: table.big.len() * table.sub.len(),
        ..Default::default()
    };
    if !same_set(big_ring.labels(), &table.big) {
        report
            .label_mismatches
            .push("big-algebra ring labels differ from I".into());
    } else if big_ring.unit_label() != table.big_vacuum() {
        report
            .label_mismatches
            .push("big-algebra ring unit is not the vacuum of I".into());
    }
    if !same_set(sub_data.labels(), &table.sub) {
        report
            .label_mismatches
            .push("subalgebra modular data labels differ from J".into());
    }

    let sub_set: BTreeSet<&str> = table.sub.iter().map(String::as_str).collect();
    for (i, row) in table.big.iter().zip(&table.rows) {
        if row.is_empty() {
            report.empty_rows.push(i.clone());
        }
        let mut seen = BTreeSet::new();
        for (a, _) in row {
            if !sub_set.contains(a.as_str()) {
                report.unknown_sub_labels.push((i.clone(), a.clone()));
            }
            if !seen.insert(a.as_str()) {
                report.repeated_sub_labels.push((i.clone(), a.clone()));
            }
        }
        let missing: Vec<String> = table
            .sub
            .iter()
            .filter(|a| !seen.contains(a.as_str()))
            .cloned()
            .collect();
        if i == table.big_vacuum() {
            report.j1_equals_j = missing.is_empty();
        } else if !missing.is_empty() {
            report.incomplete_rows.push((i.clone(), missing));
        }
    }
    report.vacuum_pair_present = table.rows[0].iter().any(|(a, _)| a == table.sub_vacuum());

    let dim_sum = |row: &[(String, String)]| -> f64 {
        row.iter()
            .filter_map(|(a, _)| sub_data.qdim_of(a).ok())
            .map(|d| d * d)
            .sum()
    };
    let vacuum_sum = dim_sum(&table.rows[0]);
    for (i, row) in table.big.iter().zip(&table.rows) {
        let row_sum = dim_sum(row);
        report.dimension_checks.push(DimensionCheck {
            module: i.clone(),
            vacuum_sum,
            row_sum,
            inequality_holds: vacuum_sum <= row_sum + DIMENSION_TOL,
            equality_holds: (vacuum_sum - row_sum).abs() <= DIMENSION_TOL,
        });
    }

    let labels = table.commutant_labels();
    report.commutant_count = labels.len();
    let mut seen = BTreeSet::new();
    let mut dups = BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            dups.insert(l.to_string());
        }
    }
    report.duplicate_commutant_labels = dups.into_iter().collect();
    report
}

/// The commutant fusion ring `N_{(i,α),(j,β)}^{(k,γ)} = N_{ij}^k N_{αβ}^γ`,
/// labelled by the table's commutant labels in row-major order (`I` outer,
/// `J` inner).
pub fn derive_commutant_ring(
    table: &BranchingTable,
    big_ring: &FusionRing,
    sub_ring: &FusionRing,
) -> Result<FusionRing> {
    if !same_set(big_ring.labels(), &table.big) || big_ring.unit_label() != table.big_vacuum() {
        return Err(Error::Precondition("big-algebra ring does not match I".into()));
    }
    if !same_set(sub_ring.labels(), &table.sub) || sub_ring.unit_label() != table.sub_vacuum() {
        return Err(Error::Precondition("subalgebra ring does not match J".into()));
    }
    for (name, ring) in [("big-algebra", big_ring), ("subalgebra", sub_ring)] {
        let report = check_axioms(ring);
        if !report.is_empty() {
            return Err(Error::Precondition(format!(
                "{name} ring fails the ring axioms: {}",
                report.violations[0]
            )));
        }
    }

    let mut grid: Vec<Vec<String>> = Vec::with_capacity(table.big.len());
    for i in &table.big {
        let mut row = Vec::with_capacity(table.sub.len());
        for a in &table.sub {
            match table.commutant_label(i, a) {
                Some(l) => row.push(l.to_string()),
                None if i == table.big_vacuum() => {
                    return Err(Error::Precondition(format!("J_1 != J: vacuum row lacks {a}")))
                }
                None => return Err(Error::Precondition(format!("J_{i} != J: row lacks {a}"))),
            }
        }
        if table.row(i)?.len() != table.sub.len() {
            return Err(Error::Precondition(format!("row {i} is not a copy of J")));
        }
        grid.push(row);
    }

    let labels: Vec<String> = grid.iter().flatten().cloned().collect();
    let mut ring = FusionRing::new(labels, &grid[0][0])?;
    let nj = table.sub.len();
    let big_idx: Vec<usize> = table.big.iter().map(|l| big_ring.index_of(l)).collect::<Result<_>>()?;
    let sub_idx: Vec<usize> = table.sub.iter().map(|l| sub_ring.index_of(l)).collect::<Result<_>>()?;
    let big_pos: BTreeMap<usize, usize> = big_idx.iter().enumerate().map(|(p, &x)| (x, p)).collect();
    let sub_pos: BTreeMap<usize, usize> = sub_idx.iter().enumerate().map(|(p, &x)| (x, p)).collect();

    for (i, &bi) in big_idx.iter().enumerate() {
        for (j, &bj) in big_idx.iter().enumerate() {
            let big_prod = big_ring.product(bi, bj);
            for (a, &sa) in sub_idx.iter().enumerate() {
                for (b, &sb) in sub_idx.iter().enumerate() {
                    let sub_prod = sub_ring.product(sa, sb);
                    for &(bk, nk) in &big_prod {
                        for &(sg, ng) in &sub_prod {
                            let k = big_pos[&bk];
                            let g = sub_pos[&sg];
                            ring.put(i * nj + a, j * nj + b, k * nj + g, nk * ng);
                        }
                    }
                }
            }
        }
    }
    let report = check_axioms(&ring);
    if let Some(v) = report.violations.first() {
        return Err(Error::OracleMismatch(format!(
            "derived ring fails the ring axioms: {v}"
        )));
    }
    Ok(ring)
}

/// `(i, α, actual product)` for a pair where `(i,1) ⊠ (1,α) != (i,α)`.
pub type ProductFailure = (String, String, Vec<(String, u64)>);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProductStructureReport {
    pub checked: usize,
    pub failures: Vec<ProductFailure>,
}

impl ProductStructureReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// Checks `(i, vacuum) ⊠ (vacuum, α) = (i, α)` with multiplicity one and no
/// other summand, for every `i ∈ I` and `α ∈ J`.
pub fn check_product_structure(table: &BranchingTable, derived: &FusionRing) -> ProductStructureReport {
    let mut report = ProductStructureReport::default();
    for i in &table.big {
        for a in &table.sub {
            report.checked += 1;
            let (Some(left), Some(right), Some(target)) = (
                table.commutant_label(i, table.sub_vacuum()),
                table.commutant_label(table.big_vacuum(), a),
                table.commutant_label(i, a),
            ) else {
                report.failures.push((i.clone(), a.clone(), Vec::new()));
                continue;
            };
            let got = derived.fuse(&[left], &[right]).unwrap_or_default();
            if got != [(target.to_string(), 1)] {
                report.failures.push((i.clone(), a.clone(), got));
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionReport {
    /// `α ↦ (vacuum, α)` is a based-ring embedding of the subalgebra ring.
    pub sub_ring_embeds: bool,
    /// `i ↦ (i, vacuum)` is a based-ring embedding of the big-algebra ring.
    pub big_ring_embeds: bool,
}

impl RestrictionReport {
    pub fn passes(&self) -> bool {
        self.sub_ring_embeds && self.big_ring_embeds
    }
}

pub fn check_restrictions(
    table: &BranchingTable,
    derived: &FusionRing,
    big_ring: &FusionRing,
    sub_ring: &FusionRing,
) -> RestrictionReport {
    let map_sub: Option<Vec<usize>> = sub_ring
        .labels()
        .iter()
        .map(|a| {
            table
                .commutant_label(table.big_vacuum(), a)
                .and_then(|l| derived.index_of(l).ok())
        })
        .collect();
    let map_big: Option<Vec<usize>> = big_ring
        .labels()
        .iter()
        .map(|i| {
            table
                .commutant_label(i, table.sub_vacuum())
                .and_then(|l| derived.index_of(l).ok())
        })
        .collect();
    RestrictionReport {
        sub_ring_embeds: map_sub.is_some_and(|m| sub_ring.embeds_into(derived, &m)),
        big_ring_embeds: map_big.is_some_and(|m| big_ring.embeds_into(derived, &m)),
    }
}

/// `dim (i,α) = dim_big(i) · dim_sub(α)` in the label order of `derived`.
pub fn derived_dimensions(
    table: &BranchingTable,
    derived: &FusionRing,
    big_ring: &FusionRing,
    big_dims: &[f64],
    sub_labels: &[String],
    sub_dims: &[f64],
) -> Result<Vec<f64>> {
    let mut dims = vec![f64::NAN; derived.rank()];
    for i in &table.big {
        let di = big_dims[big_ring.index_of(i)?];
        for (a, l) in table.row(i)? {
            let pos = sub_labels
                .iter()
                .position(|s| s == a)
                .ok_or_else(|| Error::UnknownLabel(a.clone()))?;
            dims[derived.index_of(l)?] = di * sub_dims[pos];
        }
    }
    Ok(dims)
}

/// Maximal violation of `d_x d_y = Σ_z N_{xy}^z d_z` for the product
/// dimensions.
pub fn dimension_homomorphism_error(ring: &FusionRing, dims: &[f64]) -> f64 {
    dimension_homomorphism_defect(ring, dims).0
}

/// Labels whose lowest conformal weight is not strictly positive, other than
/// `vacuum`, plus the vacuum itself when its weight is not zero.
pub fn weight_positivity_violations(weights: &[(String, BigRational)], vacuum: &str) -> Vec<String> {
    weights
        .iter()
        .filter(|(l, h)| if l == vacuum { !h.is_zero() } else { !h.is_positive() })
        .map(|(l, _)| l.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::minimal_model_fusion;
    use crate::kac::MinimalModel;
    use crate::modular::s_matrix;

    fn trivial_ring(label: &str) -> FusionRing {
        FusionRing::new([label], label).unwrap().with_constant(0, 0, 0, 1)
    }

    fn ising_table() -> (BranchingTable, FusionRing, FusionRing, ModularData) {
        // Big algebra: the two-label Z2 ring {e, g}; subalgebra: Ising.
        let big = FusionRing::new(["e", "g"], "e")
            .unwrap()
            .with_constant(0, 0, 0, 1)
            .with_constant(0, 1, 1, 1)
            .with_constant(1, 0, 1, 1)
            .with_constant(1, 1, 0, 1);
        let model = MinimalModel::new(1).unwrap();
        let sub = minimal_model_fusion(model);
        let data = s_matrix(model).unwrap();
        let j: Vec<String> = vec!["1:1.1".into(), "1:1.3".into(), "1:1.2".into()];
        let rows = ["e", "g"]
            .iter()
            .map(|i| j.iter().map(|a| (a.clone(), format!("{i}|{a}"))).collect())
            .collect();
        let table = BranchingTable::new(vec!["e".into(), "g".into()], j, rows).unwrap();
        (table, big, sub, data)
    }

    #[test]
    fn trivial_inputs_give_trivial_ring() {
        let table =
            BranchingTable::new(vec!["V".into()], vec!["U".into()], vec![vec![("U".into(), "C".into())]]).unwrap();
        let ring = derive_commutant_ring(&table, &trivial_ring("V"), &trivial_ring("U")).unwrap();
        assert_eq!(ring, trivial_ring("C"));
    }

    #[test]
    fn product_ring_is_consistent() {
        let (table, big, sub, data) = ising_table();
        let report = validate(&table, &big, &data);
        assert!(report.passes(), "{:?}", report.findings());
        let ring = derive_commutant_ring(&table, &big, &sub).unwrap();
        assert_eq!(ring.rank(), 6);
        assert!(check_axioms(&ring).is_empty());
        assert!(check_product_structure(&table, &ring).passes());
        assert!(check_restrictions(&table, &ring, &big, &sub).passes());
        let dims = derived_dimensions(
            &table,
            &ring,
            &big,
            &big.frobenius_perron_dimensions(),
            data.labels(),
            &data.qdims(),
        )
        .unwrap();
        assert!(dimension_homomorphism_error(&ring, &dims) < DIMENSION_TOL);
        assert_eq!(ring.n("g|1:1.2", "g|1:1.2", "e|1:1.3").unwrap(), 1);
    }

    #[test]
    fn missing_entry_is_flagged() {
        let (table, big, sub, data) = ising_table();
        let broken = table.without_entry("g", "1:1.2").unwrap();
        let report = validate(&broken, &big, &data);
        assert!(!report.passes());
        assert!(report.j1_equals_j);
        assert_eq!(
            report.incomplete_rows,
            vec![("g".to_string(), vec!["1:1.2".to_string()])]
        );
        assert!(!report.dimension_checks[1].inequality_holds);
        assert!(matches!(
            derive_commutant_ring(&broken, &big, &sub),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn vacuum_row_hypothesis() {
        let (table, big, sub, data) = ising_table();
        let broken = table.without_entry("e", "1:1.3").unwrap();
        let report = validate(&broken, &big, &data);
        assert!(!report.j1_equals_j);
        assert!(matches!(
            derive_commutant_ring(&broken, &big, &sub),
            Err(Error::Precondition(_))
        ));
        let empty = table.without_row("g").unwrap();
        assert_eq!(validate(&empty, &big, &data).empty_rows, vec!["g".to_string()]);
    }

    #[test]
    fn duplicate_commutant_labels_flagged() {
        let (table, big, _, data) = ising_table();
        let mut json = table.to_json();
        json.rows.get_mut("g").unwrap()[0].1 = "e|1:1.1".into();
        let t = BranchingTable::from_json(&json).unwrap();
        let report = validate(&t, &big, &data);
        assert_eq!(report.duplicate_commutant_labels, vec!["e|1:1.1".to_string()]);
    }

    #[test]
    fn corrupted_input_ring_rejected() {
        let (table, big, sub, _) = ising_table();
        let bad = big.with_constant(0, 1, 0, 1);
        assert!(matches!(
            derive_commutant_ring(&table, &bad, &sub),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let (table, ..) = ising_table();
        let text = serde_json::to_string(&table.to_json()).unwrap();
        assert_eq!(BranchingTable::from_json_str(&text).unwrap(), table);
        assert!(BranchingTable::from_json_str(r#"{"I":["a"],"J":["b"],"rows":{"z":[]}}"#).is_err());
    }

    #[test]
    fn positivity() {
        let w = vec![
            ("v".to_string(), BigRational::zero()),
            ("x".to_string(), crate::ratio::parse("1/11").unwrap()),
            ("y".to_string(), BigRational::zero()),
        ];
        assert_eq!(weight_positivity_violations(&w, "v"), vec!["y".to_string()]);
    }
}
