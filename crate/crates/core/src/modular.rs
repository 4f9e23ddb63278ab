//! Minimal-model S-matrices, quantum dimensions and the Verlinde formula.
//!
//! The S-matrix is evaluated in double precision on canonical Kac labels:
//!
//! `S_{(r,s),(ρ,σ)} = 2 sqrt(2/(pq)) (-1)^{1 + sρ + rσ} sin(π q r ρ / p) sin(π p s σ / q)`
//!
//! The sign convention is pinned by the invariants checked in [`s_matrix`]:
//! symmetric, orthogonal, and a strictly positive vacuum row.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fusion::FusionRing;
use crate::kac::{MinimalModel, PrimaryField};

/// Tolerance for orthogonality, symmetry and dimension bounds.
pub const STRUCTURE_TOL: f64 = 1e-9;
/// Maximal distance of a pre-rounding Verlinde value from an integer.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct ModularData {
    model: MinimalModel,
    fields: Vec<PrimaryField>,
    labels: Vec<String>,
    s: Vec<f64>,
    vacuum: usize,
}

impl ModularData {
    pub fn model(&self) -> MinimalModel {
        self.model
    }

    pub fn fields(&self) -> &[PrimaryField] {
        &self.fields
    }

    /// Serialized labels, in the same order as [`crate::fusion::minimal_model_fusion`].
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.fields.len()
    }

    pub fn s(&self, a: usize, b: usize) -> f64 {
        self.s[a * self.rank() + b]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// `S_{1a} / S_{11}`.
    pub fn qdim(&self, a: usize) -> f64 {
        self.s(self.vacuum, a) / self.s(self.vacuum, self.vacuum)
    }

    pub fn qdims(&self) -> Vec<f64> {
        (0..self.rank()).map(|a| self.qdim(a)).collect()
    }

    pub fn qdim_of(&self, label: &str) -> Result<f64> {
        Ok(self.qdim(self.index_of(label)?))
    }

    /// Largest entry of `|S S^T - 1|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.rank();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = (0..n).map(|x| self.s(a, x) * self.s(b, x)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Largest entry of `|S^2 - 1|`; charge conjugation is trivial here.
    pub fn square_defect(&self) -> f64 {
        let n = self.rank();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let v: f64 = (0..n).map(|x| self.s(a, x) * self.s(x, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }

    fn symmetry_defect(&self) -> f64 {
        let n = self.rank();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..a {
                worst = worst.max((self.s(a, b) - self.s(b, a)).abs());
            }
        }
        worst
    }

    /// Pre-rounding Verlinde value `sum_x S_ax S_bx S_cx / S_1x`.
    pub fn verlinde_value(&self, a: usize, b: usize, c: usize) -> f64 {
        (0..self.rank())
            .map(|x| self.s(a, x) * self.s(b, x) * self.s(c, x) / self.s(self.vacuum, x))
            .sum()
    }
}

fn raw_entry(model: MinimalModel, (r, s): (i64, i64), (rho, sigma): (i64, i64)) -> f64 {
    let (p, q) = (model.p(), model.q());
    let (pf, qf) = (p as f64, q as f64);
    let sign = if (1 + s * rho + r * sigma) % 2 == 0 { 1.0 } else { -1.0 };
    // Reduce the sine arguments mod 2p and 2q before converting to floats.
    let a = ((q * r * rho) % (2 * p)) as f64;
    let b = ((p * s * sigma) % (2 * q)) as f64;
    2.0 * (2.0 / (pf * qf)).sqrt() * sign * (PI * a / pf).sin() * (PI * b / qf).sin()
}

/// Builds the modular data of `model` and checks its invariants.
pub fn s_matrix(model: MinimalModel) -> Result<ModularData> {
    let fields = model.primaries();
    let n = fields.len();
    let mut s = vec![0.0; n * n];
    for (a, fa) in fields.iter().enumerate() {
        for (b, fb) in fields.iter().enumerate() {
            s[a * n + b] = raw_entry(model, (fa.r(), fa.s()), (fb.r(), fb.s()));
        }
    }
    let vacuum = fields
        .iter()
        .position(PrimaryField::is_vacuum)
        .expect("vacuum is enumerated");
    let data = ModularData {
        model,
        labels: fields.iter().map(ToString::to_string).collect(),
        fields,
        s,
        vacuum,
    };

    let sym = data.symmetry_defect();
    if sym > STRUCTURE_TOL {
        return Err(Error::ModularInvariant(format!("{model}: S not symmetric ({sym:e})")));
    }
    let orth = data.orthogonality_defect();
    if orth > STRUCTURE_TOL {
        return Err(Error::ModularInvariant(format!("{model}: S not orthogonal ({orth:e})")));
    }
    for a in 0..n {
        if data.s(vacuum, a) <= 0.0 {
            return Err(Error::ModularInvariant(format!(
                "{model}: vacuum row entry for {} is not positive",
                data.labels[a]
            )));
        }
        if data.qdim(a) < 1.0 - STRUCTURE_TOL {
            return Err(Error::ModularInvariant(format!(
                "{model}: quantum dimension of {} below 1",
                data.labels[a]
            )));
        }
    }
    Ok(data)
}

/// The fusion ring given by the Verlinde formula, with every value checked to
/// lie within [`INTEGRALITY_TOL`] of a non-negative integer.
pub fn verlinde_fusion(data: &ModularData) -> Result<FusionRing> {
    let n = data.rank();
    let mut ring = FusionRing::new(data.labels.iter().cloned(), &data.labels[data.vacuum])?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let value = data.verlinde_value(a, b, c);
                let rounded = value.round();
                if (value - rounded).abs() > INTEGRALITY_TOL || rounded < 0.0 {
                    return Err(Error::NonIntegralVerlinde {
                        a: data.labels[a].clone(),
                        b: data.labels[b].clone(),
                        c: data.labels[c].clone(),
                        value,
                        tol: INTEGRALITY_TOL,
                    });
                }
                ring.put(a, b, c, rounded as u64);
            }
        }
    }
    Ok(ring)
}

/// `sum_{β in subset} qdim(β)^2`.
pub fn total_dim_squared(data: &ModularData, subset: &[&str]) -> Result<f64> {
    subset.iter().map(|l| data.qdim_of(l).map(|d| d * d)).sum()
}
