//! WebAssembly bindings behind `www/index.html`: a Kac table, single fusion
//! products, and character coefficients for plotting.
//!
//! Every export returns a JSON string. The `*_json` functions hold the logic
//! and run natively; the `#[wasm_bindgen]` wrappers only convert errors.

use coset_fusion::characters::{integer_step_coefficients, minimal_character};
use coset_fusion::fusion::minimal_model_fusion;
use coset_fusion::kac::{MinimalModel, PrimaryField};
use coset_fusion::modular::s_matrix;
use coset_fusion::qseries::Exponent;
use coset_fusion::ratio;
use coset_fusion::threec::ThreeCDataset;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest model offered by the page.
pub const MAX_M: u32 = 30;
/// Deepest character expansion offered by the page.
pub const MAX_ORDER: u32 = 200;

fn model(m: u32) -> Result<MinimalModel, String> {
    if m > MAX_M {
        return Err(format!("m must be at most {MAX_M}"));
    }
    MinimalModel::new(m).map_err(|e| e.to_string())
}

pub fn kac_table_json(m: u32) -> Result<String, String> {
    let md = model(m)?;
    let data = s_matrix(md).map_err(|e| e.to_string())?;
    let rows: Vec<_> = data
        .fields()
        .iter()
        .zip(data.qdims())
        .map(|(f, d)| {
            json!({
                "label": f.short_label(),
                "h": ratio::format(&f.conformal_weight()),
                "qdim": d,
            })
        })
        .collect();
    Ok(json!({ "model": md.to_string(), "c": ratio::format(&md.central_charge()), "rows": rows }).to_string())
}

/// `a ⊠ b` in model `m` (labels `r.s`), or in the 3C commutant ring when
/// `m == 0` (labels `M_{i,l}`).
pub fn fuse_json(m: u32, a: &str, b: &str) -> Result<String, String> {
    let (ring, a, b) = if m == 0 {
        let ring = ThreeCDataset::bundled()
            .and_then(|d| d.m_ring())
            .map_err(|e| e.to_string())?;
        (ring, a.trim().to_string(), b.trim().to_string())
    } else {
        let md = model(m)?;
        let parse = |s: &str| {
            PrimaryField::parse_short(md, s)
                .map(|f| f.to_string())
                .map_err(|e| e.to_string())
        };
        (minimal_model_fusion(md), parse(a)?, parse(b)?)
    };
    let product = ring.fuse(&[&a], &[&b]).map_err(|e| e.to_string())?;
    let terms: Vec<_> = product.iter().map(|(l, n)| json!({ "label": l, "n": n })).collect();
    Ok(json!({ "a": a, "b": b, "product": terms }).to_string())
}

/// Coefficients of `ch L(c_m, h_{r,s})` at the leading exponent and the next
/// `order` integer steps.
pub fn character_json(m: u32, label: &str, order: u32) -> Result<String, String> {
    if order > MAX_ORDER {
        return Err(format!("order must be at most {MAX_ORDER}"));
    }
    let md = model(m)?;
    let f = PrimaryField::parse_short(md, label).map_err(|e| e.to_string())?;
    let lead = ratio::to_small(&f.leading_exponent()).map_err(|e| e.to_string())?;
    let series = minimal_character(&f, Exponent::from_integer(i64::from(order) + 1)).map_err(|e| e.to_string())?;
    let coeffs: Vec<String> = integer_step_coefficients(&series, lead)
        .map_err(|e| e.to_string())?
        .iter()
        .map(ToString::to_string)
        .collect();
    Ok(json!({
        "field": f.to_string(),
        "h": ratio::format(&f.conformal_weight()),
        "leading": ratio::format_small(lead),
        "coefficients": coeffs,
    })
    .to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn kac_table(m: u32) -> Result<String, JsValue> {
    js(kac_table_json(m))
}

#[wasm_bindgen]
pub fn fuse(m: u32, a: &str, b: &str) -> Result<String, JsValue> {
    js(fuse_json(m, a, b))
}

#[wasm_bindgen]
pub fn character(m: u32, label: &str, order: u32) -> Result<String, JsValue> {
    js(character_json(m, label, order))
}
