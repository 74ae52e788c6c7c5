//! JSON documents for surface models.
//!
//! Matrices are written row-major with 16 significant digits; reading a
//! document and writing it again reproduces it byte for byte.

use serde_json::{json, Value};

use super::SurfaceModel;
use crate::error::{Error, Result};
use crate::hypalg::Mat2;
use crate::words::Word;

/// Rounds to 16 significant digits; the shortest representation of the
/// result is what gets printed.
fn sig16(x: f64) -> f64 {
    format!("{x:.15e}").parse().expect("formatted float")
}

pub fn surface_to_json(s: &SurfaceModel) -> String {
    let (g, n, p) = s.signature();
    let mats: Vec<Value> = s
        .generators()
        .iter()
        .map(|m| json!(m.entries().map(sig16)))
        .collect();
    let words = |ws: &[Word]| -> Vec<String> { ws.iter().map(|w| w.to_string()).collect() };
    let doc = json!({
        "name": s.name(),
        "signature": {"g": g, "n": n, "p": p},
        "generators": mats,
        "boundary_words": words(s.boundary_words()),
        "cusp_words": words(s.cusp_words()),
        "is_pants_oracle": s.is_pants_oracle(),
    });
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn surface_from_json(text: &str) -> Result<SurfaceModel> {
    let bad = |m: &str| Error::BadSurfaceDocument(m.to_string());
    let doc: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    let name = doc["name"].as_str().ok_or_else(|| bad("missing name"))?;
    let sig = &doc["signature"];
    let genus = sig["g"].as_u64().ok_or_else(|| bad("missing signature.g"))? as usize;
    let mut generators = Vec::new();
    for m in doc["generators"].as_array().ok_or_else(|| bad("missing generators"))? {
        let e: Vec<f64> = m
            .as_array()
            .filter(|r| r.len() == 4)
            .ok_or_else(|| bad("generator must have 4 entries"))?
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| bad("non-numeric matrix entry")))
            .collect::<Result<_>>()?;
        generators.push(Mat2::from_unit_entries(e[0], e[1], e[2], e[3])?);
    }
    let words = |key: &str| -> Result<Vec<Word>> {
        doc[key]
            .as_array()
            .ok_or_else(|| bad(&format!("missing {key}")))?
            .iter()
            .map(|w| {
                let s = w.as_str().ok_or_else(|| bad("words must be strings"))?;
                Word::parse(s)
            })
            .collect()
    };
    let (boundary, cusps) = (words("boundary_words")?, words("cusp_words")?);
    let n = sig["n"].as_u64().ok_or_else(|| bad("missing signature.n"))? as usize;
    let p = sig["p"].as_u64().ok_or_else(|| bad("missing signature.p"))? as usize;
    if n != boundary.len() || p != cusps.len() {
        return Err(bad("signature does not match the word lists"));
    }
    let oracle = doc["is_pants_oracle"].as_bool().unwrap_or(false);
    SurfaceModel::from_parts(name, genus, generators, boundary, cusps, oracle)
}
