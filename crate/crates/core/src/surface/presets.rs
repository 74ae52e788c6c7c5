//! Explicit matrix realizations of the test surfaces.

use super::SurfaceModel;
use crate::error::{Error, Result};
use crate::hypalg::Mat2;
use crate::words::Word;

pub const PRESET_NAMES: [&str; 4] = ["one-holed-torus", "punctured-torus", "pants", "cusped-pants"];

fn word(s: &str) -> Word {
    Word::parse(s).expect("literal word")
}

/// Pair `X = [[x, 1], [−1, 0]]`, `Y = [[0, s], [−1/s, y]]` with traces
/// `x`, `y` and `tr(XY) = −(s + 1/s)`.
fn trace_pair(x: f64, y: f64, s: f64) -> Result<(Mat2, Mat2)> {
    Ok((Mat2::new(x, 1.0, -1.0, 0.0)?, Mat2::new(0.0, s, -1.0 / s, y)?))
}

fn commutator_trace(x: f64, y: f64, z: f64) -> f64 {
    x * x + y * y + z * z - x * y * z - 2.0
}

fn torus_pair(x: f64, y: f64, z: f64) -> Result<(Mat2, Mat2)> {
    if !(x > 2.0 && y > 2.0 && z > 2.0) {
        return Err(Error::InfeasibleTraces(format!("traces ({x}, {y}, {z}) must exceed 2")));
    }
    // tr(AB) = +z needs s + 1/s = −z
    let s = -(z + (z * z - 4.0).sqrt()) / 2.0;
    trace_pair(x, y, s)
}

/// One-holed torus with `tr A`, `tr B`, `tr AB` prescribed; the boundary is
/// the commutator `abAB`.
pub fn build_one_holed_torus(tr_a: f64, tr_b: f64, tr_ab: f64) -> Result<SurfaceModel> {
    let tau = commutator_trace(tr_a, tr_b, tr_ab);
    if tau.abs() <= 2.0 {
        return Err(Error::NotBoundarySurface(tau));
    }
    if tau > 2.0 {
        return Err(Error::TraceCondition(format!(
            "commutator trace {tau} is positive; a one-holed torus needs τ < −2"
        )));
    }
    let (a, b) = torus_pair(tr_a, tr_b, tr_ab)?;
    SurfaceModel::from_parts("one-holed-torus", 1, vec![a, b], vec![word("abAB")], vec![], false)
}

/// The modular torus: `A = [[1,1],[1,2]]`, `B = [[1,−1],[−1,2]]`, cusp `abAB`.
pub fn build_punctured_torus() -> Result<SurfaceModel> {
    let a = Mat2::new(1.0, 1.0, 1.0, 2.0)?;
    let b = Mat2::new(1.0, -1.0, -1.0, 2.0)?;
    SurfaceModel::from_parts("punctured-torus", 1, vec![a, b], vec![], vec![word("abAB")], false)
}

/// Punctured torus from a Markov-type trace triple `x² + y² + z² = xyz`.
pub fn build_punctured_torus_from_traces(x: f64, y: f64, z: f64) -> Result<SurfaceModel> {
    let tau = commutator_trace(x, y, z);
    if (tau + 2.0).abs() > 1e-9 {
        return Err(Error::TraceCondition(format!("commutator trace {tau} ≠ −2")));
    }
    let (a, b) = torus_pair(x, y, z)?;
    SurfaceModel::from_parts("punctured-torus", 1, vec![a, b], vec![], vec![word("abAB")], false)
}

/// Pair of pants with cuffs `a`, `b`, `AB`. A `None` length makes that
/// end a cusp (the third end must stay a boundary component here).
pub fn build_pants(cuffs: [Option<f64>; 3]) -> Result<SurfaceModel> {
    let trace = |c: Option<f64>| -> Result<f64> {
        match c {
            None => Ok(2.0),
            Some(l) if l > 0.0 && l.is_finite() => Ok(2.0 * (l / 2.0).cosh()),
            Some(l) => Err(Error::InfeasibleTraces(format!("cuff length {l}"))),
        }
    };
    let (x, y) = (trace(cuffs[0])?, trace(cuffs[1])?);
    let z = match cuffs[2] {
        Some(_) => trace(cuffs[2])?,
        None => {
            return Err(Error::InfeasibleTraces("the third end must be a boundary".into()));
        }
    };
    // tr(X0 X1) = −z with s > 0
    let s = (z + (z * z - 4.0).sqrt()) / 2.0;
    let (x0, x1) = trace_pair(x, y, s)?;
    let mut boundary = Vec::new();
    let mut cusps = Vec::new();
    for (c, w) in cuffs.iter().zip(["a", "b", "AB"]) {
        if c.is_some() {
            boundary.push(word(w));
        } else {
            cusps.push(word(w));
        }
    }
    let name = if cusps.is_empty() { "pants" } else { "cusped-pants" };
    SurfaceModel::from_parts(name, 0, vec![x0, x1], boundary, cusps, true)
}

/// Two cusps `a`, `b` and one boundary `AB` of the given length.
pub fn build_cusped_pants(boundary_length: f64) -> Result<SurfaceModel> {
    build_pants([None, None, Some(boundary_length)])
}

pub fn preset(name: &str) -> Result<SurfaceModel> {
    match name {
        "one-holed-torus" => build_one_holed_torus(4.0, 4.0, 4.0),
        "punctured-torus" => build_punctured_torus(),
        "pants" => build_pants([Some(2.0), Some(2.0), Some(2.0)]),
        "cusped-pants" => build_cusped_pants(2.0),
        other => Err(Error::Config(format!(
            "unknown preset {other:?} (expected one of {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}
