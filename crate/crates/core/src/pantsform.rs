//! Closed-form trigonometry linking arcs to the curves they span.
//!
//! For a pair of pants with two cuffs of lengths `l_i`, `l_j` and seam of
//! length `ℓ`, the third cuff `γ` satisfies
//! `cosh(ℓ(γ)/2) = A cosh ℓ − B` with `A = sinh(l_i/2) sinh(l_j/2)` and
//! `B = cosh(l_i/2) cosh(l_j/2)`. For a pants with two cusps and horocycles
//! of length `t`, the cusp-to-cusp arc of `t`-length `ℓ` gives
//! `ℓ(γ) = 4 acosh((t/2) e^{ℓ/2})`.

use crate::error::{Error, Result};
use crate::hypalg::acosh_guarded;

/// Safety factor applied to the numerical supremum of the error function.
pub const C_SAFETY: f64 = 1.001;

/// Two cuff lengths and the derived products `A` and `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PantsDims {
    pub cuff_i: f64,
    pub cuff_j: f64,
    a: f64,
    b: f64,
}

impl PantsDims {
    pub fn new(cuff_i: f64, cuff_j: f64) -> Result<Self> {
        if !(cuff_i > 0.0 && cuff_j > 0.0 && cuff_i.is_finite() && cuff_j.is_finite()) {
            return Err(Error::BadPantsDims(format!("cuffs ({cuff_i}, {cuff_j}) must be positive")));
        }
        let a = (cuff_i / 2.0).sinh() * (cuff_j / 2.0).sinh();
        let b = (cuff_i / 2.0).cosh() * (cuff_j / 2.0).cosh();
        Ok(PantsDims { cuff_i, cuff_j, a, b })
    }

    /// Builds dimensions from `A` and `B` directly (only the products enter
    /// the identities).
    pub fn from_products(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 1.0 && b > a) {
            return Err(Error::BadPantsDims(format!("A = {a}, B = {b}")));
        }
        Ok(PantsDims {
            cuff_i: f64::NAN,
            cuff_j: f64::NAN,
            a,
            b,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

pub fn min_arc_len(p: &PantsDims) -> f64 {
    acosh_guarded((p.b + 1.0) / p.a)
}

fn check_domain(p: &PantsDims, arc_len: f64) -> Result<()> {
    let m = min_arc_len(p);
    // tolerate rounding right at the endpoint
    if arc_len < m - 1e-12 * m.max(1.0) {
        return Err(Error::BelowMinimalArcLength { min: m });
    }
    Ok(())
}

pub fn curve_len_from_arc(p: &PantsDims, arc_len: f64) -> Result<f64> {
    check_domain(p, arc_len)?;
    Ok(2.0 * acosh_guarded(p.a * arc_len.cosh() - p.b))
}

pub fn arc_len_from_curve(p: &PantsDims, curve_len: f64) -> Result<f64> {
    if !(curve_len >= 0.0) {
        return Err(Error::BadPantsDims(format!("curve length {curve_len} is negative")));
    }
    Ok(acosh_guarded(((curve_len / 2.0).cosh() + p.b) / p.a))
}

/// `E(ℓ) = 2 acosh(A cosh ℓ − B) − 2ℓ`, evaluated without overflow for
/// large `ℓ`.
pub fn error_e(p: &PantsDims, l: f64) -> Result<f64> {
    check_domain(p, l)?;
    let x = p.a * l.cosh() - p.b;
    if l < 30.0 {
        return Ok(2.0 * acosh_guarded(x) - 2.0 * l);
    }
    // acosh(x) = ln(2x) + ln((1 + sqrt(1 − 1/x²))/2) and 2x = k e^ℓ
    let k = p.a * (1.0 + (-2.0 * l).exp()) - 2.0 * p.b * (-l).exp();
    let corr = ((1.0 + (1.0 - 1.0 / (x * x)).sqrt()) / 2.0).ln();
    Ok(2.0 * (k.ln() + corr))
}

pub fn error_e_limit(p: &PantsDims) -> f64 {
    2.0 * p.a.ln()
}

/// Sup of `|E|` over its whole domain for one pair of cuffs.
///
/// `E` increases strictly from `E(m) = −2m` towards `2 ln A`, so the
/// supremum of `|E|` is the larger endpoint value. A dense grid near `m`
/// double-checks the monotonicity numerically.
pub fn sup_abs_error(p: &PantsDims) -> f64 {
    let m = min_arc_len(p);
    let mut sup = (2.0 * m).max(error_e_limit(p).abs());
    for k in 0..=10_000 {
        let l = m + 40.0 * (k as f64 / 10_000.0).powi(2);
        if let Ok(e) = error_e(p, l) {
            sup = sup.max(e.abs());
        }
    }
    sup
}

/// Constant bounding `|ℓ(γ_α) − 2ℓ(α)|` over all compact arcs of a surface
/// with the given boundary lengths.
pub fn bound_c_of_x(cuff_lengths: &[f64]) -> Result<f64> {
    if cuff_lengths.is_empty() {
        return Err(Error::EmptyCuffList);
    }
    let mut c: f64 = 0.0;
    for (i, &li) in cuff_lengths.iter().enumerate() {
        for &lj in &cuff_lengths[i..] {
            c = c.max(sup_abs_error(&PantsDims::new(li, lj)?));
        }
    }
    Ok(c * C_SAFETY)
}

/// Cusp area parameter `t ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspQuadDims {
    t: f64,
}

impl CuspQuadDims {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::BadArea(t));
        }
        Ok(CuspQuadDims { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `m_t = 2 ln(2/t)`, the least possible `t`-length.
    pub fn min_t_len(&self) -> f64 {
        2.0 * (2.0 / self.t).ln()
    }
}

pub fn cusp_curve_from_t_len(q: &CuspQuadDims, t_len: f64) -> Result<f64> {
    let m = q.min_t_len();
    if t_len < m - 1e-12 * m.max(1.0) {
        return Err(Error::BelowMinimalTLength { min: m });
    }
    Ok(4.0 * acosh_guarded(q.t / 2.0 * (t_len / 2.0).exp()))
}

pub fn cusp_t_len_from_curve(q: &CuspQuadDims, curve_len: f64) -> Result<f64> {
    if !(curve_len >= 0.0) {
        return Err(Error::BadPantsDims(format!("curve length {curve_len} is negative")));
    }
    Ok(2.0 * ((curve_len / 4.0).cosh() * 2.0 / q.t).ln())
}

/// `E_t(ℓ) = 4 acosh((t/2) e^{ℓ/2}) − 2ℓ`; tends to `4 ln t`.
pub fn error_e_t(q: &CuspQuadDims, l: f64) -> Result<f64> {
    let m = q.min_t_len();
    if l < m - 1e-12 * m.max(1.0) {
        return Err(Error::BelowMinimalTLength { min: m });
    }
    // acosh(y) − ln(2y) = ln((1 + sqrt(1 − 1/y²))/2), with y = (t/2)e^{ℓ/2}
    let y = q.t / 2.0 * (l / 2.0).exp();
    if y < 1e8 {
        return Ok(4.0 * acosh_guarded(y) - 2.0 * l);
    }
    let corr = ((1.0 + (1.0 - 1.0 / (y * y)).sqrt()) / 2.0).ln();
    Ok(4.0 * (q.t.ln() + corr))
}

pub fn error_e_t_limit(q: &CuspQuadDims) -> f64 {
    4.0 * q.t.ln()
}

pub fn lambda_from_truncated(tr_len: f64) -> f64 {
    (tr_len / 2.0).exp()
}

/// Bound `2 ln(1/t_α)` on the gap between `t_α`-length and truncated length.
pub fn t_vs_truncated_gap(t_alpha: f64) -> Result<f64> {
    if !(t_alpha > 0.0 && t_alpha <= 1.0) {
        return Err(Error::BadArea(t_alpha));
    }
    Ok(2.0 * (1.0 / t_alpha).ln())
}
