//! Numerical kernel for the upper half-plane model.
//!
//! Isometries are unit-determinant 2×2 real matrices acting by Möbius
//! transformations. Because `M` and `-M` act identically, every matrix is
//! stored with a non-negative trace and every trace formula uses `|trace|`.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance separating hyperbolic, parabolic and elliptic traces.
pub const EPS_CLS: f64 = 1e-9;

/// `acosh` evaluated as `ln(x + sqrt(x² - 1))`, with the square-root
/// expansion near `x = 1` so that boundary cases return exact zeros.
pub fn acosh_guarded(x: f64) -> f64 {
    if x <= 1.0 {
        return 0.0;
    }
    if x <= 1.0 + 1e-12 {
        return (2.0 * (x - 1.0)).sqrt();
    }
    (x + (x * x - 1.0).sqrt()).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsometryKind {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Identity,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds a matrix, rescaling to determinant one and fixing the sign so
    /// that the trace is non-negative.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Mat2> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::BadDeterminant(det));
        }
        let s = det.sqrt();
        Ok(Mat2::signed(a / s, b / s, c / s, d / s))
    }

    /// Accepts entries whose determinant is already one (to 1e−12) without
    /// rescaling them, so serialized matrices read back bit for bit.
    pub fn from_unit_entries(a: f64, b: f64, c: f64, d: f64) -> Result<Mat2> {
        let det = a * d - b * c;
        if !((det - 1.0).abs() < 1e-12) {
            return Err(Error::BadDeterminant(det));
        }
        Ok(Mat2::signed(a, b, c, d))
    }

    /// Sign normalization only; the caller guarantees determinant one.
    fn signed(a: f64, b: f64, c: f64, d: f64) -> Mat2 {
        let tr = a + d;
        let flip = if tr != 0.0 {
            tr < 0.0
        } else if c != 0.0 {
            c < 0.0
        } else {
            a < 0.0
        };
        if flip {
            Mat2 {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Mat2 { a, b, c, d }
        }
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Mat2 {
        Mat2::signed(self.d, -self.b, -self.c, self.a)
    }

    /// Largest absolute entry; used to scale tolerances.
    pub fn scale(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    pub fn apply_boundary(&self, x: BoundaryPoint) -> BoundaryPoint {
        match x {
            BoundaryPoint::Infinity => {
                if self.c == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * x + self.b) / den)
                }
            }
        }
    }

    pub fn apply_geodesic(&self, g: &IdealGeodesic) -> IdealGeodesic {
        IdealGeodesic {
            p: self.apply_boundary(g.p),
            q: self.apply_boundary(g.q),
        }
    }

    /// Image of the horoball `{Im z > height}` under this isometry.
    pub fn apply_horoball_at_infinity(&self, height: f64) -> Horoball {
        if self.c == 0.0 {
            // z -> (a z + b) / d with ad = 1 scales heights by a².
            Horoball {
                base: BoundaryPoint::Infinity,
                size: height * self.a * self.a,
            }
        } else {
            Horoball {
                base: BoundaryPoint::Finite(self.a / self.c),
                size: 1.0 / (self.c * self.c * height),
            }
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::signed(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn classify(m: &Mat2) -> IsometryKind {
    let tr = m.trace().abs();
    if tr > 2.0 + EPS_CLS {
        IsometryKind::Hyperbolic
    } else if tr < 2.0 - EPS_CLS {
        IsometryKind::Elliptic
    } else {
        let tol = EPS_CLS * m.scale().max(1.0);
        if m.b.abs() <= tol && m.c.abs() <= tol && (m.a - m.d).abs() <= tol {
            IsometryKind::Identity
        } else {
            IsometryKind::Parabolic
        }
    }
}

/// `2 acosh(|tr|/2)`; zero for parabolic elements.
pub fn translation_length(m: &Mat2) -> Result<f64> {
    match classify(m) {
        IsometryKind::Hyperbolic => Ok(2.0 * acosh_guarded(m.trace().abs() / 2.0)),
        IsometryKind::Parabolic => Ok(0.0),
        _ => Err(Error::NotGeodesic),
    }
}

/// A point of the boundary circle `R ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl BoundaryPoint {
    pub fn is_infinite(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            BoundaryPoint::Finite(x) => Some(*x),
            BoundaryPoint::Infinity => None,
        }
    }

    pub fn approx_eq(&self, other: &BoundaryPoint, tol: f64) -> bool {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
            (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => {
                (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
            }
            _ => false,
        }
    }
}

impl From<f64> for BoundaryPoint {
    fn from(x: f64) -> Self {
        if x.is_infinite() {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::Finite(x)
        }
    }
}

/// Complete geodesic given by its two (unordered) ideal endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealGeodesic {
    p: BoundaryPoint,
    q: BoundaryPoint,
}

impl IdealGeodesic {
    pub fn new(p: impl Into<BoundaryPoint>, q: impl Into<BoundaryPoint>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if p.approx_eq(&q, 1e-15) {
            return Err(Error::DegenerateGeodesic);
        }
        Ok(IdealGeodesic { p, q })
    }

    pub fn endpoints(&self) -> (BoundaryPoint, BoundaryPoint) {
        (self.p, self.q)
    }

    pub fn shares_endpoint(&self, other: &IdealGeodesic, tol: f64) -> bool {
        [self.p, self.q]
            .iter()
            .any(|x| x.approx_eq(&other.p, tol) || x.approx_eq(&other.q, tol))
    }

    /// Orientation-preserving isometry sending this geodesic to `{0, ∞}`.
    pub fn normalizer(&self) -> Mat2 {
        match (self.p, self.q) {
            (BoundaryPoint::Finite(x), BoundaryPoint::Infinity)
            | (BoundaryPoint::Infinity, BoundaryPoint::Finite(x)) => Mat2 {
                a: 1.0,
                b: -x,
                c: 0.0,
                d: 1.0,
            },
            (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => {
                let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                let s = (hi - lo).sqrt();
                Mat2::signed(1.0 / s, -lo / s, -1.0 / s, hi / s)
            }
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => unreachable!("distinct endpoints"),
        }
    }

    /// True when the endpoint pairs interleave on the boundary circle.
    pub fn crosses(&self, other: &IdealGeodesic) -> bool {
        if self.shares_endpoint(other, 1e-13) {
            return false;
        }
        let t = self.normalizer();
        match (t.apply_boundary(other.p), t.apply_boundary(other.q)) {
            (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => u * v < 0.0,
            _ => false,
        }
    }
}

/// Distance between two non-crossing complete geodesics; zero when they are
/// asymptotic.
pub fn geodesic_distance(g1: &IdealGeodesic, g2: &IdealGeodesic) -> Result<f64> {
    if g1.shares_endpoint(g2, 1e-13) {
        return Ok(0.0);
    }
    let t = g1.normalizer();
    let (u, v) = match (t.apply_boundary(g2.p), t.apply_boundary(g2.q)) {
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => (u, v),
        _ => return Ok(0.0),
    };
    if u == 0.0 || v == 0.0 {
        return Ok(0.0);
    }
    if u * v < 0.0 {
        return Err(Error::GeodesicsCross);
    }
    let (p, q) = if u.abs() < v.abs() {
        (u.abs(), v.abs())
    } else {
        (v.abs(), u.abs())
    };
    Ok(acosh_guarded((p + q) / (q - p)))
}

pub fn point_geodesic_distance(z: Complex64, g: &IdealGeodesic) -> Result<f64> {
    if !(z.im > 0.0) {
        return Err(Error::NotInUpperHalfPlane);
    }
    let w = g.normalizer().apply(z);
    Ok((w.re.abs() / w.im).asinh())
}

/// Hyperbolic distance between two points of the upper half-plane.
pub fn point_distance(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm();
    2.0 * (num / (2.0 * (z.im * w.im).sqrt())).asinh()
}

/// Horoball tangent to the boundary at `base`. `size` is the height of the
/// bounding horocycle when `base = ∞`, and the Euclidean diameter otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horoball {
    pub base: BoundaryPoint,
    pub size: f64,
}

impl Horoball {
    pub fn new(base: BoundaryPoint, size: f64) -> Result<Self> {
        if !(size > 0.0) {
            return Err(Error::BadHoroball);
        }
        Ok(Horoball { base, size })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match self.base {
            BoundaryPoint::Infinity => z.im > self.size,
            BoundaryPoint::Finite(b) => {
                let r = self.size / 2.0;
                (z - Complex64::new(b, r)).norm() < r
            }
        }
    }
}

/// Fixed point and signed translation of a parabolic element. For a fixed
/// point at infinity the element is `z ↦ z + shift`; otherwise conjugating by
/// `z ↦ f - 1/z` gives `z ↦ z + shift`.
pub fn parabolic_data(m: &Mat2) -> Result<(BoundaryPoint, f64)> {
    if classify(m) != IsometryKind::Parabolic {
        return Err(Error::NotParabolic);
    }
    // trace is normalized to +2, so a and d are both close to 1.
    let tol = 1e-14 * m.scale().max(1.0);
    if m.c.abs() <= tol {
        Ok((BoundaryPoint::Infinity, m.b / m.d))
    } else {
        Ok((BoundaryPoint::Finite((m.a - m.d) / (2.0 * m.c)), -m.c))
    }
}

/// Horoball whose quotient by `⟨m⟩` has area `t`.
pub fn horoball_of_parabolic(m: &Mat2, t: f64) -> Result<Horoball> {
    if !(t > 0.0 && t <= 2.0) {
        return Err(Error::BadArea(t));
    }
    let (base, shift) = parabolic_data(m)?;
    let size = match base {
        BoundaryPoint::Infinity => shift.abs() / t,
        BoundaryPoint::Finite(_) => t / shift.abs(),
    };
    Horoball::new(base, size)
}

/// Endpoints of the invariant geodesic of a hyperbolic element.
pub fn axis(m: &Mat2) -> Result<IdealGeodesic> {
    if classify(m) != IsometryKind::Hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    let [a, b, c, d] = m.entries();
    if c.abs() <= 1e-15 * m.scale() {
        return IdealGeodesic::new(BoundaryPoint::Infinity, b / (d - a));
    }
    let tr = a + d;
    let s = (tr * tr - 4.0).sqrt();
    let amd = a - d;
    let sign = if amd >= 0.0 { 1.0 } else { -1.0 };
    let r1 = (amd + sign * s) / (2.0 * c);
    let r2 = -b / (c * r1);
    IdealGeodesic::new(r1, r2)
}

/// Attracting fixed point of a hyperbolic element (the forward end of its
/// translation along the axis).
pub fn attracting_fixed_point(m: &Mat2) -> Result<BoundaryPoint> {
    let g = axis(m)?;
    let (p, q) = g.endpoints();
    // derivative of z -> (az+b)/(cz+d) at a finite fixed point x is 1/(cx+d)²
    let attracting = |x: BoundaryPoint| match x {
        BoundaryPoint::Infinity => m.a.abs() > m.d.abs(),
        BoundaryPoint::Finite(x) => (m.c * x + m.d).abs() > 1.0,
    };
    Ok(if attracting(p) { p } else { q })
}

/// Nearest point to `z` on the geodesic `g`.
pub fn project_to_geodesic(z: Complex64, g: &IdealGeodesic) -> Complex64 {
    let t = g.normalizer();
    let w = t.apply(z);
    t.inverse().apply(Complex64::new(0.0, w.norm()))
}
