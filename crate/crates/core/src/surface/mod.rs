//! Surfaces as free discrete matrix groups with marked peripheral words.
//!
//! A compact arc between boundary components `i` and `j` is encoded by a
//! word `w`: its lift is the common perpendicular between the axis of `δ_i`
//! and `w · axis(δ_j)`. Infinite arcs use the parabolic fixed points of the
//! cusp words instead of axes. Both are double cosets `⟨δ_i⟩ w ⟨δ_j⟩` up to
//! the flip `(i, w, j) ↦ (j, w⁻¹, i)`.

mod enumerate;
mod json;
mod lifts;
mod presets;

pub(crate) use enumerate::Search;
pub use json::{surface_from_json, surface_to_json};
pub use lifts::{Segment, TubeReport};
pub use presets::{
    build_cusped_pants, build_one_holed_torus, build_pants, build_punctured_torus,
    build_punctured_torus_from_traces, preset, PRESET_NAMES,
};

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypalg::{
    axis, classify, geodesic_distance, parabolic_data, point_distance, translation_length,
    BoundaryPoint, IdealGeodesic, IsometryKind, Mat2, EPS_CLS,
};
use crate::words::{conj_canonical, double_coset_canonical, ConjClass, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcKind {
    Compact,
    Infinite,
}

impl ArcKind {
    fn prefix(self) -> char {
        match self {
            ArcKind::Compact => 'b',
            ArcKind::Infinite => 'p',
        }
    }
}

/// Canonical double-coset representative `(i, w, j)` of an arc class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcClass {
    kind: ArcKind,
    i: usize,
    j: usize,
    w: Word,
}

impl ArcClass {
    pub fn kind(&self) -> ArcKind {
        self.kind
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn word(&self) -> &Word {
        &self.w
    }

    /// Splits a key such as `b0:aB:b1` into its raw parts (not canonicalized).
    pub fn parse_key(s: &str) -> Result<(ArcKind, usize, Word, usize)> {
        let bad = || Error::BadKey(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let end = |p: &str| -> Result<(ArcKind, usize)> {
            let mut chars = p.chars();
            let kind = match chars.next() {
                Some('b') => ArcKind::Compact,
                Some('p') => ArcKind::Infinite,
                _ => return Err(bad()),
            };
            let idx = chars.as_str().parse::<usize>().map_err(|_| bad())?;
            Ok((kind, idx))
        };
        let (k1, i) = end(parts[0])?;
        let (k2, j) = end(parts[2])?;
        if k1 != k2 {
            return Err(Error::Unsupported("arcs with one boundary end and one cusp end".into()));
        }
        Ok((k1, i, Word::parse(parts[1]).map_err(|_| bad())?, j))
    }
}

impl fmt::Display for ArcClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.kind.prefix();
        write!(f, "{p}{}:{}:{p}{}", self.i, self.w, self.j)
    }
}

impl fmt::Debug for ArcClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArcClass({self})")
    }
}

/// Either kind of class the crate measures.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ClassKey {
    Curve(ConjClass),
    Arc(ArcClass),
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKey::Curve(c) => c.fmt(f),
            ClassKey::Arc(a) => a.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthReport {
    pub length: f64,
    pub t_used: Option<f64>,
    pub components_in_cusp: Option<usize>,
    /// Enumeration radius used for interior horoballs, when any.
    pub cutoff: Option<f64>,
}

/// Cusp data in the frame where the cusp sits at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CuspFrame {
    /// `F` with `F(∞)` the parabolic fixed point.
    pub frame: Mat2,
    pub frame_inv: Mat2,
    /// Translation length of the cusp word in that frame.
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceModel {
    name: String,
    genus: usize,
    generators: Vec<Mat2>,
    letter_mats: Vec<Mat2>,
    boundary_words: Vec<Word>,
    cusp_words: Vec<Word>,
    boundary_lengths: Vec<f64>,
    boundary_axes: Vec<IdealGeodesic>,
    cusps: Vec<CuspFrame>,
    is_pants_oracle: bool,
    basepoint: Complex64,
}

impl SurfaceModel {
    /// Validates and assembles a model. The rank must equal
    /// `2g + n + p − 1`, every boundary word must be hyperbolic and every
    /// cusp word parabolic.
    pub fn from_parts(
        name: &str,
        genus: usize,
        generators: Vec<Mat2>,
        boundary_words: Vec<Word>,
        cusp_words: Vec<Word>,
        is_pants_oracle: bool,
    ) -> Result<Self> {
        let (n, p) = (boundary_words.len(), cusp_words.len());
        let rank = generators.len();
        if 2 * genus + n + p < 3 || 2 * genus + n + p - 1 != rank {
            return Err(Error::BadSurfaceDocument(format!(
                "signature ({genus}, {n}, {p}) does not match rank {rank}"
            )));
        }
        if genus == 0 && n + p == 3 && !is_pants_oracle {
            return Err(Error::BadSurfaceDocument(
                "pairs of pants are only allowed as formula oracles".into(),
            ));
        }
        for w in boundary_words.iter().chain(&cusp_words) {
            if w.rank_used() > rank {
                return Err(Error::BadWord(w.to_string()));
            }
        }
        let mut letter_mats = Vec::with_capacity(2 * rank);
        for g in &generators {
            letter_mats.push(*g);
            letter_mats.push(g.inverse());
        }
        let mut s = SurfaceModel {
            name: name.to_string(),
            genus,
            generators,
            letter_mats,
            boundary_words,
            cusp_words,
            boundary_lengths: Vec::new(),
            boundary_axes: Vec::new(),
            cusps: Vec::new(),
            is_pants_oracle,
            basepoint: Complex64::new(0.0, 1.0),
        };
        for w in &s.boundary_words {
            let m = s.word_matrix(w);
            if classify(&m) != IsometryKind::Hyperbolic {
                return Err(Error::NotBoundarySurface(m.trace()));
            }
            s.boundary_lengths.push(translation_length(&m)?);
            s.boundary_axes.push(axis(&m)?);
        }
        for w in &s.cusp_words {
            let m = s.word_matrix(w);
            if ((m.trace().abs() - 2.0).abs() > EPS_CLS) || classify(&m) != IsometryKind::Parabolic {
                return Err(Error::TraceCondition(format!(
                    "cusp word {w} has trace {}",
                    m.trace()
                )));
            }
            let (fixed, shift) = parabolic_data(&m)?;
            let frame = match fixed {
                BoundaryPoint::Infinity => Mat2::IDENTITY,
                BoundaryPoint::Finite(f) => Mat2::new(f, -1.0, 1.0, 0.0)?,
            };
            s.cusps.push(CuspFrame {
                frame,
                frame_inv: frame.inverse(),
                width: shift.abs(),
            });
        }
        s.check_discreteness(4)?;
        s.basepoint = s.find_basepoint();
        Ok(s)
    }

    /// Guard against obviously non-discrete parameters: no short word may be
    /// elliptic.
    fn check_discreteness(&self, max_len: usize) -> Result<()> {
        let mut stack: Vec<(Vec<Letter>, Mat2)> = vec![(Vec::new(), Mat2::IDENTITY)];
        while let Some((w, m)) = stack.pop() {
            if !w.is_empty() && classify(&m) == IsometryKind::Elliptic {
                return Err(Error::NotDiscrete(Word::reduce(w).to_string()));
            }
            if w.len() == max_len {
                continue;
            }
            for l in 0..(2 * self.rank()) as Letter {
                if w.last() == Some(&(l ^ 1)) {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(l);
                stack.push((nw, m * self.letter_mats[l as usize]));
            }
        }
        Ok(())
    }

    /// Point minimizing the summed displacement of the generators; used as
    /// the orbit base point of all neighbourhood enumerations.
    fn find_basepoint(&self) -> Complex64 {
        let f = |x: f64, u: f64| -> f64 {
            let z = Complex64::new(x, u.exp());
            self.generators
                .iter()
                .map(|g| point_distance(z, g.apply(z)).cosh())
                .sum()
        };
        let (mut x, mut u) = (0.0, 0.0);
        let mut best = f(x, u);
        let mut h = 1.0;
        while h > 1e-12 {
            let y = u.exp();
            let mut moved = false;
            for (dx, du) in [(h * y, 0.0), (-h * y, 0.0), (0.0, h), (0.0, -h)] {
                let v = f(x + dx, u + du);
                if v < best {
                    best = v;
                    x += dx;
                    u += du;
                    moved = true;
                    break;
                }
            }
            if !moved {
                h /= 2.0;
            }
        }
        Complex64::new(x, u.exp())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `(g, n, p)`.
    pub fn signature(&self) -> (usize, usize, usize) {
        (self.genus, self.boundary_words.len(), self.cusp_words.len())
    }

    /// `6g − 6 + 2(n + p)`, the growth exponent of orbit counts.
    pub fn growth_exponent(&self) -> usize {
        let (g, n, p) = self.signature();
        6 * g + 2 * (n + p) - 6
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn boundary_words(&self) -> &[Word] {
        &self.boundary_words
    }

    pub fn cusp_words(&self) -> &[Word] {
        &self.cusp_words
    }

    /// All boundary then all cusp words.
    pub fn peripheral_words(&self) -> Vec<Word> {
        self.boundary_words.iter().chain(&self.cusp_words).cloned().collect()
    }

    pub fn boundary_lengths(&self) -> &[f64] {
        &self.boundary_lengths
    }

    /// Matrix `F` with `F(∞)` the fixed point of cusp `k`.
    pub fn cusp_frame(&self, k: usize) -> Mat2 {
        self.cusps[k].frame
    }

    /// Translation length of cusp word `k` in its frame.
    pub fn cusp_width(&self, k: usize) -> f64 {
        self.cusps[k].width
    }

    /// Axis of boundary word `k`.
    pub fn boundary_axis(&self, k: usize) -> IdealGeodesic {
        self.boundary_axes[k]
    }

    pub fn is_pants_oracle(&self) -> bool {
        self.is_pants_oracle
    }

    pub fn basepoint(&self) -> Complex64 {
        self.basepoint
    }

    pub(crate) fn cusp(&self, k: usize) -> &CuspFrame {
        &self.cusps[k]
    }

    pub fn letter_matrix(&self, l: Letter) -> Mat2 {
        self.letter_mats[l as usize]
    }

    pub fn letters_matrix(&self, letters: &[Letter]) -> Mat2 {
        letters
            .iter()
            .fold(Mat2::IDENTITY, |m, &l| m * self.letter_mats[l as usize])
    }

    pub fn word_matrix(&self, w: &Word) -> Mat2 {
        self.letters_matrix(w.letters())
    }

    pub fn end_word(&self, kind: ArcKind, i: usize) -> &Word {
        match kind {
            ArcKind::Compact => &self.boundary_words[i],
            ArcKind::Infinite => &self.cusp_words[i],
        }
    }

    pub fn end_count(&self, kind: ArcKind) -> usize {
        match kind {
            ArcKind::Compact => self.boundary_words.len(),
            ArcKind::Infinite => self.cusp_words.len(),
        }
    }

    /// True when `w` is conjugate to a power of a boundary or cusp word.
    pub fn is_peripheral(&self, w: &Word) -> bool {
        let Ok(c) = conj_canonical(w) else {
            return false;
        };
        self.peripheral_words().iter().any(|d| {
            let core = d.cyclic_split().1.len().max(1);
            (1..=(c.word().len() / core) as i64)
                .any(|k| conj_canonical(&d.pow(k)).map(|x| x == c).unwrap_or(false))
        })
    }

    /// Validates a word against this surface's alphabet.
    pub fn check_word(&self, w: &Word) -> Result<()> {
        if w.rank_used() > self.rank() {
            return Err(Error::BadWord(w.to_string()));
        }
        Ok(())
    }

    /// Canonical arc class for the raw representative `(i, w, j)`.
    pub fn arc(&self, kind: ArcKind, i: usize, w: &Word, j: usize) -> Result<ArcClass> {
        let count = self.end_count(kind);
        if count == 0 {
            return Err(Error::MissingFeature(match kind {
                ArcKind::Compact => "boundary",
                ArcKind::Infinite => "cusps",
            }));
        }
        if i >= count || j >= count {
            return Err(Error::ArcMismatch(format!("end index out of range ({i}, {j})")));
        }
        self.check_word(w)?;
        let (di, dj) = (self.end_word(kind, i), self.end_word(kind, j));
        let fwd = double_coset_canonical(di, w, dj);
        let bwd = double_coset_canonical(dj, &w.inverse(), di);
        if i == j && fwd.is_empty() {
            return Err(Error::DegenerateArc);
        }
        let a = ArcClass { kind, i, j, w: fwd };
        let b = ArcClass { kind, i: j, j: i, w: bwd };
        let key = |x: &ArcClass| (x.i, x.j, x.w.clone());
        Ok(if key(&b) < key(&a) { b } else { a })
    }

    pub fn arc_from_key(&self, s: &str) -> Result<ArcClass> {
        let (kind, i, w, j) = ArcClass::parse_key(s)?;
        self.arc(kind, i, &w, j)
    }

    pub fn class_from_key(&self, s: &str) -> Result<ClassKey> {
        if s.contains(':') {
            Ok(ClassKey::Arc(self.arc_from_key(s)?))
        } else {
            let c = ConjClass::parse(s)?;
            self.check_word(c.word())?;
            Ok(ClassKey::Curve(c))
        }
    }

    pub fn curve_length(&self, c: &ConjClass) -> Result<f64> {
        let m = self.word_matrix(c.word());
        if classify(&m) != IsometryKind::Hyperbolic || self.is_peripheral(c.word()) {
            return Err(Error::PeripheralOrInessential);
        }
        translation_length(&m)
    }

    /// Geometric endpoints of an arc's lift: the end geodesics for compact
    /// arcs.
    pub(crate) fn compact_arc_axes(&self, a: &ArcClass) -> Result<(IdealGeodesic, IdealGeodesic)> {
        if a.kind != ArcKind::Compact {
            return Err(Error::ArcMismatch(format!("{a} is not a compact arc")));
        }
        let m = self.word_matrix(&a.w);
        Ok((self.boundary_axes[a.i], m.apply_geodesic(&self.boundary_axes[a.j])))
    }

    /// Orthogeodesic length of a compact arc.
    pub fn arc_length(&self, a: &ArcClass) -> Result<LengthReport> {
        let (g1, g2) = self.compact_arc_axes(a)?;
        let d = match geodesic_distance(&g1, &g2) {
            Ok(d) if d > 0.0 => d,
            _ => return Err(Error::DegenerateArc),
        };
        Ok(LengthReport {
            length: d,
            t_used: None,
            components_in_cusp: None,
            cutoff: None,
        })
    }

    /// Matrix `F_i⁻¹ W F_j`, sending the arc's lift to the vertical line from
    /// `∞` down to `x = M(∞)`.
    pub(crate) fn infinite_arc_frame(&self, a: &ArcClass) -> Result<Mat2> {
        if a.kind != ArcKind::Infinite {
            return Err(Error::ArcMismatch(format!("{a} is not an infinite arc")));
        }
        let m = self.cusps[a.i].frame_inv * self.word_matrix(&a.w) * self.cusps[a.j].frame;
        if m.entries()[2].abs() < 1e-12 * m.scale() {
            return Err(Error::DegenerateArc);
        }
        Ok(m)
    }

    /// Length of the lift between the two end horoballs of area `t`,
    /// ignoring interior horoballs. Equals the `t`-length whenever no
    /// interior horoball of area `t` meets the arc.
    pub fn end_to_end_length(&self, a: &ArcClass, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 2.0) {
            return Err(Error::BadArea(t));
        }
        let m = self.infinite_arc_frame(a)?;
        Ok(end_to_end_from_frame(&m, self.cusps[a.i].width, self.cusps[a.j].width, t))
    }
}

/// `ln(H / D)` for top height `H = c_i/t` and bottom diameter
/// `D = t / (c_j γ²)`, with `γ` the lower-left entry of the frame matrix.
pub(crate) fn end_to_end_from_frame(m: &Mat2, ci: f64, cj: f64, t: f64) -> f64 {
    let g = m.entries()[2].abs();
    (ci * cj).ln() + 2.0 * g.ln() - 2.0 * t.ln()
}

#[cfg(test)]
mod tests;
