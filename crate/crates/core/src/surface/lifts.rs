//! Measurements that need the group translates near one lift: interior
//! horoballs met by infinite arcs, penetration depths, collar clearances and
//! self-intersection counts.
//!
//! Every quantity is read off a finite set of translates found by a
//! breadth-first search over group elements whose base-point images lie in a
//! hyperbolic neighbourhood of a compact segment `σ` of the lift. The
//! neighbourhood radius is derived from a measured covering radius (every
//! point of the relevant fundamental piece is that close to an orbit point),
//! plus a slack; each result is recomputed with a larger slack and only
//! returned once the two agree.

use std::collections::BTreeMap;

use super::enumerate::Search;

use num_complex::Complex64;

use super::{end_to_end_from_frame, ArcClass, ArcKind, ClassKey, SurfaceModel};
use crate::error::{Error, Result};
use crate::hypalg::{
    axis, point_distance, project_to_geodesic, BoundaryPoint, IdealGeodesic, Mat2,
};
use crate::words::{ConjClass, Word};

/// Maximum number of group elements visited by one neighbourhood search.
const TUBE_BUDGET: usize = 400_000;
/// Slack schedule used for the stabilization check.
const SLACKS: [f64; 4] = [1.0, 2.0, 3.0, 4.0];
/// Sample spacing (hyperbolic length) for covering-radius estimates.
const SAMPLE_STEP: f64 = 0.05;

/// Geodesic segment between two points of the upper half-plane, kept in a
/// frame where its supporting line is the imaginary axis.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    line: IdealGeodesic,
    norm: Mat2,
    s_lo: f64,
    s_hi: f64,
}

impl Segment {
    /// Segment of a known line between (points on or near) `a` and `b`.
    pub fn on_line(line: IdealGeodesic, a: Complex64, b: Complex64) -> Segment {
        let norm = line.normalizer();
        let (sa, sb) = (norm.apply(a).norm().ln(), norm.apply(b).norm().ln());
        Segment {
            line,
            norm,
            s_lo: sa.min(sb),
            s_hi: sa.max(sb),
        }
    }

    pub fn new(a: Complex64, b: Complex64) -> Result<Segment> {
        // Move `a` to i; the line through i and u + iv meets the real axis at
        // c ± sqrt(1 + c²) with c = (u² + v² − 1)/(2u).
        let m1 = Mat2::new(1.0, -a.re, 0.0, a.im)?;
        let bp = m1.apply(b);
        let line0 = if bp.re.abs() < 1e-14 * bp.norm().max(1.0) {
            IdealGeodesic::new(0.0, f64::INFINITY)?
        } else {
            let c = (bp.norm_sqr() - 1.0) / (2.0 * bp.re);
            let e1 = c + c.signum() * (1.0 + c * c).sqrt();
            IdealGeodesic::new(e1, -1.0 / e1)?
        };
        let line = m1.inverse().apply_geodesic(&line0);
        Ok(Segment::on_line(line, a, b))
    }

    pub fn line(&self) -> IdealGeodesic {
        self.line
    }

    pub fn length(&self) -> f64 {
        self.s_hi - self.s_lo
    }

    pub fn point_at(&self, s: f64) -> Complex64 {
        self.norm.inverse().apply(Complex64::new(0.0, s.exp()))
    }

    /// Position along the supporting line of the projection of `z`.
    pub fn param(&self, z: Complex64) -> f64 {
        self.norm.apply(z).norm().ln()
    }

    /// Isometry taking the supporting line to the imaginary axis, in which
    /// parameters are `ln |z|`.
    pub fn frame(&self) -> Mat2 {
        self.norm
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.s_lo, self.s_hi)
    }

    pub fn distance_to(&self, z: Complex64) -> f64 {
        let w = self.norm.apply(z);
        let s = w.norm().ln();
        if s < self.s_lo {
            point_distance(w, Complex64::new(0.0, self.s_lo.exp()))
        } else if s > self.s_hi {
            point_distance(w, Complex64::new(0.0, self.s_hi.exp()))
        } else {
            (w.re.abs() / w.im).asinh()
        }
    }

    fn samples(&self) -> Vec<Complex64> {
        let n = (self.length() / SAMPLE_STEP).ceil().max(1.0) as usize;
        (0..=n)
            .map(|k| self.point_at(self.s_lo + self.length() * k as f64 / n as f64))
            .collect()
    }

    /// Parameter of the crossing point with `other`, when the lines cross.
    fn crossing_param(&self, other: &IdealGeodesic) -> Option<f64> {
        if !self.line.crosses(other) {
            return None;
        }
        let g = self.norm.apply_geodesic(other);
        match g.endpoints() {
            (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => Some(0.5 * (-u * v).ln()),
            _ => None,
        }
    }
}

/// Group elements near a compact piece, with the measured covering radius.
#[derive(Debug, Clone)]
pub struct TubeReport {
    pub elements: Vec<(Word, Mat2)>,
    pub covering_radius: f64,
    pub search_radius: f64,
}


impl SurfaceModel {
    /// Elements `g` with `d(g·z₀, σ) ≤ radius`, found by a tree search
    /// through elements of the same neighbourhood and the prefixes of the
    /// seeds; sorted by word.
    pub fn tube(&self, seeds: &[Word], seg: &Segment, radius: f64) -> Result<Vec<(Word, Mat2)>> {
        let dist = |z: Complex64| seg.distance_to(z);
        let p = Search {
            dist: &dist,
            radius,
            expand: radius,
            seeds,
            budget: TUBE_BUDGET,
        };
        let parts = self.search(&p, Vec::new, |acc: &mut Vec<(Word, Mat2)>, w, m, _| {
            acc.push((Word::reduce(w.iter().copied()), *m))
        })?;
        let mut out: Vec<(Word, Mat2)> = parts.into_iter().flatten().collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Elements whose orbit points cover every sample of a compact piece,
    /// together with the covering radius achieved. `chord` must lie within
    /// `dev` of every sample.
    fn cover(
        &self,
        seeds: &[Word],
        samples: &[Complex64],
        chord: &Segment,
        dev: f64,
    ) -> Result<TubeReport> {
        let z0 = self.basepoint();
        // start with the base point inside the tube so the search is rooted
        let mut r = (1.5 + dev).max(chord.distance_to(z0) + 0.5);
        loop {
            let elements = self.tube(seeds, chord, r)?;
            let orbit: Vec<Complex64> = elements.iter().map(|(_, m)| m.apply(z0)).collect();
            let rho = samples
                .iter()
                .map(|&y| {
                    orbit
                        .iter()
                        .map(|&p| point_distance(y, p))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
                + SAMPLE_STEP;
            if rho + dev <= r {
                return Ok(TubeReport {
                    elements,
                    covering_radius: rho,
                    search_radius: r,
                });
            }
            if r > 20.0 {
                return Err(Error::UndecidedAtCutoff { cutoff: r });
            }
            r = (rho + dev + 0.25).min(r + 2.0);
        }
    }

    fn cover_segment(&self, seeds: &[Word], seg: &Segment) -> Result<TubeReport> {
        self.cover(seeds, &seg.samples(), seg, 0.0)
    }

    /// One period of the area-`t` horocycle of cusp `k`, centred below the
    /// base point: its chord, the largest distance from the arc to the chord,
    /// and a covering of the arc by orbit points.
    pub(crate) fn horocycle_piece(&self, k: usize, t: f64) -> Result<(Segment, f64, TubeReport)> {
        let cf = self.cusp(k);
        let z = cf.frame_inv.apply(self.basepoint());
        let h = cf.width / t;
        let n = 40;
        let samples: Vec<Complex64> = (0..=n)
            .map(|s| {
                let x = z.re + cf.width * (s as f64 / n as f64 - 0.5);
                cf.frame.apply(Complex64::new(x, h))
            })
            .collect();
        let chord = Segment::new(samples[0], samples[n])?;
        let dev = samples
            .iter()
            .map(|&y| chord.distance_to(y))
            .fold(0.0, f64::max);
        let p = &self.cusp_words()[k];
        let cover = self.cover(&[p.clone(), p.pow(2), p.inverse(), p.pow(-2)], &samples, &chord, dev)?;
        Ok((chord, dev, cover))
    }

    fn cover_horocycle(&self, k: usize) -> Result<TubeReport> {
        Ok(self.horocycle_piece(k, 2.0)?.2)
    }

    /// Fundamental segment `[p, δ_k·p]` of boundary axis `k`, `p` the
    /// projection of the base point, with a covering by orbit points.
    pub(crate) fn boundary_piece(&self, k: usize) -> Result<(Segment, TubeReport)> {
        let d = &self.boundary_words()[k];
        let md = self.word_matrix(d);
        let ax = self.boundary_axes[k];
        let p = project_to_geodesic(self.basepoint(), &ax);
        let phi = Segment::on_line(ax, p, md.apply(p));
        let cover = self.cover_segment(&[d.clone(), d.inverse()], &phi)?;
        Ok((phi, cover))
    }

    /// Candidate translates `u·g⁻¹` with `u` near `σ` (search radius `r`) and
    /// `g` from a covering of the feature's fundamental piece.
    fn candidates(
        &self,
        seeds: &[Word],
        seg: &Segment,
        r: f64,
        piece: &TubeReport,
    ) -> Result<BTreeMap<Word, Mat2>> {
        let near = self.tube(seeds, seg, r)?;
        let mut out = BTreeMap::new();
        for (uw, um) in &near {
            for (gw, gm) in &piece.elements {
                let w = uw.concat(&gw.inverse());
                out.entry(w).or_insert_with(|| *um * gm.inverse());
            }
        }
        Ok(out)
    }

    /// Runs `f` with growing slack until two consecutive results agree.
    fn stabilized<T: PartialEq>(&self, mut f: impl FnMut(f64) -> Result<T>) -> Result<T> {
        let mut prev = f(SLACKS[0])?;
        for &s in &SLACKS[1..] {
            let next = f(s)?;
            if next == prev {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::UndecidedAtCutoff {
            cutoff: *SLACKS.last().expect("non-empty"),
        })
    }

    /// Fundamental segment `[p, W·p]` of a closed geodesic, `p` the
    /// projection of the base point, with BFS seeds.
    fn curve_segment(&self, c: &ConjClass) -> Result<(Mat2, Segment, Vec<Word>)> {
        let m = self.word_matrix(c.word());
        let ax = axis(&m).map_err(|_| Error::PeripheralOrInessential)?;
        let p = project_to_geodesic(self.basepoint(), &ax);
        let seg = Segment::on_line(ax, p, m.apply(p));
        let w = c.word();
        Ok((m, seg, vec![w.clone(), w.pow(2), w.inverse()]))
    }

    fn end_seeds(&self, a: &ArcClass) -> Vec<Word> {
        let (i, j) = a.ends();
        let di = self.end_word(a.kind(), i);
        let dj = self.end_word(a.kind(), j);
        let mut seeds = vec![a.word().clone()];
        for k in [-3i64, -2, -1, 1, 2, 3] {
            seeds.push(di.pow(k));
            seeds.push(a.word().concat(&dj.pow(k)));
        }
        seeds
    }

    /// Feet of the common perpendicular of a compact arc.
    fn compact_segment(&self, a: &ArcClass) -> Result<Segment> {
        let (g1, g2) = self.compact_arc_axes(a)?;
        let t = g1.normalizer();
        let (u, v) = match t.apply_geodesic(&g2).endpoints() {
            (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) if u * v > 0.0 => (u, v),
            _ => return Err(Error::DegenerateArc),
        };
        let r2 = u * v;
        let x = 2.0 * r2 / (u + v);
        let foot1 = Complex64::new(0.0, r2.sqrt());
        let foot2 = Complex64::new(x, (r2 - x * x).max(0.0).sqrt());
        let ti = t.inverse();
        Segment::new(ti.apply(foot1), ti.apply(foot2))
    }

    /// Interior horoballs (area 2) met by an infinite arc's lift, in the frame
    /// of its first cusp: pairs `(|x − b|, D₁(b))`, sorted.
    fn interior_horoballs(&self, a: &ArcClass, slack: f64) -> Result<Vec<(f64, f64)>> {
        let m = self.infinite_arc_frame(a)?;
        let (i, j) = a.ends();
        let (ci, cj) = (self.cusp(i).width, self.cusp(j).width);
        let [ma, _, mc, _] = m.entries();
        let x = ma / mc;
        let fi = self.cusp(i).frame;
        let top = fi.apply(Complex64::new(x, ci));
        let bottom = fi.apply(Complex64::new(x, 1.0 / (cj * mc * mc)));
        let seg = Segment::new(top, bottom)?;
        let seeds = self.end_seeds(a);
        let mut found: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
        for k in 0..self.cusp_words().len() {
            let piece = self.cover_horocycle(k)?;
            let r = piece.covering_radius + slack;
            let ck = self.cusp(k).width;
            for (_, h) in self.candidates(&seeds, &seg, r, &piece)? {
                let n = self.cusp(i).frame_inv * h * self.cusp(k).frame;
                let [na, _, nc, _] = n.entries();
                if nc.abs() < 1e-12 * n.scale() {
                    continue;
                }
                let b = na / nc;
                let d1 = 1.0 / (nc * nc * ck);
                let delta = (x - b).abs();
                if delta <= 1e-9 * x.abs().max(1.0) || 2.0 * d1 <= 2.0 * delta {
                    continue;
                }
                let key = (b * 1e8).round() as i64;
                found.entry(key).or_insert((delta, d1));
            }
        }
        let mut out: Vec<(f64, f64)> = found.into_values().collect();
        out.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
        Ok(out)
    }

    fn interior_horoballs_stable(&self, a: &ArcClass) -> Result<Vec<(f64, f64)>> {
        if a.kind() != ArcKind::Infinite {
            return Err(Error::ArcMismatch(format!("{a} is not an infinite arc")));
        }
        let rounded = |v: &Vec<(f64, f64)>| -> Vec<(i64, i64)> {
            v.iter()
                .map(|&(d, s)| ((d * 1e7).round() as i64, (s * 1e7).round() as i64))
                .collect()
        };
        let mut cache = Vec::new();
        self.stabilized(|slack| {
            let v = self.interior_horoballs(a, slack)?;
            let key = rounded(&v);
            cache = v;
            Ok(key)
        })?;
        Ok(cache)
    }

    /// `t`-length of an infinite arc: length of the lift outside every
    /// horoball of area `t`.
    pub fn infinite_arc_t_length(&self, a: &ArcClass, t: f64) -> Result<super::LengthReport> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::BadArea(t));
        }
        let total = self.end_to_end_length(a, t)?;
        let interior = self.interior_horoballs_stable(a)?;
        let mut length = total;
        let mut inside = 2;
        for &(delta, d1) in &interior {
            let d = t * d1;
            if d > 2.0 * delta {
                let h = (d * d / 4.0 - delta * delta).sqrt();
                length -= ((d / 2.0 + h) / (d / 2.0 - h)).ln();
                inside += 1;
            }
        }
        Ok(super::LengthReport {
            length,
            t_used: Some(t),
            components_in_cusp: Some(inside),
            cutoff: Some(*SLACKS.last().expect("non-empty")),
        })
    }

    /// Length between the first exit from and last entry into the area-1
    /// cusp regions at the two ends.
    pub fn truncated_length(&self, a: &ArcClass) -> Result<f64> {
        self.end_to_end_length(a, 1.0)
    }

    /// Largest `t ≤ 1` for which the arc meets no interior horoball of area
    /// `t`: `min(1, min_b 2|x − b| / D₁(b))` in the arc's frame.
    pub fn t_alpha(&self, a: &ArcClass) -> Result<f64> {
        Ok(self.arc_penetration(a)?.min(1.0))
    }

    /// Same quantity by bisection on the number of components inside the
    /// cusp regions; kept as an independent cross-check.
    pub fn t_alpha_bisection(&self, a: &ArcClass, tol: f64) -> Result<f64> {
        let connected = |t: f64| -> Result<bool> {
            Ok(self.infinite_arc_t_length(a, t)?.components_in_cusp == Some(2))
        };
        if connected(1.0)? {
            return Ok(1.0);
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if connected(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    fn arc_penetration(&self, a: &ArcClass) -> Result<f64> {
        let interior = self.interior_horoballs_stable(a)?;
        let depth = interior
            .iter()
            .map(|&(delta, d1)| 2.0 * delta / d1)
            .fold(f64::INFINITY, f64::min);
        Ok(if depth >= 2.0 { f64::INFINITY } else { depth })
    }

    /// Largest `t` such that the geodesic representative avoids every
    /// cusp region of area `t` (`∞` when it avoids them up to area 2). For
    /// infinite arcs the two end rays are excluded.
    pub fn penetration_depth(&self, x: &ClassKey) -> Result<f64> {
        if self.cusp_words().is_empty() {
            return Ok(f64::INFINITY);
        }
        let (seg, seeds, line) = match x {
            ClassKey::Arc(a) if a.kind() == ArcKind::Infinite => return self.arc_penetration(a),
            ClassKey::Arc(a) => {
                let seg = self.compact_segment(a)?;
                (seg, self.end_seeds(a), seg.line())
            }
            ClassKey::Curve(c) => {
                let (_, seg, seeds) = self.curve_segment(c)?;
                (seg, seeds, seg.line())
            }
        };
        let compact_arc = matches!(x, ClassKey::Arc(_));
        let depth = self.stabilized(|slack| {
            let mut best = f64::INFINITY;
            for k in 0..self.cusp_words().len() {
                let piece = self.cover_horocycle(k)?;
                let ck = self.cusp(k).width;
                let r = piece.covering_radius + slack;
                for (_, h) in self.candidates(&seeds, &seg, r, &piece)? {
                    let f = (h * self.cusp(k).frame).inverse();
                    let t_star = match f.apply_geodesic(&line).endpoints() {
                        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => {
                            if compact_arc {
                                compact_piece_depth(&f, &seg, ck)
                            } else {
                                2.0 * ck / (v - u).abs()
                            }
                        }
                        _ => 0.0,
                    };
                    best = best.min(t_star);
                }
            }
            Ok((best * 1e9).round() / 1e9)
        })?;
        Ok(if depth >= 2.0 { f64::INFINITY } else { depth })
    }

    /// Minimum over boundary translates of the distance to the closed
    /// geodesic.
    pub fn boundary_collar_clearance(&self, c: &ConjClass) -> Result<f64> {
        if self.boundary_words().is_empty() {
            return Err(Error::MissingFeature("boundary"));
        }
        let (_, seg, seeds) = self.curve_segment(c)?;
        let axis_c = seg.line();
        let mut pieces = Vec::new();
        for k in 0..self.boundary_words().len() {
            pieces.push((self.boundary_axes[k], self.boundary_piece(k)?.1));
        }
        let value = self.stabilized(|slack| {
            let mut best = f64::INFINITY;
            let mut r_extra = 0.0;
            loop {
                let mut cur = f64::INFINITY;
                for (ax, piece) in &pieces {
                    let r = piece.covering_radius + slack + r_extra;
                    for (_, h) in self.candidates(&seeds, &seg, r, piece)? {
                        let d = crate::hypalg::geodesic_distance(&axis_c, &h.apply_geodesic(ax))
                            .unwrap_or(0.0);
                        cur = cur.min(d);
                    }
                }
                best = best.min(cur);
                if best <= r_extra {
                    break;
                }
                r_extra = best;
            }
            Ok((best * 1e10).round() / 1e10)
        })?;
        Ok(value)
    }

    /// Number of transverse self-crossings of the geodesic representative.
    pub fn self_intersections(&self, x: &ClassKey) -> Result<usize> {
        match x {
            ClassKey::Curve(c) => self.curve_self_intersections(c),
            ClassKey::Arc(a) if a.kind() == ArcKind::Compact => self.compact_self_intersections(a),
            ClassKey::Arc(a) => self.infinite_self_intersections(a),
        }
    }

    fn curve_self_intersections(&self, c: &ConjClass) -> Result<usize> {
        // a proper power u^k crosses itself k²·ι(u) + k − 1 times
        let w = c.word().letters();
        let n = w.len();
        let period = (1..=n)
            .find(|&d| n % d == 0 && (0..n).all(|q| w[q] == w[q % d]))
            .expect("n is a period");
        if period < n {
            let k = n / period;
            let root = crate::words::conj_canonical(&Word::reduce(w[..period].iter().copied()))?;
            let i = self.curve_self_intersections(&root)?;
            return Ok(k * k * i + k - 1);
        }
        let (_, seg, seeds) = self.curve_segment(c)?;
        let line = seg.line();
        let (lo, hi) = seg.bounds();
        self.stabilized(|slack| {
            let piece = self.cover_segment(&seeds, &seg)?;
            let r = piece.covering_radius + slack;
            let mut lines: Vec<(BoundaryPoint, BoundaryPoint)> = Vec::new();
            let mut count = 0usize;
            for (_, h) in self.candidates(&seeds, &seg, r, &piece)? {
                let other = h.apply_geodesic(&line);
                let Some(s) = seg.crossing_param(&other) else {
                    continue;
                };
                if s < lo || s >= hi {
                    continue;
                }
                let ends = other.endpoints();
                let dup = lines.iter().any(|(p, q)| {
                    (p.approx_eq(&ends.0, 1e-9) && q.approx_eq(&ends.1, 1e-9))
                        || (p.approx_eq(&ends.1, 1e-9) && q.approx_eq(&ends.0, 1e-9))
                });
                if !dup {
                    lines.push(ends);
                    count += 1;
                }
            }
            Ok(count)
        })
        .and_then(|n| {
            if n % 2 == 1 {
                Err(Error::UndecidedAtCutoff { cutoff: *SLACKS.last().expect("non-empty") })
            } else {
                Ok(n / 2)
            }
        })
    }

    fn compact_self_intersections(&self, a: &ArcClass) -> Result<usize> {
        let seg = self.compact_segment(a)?;
        let seeds = self.end_seeds(a);
        let (lo, hi) = seg.bounds();
        let (p1, p2) = (seg.point_at(lo), seg.point_at(hi));
        let eps = 1e-9 * (hi - lo).max(1.0);
        let n = self.stabilized(|slack| {
            let piece = self.cover_segment(&seeds, &seg)?;
            let r = piece.covering_radius + slack;
            let mut count = 0usize;
            for (w, h) in self.candidates(&seeds, &seg, r, &piece)? {
                if w.is_empty() {
                    continue;
                }
                let other = Segment::new(h.apply(p1), h.apply(p2))?;
                let Some(s) = seg.crossing_param(&other.line()) else {
                    continue;
                };
                if s <= lo + eps || s >= hi - eps {
                    continue;
                }
                let y = seg.point_at(s);
                let (olo, ohi) = other.bounds();
                let so = other.param(y);
                if so > olo + eps && so < ohi - eps {
                    count += 1;
                }
            }
            Ok(count)
        })?;
        if n % 2 == 1 {
            return Err(Error::UndecidedAtCutoff { cutoff: *SLACKS.last().expect("non-empty") });
        }
        Ok(n / 2)
    }

    fn infinite_self_intersections(&self, a: &ArcClass) -> Result<usize> {
        let t = self.t_alpha(a)? / 2.0;
        let m = self.infinite_arc_frame(a)?;
        let (i, j) = a.ends();
        let (ci, cj) = (self.cusp(i).width, self.cusp(j).width);
        let [ma, _, mc, _] = m.entries();
        let x = ma / mc;
        let fi = self.cusp(i).frame;
        let top = fi.apply(Complex64::new(x, ci / t));
        let bottom = fi.apply(Complex64::new(x, t / (cj * mc * mc)));
        let seg = Segment::new(top, bottom)?;
        let line = seg.line();
        let seeds = self.end_seeds(a);
        // translates sharing an endpoint with the lift are decided on words:
        // for long arcs the endpoints sit closer than any numerical tolerance
        let (di, dj, v) = (self.end_word(ArcKind::Infinite, i), self.end_word(ArcKind::Infinite, j), a.word());
        let far = v.concat(dj).concat(&v.inverse());
        let commutes = |x: &Word, y: &Word| x.concat(y).concat(&x.inverse()).concat(&y.inverse()).is_empty();
        let shares = |w: &Word| {
            commutes(w, di)
                || commutes(w, &far)
                || (i == j && (commutes(&v.inverse().concat(w), di) || commutes(&w.concat(v), di)))
        };
        let n = self.stabilized(|slack| {
            let piece = self.cover_segment(&seeds, &seg)?;
            let r = piece.covering_radius + slack;
            let mut count = 0usize;
            for (w, h) in self.candidates(&seeds, &seg, r, &piece)? {
                if w.is_empty() || shares(&w) {
                    continue;
                }
                let other = h.apply_geodesic(&line);
                if line.crosses(&other) {
                    count += 1;
                }
            }
            Ok(count)
        })?;
        if n % 2 == 1 {
            return Err(Error::UndecidedAtCutoff { cutoff: *SLACKS.last().expect("non-empty") });
        }
        Ok(n / 2)
    }

    /// Lower bound over `t` of the `t`-length of an arc: used by censuses.
    pub fn end_to_end_lower_bound(&self, a: &ArcClass, t: f64) -> Result<f64> {
        let m = self.infinite_arc_frame(a)?;
        let (i, j) = a.ends();
        Ok(end_to_end_from_frame(&m, self.cusp(i).width, self.cusp(j).width, t))
    }
}

/// Area threshold at which a compact segment first touches the horoball at
/// `∞` of the frame `f` (width `c`): `t* = c / max height on the segment`.
fn compact_piece_depth(f: &Mat2, seg: &Segment, c: f64) -> f64 {
    let (lo, hi) = seg.bounds();
    let a = f.apply(seg.point_at(lo));
    let b = f.apply(seg.point_at(hi));
    let line = f.apply_geodesic(&seg.line());
    let top = match line.endpoints() {
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => {
            let centre = 0.5 * (u + v);
            let radius = 0.5 * (v - u).abs();
            let (xa, xb) = (a.re.min(b.re), a.re.max(b.re));
            if centre >= xa && centre <= xb {
                radius
            } else {
                a.im.max(b.im)
            }
        }
        _ => a.im.max(b.im),
    };
    c / top
}
