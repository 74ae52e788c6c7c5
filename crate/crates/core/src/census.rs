//! Enumeration of every curve or arc class up to a length bound.
//!
//! Each class has a representative anchored near the base point: a curve
//! whose axis passes within the thick-part covering radius `ρ` of `z₀`, or an
//! arc whose first foot (or first exit from the area-1 cusp region) lies on a
//! fixed fundamental piece of its starting end. Anchored representatives of
//! classes of length `ℓ` have orbit points within `ℓ + const` of the anchor,
//! so a tree search over that neighbourhood finds them all. The search runs
//! three unit strata past the required radius; the census is certified when
//! the shortest anchored class in each of those strata exceeds `L + margin`.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypalg::{acosh_guarded, axis, point_distance, point_geodesic_distance, BoundaryPoint, IdealGeodesic, Mat2};
use crate::surface::{end_to_end_from_frame, ArcKind, ClassKey, Search, SurfaceModel};
use crate::words::{conj_canonical, Letter, Word};

/// Number of trailing strata inspected by the certificate.
pub const CERTIFYING_STRATA: usize = 3;
/// Tolerance for the raw-length prefilter; final lengths come from the
/// canonical representative.
/// Slack on the fundamental pieces when collecting candidates; classes
/// found twice are merged after canonicalization.
const ANCHOR_TOL: f64 = 1e-7;
const PREFILTER: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecordKind {
    Curve,
    CompactArc,
    InfiniteArc,
}

impl RecordKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::Curve => "curve",
            RecordKind::CompactArc => "compact_arc",
            RecordKind::InfiniteArc => "infinite_arc",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusRecord {
    pub kind: RecordKind,
    pub key: ClassKey,
    /// Geodesic length; for infinite arcs the length between the two end
    /// cusp regions of area `t`.
    pub length: f64,
    pub word_length: usize,
    pub t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusCertificate {
    pub max_word_length_scanned: usize,
    /// Shortest anchored class in each of the final strata (`∞` if empty).
    pub min_length_last_strata: Vec<f64>,
    pub margin: f64,
    pub search_radius: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusOptions {
    pub margin: f64,
    /// Maximum number of explored group elements per search.
    pub budget: usize,
    /// Extra radius through which the tree search may pass.
    pub slack: f64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            margin: 2.0,
            budget: 20_000_000,
            slack: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub kind: RecordKind,
    pub max_length: f64,
    pub t: Option<f64>,
    /// Sorted by `(length, key)`.
    pub records: Vec<CensusRecord>,
    pub certificate: CensusCertificate,
}

impl Census {
    /// Number of records with length at most `l`.
    pub fn count_le(&self, l: f64) -> usize {
        self.records.partition_point(|r| r.length <= l)
    }

    pub fn keys(&self) -> Vec<ClassKey> {
        self.records.iter().map(|r| r.key.clone()).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["kind", "key", "length", "word_length", "t"])?;
        for r in &self.records {
            w.write_record([
                r.kind.as_str().to_string(),
                r.key.to_string(),
                format!("{:.16e}", r.length),
                r.word_length.to_string(),
                r.t.map(|t| format!("{t:.16e}")).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Certificate rule: every inspected stratum's minimum exceeds `l + margin`.
pub fn strata_certify(minima: &[f64], l: f64, margin: f64) -> bool {
    minima.len() == CERTIFYING_STRATA && minima.iter().all(|&m| m > l + margin)
}

/// Raw candidate found during a search, before canonicalization.
struct Found {
    letters: Vec<Letter>,
    length: f64,
}

#[derive(Default)]
struct Acc {
    found: Vec<Found>,
    strata: BTreeMap<usize, f64>,
    max_len: usize,
}

impl Acc {
    fn stratum(&mut self, d: f64, length: f64) {
        let e = self.strata.entry(d.floor().max(0.0) as usize).or_insert(f64::INFINITY);
        *e = e.min(length);
    }
}

struct Outcome {
    found: Vec<Found>,
    /// Minima over the final strata of the search.
    last: Vec<f64>,
    max_len: usize,
    radius: usize,
    complete: bool,
}

/// Runs a search out to `core + CERTIFYING_STRATA` (rounded up), shrinking
/// the radius when the budget runs out.
fn run<F>(s: &SurfaceModel, dist: &(dyn Fn(Complex64) -> f64 + Sync), core: f64, opts: &CensusOptions, seeds: &[Word], visit: F) -> Result<Outcome>
where
    F: Fn(&mut Acc, &[Letter], &Mat2, f64) + Sync,
{
    let mut radius = core.max(0.0).ceil() as usize + CERTIFYING_STRATA;
    let mut complete = true;
    loop {
        let p = Search {
            dist,
            radius: radius as f64,
            expand: radius as f64 + opts.slack,
            seeds,
            budget: opts.budget,
        };
        let res = s.search(&p, Acc::default, |acc, w, m, d| {
            acc.max_len = acc.max_len.max(w.len());
            visit(acc, w, m, d)
        });
        match res {
            Ok(parts) => {
                let mut found = Vec::new();
                let mut strata: BTreeMap<usize, f64> = BTreeMap::new();
                let mut max_len = 0;
                for mut a in parts {
                    found.append(&mut a.found);
                    max_len = max_len.max(a.max_len);
                    for (k, v) in a.strata {
                        let e = strata.entry(k).or_insert(f64::INFINITY);
                        *e = e.min(v);
                    }
                }
                let last = (radius - CERTIFYING_STRATA..radius)
                    .map(|k| strata.get(&k).copied().unwrap_or(f64::INFINITY))
                    .collect();
                return Ok(Outcome { found, last, max_len, radius, complete });
            }
            Err(Error::BudgetExceeded(_)) if radius > CERTIFYING_STRATA => {
                complete = false;
                radius -= 1;
            }
            Err(e) => return Err(e),
        }
    }
}

fn finish(kind: RecordKind, l: f64, t: Option<f64>, opts: &CensusOptions, out: &Outcome, mut records: Vec<CensusRecord>) -> Census {
    records.sort_by(|a, b| a.length.total_cmp(&b.length).then_with(|| a.key.cmp(&b.key)));
    records.dedup_by(|a, b| a.key == b.key);
    let minima = out.last.clone();
    let certified = out.complete && strata_certify(&minima, l, opts.margin);
    Census {
        kind,
        max_length: l,
        t,
        records,
        certificate: CensusCertificate {
            max_word_length_scanned: out.max_len,
            min_length_last_strata: minima,
            margin: opts.margin,
            search_radius: out.radius as f64,
            certified,
        },
    }
}

/// All non-peripheral curve classes (including proper powers) of length at
/// most `l`.
pub fn enumerate_curves(s: &SurfaceModel, l: f64, opts: &CensusOptions) -> Result<Census> {
    if !(l > 0.0) {
        return Err(Error::Config(format!("length bound must be positive, got {l}")));
    }
    let rho = s.thick_radius()?;
    let z0 = s.basepoint();
    let dist = move |z: Complex64| point_distance(z, z0);
    let out = run(s, &dist, l + 2.0 * rho + opts.margin, opts, &[], |acc, w, m, d| {
        if m.trace().abs() <= 2.0 + 1e-9 {
            return;
        }
        let len = 2.0 * acosh_guarded(m.trace().abs() / 2.0);
        let anchored = axis(m)
            .and_then(|ax| point_geodesic_distance(z0, &ax))
            .is_ok_and(|r| r <= rho);
        if anchored {
            acc.stratum(d, len);
        }
        if len <= l + PREFILTER {
            acc.found.push(Found { letters: w.to_vec(), length: len });
        }
    })?;
    let mut classes = BTreeMap::new();
    for f in &out.found {
        let c = conj_canonical(&Word::reduce(f.letters.iter().copied()))?;
        classes.entry(c).or_insert(f.length);
    }
    let mut records = Vec::new();
    for c in classes.into_keys() {
        if let Ok(len) = s.curve_length(&c) {
            if len <= l {
                records.push(CensusRecord {
                    kind: RecordKind::Curve,
                    word_length: c.word().len(),
                    key: ClassKey::Curve(c),
                    length: len,
                    t: None,
                });
            }
        }
    }
    Ok(finish(RecordKind::Curve, l, None, opts, &out, records))
}

/// All compact arc classes (over every pair of boundary components) of
/// orthogeodesic length at most `l`.
pub fn enumerate_compact_arcs(s: &SurfaceModel, l: f64, opts: &CensusOptions) -> Result<Census> {
    let n = s.end_count(ArcKind::Compact);
    if n == 0 {
        return Err(Error::MissingFeature("boundary"));
    }
    let pieces = (0..n).map(|k| s.boundary_piece(k)).collect::<Result<Vec<_>>>()?;
    let mut records = Vec::new();
    let mut merged: Option<Outcome> = None;
    for i in 0..n {
        let (phi, _) = &pieces[i];
        let frame = phi.frame();
        let (lo, hi) = phi.bounds();
        for j in 0..n {
            let (phi_j, cover_j) = &pieces[j];
            let ax_i = s.boundary_axis(i);
            let ax_j = s.boundary_axis(j);
            let frame_j = phi_j.frame();
            let (lo_j, hi_j) = phi_j.bounds();
            let (z0, r_j) = (s.basepoint(), cover_j.search_radius);
            let inv: Vec<(Vec<Letter>, Mat2, Mat2)> = cover_j
                .elements
                .iter()
                .map(|(w, m)| (w.inverse().letters().to_vec(), m.inverse(), frame_j * *m))
                .collect();
            // foot of the common perpendicular on the imaginary axis
            let foot_on_axis = |g: &IdealGeodesic| match g.endpoints() {
                (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) if p * q > 0.0 => Some(0.5 * (p * q).ln()),
                _ => None,
            };
            let dist = |z: Complex64| phi.distance_to(z);
            let out = run(s, &dist, l + cover_j.search_radius + opts.margin, opts, &[], |acc, w, g, d| {
                let g_inv = g.inverse();
                for (vl, vinv, fv) in &inv {
                    let other = (frame * *g * *vinv).apply_geodesic(&ax_j);
                    let (p, q) = match other.endpoints() {
                        (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) if p * q > 0.0 => {
                            (p.abs().min(q.abs()), p.abs().max(q.abs()))
                        }
                        _ => continue,
                    };
                    if (q - p) <= 1e-14 * q {
                        continue;
                    }
                    let len = acosh_guarded((p + q) / (q - p));
                    let foot = 0.5 * (p * q).ln();
                    if !(foot >= lo - ANCHOR_TOL && foot < hi + ANCHOR_TOL) {
                        continue;
                    }
                    let Some(foot_j) = foot_on_axis(&(*fv * g_inv).apply_geodesic(&ax_i)) else {
                        continue;
                    };
                    if !(foot_j >= lo_j - ANCHOR_TOL && foot_j < hi_j + ANCHOR_TOL) {
                        continue;
                    }
                    let near = point_distance(fv.apply(z0), Complex64::new(0.0, foot_j.exp())) <= r_j;
                    if foot >= lo && foot < hi && foot_j >= lo_j && foot_j < hi_j && near {
                        acc.stratum(d, len);
                    }
                    if len <= l + PREFILTER {
                        let mut letters = w.to_vec();
                        letters.extend_from_slice(vl);
                        acc.found.push(Found { letters, length: len });
                    }
                }
            })?;
            for f in &out.found {
                let wd = Word::reduce(f.letters.iter().copied());
                let Ok(a) = s.arc(ArcKind::Compact, i, &wd, j) else {
                    continue;
                };
                if let Ok(r) = s.arc_length(&a) {
                    if r.length <= l {
                        records.push(CensusRecord {
                            kind: RecordKind::CompactArc,
                            word_length: a.word().len(),
                            key: ClassKey::Arc(a),
                            length: r.length,
                            t: None,
                        });
                    }
                }
            }
            merged = Some(merge(merged, out));
        }
    }
    let out = merged.expect("at least one boundary pair");
    Ok(finish(RecordKind::CompactArc, l, None, opts, &out, records))
}

/// All infinite arc classes whose length between the two end cusp regions
/// of area `t` is at most `l`.
pub fn enumerate_infinite_arcs(s: &SurfaceModel, l: f64, t: f64, opts: &CensusOptions) -> Result<Census> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::BadArea(t));
    }
    let n = s.end_count(ArcKind::Infinite);
    if n == 0 {
        return Err(Error::MissingFeature("cusps"));
    }
    let pieces = (0..n).map(|k| s.horocycle_piece(k, 1.0)).collect::<Result<Vec<_>>>()?;
    // the lift between the area-1 regions is 2 ln(1/t) shorter
    let l1 = l - 2.0 * (1.0 / t).ln();
    let mut records = Vec::new();
    let mut merged: Option<Outcome> = None;
    for i in 0..n {
        let (chord, dev, _) = &pieces[i];
        let ci = s.cusp_width(i);
        let fi_inv = s.cusp_frame(i).inverse();
        let x0 = fi_inv.apply(s.basepoint()).re;
        for j in 0..n {
            let (_, _, cover_j) = &pieces[j];
            let cj = s.cusp_width(j);
            let fj = s.cusp_frame(j);
            let x0_j = fj.inverse().apply(s.basepoint()).re;
            let fj_inv = fj.inverse();
            let inv: Vec<(Vec<Letter>, Mat2, Complex64)> = cover_j
                .elements
                .iter()
                .map(|(w, m)| (w.inverse().letters().to_vec(), m.inverse() * fj, (fj_inv * *m).apply(s.basepoint())))
                .collect();
            let (_, dev_j, _) = &pieces[j];
            let near_j = cover_j.search_radius + dev_j;
            let dist = |z: Complex64| chord.distance_to(z);
            let core = l1.max(0.0) + cover_j.search_radius + 2.0 * dev + opts.margin;
            let out = run(s, &dist, core, opts, &[], |acc, w, g, d| {
                for (vl, vinv, vz) in &inv {
                    let m = fi_inv * *g * *vinv;
                    let [ma, _, mc, md] = m.entries();
                    if mc.abs() < 1e-12 * m.scale() {
                        continue;
                    }
                    let len = end_to_end_from_frame(&m, ci, cj, t);
                    let shifted = ma / mc - x0 + ci / 2.0;
                    let xj = -md / mc;
                    let shifted_j = xj - x0_j + cj / 2.0;
                    let loose = |x: f64, c: f64| x >= -ANCHOR_TOL * c && x < c * (1.0 + ANCHOR_TOL);
                    if !(loose(shifted, ci) && loose(shifted_j, cj)) {
                        continue;
                    }
                    let anchored = shifted >= 0.0
                        && shifted < ci
                        && shifted_j >= 0.0
                        && shifted_j < cj
                        && point_distance(*vz, Complex64::new(xj, cj)) <= near_j;
                    if anchored {
                        acc.stratum(d, len);
                    }
                    if len <= l + PREFILTER {
                        let mut letters = w.to_vec();
                        letters.extend_from_slice(vl);
                        acc.found.push(Found { letters, length: len });
                    }
                }
            })?;
            for f in &out.found {
                let wd = Word::reduce(f.letters.iter().copied());
                let Ok(a) = s.arc(ArcKind::Infinite, i, &wd, j) else {
                    continue;
                };
                if let Ok(len) = s.end_to_end_length(&a, t) {
                    if len <= l {
                        records.push(CensusRecord {
                            kind: RecordKind::InfiniteArc,
                            word_length: a.word().len(),
                            key: ClassKey::Arc(a),
                            length: len,
                            t: Some(t),
                        });
                    }
                }
            }
            merged = Some(merge(merged, out));
        }
    }
    let out = merged.expect("at least one cusp pair");
    Ok(finish(RecordKind::InfiniteArc, l, Some(t), opts, &out, records))
}

/// Combines end-pair searches: final-stratum minima are combined
/// position by position.
fn merge(acc: Option<Outcome>, next: Outcome) -> Outcome {
    let next = Outcome { found: Vec::new(), ..next };
    let Some(mut a) = acc else {
        return next;
    };
    for (x, y) in a.last.iter_mut().zip(&next.last) {
        *x = x.min(*y);
    }
    a.max_len = a.max_len.max(next.max_len);
    a.complete &= next.complete;
    a.radius = a.radius.max(next.radius);
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{build_punctured_torus, preset};
    use std::collections::BTreeSet;

    /// Every reduced word up to `n` letters over `rank` generators.
    fn all_words(rank: usize, n: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        let mut frontier = vec![Vec::<Letter>::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &frontier {
                for l in 0..(2 * rank) as Letter {
                    if w.last() == Some(&(l ^ 1)) {
                        continue;
                    }
                    let mut x = w.clone();
                    x.push(l);
                    out.push(Word::reduce(x.iter().copied()));
                    next.push(x);
                }
            }
            frontier = next;
        }
        out
    }

    fn brute_curves(s: &SurfaceModel, n: usize, l: f64) -> BTreeSet<ClassKey> {
        all_words(s.rank(), n)
            .into_iter()
            .filter(|w| !w.is_empty())
            .filter_map(|w| conj_canonical(&w).ok())
            .filter(|c| s.curve_length(c).is_ok_and(|x| x <= l))
            .map(ClassKey::Curve)
            .collect()
    }

    fn brute_arcs(s: &SurfaceModel, kind: ArcKind, n: usize, keep: impl Fn(&crate::surface::ArcClass) -> bool) -> BTreeSet<ClassKey> {
        let mut out = BTreeSet::new();
        let ends = s.end_count(kind);
        for w in all_words(s.rank(), n) {
            for i in 0..ends {
                for j in 0..ends {
                    if let Ok(a) = s.arc(kind, i, &w, j) {
                        if keep(&a) {
                            out.insert(ClassKey::Arc(a));
                        }
                    }
                }
            }
        }
        out
    }

    fn key_set(c: &Census) -> BTreeSet<ClassKey> {
        c.keys().into_iter().collect()
    }

    #[test]
    fn modular_torus_systole() {
        let s = build_punctured_torus().unwrap();
        let sys = 2.0 * 1.5f64.acosh();
        let opts = CensusOptions::default();
        assert!(enumerate_curves(&s, sys - 1e-3, &opts).unwrap().records.is_empty());
        let c = enumerate_curves(&s, sys + 1e-6, &opts).unwrap();
        assert!(c.certificate.certified);
        assert_eq!(key_set(&c), brute_curves(&s, 6, sys + 1e-6));
        assert_eq!(c.records.len(), 3);
    }

    #[test]
    fn curve_census_matches_brute_force() {
        for (name, l) in [("one-holed-torus", 7.0), ("punctured-torus", 5.0), ("cusped-pants", 5.0)] {
            let s = preset(name).unwrap();
            let c = enumerate_curves(&s, l, &CensusOptions::default()).unwrap();
            assert!(c.certificate.certified, "{name}");
            assert!(c.records.iter().all(|r| r.word_length <= 6), "{name}: lower L");
            assert_eq!(key_set(&c), brute_curves(&s, 6, l), "{name}");
        }
    }

    #[test]
    fn compact_arc_census_matches_brute_force() {
        for (name, l) in [("one-holed-torus", 3.5), ("pants", 4.0), ("cusped-pants", 3.0)] {
            let s = preset(name).unwrap();
            let c = enumerate_compact_arcs(&s, l, &CensusOptions::default()).unwrap();
            assert!(c.certificate.certified, "{name}");
            assert!(c.records.iter().all(|r| r.word_length <= 6), "{name}: lower L");
            let brute = brute_arcs(&s, ArcKind::Compact, 6, |a| {
                s.arc_length(a).is_ok_and(|r| r.length <= l)
            });
            assert_eq!(key_set(&c), brute, "{name}");
        }
    }

    #[test]
    fn infinite_arc_census_matches_brute_force() {
        for (name, l, t) in [("punctured-torus", 4.0, 1.0), ("punctured-torus", 5.0, 0.5), ("cusped-pants", 4.0, 1.0)] {
            let s = preset(name).unwrap();
            let c = enumerate_infinite_arcs(&s, l, t, &CensusOptions::default()).unwrap();
            assert!(c.certificate.certified, "{name}");
            assert!(c.records.iter().all(|r| r.word_length <= 6), "{name}: lower L");
            let brute = brute_arcs(&s, ArcKind::Infinite, 6, |a| {
                s.end_to_end_length(a, t).is_ok_and(|x| x <= l)
            });
            assert_eq!(key_set(&c), brute, "{name} t={t}");
        }
    }

    #[test]
    fn counts_grow_and_margin_is_irrelevant() {
        let s = preset("one-holed-torus").unwrap();
        let a = enumerate_compact_arcs(&s, 6.0, &CensusOptions::default()).unwrap();
        let b = enumerate_compact_arcs(&s, 6.0, &CensusOptions { margin: 4.0, ..Default::default() }).unwrap();
        assert_eq!(a.records, b.records);
        let counts: Vec<usize> = [2.0, 3.0, 4.0, 5.0, 6.0].iter().map(|&l| a.count_le(l)).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        let small = enumerate_compact_arcs(&s, 4.0, &CensusOptions::default()).unwrap();
        assert_eq!(small.records[..], a.records[..a.count_le(4.0)]);
    }

    #[test]
    fn smaller_area_gives_a_subcensus() {
        let s = build_punctured_torus().unwrap();
        let big = key_set(&enumerate_infinite_arcs(&s, 5.0, 1.0, &CensusOptions::default()).unwrap());
        let small = key_set(&enumerate_infinite_arcs(&s, 5.0, 0.5, &CensusOptions::default()).unwrap());
        assert!(small.is_subset(&big) && small.len() < big.len());
    }

    #[test]
    fn low_class_in_a_late_stratum_breaks_the_certificate() {
        assert!(strata_certify(&[9.0, 10.0, 11.0], 6.0, 2.0));
        assert!(!strata_certify(&[9.0, 7.5, 11.0], 6.0, 2.0));
        assert!(!strata_certify(&[9.0, 10.0], 6.0, 2.0));
        let s = preset("one-holed-torus").unwrap();
        let tight = CensusOptions { budget: 50, ..Default::default() };
        let c = enumerate_compact_arcs(&s, 6.0, &tight).unwrap();
        assert!(!c.certificate.certified);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let s = build_punctured_torus().unwrap();
        let c = enumerate_infinite_arcs(&s, 3.0, 1.0, &CensusOptions::default()).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("kind,key,length,word_length,t"));
        assert_eq!(lines.count(), c.records.len());
    }
}
