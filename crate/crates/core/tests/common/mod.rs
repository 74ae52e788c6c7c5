//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use arccount::hypalg::{point_distance, Horoball, IdealGeodesic};
use arccount::surface::{ArcClass, ArcKind, ClassKey, SurfaceModel};
use arccount::words::{conj_canonical, Word};
use num_complex::Complex64;

/// Every reduced word of length at most `n`.
pub fn all_words(rank: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Vec::<u8>::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &frontier {
            for l in 0..(2 * rank) as u8 {
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

/// Curve classes with a representative of word length at most `n` and
/// length at most `l`.
pub fn brute_curves(s: &SurfaceModel, n: usize, l: f64) -> BTreeSet<ClassKey> {
    all_words(s.rank(), n)
        .into_iter()
        .filter(|w| !w.is_empty())
        .filter_map(|w| conj_canonical(&w).ok())
        .filter(|c| s.curve_length(c).is_ok_and(|x| x <= l))
        .map(ClassKey::Curve)
        .collect()
}

/// Arc classes with a connecting word of length at most `n` passing `keep`.
pub fn brute_arcs(s: &SurfaceModel, kind: ArcKind, n: usize, keep: impl Fn(&ArcClass) -> bool) -> BTreeSet<ClassKey> {
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

/// Minimum of a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    f1.min(f2)
}

/// Point of `g` at signed arc length `s` from its top point.
pub fn point_on(g: &IdealGeodesic, s: f64) -> Complex64 {
    g.normalizer().inverse().apply(Complex64::new(0.0, s.exp()))
}

/// Distance between two geodesics as a minimum over pairs of points.
pub fn minimized_distance(g1: &IdealGeodesic, g2: &IdealGeodesic) -> f64 {
    golden_min(
        |s| golden_min(|u| point_distance(point_on(g1, s), point_on(g2, u)), -30.0, 30.0),
        -30.0,
        30.0,
    )
}

/// Signed distance between two disjoint horoballs, from their Euclidean
/// data.
pub fn horoball_distance(h1: &Horoball, h2: &Horoball) -> f64 {
    use arccount::hypalg::BoundaryPoint::{Finite, Infinity};
    match (h1.base, h2.base) {
        (Infinity, Finite(_)) => (h1.size / h2.size).ln(),
        (Finite(_), Infinity) => (h2.size / h1.size).ln(),
        (Finite(x), Finite(y)) => ((x - y).powi(2) / (h1.size * h2.size)).ln(),
        (Infinity, Infinity) => f64::NAN,
    }
}
