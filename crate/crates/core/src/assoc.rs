//! Association of arcs with curves: an arc `α` from end `i` to end `j` is
//! sent to the closed curve freely homotopic to `α·δ_j·α⁻¹·δ_i`, the third
//! cuff of the pair of pants immersed along `α` and its two ends.
//!
//! With the lift of `(i, w, j)` running from the end of `δ_i` to the
//! `w`-translate of the end of `δ_j`, that curve is the class of
//! `w·δ_j·w⁻¹·δ_i`.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::surface::{ArcClass, ArcKind, ClassKey, SurfaceModel};
use crate::words::{conj_canonical, ConjClass};

/// Associated curve of an arc of either kind.
pub fn associate(s: &SurfaceModel, a: &ArcClass) -> Result<ConjClass> {
    let (i, j) = a.ends();
    let (di, dj) = (s.end_word(a.kind(), i), s.end_word(a.kind(), j));
    let w = a.word();
    let word = w.concat(dj).concat(&w.inverse()).concat(di);
    if word.is_empty() {
        return Err(Error::DegenerateArc);
    }
    let c = conj_canonical(&word)?;
    // in a pair of pants every curve is a cuff
    if !s.is_pants_oracle() && s.is_peripheral(c.word()) {
        return Err(Error::DegenerateArc);
    }
    Ok(c)
}

/// Associated curve of a compact arc.
pub fn associate_compact(s: &SurfaceModel, a: &ArcClass) -> Result<ConjClass> {
    if a.kind() != ArcKind::Compact {
        return Err(Error::ArcMismatch(format!("{a} is not a compact arc")));
    }
    associate(s, a)
}

/// Associated curve of an infinite arc; it does not depend on the area of
/// the cusp regions used to truncate the arc.
pub fn associate_infinite(s: &SurfaceModel, a: &ArcClass) -> Result<ConjClass> {
    if a.kind() != ArcKind::Infinite {
        return Err(Error::ArcMismatch(format!("{a} is not an infinite arc")));
    }
    associate(s, a)
}

/// Length of the associated curve; cuffs of a pants model have their
/// boundary length.
pub fn associated_length(s: &SurfaceModel, c: &ConjClass) -> Result<f64> {
    match s.curve_length(c) {
        Err(Error::PeripheralOrInessential) if s.is_pants_oracle() => {
            crate::hypalg::translation_length(&s.word_matrix(c.word()))
        }
        other => other,
    }
}

/// Length of an arc: the orthogeodesic length for compact arcs, the
/// `t`-length for infinite ones.
pub fn arc_measure(s: &SurfaceModel, a: &ArcClass, t: Option<f64>) -> Result<f64> {
    match a.kind() {
        ArcKind::Compact => Ok(s.arc_length(a)?.length),
        ArcKind::Infinite => {
            let t = t.ok_or_else(|| Error::Config("infinite arcs need an area t".into()))?;
            Ok(s.infinite_arc_t_length(a, t)?.length)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRecord {
    pub arc: ArcClass,
    pub curve: ConjClass,
    pub arc_length: f64,
    pub curve_length: f64,
    /// `curve_length − 2·arc_length`.
    pub distortion: f64,
}

/// Associates `a` and measures both lengths; `t` is required for infinite
/// arcs.
pub fn association_record(s: &SurfaceModel, a: &ArcClass, t: Option<f64>) -> Result<AssociationRecord> {
    let curve = associate(s, a)?;
    let arc_length = arc_measure(s, a, t)?;
    let curve_length = associated_length(s, &curve)?;
    Ok(AssociationRecord {
        arc: a.clone(),
        curve,
        arc_length,
        curve_length,
        distortion: curve_length - 2.0 * arc_length,
    })
}

pub fn write_association_csv<W: Write>(records: &[AssociationRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["arc", "curve", "arc_length", "curve_length", "distortion"])?;
    for r in records {
        w.write_record([
            r.arc.to_string(),
            r.curve.to_string(),
            format!("{:.16e}", r.arc_length),
            format!("{:.16e}", r.curve_length),
            format!("{:.16e}", r.distortion),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Arcs grouped by associated curve.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberStatistics {
    pub fibers: BTreeMap<ConjClass, Vec<ArcClass>>,
    /// The common fiber size, when all targets share one.
    pub k: Option<usize>,
}

impl FiberStatistics {
    pub fn sizes(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for v in self.fibers.values() {
            *out.entry(v.len()).or_insert(0) += 1;
        }
        out
    }
}

/// Fibers of the association map over `targets` (curves with their
/// lengths), computed from `arcs`, which must contain every arc of the
/// relevant type with length at most `complete_to`. Arcs over a curve of
/// length `ℓ` have length at most `(ℓ + c)/2`, so a target beyond
/// `2·complete_to − c` could have an undercounted fiber and is refused.
pub fn fiber_statistics(
    s: &SurfaceModel,
    arcs: &[ArcClass],
    complete_to: f64,
    targets: &[(ConjClass, f64)],
    c: f64,
) -> Result<FiberStatistics> {
    if let Some((g, l)) = targets.iter().find(|(_, l)| *l > 2.0 * complete_to - c) {
        return Err(Error::NotCertified(format!(
            "fiber over {g} (length {l:.6}) needs arcs up to {:.6}, census reaches {complete_to:.6}",
            (l + c) / 2.0
        )));
    }
    let mut fibers: BTreeMap<ConjClass, Vec<ArcClass>> =
        targets.iter().map(|(g, _)| (g.clone(), Vec::new())).collect();
    for a in arcs {
        let g = associate(s, a)?;
        if let Some(v) = fibers.get_mut(&g) {
            v.push(a.clone());
        }
    }
    for v in fibers.values_mut() {
        v.sort();
    }
    let mut sizes = fibers.values().map(Vec::len);
    let first = sizes.next();
    let k = first.filter(|&k| sizes.all(|x| x == k));
    Ok(FiberStatistics { fibers, k })
}

/// Positively weighted combination of curves or arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiClass {
    components: Vec<(f64, ClassKey)>,
}

impl MultiClass {
    pub fn new(components: Vec<(f64, ClassKey)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::BadKey("empty multi-class".into()));
        }
        if let Some((w, k)) = components.iter().find(|(w, _)| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::BadKey(format!("weight {w} on {k}")));
        }
        Ok(MultiClass { components })
    }

    pub fn components(&self) -> &[(f64, ClassKey)] {
        &self.components
    }

    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|(w, _)| w).sum()
    }
}

/// `Σ weight·length`, with infinite arcs measured at area `t`.
pub fn multi_length(s: &SurfaceModel, m: &MultiClass, t: Option<f64>) -> Result<f64> {
    m.components
        .iter()
        .map(|(w, k)| {
            let l = match k {
                ClassKey::Curve(c) => associated_length(s, c)?,
                ClassKey::Arc(a) => arc_measure(s, a, t)?,
            };
            Ok(w * l)
        })
        .sum()
}

/// Componentwise association; curve components are kept as they are.
pub fn associate_multi(s: &SurfaceModel, m: &MultiClass) -> Result<MultiClass> {
    let components = m
        .components
        .iter()
        .map(|(w, k)| {
            Ok(match k {
                ClassKey::Curve(c) => (*w, ClassKey::Curve(c.clone())),
                ClassKey::Arc(a) => (*w, ClassKey::Curve(associate(s, a)?)),
            })
        })
        .collect::<Result<_>>()?;
    MultiClass::new(components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{enumerate_compact_arcs, enumerate_infinite_arcs, CensusOptions};
    use crate::hypalg::acosh_guarded;
    use crate::pantsform::{bound_c_of_x, curve_len_from_arc, PantsDims};
    use crate::surface::{build_pants, build_punctured_torus, preset};
    use crate::words::Word;
    use proptest::prelude::*;

    fn class(s: &str) -> ConjClass {
        ConjClass::parse(s).unwrap()
    }

    #[test]
    fn pants_seam_goes_to_the_third_cuff() {
        let s = build_pants([Some(1.0), Some(2.0), Some(3.0)]).unwrap();
        let seam = s.arc(ArcKind::Compact, 0, &Word::identity(), 1).unwrap();
        let g = associate_compact(&s, &seam).unwrap();
        assert_eq!(g, class("AB"));
        assert!((associated_length(&s, &g).unwrap() - 3.0).abs() < 1e-10);
        let r = association_record(&s, &seam, None).unwrap();
        let dims = PantsDims::new(1.0, 2.0).unwrap();
        let pred = curve_len_from_arc(&dims, r.arc_length).unwrap();
        assert!((pred - 3.0).abs() < 1e-9);
    }

    #[test]
    fn cusped_pants_seam_goes_to_the_boundary() {
        let s = preset("cusped-pants").unwrap();
        let seam = s.arc(ArcKind::Infinite, 0, &Word::identity(), 1).unwrap();
        assert_eq!(associate_infinite(&s, &seam).unwrap(), class("ab"));
    }

    #[test]
    fn flip_gives_the_same_curve() {
        let s = preset("one-holed-torus").unwrap();
        let w = Word::parse("aaB").unwrap();
        let a = s.arc(ArcKind::Compact, 0, &w, 0).unwrap();
        let raw = ArcClass::parse_key("b0:bAA:b0").unwrap();
        let b = s.arc(raw.0, raw.1, &raw.2, raw.3).unwrap();
        assert_eq!(associate(&s, &a).unwrap(), associate(&s, &b).unwrap());
        assert!(matches!(
            associate_infinite(&s, &a),
            Err(Error::ArcMismatch(_))
        ));
    }

    #[test]
    fn cusp_identity_for_simple_arcs() {
        let s = build_punctured_torus().unwrap();
        for key in ["p0:a:p0", "p0:b:p0", "p0:ab:p0", "p0:aab:p0"] {
            let a = s.arc_from_key(key).unwrap();
            let g = associated_length(&s, &associate(&s, &a).unwrap()).unwrap();
            for t in [1.0, 0.5, 0.25] {
                let lt = s.infinite_arc_t_length(&a, t).unwrap().length;
                let pred = 4.0 * acosh_guarded(t / 2.0 * (lt / 2.0).exp());
                assert!((g - pred).abs() < 1e-8, "{key} t={t}");
            }
        }
    }

    #[test]
    fn compact_distortion_within_the_bound() {
        let s = preset("one-holed-torus").unwrap();
        let c = bound_c_of_x(s.boundary_lengths()).unwrap();
        let census = enumerate_compact_arcs(&s, 6.0, &CensusOptions::default()).unwrap();
        assert!(!census.records.is_empty());
        for r in &census.records {
            let ClassKey::Arc(a) = &r.key else { unreachable!() };
            let rec = association_record(&s, a, None).unwrap();
            assert!(rec.distortion.abs() <= c, "{a}: {} > {c}", rec.distortion);
        }
    }

    #[test]
    fn fibers_are_disjoint_and_guarded() {
        let s = preset("one-holed-torus").unwrap();
        let c = bound_c_of_x(s.boundary_lengths()).unwrap();
        let census = enumerate_compact_arcs(&s, 6.0, &CensusOptions::default()).unwrap();
        let arcs: Vec<ArcClass> = census
            .records
            .iter()
            .filter_map(|r| match &r.key {
                ClassKey::Arc(a) => Some(a.clone()),
                _ => None,
            })
            .collect();
        let targets: Vec<(ConjClass, f64)> = ["a", "b", "ab"]
            .iter()
            .map(|k| (class(k), s.curve_length(&class(k)).unwrap()))
            .collect();
        let f = fiber_statistics(&s, &arcs, 6.0, &targets, c).unwrap();
        let total: usize = f.fibers.values().map(Vec::len).sum();
        let mut all: Vec<&ArcClass> = f.fibers.values().flatten().collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), total);
        assert!(fiber_statistics(&s, &arcs, 1.0, &targets, c).is_err());
    }

    #[test]
    fn multi_lengths_are_weighted_sums() {
        let s = preset("one-holed-torus").unwrap();
        let a1 = s.arc_from_key("b0:a:b0").unwrap();
        let a2 = s.arc_from_key("b0:b:b0").unwrap();
        let (l1, l2) = (s.arc_length(&a1).unwrap().length, s.arc_length(&a2).unwrap().length);
        let m = MultiClass::new(vec![(2.0, ClassKey::Arc(a1.clone())), (3.0, ClassKey::Arc(a2.clone()))]).unwrap();
        assert!((multi_length(&s, &m, None).unwrap() - (2.0 * l1 + 3.0 * l2)).abs() < 1e-12);
        let single = MultiClass::new(vec![(1.0, ClassKey::Arc(a1.clone()))]).unwrap();
        let g = associate_multi(&s, &single).unwrap();
        assert_eq!(g.components()[0].1, ClassKey::Curve(associate(&s, &a1).unwrap()));
        let img = associate_multi(&s, &m).unwrap();
        let c = bound_c_of_x(s.boundary_lengths()).unwrap();
        let d = multi_length(&s, &img, None).unwrap() - 2.0 * multi_length(&s, &m, None).unwrap();
        assert!(d.abs() <= m.total_weight() * c);
        assert!(MultiClass::new(vec![(0.0, ClassKey::Arc(a1))]).is_err());
    }

    #[test]
    fn infinite_association_ignores_t() {
        let s = build_punctured_torus().unwrap();
        let census = enumerate_infinite_arcs(&s, 5.0, 1.0, &CensusOptions::default()).unwrap();
        for r in &census.records {
            let ClassKey::Arc(a) = &r.key else { unreachable!() };
            let ta = s.t_alpha(a).unwrap();
            let g = associate_infinite(&s, a).unwrap();
            for t in [ta, ta / 2.0, ta / 4.0] {
                let rec = association_record(&s, a, Some(t)).unwrap();
                assert_eq!(rec.curve, g);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn representative_independence(p in -3i64..=3, q in -3i64..=3, idx in 0usize..4) {
            let s = preset("one-holed-torus").unwrap();
            let key = ["b0:a:b0", "b0:ab:b0", "b0:aab:b0", "b0:aBB:b0"][idx];
            let a = s.arc_from_key(key).unwrap();
            let d = s.boundary_words()[0].clone();
            let moved = d.pow(p).concat(a.word()).concat(&d.pow(q));
            let b = s.arc(ArcKind::Compact, 0, &moved, 0).unwrap();
            prop_assert_eq!(associate(&s, &a).unwrap(), associate(&s, &b).unwrap());
        }
    }
}
