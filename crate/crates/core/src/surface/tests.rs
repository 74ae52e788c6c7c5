use super::*;
use crate::hypalg::acosh_guarded;
use crate::pantsform::{arc_len_from_curve, cusp_curve_from_t_len, CuspQuadDims, PantsDims};

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn class(s: &str) -> ConjClass {
    ConjClass::parse(s).unwrap()
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * y.abs().max(1.0)
}

#[test]
fn one_holed_torus_boundary() {
    let s = build_one_holed_torus(4.0, 4.0, 4.0).unwrap();
    assert_eq!(s.signature(), (1, 1, 0));
    let m = s.word_matrix(&w("abAB"));
    assert!(close(m.trace().abs(), 18.0, 1e-12));
    assert!(close(s.boundary_lengths()[0], 2.0 * 9f64.acosh(), 1e-12));
    let [a, b] = [s.generators()[0], s.generators()[1]];
    assert!(close(a.trace(), 4.0, 1e-14) && close(b.trace(), 4.0, 1e-14));
    assert!(close((a * b).trace().abs(), 4.0, 1e-12));
}

#[test]
fn one_holed_torus_rejects_cusp_traces() {
    assert!(matches!(
        build_one_holed_torus(3.0, 3.0, 3.0),
        Err(Error::NotBoundarySurface(_))
    ));
}

#[test]
fn modular_torus() {
    let s = build_punctured_torus().unwrap();
    let m = s.word_matrix(&w("abAB"));
    assert_eq!(classify(&m), IsometryKind::Parabolic);
    assert!(close(m.trace(), 2.0, 1e-15));
    for c in ["a", "b", "ab"] {
        let l = s.curve_length(&class(c)).unwrap();
        assert!(close(l, 2.0 * 1.5f64.acosh(), 1e-12), "{c}");
    }
    assert!(matches!(s.curve_length(&class("abAB")), Err(Error::PeripheralOrInessential)));
    let t = build_punctured_torus_from_traces(3.0, 3.0, 3.0).unwrap();
    assert!(close(t.curve_length(&class("ab")).unwrap(), 2.0 * 1.5f64.acosh(), 1e-12));
}

#[test]
fn conjugation_invariance_of_curve_length() {
    let s = build_one_holed_torus(4.0, 4.0, 4.0).unwrap();
    let base = s.word_matrix(&w("aab"));
    let l = translation_length(&base).unwrap();
    for u in ["b", "aB", "bbA"] {
        let x = w(u).concat(&w("aab")).concat(&w(u).inverse());
        let m = s.word_matrix(&x);
        assert!(close(translation_length(&m).unwrap(), l, 1e-10));
    }
}

#[test]
fn pants_seams_match_trigonometry() {
    let s = build_pants([Some(2.0), Some(2.0), Some(2.0)]).unwrap();
    for l in s.boundary_lengths() {
        assert!(close(*l, 2.0, 1e-12));
    }
    let seam = s.arc(ArcKind::Compact, 0, &Word::identity(), 1).unwrap();
    let d = s.arc_length(&seam).unwrap().length;
    let expected = arc_len_from_curve(&PantsDims::new(2.0, 2.0).unwrap(), 2.0).unwrap();
    assert!(close(d, expected, 1e-10), "{d} vs {expected}");
    assert_eq!(s.self_intersections(&ClassKey::Arc(seam)).unwrap(), 0);
}

#[test]
fn arc_canonical_form_is_flip_and_coset_invariant() {
    let s = build_one_holed_torus(4.0, 4.0, 4.0).unwrap();
    let a = s.arc(ArcKind::Compact, 0, &w("ab"), 0).unwrap();
    let flipped = s.arc(ArcKind::Compact, 0, &w("BA"), 0).unwrap();
    assert_eq!(a, flipped);
    let d = w("abAB");
    let moved = d.pow(2).concat(&w("ab")).concat(&d.pow(-1));
    assert_eq!(a, s.arc(ArcKind::Compact, 0, &moved, 0).unwrap());
    let l1 = s.arc_length(&a).unwrap().length;
    let raw = s.compact_arc_axes(&ArcClass {
        kind: ArcKind::Compact,
        i: 0,
        j: 0,
        w: moved,
    });
    let (g1, g2) = raw.unwrap();
    let l2 = geodesic_distance(&g1, &g2).unwrap();
    // long representatives lose digits; canonical ones stay short
    assert!(close(l1, l2, 1e-6));
    assert!(matches!(
        s.arc(ArcKind::Compact, 0, &d, 0),
        Err(Error::DegenerateArc)
    ));
}

#[test]
fn key_round_trip() {
    let s = build_punctured_torus().unwrap();
    let a = s.arc_from_key("p0:a:p0").unwrap();
    assert_eq!(s.arc_from_key(&a.to_string()).unwrap(), a);
    assert!(s.class_from_key("x").is_err());
    assert!(matches!(ArcClass::parse_key("b0:a"), Err(Error::BadKey(_))));
}

#[test]
fn json_round_trip_is_byte_exact() {
    for name in PRESET_NAMES {
        let s = preset(name).unwrap();
        let doc = surface_to_json(&s);
        let back = surface_from_json(&doc).unwrap();
        assert_eq!(surface_to_json(&back), doc);
        assert_eq!(back.signature(), s.signature());
    }
    assert!(surface_from_json("{}").is_err());
}

#[test]
fn simple_infinite_arc_lengths() {
    let s = build_punctured_torus().unwrap();
    let a = s.arc_from_key("p0:a:p0").unwrap();
    assert_eq!(s.t_alpha(&a).unwrap(), 1.0);
    let r1 = s.infinite_arc_t_length(&a, 1.0).unwrap();
    assert_eq!(r1.components_in_cusp, Some(2));
    let r4 = s.infinite_arc_t_length(&a, 0.25).unwrap();
    assert!(close(r4.length - r1.length, 2.0 * 4f64.ln(), 1e-12));
    assert!(close(s.truncated_length(&a).unwrap(), r1.length, 1e-15));
    // associated curve, checked against the cusped quadrilateral identity
    let p = w("abAB");
    let word = a.word().concat(&p).concat(&a.word().inverse()).concat(&p);
    let gamma = s.curve_length(&conj_canonical(&word).unwrap()).unwrap();
    for t in [1.0, 0.5, 0.25] {
        let lt = s.infinite_arc_t_length(&a, t).unwrap().length;
        let q = CuspQuadDims::new(t).unwrap();
        let pred = cusp_curve_from_t_len(&q, lt).unwrap();
        assert!((gamma - pred).abs() < 1e-8, "t={t}: {gamma} vs {pred}");
        assert!(close(pred, 4.0 * acosh_guarded(t / 2.0 * (lt / 2.0).exp()), 1e-12));
    }
}

#[test]
fn t_alpha_closed_form_matches_bisection() {
    let s = build_punctured_torus().unwrap();
    for key in ["p0:a:p0", "p0:aab:p0", "p0:aaab:p0", "p0:abbb:p0"] {
        let a = s.arc_from_key(key).unwrap();
        let closed = s.t_alpha(&a).unwrap();
        let bis = s.t_alpha_bisection(&a, 1e-8).unwrap();
        assert!((closed - bis).abs() < 1e-6, "{key}: {closed} vs {bis}");
    }
}

#[test]
fn self_intersection_counts() {
    let s = build_punctured_torus().unwrap();
    for (c, n) in [("a", 0), ("ab", 0), ("aab", 0), ("abAb", 1), ("aa", 1), ("aaa", 2)] {
        let got = s.self_intersections(&ClassKey::Curve(class(c))).unwrap();
        assert_eq!(got, n, "{c}");
    }
    let t = build_one_holed_torus(4.0, 4.0, 4.0).unwrap();
    for (c, n) in [("a", 0), ("abAb", 1)] {
        assert_eq!(t.self_intersections(&ClassKey::Curve(class(c))).unwrap(), n, "{c}");
    }
}

#[test]
fn simple_curves_stay_out_of_the_unit_cusp_region() {
    let s = build_punctured_torus().unwrap();
    for c in ["a", "b", "ab", "aab", "abb"] {
        let d = s.penetration_depth(&ClassKey::Curve(class(c))).unwrap();
        assert!(d >= 1.0 - 1e-9, "{c}: {d}");
    }
    // winding twice around the cusp forces a return into the unit region
    let deep = conj_canonical(&w("aabABabAB")).unwrap();
    assert!(s.penetration_depth(&ClassKey::Curve(deep.clone())).unwrap() < 1.0);
    assert_eq!(s.self_intersections(&ClassKey::Curve(deep)).unwrap(), 2);
    let t = build_one_holed_torus(4.0, 4.0, 4.0).unwrap();
    assert_eq!(
        t.penetration_depth(&ClassKey::Curve(class("a"))).unwrap(),
        f64::INFINITY
    );
}

#[test]
fn collar_clearance_positive_and_conjugation_invariant() {
    let s = build_one_holed_torus(4.0, 4.0, 4.0).unwrap();
    let c1 = s.boundary_collar_clearance(&class("a")).unwrap();
    assert!(c1 > 0.0);
    let c2 = s
        .boundary_collar_clearance(&conj_canonical(&w("baB")).unwrap())
        .unwrap();
    assert!(close(c1, c2, 1e-9));
}

#[test]
fn segment_distance_matches_point_distance() {
    let a = Complex64::new(0.3, 0.7);
    let b = Complex64::new(-1.2, 2.5);
    let seg = Segment::new(a, b).unwrap();
    assert!(close(seg.length(), point_distance(a, b), 1e-12));
    assert!(seg.distance_to(a) < 1e-12 && seg.distance_to(b) < 1e-12);
    let far = Complex64::new(5.0, 0.1);
    let brute = (0..=2000)
        .map(|k| seg.point_at(seg.bounds().0 + seg.length() * k as f64 / 2000.0))
        .map(|y| point_distance(y, far))
        .fold(f64::INFINITY, f64::min);
    assert!(seg.distance_to(far) <= brute + 1e-9 && brute - seg.distance_to(far) < 1e-3);
}


#[test]
fn long_simple_infinite_arcs_have_no_crossings() {
    // images of p0:a:p0 under twists, with far ends deep in the cusp
    let s = build_punctured_torus().unwrap();
    for key in ["p0:abababababababa:p0", "p0:aBaBaBaBB:p0", "p0:aaaaBaaaB:p0", "p0:abbabababbababab:p0"] {
        let a = ClassKey::Arc(s.arc_from_key(key).unwrap());
        assert_eq!(s.self_intersections(&a).unwrap(), 0, "{key}");
    }
}
