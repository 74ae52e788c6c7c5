//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arccount::assoc::{associate, associated_length, association_record};
use arccount::census::{enumerate_compact_arcs, enumerate_curves, enumerate_infinite_arcs, CensusOptions};
use arccount::error::Result;
use arccount::hypalg::{acosh_guarded, geodesic_distance, horoball_of_parabolic, translation_length, IdealGeodesic};
use arccount::orbits::{apply_key, classify_type, orbit_census, pmod_generators, replay, OrbitOptions, TypeClass};
use arccount::pantsform::{bound_c_of_x, curve_len_from_arc, error_e_limit, lambda_from_truncated, PantsDims};
use arccount::report::{basmajian_partial_sums, fit_table, orbit_pipeline, sandwich_report, verify_pants, Column};
use arccount::surface::{build_pants, preset, ArcClass, ArcKind, ClassKey, SurfaceModel};
use arccount::words::{conj_canonical, SubgroupGraph, Word};

use common::{brute_arcs, brute_curves, horoball_distance, minimized_distance};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn arcs_of(c: &arccount::census::Census) -> Vec<ArcClass> {
    c.records
        .iter()
        .filter_map(|r| match &r.key {
            ClassKey::Arc(a) => Some(a.clone()),
            _ => None,
        })
        .collect()
}

fn w(s: &str) -> Word {
    Word::parse(s).expect("valid word")
}

fn pants_trigonometry() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let cuffs: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.5..=6.0));
        let s = build_pants(cuffs.map(Some))?;
        let measured: Vec<f64> = s
            .boundary_words()
            .iter()
            .map(|b| translation_length(&s.word_matrix(b)))
            .collect::<Result<_>>()?;
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (0, 2, 1)] {
            let d = geodesic_distance(&s.boundary_axis(i), &s.boundary_axis(j))?;
            let pred = curve_len_from_arc(&PantsDims::new(measured[i], measured[j])?, d)?;
            worst = worst.max((pred - measured[k]).abs() / measured[k]);
        }
    }
    let lib = verify_pants(200, 2026)?;
    worst = worst.max(lib.max_relative_error);
    outcome(worst < 1e-9, format!("200 pants, max relative error {worst:.2e} (< 1e-9)"))
}

fn simple_infinite_arcs(s: &SurfaceModel) -> Result<Vec<ArcClass>> {
    let mut out = Vec::new();
    if s.signature().0 == 1 {
        let seed = s.class_from_key("p0:a:p0")?;
        let o = orbit_census(s, &seed, 18.0, &OrbitOptions { t: Some(1.0), ..Default::default() })?;
        for e in o.elements {
            if let ClassKey::Arc(a) = e.key {
                out.push(a);
            }
        }
    } else {
        out = arcs_of(&enumerate_infinite_arcs(s, 8.0, 1.0, &CensusOptions::default())?);
    }
    let mut simple = Vec::new();
    for a in out {
        if s.self_intersections(&ClassKey::Arc(a.clone()))? == 0 {
            simple.push(a);
        }
    }
    Ok(simple)
}

fn cusp_identity() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut arcs = 0;
    for name in ["punctured-torus", "cusped-pants"] {
        let s = preset(name)?;
        for a in simple_infinite_arcs(&s)? {
            arcs += 1;
            let gamma = associated_length(&s, &associate(&s, &a)?)?;
            for t in [1.0, 0.5, 0.25] {
                let lt = s.infinite_arc_t_length(&a, t)?.length;
                let pred = 4.0 * acosh_guarded(t / 2.0 * (lt / 2.0).exp());
                worst = worst.max((gamma - pred).abs());
            }
        }
    }
    outcome(
        arcs >= 50 && worst < 1e-8,
        format!("{arcs} simple arcs (>= 50), t in {{1, 1/2, 1/4}}, max error {worst:.2e} (< 1e-8)"),
    )
}

fn compact_distortion() -> Result<Outcome> {
    let s = preset("one-holed-torus")?;
    let c = bound_c_of_x(s.boundary_lengths())?;
    let lb = s.boundary_lengths()[0];
    let limit = error_e_limit(&PantsDims::new(lb, lb)?);
    let census = enumerate_compact_arcs(&s, 8.0, &CensusOptions::default())?;
    let (mut max_abs, mut max_signed) = (0.0f64, f64::NEG_INFINITY);
    for a in arcs_of(&census) {
        let d = association_record(&s, &a, None)?.distortion;
        max_abs = max_abs.max(d.abs());
        max_signed = max_signed.max(d);
    }
    outcome(
        census.certificate.certified && !census.records.is_empty() && max_abs <= c && max_signed <= 1.001 * limit,
        format!(
            "{} arcs to L = 8 (certified: {}), max |distortion| {max_abs:.6} <= C = {c:.6}, max distortion {max_signed:.6} <= 1.001 x limit {limit:.6}",
            census.records.len(),
            census.certificate.certified
        ),
    )
}

fn equivariance() -> Result<Outcome> {
    let mut checked = 0;
    let mut failures = 0;
    let samples = [
        ("one-holed-torus", arcs_of(&enumerate_compact_arcs(&preset("one-holed-torus")?, 9.0, &CensusOptions::default())?)),
        ("punctured-torus", arcs_of(&enumerate_infinite_arcs(&preset("punctured-torus")?, 10.0, 1.0, &CensusOptions::default())?)),
    ];
    let (compact, infinite) = (samples[0].1.len().min(100), samples[1].1.len().min(100));
    for ((name, arcs), take) in samples.iter().zip([compact, infinite]) {
        let s = preset(name)?;
        let gens = pmod_generators(&s)?;
        for a in arcs.iter().take(take) {
            let gamma = ClassKey::Curve(associate(&s, a)?);
            for phi in &gens {
                let moved = match apply_key(&s, phi, &ClassKey::Arc(a.clone()))? {
                    ClassKey::Arc(b) => ClassKey::Curve(associate(&s, &b)?),
                    other => other,
                };
                if moved != apply_key(&s, phi, &gamma)? {
                    failures += 1;
                }
            }
            checked += 1;
        }
    }
    outcome(
        checked >= 200 && failures == 0,
        format!("{checked} arcs ({compact} compact, {infinite} infinite) x 4 generators, {failures} mismatches"),
    )
}

fn sandwich() -> Result<Outcome> {
    let s = preset("one-holed-torus")?;
    let seed = s.class_from_key("b0:a:b0")?;
    // fibers are only determined for curves up to 2L - C, so k is measured
    // on a longer run
    let long = orbit_pipeline(&s, &seed, &[16.0, 18.0, 20.0], &OrbitOptions::default())?;
    let (Some(k), Some(c)) = (long.k, long.c) else {
        return outcome(false, format!("k not measured (fiber sizes {:?})", long.fiber_sizes));
    };
    let grid: Vec<f64> = (4..=9).map(f64::from).collect();
    let arcs = long.arc_spectrum().expect("arc seed");
    let r = sandwich_report(&arcs, &long.curve_spectrum(), &grid, k, c)?;
    let rows: Vec<String> = r.rows.iter().map(|x| format!("{}<={}<={}", x.lower, x.n_arc, x.upper)).collect();
    outcome(
        r.pass(),
        format!("k = {k} (fiber sizes {:?}), C = {c:.4}, L = 4..9: {}", long.fiber_sizes, rows.join(" ")),
    )
}

fn exponent_fits() -> Result<Outcome> {
    let grid: Vec<f64> = (10..=30).map(f64::from).collect();
    let opts = OrbitOptions::default();
    let torus = preset("one-holed-torus")?;
    let curves = orbit_pipeline(&torus, &torus.class_from_key("a")?, &grid, &opts)?;
    let arcs = orbit_pipeline(&torus, &torus.class_from_key("b0:a:b0")?, &grid, &opts)?;
    let punct = preset("punctured-torus")?;
    let inf = orbit_pipeline(&punct, &punct.class_from_key("p0:a:p0")?, &grid, &OrbitOptions { t: Some(1.0), ..opts })?;
    let fits = [
        ("curves", fit_table(&curves.table, Column::Curve)?),
        ("arcs", fit_table(&arcs.table, Column::Arc)?),
        ("infinite arcs", fit_table(&inf.table, Column::InfiniteArc)?),
    ];
    let spread = arcs.ratio_spread(3).unwrap_or(f64::INFINITY);
    let in_range = fits.iter().all(|(_, f)| (1.6..=2.4).contains(&f.slope));
    let text: Vec<String> = fits
        .iter()
        .map(|(n, f)| format!("{n} {:.3} ± {:.3} on [{}, {}]", f.slope, f.stderr, f.window.0, f.window.1))
        .collect();
    let exhausted = curves.curves.frontier_exhausted && arcs.arcs.as_ref().is_some_and(|a| a.frontier_exhausted);
    outcome(
        in_range && spread < 0.2,
        format!(
            "slopes in [1.6, 2.4]: {}; N_arc(L)/N_curve(2L) spread over top 3 points {:.1}% (< 20%); frontier exhausted: {exhausted}",
            text.join(", "),
            100.0 * spread
        ),
    )
}

fn folding() -> Result<Outcome> {
    let h1 = SubgroupGraph::from_generators(&[w("a"), w("BabAb")]);
    let h2 = SubgroupGraph::from_generators(&[w("aBabA"), w("b")]);
    let differ = !h2.contains(&w("a")) || !h1.contains(&w("b"));
    // third cuff B⁻¹A⁻¹ under A ↦ h(A), B ↦ h(B)
    let third = |a: &Word, b: &Word| b.inverse().concat(&a.inverse());
    let c1 = conj_canonical(&third(&w("a"), &w("BabAb")))?;
    let c2 = conj_canonical(&third(&w("aBabA"), &w("b")))?;
    let expected = conj_canonical(&w("BaBAbA"))?;
    outcome(
        differ && c1 == c2 && c1 == expected,
        format!("subgroups differ: {differ}; third cuffs {c1} and {c2}, expected {expected}"),
    )
}

fn geodesic_pairs(n: usize) -> Vec<(IdealGeodesic, IdealGeodesic)> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut out = Vec::new();
    while out.len() < n {
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-5.0..5.0));
        let (Ok(g1), Ok(g2)) = (IdealGeodesic::new(x[0], x[1]), IdealGeodesic::new(x[2], x[3])) else {
            continue;
        };
        if g1.crosses(&g2) || (x[0] - x[1]).abs() < 0.05 || (x[2] - x[3]).abs() < 0.05 {
            continue;
        }
        out.push((g1, g2));
    }
    out
}

fn oracles() -> Result<Outcome> {
    let mut notes = Vec::new();
    let mut pass = true;
    let opts = CensusOptions::default();
    let s = preset("one-holed-torus")?;
    let c = enumerate_curves(&s, 7.0, &opts)?;
    let set = |c: &arccount::census::Census| c.keys().into_iter().collect::<BTreeSet<_>>();
    let short = |c: &arccount::census::Census| c.records.iter().all(|r| r.word_length <= 6);
    let ok = c.certificate.certified && short(&c) && set(&c) == brute_curves(&s, 6, 7.0);
    pass &= ok;
    notes.push(format!("curves {} {}", c.records.len(), if ok { "equal" } else { "DIFFER" }));
    let c = enumerate_compact_arcs(&s, 3.5, &opts)?;
    let brute = brute_arcs(&s, ArcKind::Compact, 6, |a| s.arc_length(a).is_ok_and(|r| r.length <= 3.5));
    let ok = c.certificate.certified && short(&c) && set(&c) == brute;
    pass &= ok;
    notes.push(format!("compact arcs {} {}", c.records.len(), if ok { "equal" } else { "DIFFER" }));
    let p = preset("punctured-torus")?;
    let c = enumerate_infinite_arcs(&p, 4.0, 1.0, &opts)?;
    let brute = brute_arcs(&p, ArcKind::Infinite, 6, |a| p.end_to_end_length(a, 1.0).is_ok_and(|x| x <= 4.0));
    let ok = c.certificate.certified && short(&c) && set(&c) == brute;
    pass &= ok;
    notes.push(format!("infinite arcs {} {}", c.records.len(), if ok { "equal" } else { "DIFFER" }));

    let mut worst: f64 = 0.0;
    for (g1, g2) in geodesic_pairs(500) {
        worst = worst.max((geodesic_distance(&g1, &g2)? - minimized_distance(&g1, &g2)).abs());
    }
    pass &= worst < 1e-8;
    notes.push(format!("500 geodesic pairs max error {worst:.2e}"));

    // simple closed curves on the punctured torus form a single orbit
    let seed = p.class_from_key("a")?;
    let oopts = OrbitOptions::default();
    let o = orbit_census(&p, &seed, 10.0, &oopts)?;
    let from_orbit: BTreeSet<ClassKey> = o
        .keys()
        .into_iter()
        .filter(|k| matches!(k, ClassKey::Curve(c) if c.word().len() <= 6))
        .collect();
    let mut simple = BTreeSet::new();
    let mut classified = BTreeSet::new();
    for k in brute_curves(&p, 6, 10.0) {
        if p.self_intersections(&k)? == 0 {
            simple.insert(k.clone());
        }
        if let TypeClass::InOrbit(chain) = classify_type(&p, &k, &seed, &oopts)? {
            if replay(&p, &seed, &chain)? == k {
                classified.insert(k);
            }
        }
    }
    let ok = o.frontier_exhausted && from_orbit == simple && classified == simple;
    pass &= ok;
    notes.push(format!("orbit of a: {} short classes {}", from_orbit.len(), if ok { "equal" } else { "DIFFER" }));
    outcome(pass, notes.join("; "))
}

fn basmajian() -> Result<Outcome> {
    let s = preset("one-holed-torus")?;
    let census = enumerate_compact_arcs(&s, 12.0, &CensusOptions::default())?;
    let grid: Vec<f64> = (1..=12).map(f64::from).collect();
    let r = basmajian_partial_sums(&s, &census, 0, &grid)?;
    let monotone = r.rows.windows(2).all(|w| w[0].sum <= w[1].sum && w[0].coverage <= w[1].coverage);
    let bounded = r.rows.iter().all(|x| x.sum <= r.total_boundary_length + 1e-6);
    let last = r.rows.last().expect("non-empty grid");
    outcome(
        census.certificate.certified && monotone && bounded,
        format!(
            "{} arcs to L = 12 (certified: {}), sum {:.6} of boundary {:.6}, coverage at L = 12: {:.4}",
            census.records.len(),
            census.certificate.certified,
            last.sum,
            r.boundary_length,
            last.coverage
        ),
    )
}

fn truncation_and_lambda() -> Result<Outcome> {
    let (mut arcs, mut deep) = (0, 0);
    let (mut worst_gap, mut worst_lambda, mut worst_horo): (f64, f64, f64) = (f64::NEG_INFINITY, 0.0, 0.0);
    for name in ["punctured-torus", "cusped-pants"] {
        let s = preset(name)?;
        let census = enumerate_infinite_arcs(&s, 6.0, 1.0, &CensusOptions::default())?;
        for a in arcs_of(&census) {
            arcs += 1;
            let ta = s.t_alpha(&a)?;
            deep += usize::from(ta < 1.0);
            let lt = s.infinite_arc_t_length(&a, ta)?.length;
            let tr = s.truncated_length(&a)?;
            worst_gap = worst_gap.max((lt - tr).abs() - 2.0 * (1.0 / ta).ln());
            let lambda = lambda_from_truncated(tr);
            worst_lambda = worst_lambda.max((lambda - (tr / 2.0).exp()).abs() / lambda);
            // the same quantity from the two area-1 horoballs of the lift
            let (i, j) = a.ends();
            let hi = horoball_of_parabolic(&s.word_matrix(s.end_word(ArcKind::Infinite, i)), 1.0)?;
            let far = a.word().concat(s.end_word(ArcKind::Infinite, j)).concat(&a.word().inverse());
            let hj = horoball_of_parabolic(&s.word_matrix(&far), 1.0)?;
            let horo = (horoball_distance(&hi, &hj) / 2.0).exp();
            worst_horo = worst_horo.max((lambda - horo).abs() / lambda);
        }
    }
    outcome(
        deep > 0 && worst_gap <= 1e-9 && worst_lambda <= 1e-12 && worst_horo <= 1e-9,
        format!(
            "{arcs} arcs ({deep} with t_a < 1): max(|l^t_a - l^Tr| - 2 ln(1/t_a)) = {worst_gap:.2e} (<= 1e-9), lambda vs e^(l^Tr/2) {worst_lambda:.1e} (<= 1e-12), vs horoball distance {worst_horo:.1e}"
        ),
    )
}

fn main() {
    type Criterion = (u32, &'static str, Duration, fn() -> Result<Outcome>);
    let criteria: [Criterion; 10] = [
        (1, "pants trigonometry", Duration::from_secs(10), pants_trigonometry),
        (2, "cusp identity on simple arcs", Duration::from_secs(60), cusp_identity),
        (3, "census-wide distortion bound", Duration::from_secs(300), compact_distortion),
        (4, "equivariance", Duration::from_secs(60), equivariance),
        (5, "sandwich inequality", Duration::from_secs(600), sandwich),
        (6, "growth exponents", Duration::from_secs(1800), exponent_fits),
        (7, "folding regression", Duration::from_secs(1), folding),
        (8, "oracle equivalences", Duration::from_secs(300), oracles),
        (9, "Basmajian diagnostic", Duration::from_secs(600), basmajian),
        (10, "truncated length and lambda", Duration::from_secs(60), truncation_and_lambda),
    ];
    let mut failed = 0;
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let (pass, detail) = match res {
            Ok(o) => (o.pass && took <= limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {n:>2} {}: {name}: {detail} [{:.2} s, limit {} s]",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
