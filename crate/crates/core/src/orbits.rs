//! Orbits of curves and arcs under the pure mapping class group, explored
//! through Dehn twist automorphisms of the free group.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::surface::{ArcKind, ClassKey, SurfaceModel};
use crate::words::{conj_canonical, Automorphism, Word};

/// Twists about `a` and `b` and their inverses, each verified to fix every
/// boundary and cusp class.
pub fn pmod_generators(s: &SurfaceModel) -> Result<Vec<Automorphism>> {
    if s.signature().0 != 1 || s.rank() != 2 {
        return Err(Error::Unsupported(format!("{}: twists are defined for tori", s.name())));
    }
    let per = s.peripheral_words();
    let ta = Automorphism::twist_a().check_pmod(&per)?;
    let tb = Automorphism::twist_b().check_pmod(&per)?;
    Ok(vec![ta.clone(), ta.inverse(), tb.clone(), tb.inverse()])
}

/// Image of a curve or arc class under `phi`. An arc `(i, w, j)` goes to
/// `(i, u_i⁻¹·φ(w)·u_j, j)` where `φ(δ_k) = u_k δ_k u_k⁻¹`.
pub fn apply_key(s: &SurfaceModel, phi: &Automorphism, k: &ClassKey) -> Result<ClassKey> {
    match k {
        ClassKey::Curve(c) => Ok(ClassKey::Curve(conj_canonical(&phi.apply(c.word()))?)),
        ClassKey::Arc(a) => {
            let ends: Vec<Word> = (0..s.end_count(a.kind()))
                .map(|e| s.end_word(a.kind(), e).clone())
                .collect();
            let u = phi.peripheral_conjugators(&ends)?;
            let (i, j) = a.ends();
            let w = u[i].inverse().concat(&phi.apply(a.word())).concat(&u[j]);
            Ok(ClassKey::Arc(s.arc(a.kind(), i, &w, j)?))
        }
    }
}

/// Length used for counting: geodesic length for curves, orthogeodesic
/// length for compact arcs, `t`-length for infinite arcs.
pub fn key_length(s: &SurfaceModel, k: &ClassKey, t: Option<f64>) -> Result<f64> {
    match k {
        ClassKey::Curve(c) => s.curve_length(c),
        ClassKey::Arc(a) => match a.kind() {
            ArcKind::Compact => Ok(s.arc_length(a)?.length),
            ArcKind::Infinite => {
                let t = t.ok_or_else(|| Error::Config("infinite arcs need an area t".into()))?;
                Ok(s.infinite_arc_t_length(a, t)?.length)
            }
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitOptions {
    /// Elements up to `L + slack` are explored.
    pub slack: f64,
    /// Maximum number of distinct classes measured.
    pub budget: usize,
    /// Area of the cusp regions for infinite arcs.
    pub t: Option<f64>,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            slack: 4.0,
            budget: 200_000,
            t: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitElement {
    pub key: ClassKey,
    pub length: f64,
    /// Generator names which, applied in order to the seed, give `key`.
    pub chain: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitCensus {
    pub seed: ClassKey,
    pub max_length: f64,
    pub slack: f64,
    pub t: Option<f64>,
    /// Sorted by `(length, key)`.
    pub elements: Vec<OrbitElement>,
    /// Number of classes measured.
    pub explored: usize,
    /// The search ran out of elements below `L + slack` before the budget.
    pub frontier_exhausted: bool,
}

impl OrbitCensus {
    pub fn count_le(&self, l: f64) -> usize {
        self.elements.partition_point(|e| e.length <= l)
    }

    pub fn keys(&self) -> Vec<ClassKey> {
        self.elements.iter().map(|e| e.key.clone()).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["key", "length", "chain"])?;
        for e in &self.elements {
            w.write_record([e.key.to_string(), format!("{:.16e}", e.length), e.chain.join(";")])?;
        }
        w.flush()?;
        Ok(())
    }
}

struct Visit {
    length: f64,
    chain: Vec<String>,
}

/// Length function for one orbit. Twists preserve self-intersection, and a
/// simple infinite arc meets no interior cusp region of area at most 1, so
/// for simple seeds the `t`-length is the end-to-end length; that avoids
/// the interior-horoball search, which loses precision on very long arcs.
fn orbit_length<'a>(
    s: &'a SurfaceModel,
    seed: &ClassKey,
    t: Option<f64>,
) -> Result<impl Fn(&ClassKey) -> Result<f64> + Sync + 'a> {
    let simple_infinite = match seed {
        ClassKey::Arc(a) if a.kind() == ArcKind::Infinite => s.self_intersections(seed)? == 0,
        _ => false,
    };
    Ok(move |k: &ClassKey| match (k, t) {
        (ClassKey::Arc(a), Some(t)) if simple_infinite && t <= 1.0 => s.end_to_end_length(a, t),
        _ => key_length(s, k, t),
    })
}

/// Breadth-first exploration from `start`: classes of length at most `cap`
/// are expanded; stops early once `stop` holds for a newly found class.
/// Rounds are processed in sorted order so the result is deterministic.
fn explore(
    s: &SurfaceModel,
    gens: &[Automorphism],
    start: &ClassKey,
    cap: f64,
    opts: &OrbitOptions,
    length: &(dyn Fn(&ClassKey) -> Result<f64> + Sync),
    stop: impl Fn(&ClassKey) -> bool,
) -> Result<(BTreeMap<ClassKey, Visit>, bool, Option<ClassKey>)> {
    let mut seen = BTreeMap::new();
    let l0 = length(start)?;
    seen.insert(start.clone(), Visit { length: l0, chain: Vec::new() });
    if stop(start) {
        return Ok((seen, true, Some(start.clone())));
    }
    let mut frontier = if l0 <= cap { vec![start.clone()] } else { Vec::new() };
    while !frontier.is_empty() {
        let images: Vec<(ClassKey, usize, ClassKey)> = frontier
            .iter()
            .flat_map(|x| (0..gens.len()).map(move |g| (x, g)))
            .map(|(x, g)| Ok((x.clone(), g, apply_key(s, &gens[g], x)?)))
            .collect::<Result<_>>()?;
        let mut fresh: Vec<(ClassKey, usize, ClassKey)> = Vec::new();
        for (x, g, y) in images {
            if !seen.contains_key(&y) && !fresh.iter().any(|f| f.2 == y) {
                fresh.push((x, g, y));
            }
        }
        let lengths: Vec<f64> = fresh
            .par_iter()
            .map(|(_, _, y)| length(y))
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for ((x, g, y), l) in fresh.into_iter().zip(lengths) {
            let mut chain = seen[&x].chain.clone();
            chain.push(gens[g].name().to_string());
            let hit = stop(&y);
            seen.insert(y.clone(), Visit { length: l, chain });
            if hit {
                return Ok((seen, true, Some(y)));
            }
            if l <= cap {
                next.push(y);
            }
            if seen.len() > opts.budget {
                return Ok((seen, false, None));
            }
        }
        next.sort();
        frontier = next;
    }
    Ok((seen, true, None))
}

/// Orbit elements of length at most `l`, found by twisting through elements
/// of length at most `l + slack`.
pub fn orbit_census(s: &SurfaceModel, seed: &ClassKey, l: f64, opts: &OrbitOptions) -> Result<OrbitCensus> {
    let gens = pmod_generators(s)?;
    let length = orbit_length(s, seed, opts.t)?;
    let (seen, exhausted, _) = explore(s, &gens, seed, l + opts.slack, opts, &length, |_| false)?;
    let explored = seen.len();
    let mut elements: Vec<OrbitElement> = seen
        .into_iter()
        .filter(|(_, v)| v.length <= l)
        .map(|(key, v)| OrbitElement { key, length: v.length, chain: v.chain })
        .collect();
    elements.sort_by(|a, b| a.length.total_cmp(&b.length).then_with(|| a.key.cmp(&b.key)));
    Ok(OrbitCensus {
        seed: seed.clone(),
        max_length: l,
        slack: opts.slack,
        t: opts.t,
        elements,
        explored,
        frontier_exhausted: exhausted,
    })
}

/// Applies the named generators to `seed` in order.
pub fn replay(s: &SurfaceModel, seed: &ClassKey, chain: &[String]) -> Result<ClassKey> {
    let gens = pmod_generators(s)?;
    chain.iter().try_fold(seed.clone(), |k, name| {
        let g = gens
            .iter()
            .find(|g| g.name() == name)
            .ok_or_else(|| Error::BadKey(format!("unknown generator {name}")))?;
        apply_key(s, g, &k)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeClass {
    /// Generator chain taking the seed to the class.
    InOrbit(Vec<String>),
    NotDecided,
}

fn inverse_name(name: &str) -> String {
    match name.strip_suffix("^-1") {
        Some(base) => base.to_string(),
        None => format!("{name}^-1"),
    }
}

/// Searches for a twist chain from `seed` to `x` by growing both orbits
/// through classes no longer than the longer of the two plus the slack.
/// A chain is only returned after replaying it to `x`.
pub fn classify_type(s: &SurfaceModel, x: &ClassKey, seed: &ClassKey, opts: &OrbitOptions) -> Result<TypeClass> {
    if x == seed {
        return Ok(TypeClass::InOrbit(Vec::new()));
    }
    let ends = |k: &ClassKey| match k {
        ClassKey::Curve(_) => None,
        ClassKey::Arc(a) => Some((a.kind(), a.ends())),
    };
    // twists preserve the kind of a class and the ends of an arc
    if ends(x) != ends(seed) {
        return Ok(TypeClass::NotDecided);
    }
    let gens = pmod_generators(s)?;
    let length = orbit_length(s, seed, opts.t)?;
    let cap = key_length(s, x, opts.t)?.max(length(seed)?) + opts.slack;
    let half = OrbitOptions { budget: opts.budget / 2, ..*opts };
    let (from_seed, _, _) = explore(s, &gens, seed, cap, &half, &length, |k| k == x)?;
    let chain = if let Some(v) = from_seed.get(x) {
        v.chain.clone()
    } else {
        let (from_x, _, meet) = explore(s, &gens, x, cap, &half, &length, |k| from_seed.contains_key(k))?;
        let Some(y) = meet else {
            return Ok(TypeClass::NotDecided);
        };
        let mut chain = from_seed[&y].chain.clone();
        chain.extend(from_x[&y].chain.iter().rev().map(|n| inverse_name(n)));
        chain
    };
    if replay(s, seed, &chain)? != *x {
        return Ok(TypeClass::NotDecided);
    }
    Ok(TypeClass::InOrbit(chain))
}
