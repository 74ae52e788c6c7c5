//! Experiment layer: orbit count tables, exponent fits, counting sandwich
//! checks, the Basmajian diagnostic, the random-pants cross-check and
//! config-driven report bundles.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::assoc::{association_record, associate, fiber_statistics, write_association_csv};
use crate::census::{enumerate_compact_arcs, enumerate_curves, enumerate_infinite_arcs, Census, CensusOptions, RecordKind};
use crate::error::{Error, Result};
use crate::orbits::{orbit_census, OrbitCensus, OrbitOptions};
use crate::pantsform::{bound_c_of_x, curve_len_from_arc, PantsDims};
use crate::surface::{build_pants, preset, surface_to_json, ArcClass, ArcKind, ClassKey, SurfaceModel};
use crate::words::{ConjClass, Word};

/// Sorted lengths of one family of classes, read as the counting function
/// `x ↦ #{ℓ ≤ x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Seed of the orbit the lengths come from.
    pub label: String,
    /// For arc spectra, the seed of the curve orbit they associate to.
    pub image: Option<String>,
    lengths: Vec<f64>,
}

impl Spectrum {
    pub fn new(label: &str, image: Option<&str>, mut lengths: Vec<f64>) -> Self {
        lengths.sort_by(f64::total_cmp);
        Spectrum {
            label: label.to_string(),
            image: image.map(str::to_string),
            lengths,
        }
    }

    pub fn from_orbit(o: &OrbitCensus, image: Option<&str>) -> Self {
        Spectrum::new(&o.seed.to_string(), image, o.elements.iter().map(|e| e.length).collect())
    }

    pub fn count_le(&self, x: f64) -> usize {
        self.lengths.partition_point(|&l| l <= x)
    }

    pub fn max_length(&self) -> Option<f64> {
        self.lengths.last().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountRow {
    pub l: f64,
    /// Curves of length at most `curve_scale · l`.
    pub n_curve: Option<usize>,
    pub n_arc: Option<usize>,
    pub n_infinite_arc: Option<usize>,
}

/// Orbit counts on a grid of lengths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountTable {
    pub surface: String,
    pub seed: String,
    pub t: Option<f64>,
    pub slack: f64,
    /// Curve counts are taken at `curve_scale · L` (2 when the curves are
    /// the images of arcs, whose lengths double).
    pub curve_scale: f64,
    pub rows: Vec<CountRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Curve,
    Arc,
    InfiniteArc,
}

impl Column {
    pub fn parse(s: &str) -> Result<Column> {
        match s {
            "curve" => Ok(Column::Curve),
            "arc" => Ok(Column::Arc),
            "infinite_arc" => Ok(Column::InfiniteArc),
            other => Err(Error::Config(format!("unknown column {other:?} (curve, arc, infinite_arc)"))),
        }
    }
}

impl CountTable {
    /// Rejects grids that are not increasing and columns that decrease.
    pub fn new(surface: &str, seed: &str, t: Option<f64>, slack: f64, curve_scale: f64, rows: Vec<CountRow>) -> Result<Self> {
        for w in rows.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let down = |x: Option<usize>, y: Option<usize>| matches!((x, y), (Some(x), Some(y)) if y < x);
            if !(a.l < b.l) || down(a.n_curve, b.n_curve) || down(a.n_arc, b.n_arc) || down(a.n_infinite_arc, b.n_infinite_arc) {
                return Err(Error::Config(format!("count table not monotone between L={} and L={}", a.l, b.l)));
            }
        }
        Ok(CountTable {
            surface: surface.to_string(),
            seed: seed.to_string(),
            t,
            slack,
            curve_scale,
            rows,
        })
    }

    pub fn column(&self, c: Column) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter_map(|r| {
                let n = match c {
                    Column::Curve => r.n_curve,
                    Column::Arc => r.n_arc,
                    Column::InfiniteArc => r.n_infinite_arc,
                };
                n.map(|n| (r.l, n as f64))
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["L", "n_curve", "n_arc", "n_infinite_arc", "curve_scale"])?;
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            w.write_record([r.l.to_string(), opt(r.n_curve), opt(r.n_arc), opt(r.n_infinite_arc), self.curve_scale.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(text: &str) -> Result<CountTable> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let bad = |m: String| Error::Config(m);
        let mut rows = Vec::new();
        let mut scale = 1.0;
        for (n, rec) in r.records().enumerate() {
            let rec = rec?;
            let line = n + 2;
            let field = |i: usize| rec.get(i).unwrap_or("");
            let num = |i: usize| -> Result<Option<usize>> {
                match field(i) {
                    "" => Ok(None),
                    s => s.parse().map(Some).map_err(|_| bad(format!("line {line}: bad count {s:?}"))),
                }
            };
            let l: f64 = field(0).parse().map_err(|_| bad(format!("line {line}: bad L {:?}", field(0))))?;
            if !field(4).is_empty() {
                scale = field(4).parse().map_err(|_| bad(format!("line {line}: bad curve_scale")))?;
            }
            rows.push(CountRow { l, n_curve: num(1)?, n_arc: num(2)?, n_infinite_arc: num(3)? });
        }
        CountTable::new("", "", None, 0.0, scale, rows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub stderr: f64,
    /// First and last `L` used.
    pub window: (f64, f64),
    pub points: usize,
}

/// Least-squares slope of `log N` against `log L`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<Fit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(l, n)| *l > 0.0 && *n > 0.0)
        .map(|(l, n)| (l.ln(), n.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientPoints(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let resid: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let stderr = (resid / (n - 2.0) / sxx).sqrt();
    let ls: Vec<f64> = points.iter().filter(|(l, n)| *l > 0.0 && *n > 0.0).map(|p| p.0).collect();
    Ok(Fit {
        slope,
        stderr,
        window: (ls[0], ls[ls.len() - 1]),
        points: pts.len(),
    })
}

/// Upper half of a grid, where the additive constants matter least,
/// widened to four points when the grid is short.
pub fn upper_window(points: &[(f64, f64)]) -> &[(f64, f64)] {
    &points[(points.len() / 2).min(points.len().saturating_sub(4))..]
}

/// Fit over the upper half of one column.
pub fn fit_table(t: &CountTable, c: Column) -> Result<Fit> {
    fit_exponent(upper_window(&t.column(c)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichRow {
    pub l: f64,
    pub lower: usize,
    pub n_arc: usize,
    pub upper: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub k: usize,
    pub c: f64,
    pub rows: Vec<SandwichRow>,
}

impl SandwichReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<f64> {
        self.rows.iter().filter(|r| !r.pass).map(|r| r.l).collect()
    }
}

/// Checks `k·N_curve(2L − C) ≤ N_arc(L) ≤ k·N_curve(2L + C)` on the grid.
/// The curve spectrum must be the orbit the arcs associate to and reach
/// `2L + C` at the top of the grid.
pub fn sandwich_report(arcs: &Spectrum, curves: &Spectrum, grid: &[f64], k: usize, c: f64) -> Result<SandwichReport> {
    if let Some(img) = &arcs.image {
        if *img != curves.label {
            return Err(Error::OrbitMismatch(format!("arcs of {} associate to {img}, not {}", arcs.label, curves.label)));
        }
    }
    let rows = grid
        .iter()
        .map(|&l| {
            let lower = k * curves.count_le(2.0 * l - c);
            let upper = k * curves.count_le(2.0 * l + c);
            let n_arc = arcs.count_le(l);
            SandwichRow { l, lower, n_arc, upper, pass: lower <= n_arc && n_arc <= upper }
        })
        .collect();
    Ok(SandwichReport { k, c, rows })
}

/// An orbit of arcs with the orbit of their associated curves, counted on
/// a grid, plus the fiber size of the association map.
#[derive(Debug, Clone)]
pub struct OrbitPipeline {
    pub arcs: Option<OrbitCensus>,
    pub curves: OrbitCensus,
    pub table: CountTable,
    /// Constant in the length comparison (compact arcs only).
    pub c: Option<f64>,
    /// Common fiber size over the curves whose fibers the arc orbit
    /// determines.
    pub k: Option<usize>,
    pub fiber_sizes: BTreeMap<usize, usize>,
}

/// Counts the orbit of `seed` on `grid`. For an arc seed the orbit of its
/// associated curve is counted at `2L`, and far enough beyond to evaluate
/// the sandwich bounds.
pub fn orbit_pipeline(s: &SurfaceModel, seed: &ClassKey, grid: &[f64], opts: &OrbitOptions) -> Result<OrbitPipeline> {
    let top = grid.iter().copied().fold(f64::NAN, f64::max);
    if !top.is_finite() {
        return Err(Error::Config("empty grid".into()));
    }
    match seed {
        ClassKey::Curve(_) => {
            let curves = orbit_census(s, seed, top, opts)?;
            let rows = grid
                .iter()
                .map(|&l| CountRow { l, n_curve: Some(curves.count_le(l)), n_arc: None, n_infinite_arc: None })
                .collect();
            let table = CountTable::new(s.name(), &seed.to_string(), opts.t, opts.slack, 1.0, rows)?;
            Ok(OrbitPipeline { arcs: None, curves, table, c: None, k: None, fiber_sizes: BTreeMap::new() })
        }
        ClassKey::Arc(a) => {
            let c = match a.kind() {
                ArcKind::Compact => Some(bound_c_of_x(s.boundary_lengths())?),
                ArcKind::Infinite => None,
            };
            let arcs = orbit_census(s, seed, top, opts)?;
            let gamma = ClassKey::Curve(associate(s, a)?);
            let curves = orbit_census(s, &gamma, 2.0 * top + c.unwrap_or(0.0), &OrbitOptions { t: None, ..*opts })?;
            let infinite = a.kind() == ArcKind::Infinite;
            let rows = grid
                .iter()
                .map(|&l| {
                    let n = Some(arcs.count_le(l));
                    CountRow {
                        l,
                        n_curve: Some(curves.count_le(2.0 * l)),
                        n_arc: if infinite { None } else { n },
                        n_infinite_arc: if infinite { n } else { None },
                    }
                })
                .collect();
            let table = CountTable::new(s.name(), &seed.to_string(), opts.t, opts.slack, 2.0, rows)?;
            let (k, fiber_sizes) = match c {
                Some(c) => {
                    let list: Vec<ArcClass> = arcs
                        .elements
                        .iter()
                        .filter_map(|e| match &e.key {
                            ClassKey::Arc(a) => Some(a.clone()),
                            _ => None,
                        })
                        .collect();
                    let targets: Vec<(ConjClass, f64)> = curves
                        .elements
                        .iter()
                        .filter(|e| e.length <= 2.0 * top - c)
                        .filter_map(|e| match &e.key {
                            ClassKey::Curve(g) => Some((g.clone(), e.length)),
                            _ => None,
                        })
                        .collect();
                    let f = fiber_statistics(s, &list, top, &targets, c)?;
                    (f.k, f.sizes())
                }
                None => (None, BTreeMap::new()),
            };
            Ok(OrbitPipeline { arcs: Some(arcs), curves, table, c, k, fiber_sizes })
        }
    }
}

impl OrbitPipeline {
    pub fn arc_spectrum(&self) -> Option<Spectrum> {
        self.arcs.as_ref().map(|a| Spectrum::from_orbit(a, Some(&self.curves.seed.to_string())))
    }

    pub fn curve_spectrum(&self) -> Spectrum {
        Spectrum::from_orbit(&self.curves, None)
    }

    /// Largest relative spread of `N_arc(L)/N_curve(2L)` over the last
    /// `n` grid points.
    pub fn ratio_spread(&self, n: usize) -> Option<f64> {
        let ratios: Vec<f64> = self
            .table
            .rows
            .iter()
            .rev()
            .take(n)
            .filter_map(|r| {
                let a = r.n_arc.or(r.n_infinite_arc)? as f64;
                let c = r.n_curve? as f64;
                (c > 0.0).then_some(a / c)
            })
            .collect();
        if ratios.len() < n {
            return None;
        }
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        Some((hi - lo) / lo)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasmajianRow {
    pub l: f64,
    pub sum: f64,
    pub coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasmajianReport {
    pub boundary: usize,
    pub boundary_length: f64,
    pub total_boundary_length: f64,
    pub rows: Vec<BasmajianRow>,
}

/// Partial sums of `2 ln coth(ℓ/2)` over the ends on boundary `k` of the
/// orthogeodesics in a compact-arc census. Each end is the shadow of a
/// boundary lift at distance `ℓ`, an interval of that length, and the
/// shadows are disjoint and fill the boundary up to measure zero. The sums
/// stay below the boundary length and approach it as `L` grows.
pub fn basmajian_partial_sums(s: &SurfaceModel, census: &Census, k: usize, grid: &[f64]) -> Result<BasmajianReport> {
    if census.kind != RecordKind::CompactArc {
        return Err(Error::ArcMismatch("the diagnostic needs a compact-arc census".into()));
    }
    let lk = *s
        .boundary_lengths()
        .get(k)
        .ok_or_else(|| Error::ArcMismatch(format!("no boundary {k}")))?;
    let terms: Vec<(f64, f64)> = census
        .records
        .iter()
        .filter_map(|r| match &r.key {
            ClassKey::Arc(a) => {
                let (i, j) = a.ends();
                let ends = (i == k) as usize + (j == k) as usize;
                (ends > 0).then(|| (r.length, 2.0 * ends as f64 * (1.0 / (r.length / 2.0).tanh()).ln()))
            }
            _ => None,
        })
        .collect();
    let rows = grid
        .iter()
        .map(|&l| {
            let sum: f64 = terms.iter().filter(|(len, _)| *len <= l).map(|(_, x)| x).sum();
            BasmajianRow { l, sum, coverage: sum / lk }
        })
        .collect();
    Ok(BasmajianReport {
        boundary: k,
        boundary_length: lk,
        total_boundary_length: s.boundary_lengths().iter().sum(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PantsCheck {
    pub samples: usize,
    pub max_relative_error: f64,
    /// Cuff lengths of the worst sample.
    pub worst: [f64; 3],
}

/// Builds `samples` random pants with cuffs in `[0.5, 6]` and compares each
/// cuff with the length predicted from the opposite seam.
pub fn verify_pants(samples: usize, seed: u64) -> Result<PantsCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (0.0, [0.0; 3]);
    for _ in 0..samples {
        let cuffs: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.5..=6.0));
        let s = build_pants(cuffs.map(Some))?;
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (0, 2, 1)] {
            let seam = s.arc(ArcKind::Compact, i, &Word::identity(), j)?;
            let d = s.arc_length(&seam)?.length;
            let pred = curve_len_from_arc(&PantsDims::new(cuffs[i], cuffs[j])?, d)?;
            let err = (pred - cuffs[k]).abs() / cuffs[k];
            if err > worst.0 {
                worst = (err, cuffs);
            }
        }
    }
    Ok(PantsCheck { samples, max_relative_error: worst.0, worst: worst.1 })
}

/// Experiment description read by [`run_config`].
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: String,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default)]
    pub curves: Option<CensusSpec>,
    #[serde(default)]
    pub compact_arcs: Option<CensusSpec>,
    #[serde(default)]
    pub infinite_arcs: Option<CensusSpec>,
    #[serde(default)]
    pub orbit: Option<OrbitSpec>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CensusSpec {
    pub max_length: f64,
    #[serde(default)]
    pub t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSpec {
    pub seed: String,
    pub grid: Vec<f64>,
    #[serde(default = "default_slack")]
    pub slack: f64,
    #[serde(default)]
    pub t: Option<f64>,
}

fn default_margin() -> f64 {
    2.0
}

fn default_slack() -> f64 {
    4.0
}

impl RunConfig {
    /// Parses a JSON config; errors carry the line and column.
    pub fn parse(text: &str) -> Result<RunConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Files written by [`run_config`] and whether every census certified.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub files: Vec<PathBuf>,
    pub certified: bool,
}

/// JSON text with sorted keys and a trailing newline.
pub fn json_text(v: &Value) -> String {
    // serde_json maps are ordered by key
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Runs the experiments of a config and writes the bundle to `out`. The
/// output depends only on the config.
pub fn run_config(cfg: &RunConfig, out: &Path) -> Result<Bundle> {
    let s = preset(&cfg.preset)?;
    std::fs::create_dir_all(out)?;
    let mut files = Vec::new();
    let mut log = Vec::new();
    let mut certified = true;
    let write = |name: &str, bytes: &[u8], files: &mut Vec<PathBuf>| -> Result<()> {
        let p = out.join(name);
        std::fs::write(&p, bytes)?;
        files.push(p);
        Ok(())
    };
    write("surface.json", format!("{}\n", surface_to_json(&s)).as_bytes(), &mut files)?;
    let opts = CensusOptions { margin: cfg.margin, ..Default::default() };
    let mut assoc_records = Vec::new();
    let runs: [(&str, &Option<CensusSpec>); 3] = [
        ("census_curves.csv", &cfg.curves),
        ("census_compact_arcs.csv", &cfg.compact_arcs),
        ("census_infinite_arcs.csv", &cfg.infinite_arcs),
    ];
    for (name, job) in runs {
        let Some(job) = job else { continue };
        let census = match name {
            "census_curves.csv" => enumerate_curves(&s, job.max_length, &opts)?,
            "census_compact_arcs.csv" => enumerate_compact_arcs(&s, job.max_length, &opts)?,
            _ => enumerate_infinite_arcs(&s, job.max_length, job.t.unwrap_or(1.0), &opts)?,
        };
        certified &= census.certificate.certified;
        writeln!(
            log,
            "{name}: {} records up to L = {}, certified = {}, search radius {}",
            census.records.len(),
            job.max_length,
            census.certificate.certified,
            census.certificate.search_radius
        )?;
        let mut buf = Vec::new();
        census.write_csv(&mut buf)?;
        write(name, &buf, &mut files)?;
        for r in &census.records {
            if let ClassKey::Arc(a) = &r.key {
                if let Ok(rec) = association_record(&s, a, census.t) {
                    assoc_records.push(rec);
                }
            }
        }
    }
    if !assoc_records.is_empty() {
        let mut buf = Vec::new();
        write_association_csv(&assoc_records, &mut buf)?;
        write("association.csv", &buf, &mut files)?;
    }
    if let Some(o) = &cfg.orbit {
        let seed = s.class_from_key(&o.seed)?;
        let oopts = OrbitOptions { slack: o.slack, t: o.t, ..Default::default() };
        let p = orbit_pipeline(&s, &seed, &o.grid, &oopts)?;
        let mut buf = Vec::new();
        p.table.write_csv(&mut buf)?;
        write("counts.csv", &buf, &mut files)?;
        let mut fits = serde_json::Map::new();
        for (name, col) in [("curve", Column::Curve), ("arc", Column::Arc), ("infinite_arc", Column::InfiniteArc)] {
            if p.table.column(col).is_empty() {
                continue;
            }
            let v = match fit_table(&p.table, col) {
                Ok(f) => serde_json::to_value(f).expect("serializable"),
                Err(e) => json!({ "error": e.to_string() }),
            };
            fits.insert(name.into(), v);
        }
        let summary = json!({
            "seed": o.seed,
            "slack": o.slack,
            "t": o.t,
            "window": "upper half of the grid",
            "fits": fits,
            "k": p.k,
            "c": p.c,
            "frontier_exhausted": p.curves.frontier_exhausted && p.arcs.as_ref().map_or(true, |a| a.frontier_exhausted),
        });
        write("fit.json", json_text(&summary).as_bytes(), &mut files)?;
        writeln!(log, "orbit of {}: {} elements, curve orbit {} elements", o.seed, p.arcs.as_ref().map_or(p.curves.elements.len(), |a| a.elements.len()), p.curves.elements.len())?;
    }
    write("log.txt", &log, &mut files)?;
    Ok(Bundle { files, certified })
}
