use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use arccount::assoc::{association_record, write_association_csv};
use arccount::census::{enumerate_compact_arcs, enumerate_curves, enumerate_infinite_arcs, CensusOptions};
use arccount::error::{Error, Result};
use arccount::orbits::{orbit_census, OrbitOptions};
use arccount::report::{
    basmajian_partial_sums, fit_table, json_text, orbit_pipeline, run_config, verify_pants, Column, CountTable, RunConfig,
};
use arccount::surface::{preset, surface_to_json, ClassKey, SurfaceModel};

/// Counts curves and arcs on hyperbolic surfaces by length.
#[derive(Parser)]
#[command(name = "arccount", version)]
struct Cli {
    /// Surface: one-holed-torus, punctured-torus, pants, cusped-pants.
    #[arg(long, global = true, default_value = "one-holed-torus")]
    preset: String,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file or directory (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Curve,
    Compact,
    Infinite,
}

#[derive(Subcommand)]
enum Cmd {
    /// Prints the surface as JSON.
    Surface,
    /// Lists every class up to a length, with a completeness certificate.
    Census {
        #[arg(long, value_enum, default_value = "curve")]
        kind: Kind,
        #[arg(long)]
        max_length: f64,
        /// Cusp region area for infinite arcs.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 2.0)]
        margin: f64,
        /// Maximum number of explored group elements per search.
        #[arg(long, default_value_t = CensusOptions::default().budget)]
        budget: usize,
    },
    /// Lists the mapping-class orbit of a class up to a length.
    Orbit {
        #[arg(long)]
        seed_key: String,
        #[arg(long)]
        max_length: f64,
        #[arg(long, default_value_t = 4.0)]
        slack: f64,
        /// Cusp region area for infinite arcs.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Associates one arc, or every compact arc up to a length, with its curve.
    Assoc {
        #[arg(long)]
        seed_key: Option<String>,
        #[arg(long)]
        max_length: Option<f64>,
        /// Cusp region area for infinite arcs.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 2.0)]
        margin: f64,
    },
    /// Tabulates orbit counts on a grid of lengths.
    Count {
        #[arg(long)]
        seed_key: String,
        /// Comma-separated lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<f64>,
        #[arg(long, default_value_t = 4.0)]
        slack: f64,
        /// Cusp region area for infinite arcs.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Fits the growth exponent of a count table column over the upper half
    /// of its grid.
    Fit {
        /// Count table CSV as written by `count`.
        #[arg(long)]
        input: PathBuf,
        /// curve, arc or infinite_arc.
        #[arg(long, default_value = "arc")]
        column: String,
    },
    /// Partial sums of the orthogeodesic shadows on one boundary.
    Basmajian {
        #[arg(long)]
        max_length: f64,
        #[arg(long, default_value_t = 0)]
        boundary: usize,
        #[arg(long, default_value_t = 2.0)]
        margin: f64,
    },
    /// Compares matrix lengths with pants trigonometry on random pants.
    VerifyPants {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs a JSON config and writes the report bundle to --out.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes)?,
        None => io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn certified(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::NotCertified(what.to_string()))
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let surface = || -> Result<SurfaceModel> { preset(&cli.preset) };
    match cli.cmd {
        Cmd::Surface => emit(&cli.out, format!("{}\n", surface_to_json(&surface()?)).as_bytes()),
        Cmd::Census { kind, max_length, t, margin, budget } => {
            let s = surface()?;
            let opts = CensusOptions { margin, budget, ..Default::default() };
            let c = match kind {
                Kind::Curve => enumerate_curves(&s, max_length, &opts)?,
                Kind::Compact => enumerate_compact_arcs(&s, max_length, &opts)?,
                Kind::Infinite => enumerate_infinite_arcs(&s, max_length, t, &opts)?,
            };
            let mut buf = Vec::new();
            c.write_csv(&mut buf)?;
            emit(&cli.out, &buf)?;
            certified(c.certificate.certified, "census strata did not clear the margin")
        }
        Cmd::Orbit { seed_key, max_length, slack, t } => {
            let s = surface()?;
            let seed = s.class_from_key(&seed_key)?;
            let o = orbit_census(&s, &seed, max_length, &OrbitOptions { slack, t: Some(t), ..Default::default() })?;
            let mut buf = Vec::new();
            o.write_csv(&mut buf)?;
            emit(&cli.out, &buf)
        }
        Cmd::Assoc { seed_key, max_length, t, margin } => {
            let s = surface()?;
            let (arcs, ok) = match (seed_key, max_length) {
                (Some(k), _) => (vec![s.arc_from_key(&k)?], true),
                (None, Some(l)) => {
                    let c = enumerate_compact_arcs(&s, l, &CensusOptions { margin, ..Default::default() })?;
                    let arcs = c
                        .records
                        .iter()
                        .filter_map(|r| match &r.key {
                            ClassKey::Arc(a) => Some(a.clone()),
                            _ => None,
                        })
                        .collect();
                    (arcs, c.certificate.certified)
                }
                (None, None) => return Err(Error::Config("assoc needs --seed-key or --max-length".into())),
            };
            let records = arcs.iter().map(|a| association_record(&s, a, Some(t))).collect::<Result<Vec<_>>>()?;
            let mut buf = Vec::new();
            write_association_csv(&records, &mut buf)?;
            emit(&cli.out, &buf)?;
            certified(ok, "census strata did not clear the margin")
        }
        Cmd::Count { seed_key, grid, slack, t } => {
            let s = surface()?;
            let seed = s.class_from_key(&seed_key)?;
            let p = orbit_pipeline(&s, &seed, &grid, &OrbitOptions { slack, t: Some(t), ..Default::default() })?;
            let mut buf = Vec::new();
            p.table.write_csv(&mut buf)?;
            emit(&cli.out, &buf)?;
            let fibers: Vec<String> = p.fiber_sizes.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            if p.arcs.is_some() {
                eprintln!("k = {:?}, C = {:?}, fiber sizes {{{}}}", p.k, p.c, fibers.join(", "));
            }
            Ok(())
        }
        Cmd::Fit { input, column } => {
            let text = std::fs::read_to_string(&input)?;
            let table = CountTable::read_csv(&text)?;
            let f = fit_table(&table, Column::parse(&column)?)?;
            let v = json!({ "column": column, "window": "upper half of the grid", "fit": f });
            emit(&cli.out, json_text(&v).as_bytes())
        }
        Cmd::Basmajian { max_length, boundary, margin } => {
            let s = surface()?;
            let c = enumerate_compact_arcs(&s, max_length, &CensusOptions { margin, ..Default::default() })?;
            let grid: Vec<f64> = (1..=max_length.floor() as usize).map(|l| l as f64).collect();
            let r = basmajian_partial_sums(&s, &c, boundary, &grid)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["L", "sum", "coverage", "boundary_length"])?;
            for row in &r.rows {
                w.write_record([
                    row.l.to_string(),
                    format!("{:.16e}", row.sum),
                    format!("{:.16e}", row.coverage),
                    format!("{:.16e}", r.boundary_length),
                ])?;
            }
            let buf = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            emit(&cli.out, &buf)?;
            certified(c.certificate.certified, "census strata did not clear the margin")
        }
        Cmd::VerifyPants { samples, seed } => {
            let r = verify_pants(samples, seed)?;
            emit(&cli.out, json_text(&serde_json::to_value(&r).expect("serializable")).as_bytes())?;
            certified(r.max_relative_error < 1e-9, "relative error above 1e-9")
        }
        Cmd::Run { config } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = RunConfig::parse(&text)?;
            let out = cli.out.ok_or_else(|| Error::Config("run needs --out".into()))?;
            let b = run_config(&cfg, &out)?;
            for f in &b.files {
                eprintln!("wrote {}", f.display());
            }
            certified(b.certified, "census strata did not clear the margin")
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) | Error::BadKey(_) | Error::BadWord(_) | Error::InsufficientPoints(_) => 2,
                Error::NotCertified(_) => 3,
                _ => 1,
            })
        }
    }
}
