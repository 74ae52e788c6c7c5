// Counts an arc orbit against the orbit of its associated curve: the
// sandwich inequality and the growth exponent.

use arccount::error::Result;
use arccount::orbits::OrbitOptions;
use arccount::report::{fit_table, orbit_pipeline, sandwich_report, Column};
use arccount::surface::preset;

pub fn run_example() -> Result<()> {
    let s = preset("one-holed-torus")?;
    let grid: Vec<f64> = (4..=24).map(f64::from).collect();
    let p = orbit_pipeline(&s, &s.class_from_key("b0:a:b0")?, &grid, &OrbitOptions::default())?;
    println!("associated curve orbit: {}, k = {:?}, C = {:.4}", p.curves.seed, p.k, p.c.unwrap_or(0.0));
    let sandwich = sandwich_report(&p.arc_spectrum().expect("arc seed"), &p.curve_spectrum(), &grid[..6], p.k.unwrap_or(1), p.c.unwrap_or(0.0))?;
    for r in &sandwich.rows {
        println!("  L = {:>2}: {} <= {} <= {}", r.l, r.lower, r.n_arc, r.upper);
    }
    let f = fit_table(&p.table, Column::Arc)?;
    println!("slope {:.3} +- {:.3} over [{}, {}]", f.slope, f.stderr, f.window.0, f.window.1);
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
