// Orthogeodesic shadows filling the boundary of a one-holed torus.

use arccount::census::{enumerate_compact_arcs, CensusOptions};
use arccount::error::Result;
use arccount::report::basmajian_partial_sums;
use arccount::surface::preset;

pub fn run_example() -> Result<()> {
    let s = preset("one-holed-torus")?;
    let census = enumerate_compact_arcs(&s, 10.0, &CensusOptions::default())?;
    let grid: Vec<f64> = (2..=10).map(f64::from).collect();
    let r = basmajian_partial_sums(&s, &census, 0, &grid)?;
    println!("boundary length {:.6}", r.boundary_length);
    for row in &r.rows {
        println!("  L = {:>2}: sum {:.6}, coverage {:.4}", row.l, row.sum, row.coverage);
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
