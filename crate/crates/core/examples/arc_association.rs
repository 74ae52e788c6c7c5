// Orthogeodesics on the one-holed torus and their associated curves.

use arccount::assoc::association_record;
use arccount::census::{enumerate_compact_arcs, CensusOptions};
use arccount::error::Result;
use arccount::pantsform::bound_c_of_x;
use arccount::surface::{preset, ClassKey};

pub fn run_example() -> Result<()> {
    let s = preset("one-holed-torus")?;
    let c = bound_c_of_x(s.boundary_lengths())?;
    let census = enumerate_compact_arcs(&s, 6.0, &CensusOptions::default())?;
    println!("{} arcs up to length 6; |l(curve) - 2 l(arc)| <= {c:.4}", census.records.len());
    for r in census.records.iter().take(8) {
        let ClassKey::Arc(a) = &r.key else { continue };
        let rec = association_record(&s, a, None)?;
        println!("  {:<14} {:.4} -> {:<10} {:.4}  ({:+.4})", a.to_string(), rec.arc_length, rec.curve.to_string(), rec.curve_length, rec.distortion);
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
