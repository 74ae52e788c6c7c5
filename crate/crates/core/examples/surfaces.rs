// Builds the preset surfaces and measures a few curves and arcs.

use arccount::error::Result;
use arccount::surface::{build_one_holed_torus, preset, surface_to_json};
use arccount::words::ConjClass;

pub fn run_example() -> Result<()> {
    for name in ["one-holed-torus", "punctured-torus", "pants", "cusped-pants"] {
        let s = preset(name)?;
        let (g, n, p) = s.signature();
        println!("{name}: genus {g}, {n} boundary, {p} cusps, boundary lengths {:?}", s.boundary_lengths());
    }
    let torus = build_one_holed_torus(4.0, 5.0, 6.0)?;
    for w in ["a", "b", "ab", "aB", "abAb"] {
        println!("  l({w}) = {:.6}", torus.curve_length(&ConjClass::parse(w)?)?);
    }
    let seam = torus.arc_from_key("b0:a:b0")?;
    println!("  orthogeodesic b0:a:b0 has length {:.6}", torus.arc_length(&seam)?.length);
    println!("{}", surface_to_json(&preset("punctured-torus")?));
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
