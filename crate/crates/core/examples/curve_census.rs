// Certified census of closed geodesics on the modular torus.

use arccount::census::{enumerate_curves, CensusOptions};
use arccount::error::Result;
use arccount::surface::preset;

pub fn run_example() -> Result<()> {
    let s = preset("punctured-torus")?;
    let c = enumerate_curves(&s, 5.0, &CensusOptions::default())?;
    println!("{} curves up to length 5, certified: {}", c.records.len(), c.certificate.certified);
    for r in &c.records {
        // traces of the modular torus are three times Markov numbers
        let trace = 2.0 * (r.length / 2.0).cosh();
        println!("  {:<8} {:.6}  trace {:.3}", r.key.to_string(), r.length, trace);
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
