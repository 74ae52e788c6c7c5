// Lengths of infinite arcs on the modular torus: t-lengths, truncated
// length, lambda lengths and the depth t_alpha.

use arccount::assoc::{associate, associated_length};
use arccount::error::Result;
use arccount::pantsform::{cusp_curve_from_t_len, lambda_from_truncated, CuspQuadDims};
use arccount::surface::preset;

pub fn run_example() -> Result<()> {
    let s = preset("punctured-torus")?;
    for key in ["p0:a:p0", "p0:ab:p0", "p0:aab:p0", "p0:aaab:p0"] {
        let a = s.arc_from_key(key)?;
        let tr = s.truncated_length(&a)?;
        let ta = s.t_alpha(&a)?;
        let gamma = associated_length(&s, &associate(&s, &a)?)?;
        println!("{key}: truncated {tr:.6}, lambda {:.6}, t_alpha {ta:.6}", lambda_from_truncated(tr));
        for t in [1.0, 0.5, 0.25] {
            let lt = s.infinite_arc_t_length(&a, t)?.length;
            let pred = cusp_curve_from_t_len(&CuspQuadDims::new(t)?, lt)?;
            println!("  t = {t}: l^t = {lt:.6}, curve {gamma:.6}, from l^t {pred:.6}");
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
