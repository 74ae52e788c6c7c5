// Seam lengths against cuff lengths, and the distortion constant.

use arccount::error::Result;
use arccount::pantsform::{bound_c_of_x, curve_len_from_arc, error_e, PantsDims};
use arccount::report::verify_pants;
use arccount::surface::{build_pants, ArcKind};
use arccount::words::Word;

pub fn run_example() -> Result<()> {
    let s = build_pants([Some(1.0), Some(2.0), Some(3.0)])?;
    let seam = s.arc(ArcKind::Compact, 0, &Word::identity(), 1)?;
    let d = s.arc_length(&seam)?.length;
    let p = PantsDims::new(1.0, 2.0)?;
    println!("seam 0-1: {d:.9}, predicted third cuff {:.9}", curve_len_from_arc(&p, d)?);
    for l in [d, d + 1.0, d + 3.0, d + 8.0] {
        println!("  E({l:.3}) = {:+.6}", error_e(&p, l)?);
    }
    println!("C for cuffs (1, 2, 3): {:.6}", bound_c_of_x(&[1.0, 2.0, 3.0])?);
    let check = verify_pants(50, 1)?;
    println!("50 random pants: max relative error {:.2e}", check.max_relative_error);
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
