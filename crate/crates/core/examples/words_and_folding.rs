// Canonical forms of curves and arcs, and subgroup membership by folding.

use arccount::error::Result;
use arccount::words::{conj_canonical, double_coset_canonical, SubgroupGraph, Word};

pub fn run_example() -> Result<()> {
    let w = Word::parse("bAAbaB")?;
    println!("{w} is conjugate to the canonical {}", conj_canonical(&w)?);
    let (u, v) = (Word::parse("abAB")?, Word::parse("abAB")?);
    println!("least word in <abAB> abABaa <abAB>: {}", double_coset_canonical(&u, &Word::parse("abABaa")?, &v));

    // two immersed pants with the same third cuff but different images
    let h1 = SubgroupGraph::from_generators(&[Word::parse("a")?, Word::parse("BabAb")?]);
    let h2 = SubgroupGraph::from_generators(&[Word::parse("aBabA")?, Word::parse("b")?]);
    println!("a in <aBabA, b>: {}", h2.contains(&Word::parse("a")?));
    println!("b in <a, BabAb>: {}", h1.contains(&Word::parse("b")?));
    println!("folded graphs: {} and {} vertices", h1.vertex_count(), h2.vertex_count());
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
