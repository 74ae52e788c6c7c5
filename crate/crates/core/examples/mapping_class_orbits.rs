// Orbits of a simple curve and a simple arc under Dehn twists.

use arccount::error::Result;
use arccount::orbits::{orbit_census, replay, OrbitOptions};
use arccount::surface::preset;

pub fn run_example() -> Result<()> {
    let s = preset("one-holed-torus")?;
    for seed in ["a", "b0:a:b0"] {
        let key = s.class_from_key(seed)?;
        let o = orbit_census(&s, &key, 14.0, &OrbitOptions::default())?;
        println!("orbit of {seed}: {} classes up to length 14 (frontier exhausted: {})", o.elements.len(), o.frontier_exhausted);
        for e in o.elements.iter().take(5) {
            assert_eq!(replay(&s, &key, &e.chain)?, e.key);
            println!("  {:<16} {:.4}  via [{}]", e.key.to_string(), e.length, e.chain.join(" "));
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
