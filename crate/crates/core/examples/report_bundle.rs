// Runs a JSON experiment config and lists the bundle it writes.

use arccount::error::Result;
use arccount::report::{run_config, RunConfig};

pub fn run_example() -> Result<()> {
    let cfg = RunConfig::parse(
        r#"{
            "preset": "punctured-torus",
            "curves": {"max_length": 5},
            "infinite_arcs": {"max_length": 4, "t": 0.5},
            "orbit": {"seed": "p0:a:p0", "grid": [6, 8, 10, 12, 14, 16], "t": 1.0}
        }"#,
    )?;
    let out = std::env::temp_dir().join(format!("arccount-bundle-{}", std::process::id()));
    let bundle = run_config(&cfg, &out)?;
    println!("certified: {}", bundle.certified);
    for f in &bundle.files {
        println!("  {} ({} bytes)", f.display(), std::fs::metadata(f)?.len());
    }
    std::fs::remove_dir_all(&out)?;
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
