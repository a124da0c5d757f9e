use std::path::Path;

use ramify::cli::{run, RunConfig, RunOptions};

fn main() -> ramify::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/klein_four.toml").into());
    let cfg = RunConfig::load(Path::new(&path))?;
    let report = run(&cfg, &RunOptions::default())?;
    print!("{}", report.to_markdown());
    print!("{}", report.herbrand_csv());
    Ok(())
}
