// Run a JSON scenario file through the library, as the `sympsurf` binary
// does. Defaults to the `T1` divisor fixture.

use std::path::PathBuf;

use sympsurf::scenario::{run_path, RunOptions, ScenarioError};

pub fn run_example(path: &std::path::Path) -> Result<String, ScenarioError> {
    let report = run_path(path, &RunOptions::default())?;
    Ok(report.to_text())
}

fn main() -> Result<(), ScenarioError> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/t1.json")));
    print!("{}", run_example(&path)?);
    Ok(())
}
