//! Runs a named scenario, writes its JSON report and CSV fields, and reads the report
//! back.

use exact_uncertainty::cli_report::{emit_report, parse_report, run_scenario, Format, ScenarioSpec};
use exact_uncertainty::Result;

pub fn run() -> Result<()> {
    let spec = ScenarioSpec::new("gaussian-family").with_param("draws", 3.0).with_grid_n(2048).with_seed(7);
    let report = run_scenario(&spec)?;
    println!("{}", report.summary());

    let dir = std::env::temp_dir().join(format!("eur-scenario-report-{}", std::process::id()));
    let files = emit_report(&report, Format::Json, &dir.join("gaussian-family.json"))?;
    for f in &files {
        println!("wrote {}", f.display());
    }
    let text = std::fs::read_to_string(dir.join("gaussian-family.json"))
        .map_err(|source| exact_uncertainty::Error::Io { path: dir.clone(), source })?;
    let doc = parse_report(&text)?;
    for c in doc.checks.iter().take(4) {
        println!("{:<11} {:<28} {}", c.status.as_str(), c.paper_ref, c.name);
    }
    std::fs::remove_dir_all(&dir).map_err(|source| exact_uncertainty::Error::Io { path: dir, source })?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
