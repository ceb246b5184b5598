//! Synthetic study end to end: generate, analyse every session in parallel,
//! compare devices and print the agreement table.
//!
//! cargo run --release --example full_study -- [out_dir]

use std::path::PathBuf;

use markerless::agreement::TrrEstimator;
use markerless::pipeline::{analyze_all, compare, render_table, write_report, Format};
use markerless::pipeline::RunConfig;
use markerless::synth::{write_study, StudyParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        std::env::temp_dir().join("markerless_full_study")
    });
    let study = StudyParams { participants: 6, ..StudyParams::default() };
    let manifests = write_study(&study, &dir.join("sessions"))?;
    let outcome = analyze_all(&manifests, &RunConfig::default());
    println!(
        "{} sessions, {} failed, {} records",
        outcome.sessions.len(),
        outcome.failures.len(),
        outcome.records().len()
    );
    let report = compare(&outcome.records(), TrrEstimator::Icc21)?;
    write_report(&report, &dir.join("report"), &[Format::Csv, Format::Json, Format::Svg])?;
    print!("{}", render_table(&report.rows));
    println!("written to {}", dir.join("report").display());
    Ok(())
}
