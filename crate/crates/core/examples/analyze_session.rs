//! Analyse one session manifest and print its per-repetition metrics.
//! Without an argument a synthetic drop jump session is generated first.
//!
//! cargo run --example analyze_session -- [path/to/session.json]

use std::path::PathBuf;

use markerless::pipeline::{analyze_manifest, RunConfig};
use markerless::synth::{generate, write_fixture, SynthParams};
use markerless::task::TaskCode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let manifest = match std::env::args().nth(1) {
        Some(p) => PathBuf::from(p),
        None => {
            let dir = std::env::temp_dir().join("markerless_analyze_session");
            let out = generate(&SynthParams::for_task(TaskCode::Djbl))?;
            write_fixture(&out, &dir, "P01")?
        }
    };
    let report = analyze_manifest(&manifest, &RunConfig::default())?;
    for r in &report.records {
        let ptm = r.ptm_method.map(|m| m.label()).unwrap_or("-");
        println!(
            "{:<6} {:<10} {:<7} rep {}  {:<16} {:>8.4} {}",
            r.task.as_str(),
            r.device.as_str(),
            ptm,
            r.rep_index,
            r.metric.as_str(),
            r.value,
            r.unit
        );
    }
    for d in &report.discards {
        println!("discarded {:?} rep {:?}: {}", d.device, d.rep_index, d.reason);
    }
    Ok(())
}
