//! Generate a synthetic countermovement jump session and write it in the
//! capture input formats.
//!
//! cargo run --example synth_fixture -- [out_dir]

use std::path::PathBuf;

use markerless::synth::{generate, write_fixture, SynthParams};
use markerless::task::{Metric, TaskCode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        std::env::temp_dir().join("markerless_synth_fixture")
    });
    let mut params = SynthParams::for_task(TaskCode::Cmjbl);
    params.noise_sigma_px = 1.0;
    params.seed = 11;
    let out = generate(&params)?;
    let manifest = write_fixture(&out, &dir, "P01")?;
    println!("manifest: {}", manifest.display());
    println!("{} frames at {} fps", out.mmc.frames.len(), params.fps);
    for (i, h) in out.truth.values(Metric::JumpHeight).iter().enumerate() {
        println!("rep {}: programmed jump height {:.2} {}", i + 1, h, Metric::JumpHeight.unit());
    }
    Ok(())
}
