//! Flag frames where the pose estimator exchanged left and right legs.

use markerless::preprocess::detect_limb_swaps;
use markerless::synth::{generate, SynthParams};
use markerless::task::TaskCode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut params = SynthParams::for_task(TaskCode::Cmjul);
    params.limb_swap = Some((1.0, 1.4));
    let out = generate(&params)?;
    let flags = detect_limb_swaps(&out.mmc, params.dominant_side);
    let fps = params.fps;
    println!("{} of {} frames flagged", flags.len(), out.mmc.frames.len());
    if let (Some(a), Some(b)) = (flags.first(), flags.last()) {
        println!("first {:.2} s, last {:.2} s (swap scripted over 1.00-1.40 s)", *a as f64 / fps, *b as f64 / fps);
    }
    Ok(())
}
