//! Savitzky-Golay smoothing and FFT resampling of a noisy trajectory.

use markerless::preprocess::{default_window, resample, smooth, DEFAULT_POLY_ORDER};
use markerless::signal::{Signal, Unit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rms(a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64).sqrt()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fps = 30.0;
    let clean: Vec<f64> = (0..90)
        .map(|i| 100.0 * (i as f64 / fps * std::f64::consts::PI).sin())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let noisy: Vec<f64> = clean.iter().map(|v| v + rng.random_range(-3.0..3.0)).collect();

    let w = default_window(fps);
    let smoothed = smooth(&Signal::new(noisy.clone(), fps, Unit::Px)?, w, DEFAULT_POLY_ORDER)?;
    println!("window {w} frames, order {DEFAULT_POLY_ORDER}");
    println!("rms error raw {:.3} px, smoothed {:.3} px", rms(&noisy, &clean), rms(&smoothed.values, &clean));

    let common = resample(&smoothed.values, 101)?;
    println!(
        "resampled {} -> {} samples, mean {:.4} -> {:.4}",
        smoothed.len(),
        common.len(),
        smoothed.values.iter().sum::<f64>() / smoothed.len() as f64,
        common.iter().sum::<f64>() / common.len() as f64
    );
    Ok(())
}
