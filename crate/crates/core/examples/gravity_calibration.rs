//! Recover the pixel-to-metre scale from a free fall seen in image space.

use markerless::calibration::{fit_free_fall, ptm_from_gravity};
use markerless::signal::{Signal, Unit};

const G: f64 = 9.81;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fps = 100.0;
    let metres_per_pixel = 0.0021;
    let flight_s = 0.5;
    // Centre of mass height in pixels: rest, flight, rest.
    let values: Vec<f64> = (0..200)
        .map(|i| {
            let t = i as f64 / fps - 0.6;
            let h = if (0.0..flight_s).contains(&t) { 0.5 * G * t * (flight_s - t) } else { 0.0 };
            500.0 + h / metres_per_pixel
        })
        .collect();
    let com = Signal::new(values, fps, Unit::Px)?;

    let fit = fit_free_fall(&com)?;
    println!(
        "apex frame {}, fall window {:?}, a = {:.1} px/s^2, residual {:.2e}",
        fit.apex_index, fit.fall_window, fit.quadratic_coeff, fit.residual
    );
    let scale = ptm_from_gravity(&com)?;
    let err = (scale.metres_per_pixel - metres_per_pixel) / metres_per_pixel * 100.0;
    println!(
        "scale {:.6} m/px (true {metres_per_pixel}), error {err:+.3}%",
        scale.metres_per_pixel
    );
    Ok(())
}
