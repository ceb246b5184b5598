use serde::Serialize;

use crate::error::{invalid, quality, Result};
use crate::signal::{argmax, argmin, gradient, time_average, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VelocityMetrics {
    pub peak_mps: f64,
    pub mean_mps: f64,
    pub concentric_window: (usize, usize),
}

/// Relative tolerance, as a fraction of the excursion, within which samples
/// count as sitting on the bottom or top plateau.
pub const PLATEAU_TOLERANCE: f64 = 1e-6;

/// Concentric phase: from the global minimum to the highest point after it.
/// On a flat bottom the last plateau sample starts the phase; on a flat top
/// the first plateau sample ends it. A signal that never rises after its
/// minimum is a malformed repetition.
pub fn concentric_window(bar_m: &Signal) -> Result<(usize, usize)> {
    let v = &bar_m.values;
    let first = argmin(v).ok_or_else(|| invalid("empty signal"))?;
    let peak = first + argmax(&v[first..]).expect("non-empty");
    let (floor, top) = (v[first], v[peak]);
    if top <= floor {
        return Err(quality(format!("no rise after the minimum at sample {first}")));
    }
    let tol = PLATEAU_TOLERANCE * (top - floor);
    let lo = (first..=peak).rev().find(|&i| v[i] <= floor + tol).expect("minimum itself");
    let hi = (lo..=peak).find(|&i| v[i] >= top - tol).expect("maximum itself");
    Ok((lo, hi))
}

/// Peak and time-averaged vertical velocity inside `window` (inclusive).
///
/// Velocity uses central differences inside the window and one-sided
/// differences at its ends; the mean is the trapezoidal time average, which
/// equals the net displacement over the window duration.
pub fn velocity_metrics(signal_m: &Signal, window: (usize, usize)) -> Result<VelocityMetrics> {
    let (start, end) = window;
    if end >= signal_m.len() || end < start {
        return Err(invalid(format!(
            "window [{start}, {end}] outside signal of {} samples",
            signal_m.len()
        )));
    }
    if end - start + 1 < 3 {
        return Err(invalid(format!(
            "window has {} frames, need at least 3",
            end - start + 1
        )));
    }
    let v = gradient(&signal_m.values[start..=end], signal_m.dt());
    let peak = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(VelocityMetrics {
        peak_mps: peak,
        mean_mps: time_average(&v),
        concentric_window: window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Unit;
    use std::f64::consts::PI;

    #[test]
    fn v_shape_window() {
        let v: Vec<f64> = (0..100)
            .map(|i| match i {
                0..=39 => 1.0 - i as f64 / 40.0,
                40..=80 => (i - 40) as f64 / 40.0,
                _ => 1.0 - (i - 80) as f64 / 100.0,
            })
            .collect();
        let s = Signal::new(v, 100.0, Unit::M).unwrap();
        assert_eq!(concentric_window(&s).unwrap(), (40, 80));
    }

    #[test]
    fn flat_bottom_starts_at_last_minimum() {
        let mut v = vec![0.0; 20];
        v.extend((1..=10).map(|i| i as f64 * 0.1));
        let s = Signal::new(v, 10.0, Unit::M).unwrap();
        assert_eq!(concentric_window(&s).unwrap(), (19, 29));
        let m = velocity_metrics(&s, (19, 29)).unwrap();
        assert!((m.mean_mps - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_signals() {
        let up = Signal::new((0..10).map(|i| i as f64).collect(), 10.0, Unit::M).unwrap();
        assert_eq!(concentric_window(&up).unwrap(), (0, 9));
        let down = up.map(Unit::M, |v| -v);
        assert!(matches!(
            concentric_window(&down),
            Err(crate::error::Error::Quality(_))
        ));
    }

    #[test]
    fn linear_rise_has_unit_velocity() {
        let s = Signal::new((0..=100).map(|i| i as f64 / 100.0).collect(), 100.0, Unit::M).unwrap();
        let m = velocity_metrics(&s, (0, 100)).unwrap();
        assert!((m.peak_mps - 1.0).abs() < 1e-6);
        assert!((m.mean_mps - 1.0).abs() < 1e-6);
    }

    #[test]
    fn half_sine_press() {
        // Oracle: d/dt [A (1 - cos(pi t / T)) / 2] = A pi / (2T) sin(pi t / T);
        // peak A pi / 2T = 0.9425 m/s, time average A / T = 0.6 m/s.
        let (a, t) = (0.6, 1.0);
        let s = Signal::new(
            (0..=100)
                .map(|i| a * (1.0 - (PI * i as f64 / 100.0).cos()) / 2.0)
                .collect(),
            100.0,
            Unit::M,
        )
        .unwrap();
        let w = concentric_window(&s).unwrap();
        let m = velocity_metrics(&s, w).unwrap();
        assert!((m.peak_mps - a * PI / (2.0 * t)).abs() / (a * PI / 2.0) < 0.01);
        assert!((m.mean_mps - a / t).abs() / (a / t) < 0.01);
    }

    #[test]
    fn two_frame_window_is_rejected() {
        let s = Signal::new(vec![0.0, 1.0, 2.0], 10.0, Unit::M).unwrap();
        assert!(velocity_metrics(&s, (0, 1)).is_err());
    }
}
