use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::signal::Signal;

pub const DEFAULT_POLY_ORDER: usize = 2;

/// Default window: about a third of a second, forced odd
/// (11 frames at 30 fps, 31 at 100 Hz).
pub fn default_window(fps: f64) -> usize {
    2 * (0.15 * fps).round().max(1.0) as usize + 1
}

/// Smoothing weights for every evaluation position inside a window.
///
/// Row `p` holds the weights that evaluate, at sample `p`, the least-squares
/// polynomial of degree `poly_order` fitted to the whole window. The centre
/// row is the classic convolution kernel.
pub fn savgol_weights(window: usize, poly_order: usize) -> Result<DMatrix<f64>> {
    if window.is_multiple_of(2) {
        return Err(invalid(format!("Savitzky-Golay window must be odd, got {window}")));
    }
    if window <= poly_order {
        return Err(invalid(format!(
            "Savitzky-Golay window {window} must exceed polynomial order {poly_order}"
        )));
    }
    let half = (window / 2).max(1) as f64;
    let vander = DMatrix::from_fn(window, poly_order + 1, |r, c| {
        ((r as f64 - (window / 2) as f64) / half).powi(c as i32)
    });
    let q = vander.qr().q();
    Ok(&q * q.transpose())
}

/// Savitzky-Golay smoothing. Interior samples use the centred window; the
/// first and last `window / 2` samples evaluate the polynomial fitted to the
/// window flush with that edge.
pub fn smooth(signal: &Signal, window: usize, poly_order: usize) -> Result<Signal> {
    let n = signal.len();
    if window > n {
        return Err(invalid(format!(
            "Savitzky-Golay window {window} longer than signal ({n} samples)"
        )));
    }
    let weights = savgol_weights(window, poly_order)?;
    let half = window / 2;
    let x = &signal.values;
    let apply = |row: usize, start: usize| -> f64 {
        (0..window).map(|j| weights[(row, j)] * x[start + j]).sum()
    };
    let values = (0..n)
        .map(|i| {
            if i < half {
                apply(i, 0)
            } else if i + half >= n {
                apply(i + window - n, n - window)
            } else {
                apply(half, i - half)
            }
        })
        .collect();
    Ok(Signal {
        values,
        fps: signal.fps,
        unit: signal.unit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Unit;

    fn sig(v: Vec<f64>) -> Signal {
        Signal::new(v, 30.0, Unit::Px).unwrap()
    }

    #[test]
    fn default_windows() {
        assert_eq!(default_window(30.0), 11);
        assert_eq!(default_window(100.0), 31);
    }

    #[test]
    fn quadratic_is_reproduced() {
        let s = sig((0..40).map(|i| (i * i) as f64).collect());
        let out = smooth(&s, 11, 2).unwrap();
        for (a, b) in out.values.iter().zip(&s.values) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn constant_is_unchanged() {
        let s = sig(vec![4.25; 20]);
        let out = smooth(&s, 7, 2).unwrap();
        assert!(out.values.iter().all(|v| (v - 4.25).abs() < 1e-12));
    }

    #[test]
    fn impulse_centre_coefficient_is_17_over_35() {
        // Oracle: for x = -2..=2, the quadratic least-squares fit evaluated at
        // 0 has weights (-3, 12, 17, 12, -3) / 35 (normal equations solved by
        // hand: sum x^2 = 10, sum x^4 = 34).
        let mut v = vec![0.0; 11];
        v[5] = 1.0;
        let out = smooth(&sig(v), 5, 2).unwrap();
        assert!((out.values[5] - 17.0 / 35.0).abs() < 1e-12);
        assert!((out.values[4] - 12.0 / 35.0).abs() < 1e-12);
        assert!((out.values[3] + 3.0 / 35.0).abs() < 1e-12);
    }

    #[test]
    fn even_window_and_oversized_window_fail() {
        let s = sig(vec![0.0; 5]);
        assert!(smooth(&s, 4, 2).is_err());
        assert!(smooth(&s, 7, 2).is_err());
        assert!(smooth(&s, 3, 3).is_err());
    }
}
