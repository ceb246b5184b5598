use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{invalid, Result};

use super::Segment;

/// Fourier resampling to exactly `target_len` samples.
///
/// The spectrum is zero-padded (upsampling) or truncated (downsampling), the
/// Nyquist bin of an even-length spectrum is split or folded, and the inverse
/// transform is rescaled by `target_len / len`. The input is treated as one
/// period of a periodic signal.
pub fn resample(values: &[f64], target_len: usize) -> Result<Vec<f64>> {
    if target_len < 2 {
        return Err(invalid(format!("target length must be at least 2, got {target_len}")));
    }
    let n = values.len();
    if n == 0 {
        return Err(invalid("cannot resample an empty signal"));
    }
    if n == target_len {
        return Ok(values.to_vec());
    }
    if values.iter().all(|&v| v == values[0]) {
        return Ok(vec![values[0]; target_len]);
    }

    let mut planner = FftPlanner::<f64>::new();
    let mut spectrum: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut spectrum);

    let m = target_len;
    let shared = n.min(m);
    let nyq = shared / 2 + 1;
    let mut out = vec![Complex::new(0.0, 0.0); m];
    out[..nyq].copy_from_slice(&spectrum[..nyq]);
    if shared > 2 {
        let neg = shared - nyq;
        out[m - neg..].copy_from_slice(&spectrum[n - neg..]);
    }
    if shared.is_multiple_of(2) {
        let k = shared / 2;
        if m > n {
            // split the +N/2 component evenly between +N/2 and -N/2
            let half = out[k] * 0.5;
            out[k] = half;
            out[m - k] = half;
        } else {
            // fold the discarded -N/2 component onto the retained bin
            out[k] += spectrum[n - k];
        }
    }
    planner.plan_fft_inverse(m).process(&mut out);
    let scale = 1.0 / n as f64;
    Ok(out.into_iter().map(|c| c.re * scale).collect())
}

/// Resample a segment to `target_len` samples over the same time span.
pub fn resample_to(segment: &Segment, target_len: usize) -> Result<Segment> {
    let values = resample(&segment.signal.values, target_len)?;
    let n = segment.signal.len();
    let mut out = segment.clone();
    out.signal.fps = segment.signal.fps * target_len as f64 / n as f64;
    out.signal.values = values;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{Signal, Unit};
    use crate::task::Device;
    use std::f64::consts::PI;

    fn cycle(n: usize, amp: f64, phase: f64) -> Vec<f64> {
        (0..n)
            .map(|i| amp * (2.0 * PI * i as f64 / n as f64 + phase).sin())
            .collect()
    }

    #[test]
    fn single_cycle_amplitude_is_preserved() {
        let up = resample(&cycle(30, 2.5, 0.3), 100).unwrap();
        assert_eq!(up.len(), 100);
        let expected = cycle(100, 2.5, 0.3);
        for (a, b) in up.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-9);
        }
        let peak = up.iter().cloned().fold(f64::MIN, f64::max);
        assert!((peak - 2.5).abs() < 1e-6 + 2.5 * (1.0 - (PI / 100.0).cos()));
    }

    #[test]
    fn constant_is_exact() {
        let up = resample(&[3.7; 30], 100).unwrap();
        assert!(up.iter().all(|&v| v == 3.7));
    }

    #[test]
    fn same_length_is_identity() {
        let v = cycle(17, 1.0, 0.1);
        assert_eq!(resample(&v, 17).unwrap(), v);
    }

    #[test]
    fn downsampling_keeps_in_band_content() {
        let v = cycle(100, 1.0, 0.0);
        let down = resample(&v, 30).unwrap();
        for (a, b) in down.iter().zip(&cycle(30, 1.0, 0.0)) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn target_below_two_is_rejected() {
        assert!(resample(&[1.0, 2.0], 1).is_err());
    }

    #[test]
    fn segment_is_rescaled_to_truth_length() {
        let seg = Segment {
            signal: Signal::new(cycle(90, 1.0, 0.0), 30.0, Unit::M).unwrap(),
            rep_index: 1,
            start: 0,
            source_index: 22,
            window: (1.5, 1.5),
            device: Device::Mmc,
        };
        let up = resample_to(&seg, 300).unwrap();
        assert_eq!(up.signal.len(), 300);
        assert!((up.signal.fps - 100.0).abs() < 1e-12);
        assert!((up.signal.duration_s() - seg.signal.duration_s()).abs() < 1e-12);
    }
}
