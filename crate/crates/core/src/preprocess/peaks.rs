use crate::error::{QualityError, Result};
use crate::signal::Signal;

use super::SegmentationConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub height: f64,
    pub prominence: f64,
}

/// Local maxima of `values`. Flat tops resolve to their middle sample
/// (left of centre for even widths); the first and last samples are never peaks.
fn local_maxima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i - 1] < values[i] {
            let mut ahead = i + 1;
            while ahead + 1 < n && values[ahead] == values[i] {
                ahead += 1;
            }
            if values[ahead] < values[i] {
                out.push((i + ahead - 1) / 2);
                i = ahead;
                continue;
            }
        }
        i += 1;
    }
    out
}

/// Height of a peak above the higher of the two lowest points reached before
/// climbing to something taller (or hitting the signal edge) on either side.
fn prominence(values: &[f64], peak: usize) -> f64 {
    let h = values[peak];
    let mut left_min = h;
    for &v in values[..peak].iter().rev() {
        if v > h {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = h;
    for &v in &values[peak + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

/// Peaks with prominence at least `min_prominence`, thinned so that no two
/// survivors are closer than `min_distance` samples (more prominent peaks win).
/// Returned in temporal order.
pub fn find_peaks(values: &[f64], min_prominence: f64, min_distance: f64) -> Vec<Peak> {
    let mut peaks: Vec<Peak> = local_maxima(values)
        .into_iter()
        .map(|i| Peak {
            index: i,
            height: values[i],
            prominence: prominence(values, i),
        })
        .filter(|p| p.prominence >= min_prominence)
        .collect();
    if min_distance > 0.0 {
        let mut order: Vec<usize> = (0..peaks.len()).collect();
        order.sort_by(|&a, &b| {
            peaks[b]
                .prominence
                .total_cmp(&peaks[a].prominence)
                .then(peaks[b].height.total_cmp(&peaks[a].height))
                .then(peaks[a].index.cmp(&peaks[b].index))
        });
        let mut keep = vec![true; peaks.len()];
        for (rank, &i) in order.iter().enumerate() {
            if !keep[i] {
                continue;
            }
            for &j in &order[rank + 1..] {
                let gap = peaks[i].index.abs_diff(peaks[j].index) as f64;
                if gap < min_distance - 1e-9 {
                    keep[j] = false;
                }
            }
        }
        let mut k = keep.into_iter();
        peaks.retain(|_| k.next().unwrap_or(false));
    }
    peaks
}

/// One maximum per repetition: prominent, well-separated local maxima, capped
/// at the `expected_reps` most prominent and re-sorted by time.
pub fn find_rep_maxima(signal: &Signal, config: &SegmentationConfig) -> Result<Vec<usize>> {
    config.validate()?;
    let values = &signal.values;
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    let mut peaks = if range > 0.0 && range.is_finite() {
        find_peaks(
            values,
            config.min_prominence_frac * range,
            config.min_peak_separation_s * signal.fps,
        )
    } else {
        Vec::new()
    };
    if peaks.len() < config.expected_reps {
        return Err(QualityError(format!(
            "found {} repetition maxima, expected {}",
            peaks.len(),
            config.expected_reps
        ))
        .into());
    }
    peaks.sort_by(|a, b| b.prominence.total_cmp(&a.prominence).then(a.index.cmp(&b.index)));
    peaks.truncate(config.expected_reps);
    let mut idx: Vec<usize> = peaks.into_iter().map(|p| p.index).collect();
    idx.sort_unstable();
    Ok(idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::signal::Unit;
    use std::f64::consts::PI;

    #[test]
    fn sinusoid_peaks_at_quarter_periods() {
        // Oracle: sin(2*pi*t) peaks at t = 0.25 + k; at 30 fps that is sample
        // 7.5 + 30k, so the sampled maximum is 7 or 8 (+30k).
        let v: Vec<f64> = (0..90).map(|i| (2.0 * PI * i as f64 / 30.0).sin()).collect();
        let s = Signal::new(v, 30.0, Unit::Px).unwrap();
        let idx = find_rep_maxima(&s, &SegmentationConfig::default()).unwrap();
        assert_eq!(idx.len(), 3);
        for (got, want) in idx.iter().zip([7.5, 37.5, 67.5]) {
            assert!((*got as f64 - want).abs() <= 0.5 + 1e-9, "{idx:?}");
        }
    }

    #[test]
    fn constant_signal_has_no_maxima() {
        let s = Signal::new(vec![1.0; 90], 30.0, Unit::Px).unwrap();
        match find_rep_maxima(&s, &SegmentationConfig::default()) {
            Err(Error::Quality(q)) => assert!(q.0.contains("found 0")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_bump_below_prominence_is_ignored() {
        let mut v = vec![0.0; 200];
        for (c, h) in [(30usize, 10.0), (90, 10.0), (150, 10.0), (180, 1.0)] {
            for (i, x) in v.iter_mut().enumerate() {
                let d = i as f64 - c as f64;
                *x += h * (-d * d / 20.0).exp();
            }
        }
        let s = Signal::new(v, 30.0, Unit::Px).unwrap();
        let idx = find_rep_maxima(&s, &SegmentationConfig::default()).unwrap();
        assert_eq!(idx, vec![30, 90, 150]);
    }

    #[test]
    fn extra_peaks_keep_most_prominent_in_time_order() {
        let mut v = vec![0.0; 300];
        for (c, h) in [(30usize, 5.0), (90, 9.0), (150, 4.0), (210, 8.0), (270, 7.0)] {
            for (i, x) in v.iter_mut().enumerate() {
                let d = i as f64 - c as f64;
                *x += h * (-d * d / 20.0).exp();
            }
        }
        let s = Signal::new(v, 30.0, Unit::Px).unwrap();
        let idx = find_rep_maxima(&s, &SegmentationConfig::default()).unwrap();
        assert_eq!(idx, vec![90, 210, 270]);
    }

    #[test]
    fn close_peaks_are_thinned_by_prominence() {
        let v = [0.0, 5.0, 0.0, 3.0, 0.0, 0.0, 0.0, 4.0, 0.0];
        let p = find_peaks(&v, 0.0, 3.0);
        let idx: Vec<usize> = p.iter().map(|p| p.index).collect();
        assert_eq!(idx, vec![1, 7]);
    }

    #[test]
    fn plateau_resolves_to_middle() {
        let v = [0.0, 1.0, 2.0, 2.0, 2.0, 1.0];
        assert_eq!(local_maxima(&v), vec![3]);
    }
}
