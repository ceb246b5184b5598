use std::collections::BTreeSet;

use crate::body25::{L_ANKLE, NUM_KEYPOINTS, R_ANKLE};
use crate::error::{QualityError, Result};
use crate::mocap_io::KeypointSeries;
use crate::signal::{fill_gaps, median};
use crate::task::Side;

pub const DEFAULT_CONFIDENCE_THRESHOLD: f64 = 0.3;

/// Repetitions whose flagged-frame fraction exceeds this are discarded.
pub const MAX_FLAGGED_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimbSwapConfig {
    /// Displacement spike threshold as a multiple of the rolling median.
    pub spike_ratio: f64,
    /// Ankle crossings count as identity swaps only below this confidence.
    pub low_confidence: f64,
    /// Half-width, in displacements, of the rolling median window.
    pub median_half_window: usize,
    /// Floor for the rolling median, in pixels.
    pub min_median_px: f64,
}

impl Default for LimbSwapConfig {
    fn default() -> Self {
        LimbSwapConfig {
            spike_ratio: 5.0,
            low_confidence: 0.5,
            median_half_window: 15,
            min_median_px: 1.0,
        }
    }
}

/// Frames where left/right leg identities look exchanged.
///
/// Two rules fire:
/// * the tracked ankle's horizontal step exceeds `spike_ratio` times the
///   rolling median step (the later frame of the pair is flagged);
/// * the ankles swap horizontal order while both are low-confidence. Both
///   frames of the crossing are flagged, and every frame until the order
///   flips back is flagged as well.
///
/// Frames where an ankle has zero confidence are skipped.
pub fn detect_limb_swaps(series: &KeypointSeries, side: Side) -> Vec<usize> {
    detect_limb_swaps_with(series, side, &LimbSwapConfig::default())
}

pub fn detect_limb_swaps_with(
    series: &KeypointSeries,
    side: Side,
    config: &LimbSwapConfig,
) -> Vec<usize> {
    let n = series.len();
    let mut flagged = BTreeSet::new();
    if n < 2 {
        return vec![];
    }
    let tracked = if side.is_left() { L_ANKLE } else { R_ANKLE };

    // rule 1: displacement spikes on the tracked ankle
    let steps: Vec<Option<f64>> = (1..n)
        .map(|t| {
            let (a, b) = (series.keypoint(t - 1, tracked), series.keypoint(t, tracked));
            (a.confidence > 0.0 && b.confidence > 0.0).then(|| (b.x - a.x).abs())
        })
        .collect();
    for (k, step) in steps.iter().enumerate() {
        let Some(step) = *step else { continue };
        let lo = k.saturating_sub(config.median_half_window);
        let hi = (k + config.median_half_window + 1).min(steps.len());
        let window: Vec<f64> = steps[lo..hi].iter().flatten().copied().collect();
        let typical = median(&window).unwrap_or(0.0).max(config.min_median_px);
        if step > config.spike_ratio * typical {
            flagged.insert(k + 1);
        }
    }

    // rule 2: low-confidence identity crossings
    let mut prev: Option<(usize, bool)> = None;
    let mut swapped_since: Option<usize> = None;
    for t in 0..n {
        let (l, r) = (series.keypoint(t, L_ANKLE), series.keypoint(t, R_ANKLE));
        if l.confidence <= 0.0 || r.confidence <= 0.0 || l.x == r.x {
            continue;
        }
        let order = l.x > r.x;
        let low = l.confidence < config.low_confidence && r.confidence < config.low_confidence;
        if let Some((p, prev_order)) = prev {
            if order != prev_order {
                let (pl, pr) = (series.keypoint(p, L_ANKLE), series.keypoint(p, R_ANKLE));
                let prev_low =
                    pl.confidence < config.low_confidence && pr.confidence < config.low_confidence;
                match swapped_since {
                    Some(start) => {
                        flagged.extend(start..=p);
                        flagged.insert(t);
                        swapped_since = None;
                    }
                    None if low || prev_low => {
                        flagged.insert(p);
                        swapped_since = Some(t);
                    }
                    None => {}
                }
            }
        }
        prev = Some((t, order));
    }
    if let Some(start) = swapped_since {
        flagged.extend(start..n);
    }
    flagged.into_iter().collect()
}

/// Fraction of frames in `start..=end` that are flagged.
pub fn flagged_fraction(flags: &[usize], start: usize, end: usize) -> f64 {
    if end < start {
        return 0.0;
    }
    let count = flags.iter().filter(|&&f| f >= start && f <= end).count();
    count as f64 / (end - start + 1) as f64
}

/// A keypoint series after low-confidence samples were interpolated away.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedSeries {
    pub series: KeypointSeries,
    /// False for keypoints that never reached the threshold.
    pub usable: [bool; NUM_KEYPOINTS],
    pub threshold: f64,
}

impl MaskedSeries {
    /// Pixel trajectory of one keypoint, or a quality error when unusable.
    pub fn xy(&self, index: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        if !self.usable[index] {
            return Err(QualityError(format!(
                "keypoint {} never reaches confidence {}",
                crate::body25::NAMES[index],
                self.threshold
            ))
            .into());
        }
        let track = self.series.track(index);
        Ok((
            track.iter().map(|k| k.x).collect(),
            track.iter().map(|k| k.y).collect(),
        ))
    }
}

/// Replace keypoints below `threshold` confidence by linear interpolation of
/// the same keypoint over time. Confidence values are left untouched.
pub fn mask_low_confidence(series: &KeypointSeries, threshold: f64) -> MaskedSeries {
    let mut out = series.clone();
    let mut usable = [true; NUM_KEYPOINTS];
    for (k, ok) in usable.iter_mut().enumerate() {
        let track = series.track(k);
        let keep = |f: fn(&crate::mocap_io::Keypoint) -> f64| -> Vec<Option<f64>> {
            track
                .iter()
                .map(|kp| (kp.confidence >= threshold).then(|| f(kp)))
                .collect()
        };
        let (Some(xs), Some(ys)) = (fill_gaps(&keep(|k| k.x)), fill_gaps(&keep(|k| k.y))) else {
            *ok = false;
            continue;
        };
        for (t, frame) in out.frames.iter_mut().enumerate() {
            frame[k].x = xs[t];
            frame[k].y = ys[t];
        }
    }
    MaskedSeries {
        series: out,
        usable,
        threshold,
    }
}
