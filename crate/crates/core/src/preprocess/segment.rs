use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::signal::{argmax, Signal};
use crate::task::Device;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SegmentationConfig {
    /// Seconds kept before each repetition maximum.
    pub t1_s: f64,
    /// Seconds kept after each repetition maximum.
    pub t2_s: f64,
    pub expected_reps: usize,
    pub min_peak_separation_s: f64,
    /// Minimum prominence as a fraction of the signal range.
    pub min_prominence_frac: f64,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        SegmentationConfig {
            t1_s: 1.0,
            t2_s: 1.0,
            expected_reps: 3,
            min_peak_separation_s: 1.0,
            min_prominence_frac: 0.25,
        }
    }
}

impl SegmentationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t1_s >= 0.0 && self.t2_s >= 0.0) {
            return Err(invalid("t1_s and t2_s must be non-negative"));
        }
        if self.expected_reps == 0 {
            return Err(invalid("expected_reps must be at least 1"));
        }
        if !(self.min_prominence_frac > 0.0 && self.min_prominence_frac <= 1.0) {
            return Err(invalid("min_prominence_frac must lie in (0, 1]"));
        }
        if !(self.min_peak_separation_s >= 0.0) {
            return Err(invalid("min_peak_separation_s must be non-negative"));
        }
        Ok(())
    }
}

/// One repetition window cut from a longer signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub signal: Signal,
    /// 1-based repetition number within the recording.
    pub rep_index: usize,
    /// Index of the first sample in the parent signal.
    pub start: usize,
    /// Index of the driving maximum in the parent signal.
    pub source_index: usize,
    /// Seconds before and after the maximum.
    pub window: (f64, f64),
    pub device: Device,
}

impl Segment {
    pub fn end(&self) -> usize {
        self.start + self.signal.len() - 1
    }

    /// Position of the driving maximum inside this segment.
    pub fn local_source(&self) -> usize {
        self.source_index - self.start
    }
}

/// A repetition that produced no segment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DroppedRep {
    pub rep_index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SegmentationOutcome {
    pub segments: Vec<Segment>,
    pub dropped: Vec<DroppedRep>,
}

/// Cut `[x - f*t1, x + f*t2]` around every maximum `x`. Windows that would
/// leave the signal are dropped and reported rather than clipped.
pub fn segment_reps(
    signal: &Signal,
    maxima: &[usize],
    config: &SegmentationConfig,
    device: Device,
) -> Result<SegmentationOutcome> {
    config.validate()?;
    let before = signal.frames(config.t1_s);
    let after = signal.frames(config.t2_s);
    let mut out = SegmentationOutcome::default();
    for (k, &x) in maxima.iter().enumerate() {
        let rep_index = k + 1;
        if x < before || x + after >= signal.len() {
            out.dropped.push(DroppedRep {
                rep_index,
                reason: format!(
                    "window [{}, {}] leaves signal bounds [0, {}]",
                    x as i64 - before as i64,
                    x + after,
                    signal.len().saturating_sub(1)
                ),
            });
            continue;
        }
        out.segments.push(Segment {
            signal: signal.slice(x - before, x + after),
            rep_index,
            start: x - before,
            source_index: x,
            window: (config.t1_s, config.t2_s),
            device,
        });
    }
    Ok(out)
}

/// Segments from explicit `(start_s, end_s)` windows; the source index is
/// the window's maximum.
pub fn segment_manual(
    signal: &Signal,
    windows: &[(f64, f64)],
    device: Device,
) -> Result<SegmentationOutcome> {
    let mut out = SegmentationOutcome::default();
    for (k, &(start_s, end_s)) in windows.iter().enumerate() {
        let rep_index = k + 1;
        if !(start_s >= 0.0 && end_s > start_s) {
            return Err(invalid(format!("bad manual window [{start_s}, {end_s}]")));
        }
        let start = signal.frames(start_s);
        let end = signal.frames(end_s);
        if end >= signal.len() || end <= start {
            out.dropped.push(DroppedRep {
                rep_index,
                reason: format!("manual window [{start_s}, {end_s}] s leaves the recording"),
            });
            continue;
        }
        let seg = signal.slice(start, end);
        let peak = start + argmax(&seg.values).unwrap_or(0);
        out.segments.push(Segment {
            signal: seg,
            rep_index,
            start,
            source_index: peak,
            window: (
                (peak - start) as f64 / signal.fps,
                (end - peak) as f64 / signal.fps,
            ),
            device,
        });
    }
    Ok(out)
}
