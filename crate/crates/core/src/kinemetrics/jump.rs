use serde::Serialize;

use crate::error::{invalid, quality, Result};
use crate::signal::{argmax, median, Signal, Unit};

/// Leading window whose median defines the resting level, seconds.
pub const REST_WINDOW_S: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpMetrics {
    pub height_m: f64,
    pub rest_level_m: f64,
    pub apex_index: usize,
}

/// Peak displacement above the resting level, in the signal's own unit, with
/// the peak refined between samples.
/// Returns `(displacement, rest_level, apex_index)`.
pub fn jump_displacement(signal: &Signal) -> Result<(f64, f64, usize)> {
    if signal.is_empty() {
        return Err(invalid("empty signal"));
    }
    let rest = signal.frames(REST_WINDOW_S).clamp(1, signal.len());
    let rest_level = median(&signal.values[..rest]).expect("non-empty");
    let apex = argmax(&signal.values).expect("non-empty");
    if apex < rest {
        return Err(quality(format!(
            "maximum at sample {apex} lies inside the {rest}-sample rest window"
        )));
    }
    Ok((refined_peak(&signal.values, apex) - rest_level, rest_level, apex))
}

/// Peak of the parabola through the maximum and its two neighbours, or the
/// sampled maximum when it is not a strict interior peak.
fn refined_peak(v: &[f64], i: usize) -> f64 {
    if i == 0 || i + 1 >= v.len() {
        return v[i];
    }
    let (l, c, r) = (v[i - 1], v[i], v[i + 1]);
    let curvature = l - 2.0 * c + r;
    if curvature >= 0.0 {
        return c;
    }
    c - (r - l).powi(2) / (8.0 * curvature)
}

/// Vertical jump height from a toe trajectory in metres: maximum minus the
/// median of the first 0.3 s. The maximum is refined between samples with a
/// three-point parabola.
pub fn jump_height(toe_m: &Signal) -> Result<JumpMetrics> {
    toe_m.require_unit(Unit::M)?;
    let (height, rest, apex) = jump_displacement(toe_m)?;
    Ok(JumpMetrics {
        height_m: height.max(0.0),
        rest_level_m: rest,
        apex_index: apex,
    })
}
