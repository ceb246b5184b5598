use std::ops::Range;

use serde::Serialize;

use crate::error::{invalid, quality, Result};
use crate::signal::{fill_gaps, gradient, mean, time_average, Signal, Unit};
use crate::task::{CameraView, Side};

pub type Point2 = [f64; 2];

/// Fraction of peak angular speed that marks motion onset.
pub const ONSET_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularMetrics {
    pub rom_deg: f64,
    pub mean_angular_velocity_dps: Option<f64>,
    pub internal_deg: Option<f64>,
    pub external_deg: Option<f64>,
}

impl AngularMetrics {
    fn rom(rom_deg: f64) -> Self {
        AngularMetrics {
            rom_deg,
            mean_angular_velocity_dps: None,
            internal_deg: None,
            external_deg: None,
        }
    }
}

fn sub(a: Point2, b: Point2) -> Point2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// Acute intersection angle of two lines from their slopes, degrees.
/// `None` at the pole where the lines are perpendicular (`1 + m0 m1 = 0`).
pub fn acute_angle_from_slopes(m0: f64, m1: f64) -> Option<f64> {
    let den = 1.0 + m0 * m1;
    if den == 0.0 || !m0.is_finite() || !m1.is_finite() {
        return None;
    }
    Some(((m1 - m0) / den).abs().atan().to_degrees())
}

/// Angle between two vectors, degrees in [0, 180]. `None` when either is zero.
pub fn vector_angle_deg(f: Point2, t: Point2) -> Option<f64> {
    if f == [0.0, 0.0] || t == [0.0, 0.0] {
        return None;
    }
    let dot = f[0] * t[0] + f[1] * t[1];
    let cross = f[0] * t[1] - f[1] * t[0];
    Some(cross.abs().atan2(dot).to_degrees())
}

/// Acute angle between the lines carrying `u` and `v`, degrees in [0, 90].
///
/// Uses the slope form when both lines have a finite slope and are far from
/// perpendicular; otherwise the vector form folded onto [0, 90].
pub fn acute_line_angle_deg(u: Point2, v: Point2) -> Option<f64> {
    const POLE_MARGIN: f64 = 1e-6;
    if u[0] != 0.0 && v[0] != 0.0 {
        let (m0, m1) = (u[1] / u[0], v[1] / v[0]);
        let den = 1.0 + m0 * m1;
        if den.abs() > POLE_MARGIN * (1.0 + (m0 * m1).abs()) {
            if let Some(a) = acute_angle_from_slopes(m0, m1) {
                return Some(a);
            }
        }
    }
    vector_angle_deg(u, v).map(|a| a.min(180.0 - a))
}

/// Sign of the image x-displacement of the ankle that corresponds to internal
/// hip rotation for the given leg and camera view.
///
/// Internal rotation swings the foot laterally. Facing the camera, the
/// right side of the body appears on the left of the image.
pub fn internal_direction(leg: Side, view: CameraView) -> f64 {
    let base = if leg.is_left() { 1.0 } else { -1.0 };
    match view {
        CameraView::Rear => -base,
        _ => base,
    }
}

fn rest_mean(points: &[Point2], rest: &Range<usize>) -> Result<Point2> {
    if rest.is_empty() || rest.end > points.len() {
        return Err(invalid(format!(
            "rest window {rest:?} invalid for {} frames",
            points.len()
        )));
    }
    let n = rest.len() as f64;
    let s = points[rest.clone()]
        .iter()
        .fold([0.0, 0.0], |a, p| [a[0] + p[0], a[1] + p[1]]);
    Ok([s[0] / n, s[1] / n])
}

fn check_lengths(a: &[Point2], b: &[Point2]) -> Result<()> {
    if a.len() != b.len() || a.is_empty() {
        return Err(invalid(format!(
            "trajectories must be non-empty and equal length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Per-frame acute angle between the knee-to-ankle line and its mean
/// direction over `rest`, degrees.
pub fn rotation_angle_series(
    knee: &[Point2],
    ankle: &[Point2],
    rest: Range<usize>,
    fps: f64,
) -> Result<Signal> {
    check_lengths(knee, ankle)?;
    let tibia: Vec<Point2> = knee.iter().zip(ankle).map(|(&k, &a)| sub(a, k)).collect();
    let ka0 = rest_mean(&tibia, &rest)?;
    if ka0 == [0.0, 0.0] {
        return Err(quality("tibia has zero length at rest"));
    }
    let raw: Vec<Option<f64>> = tibia.iter().map(|&v| acute_line_angle_deg(ka0, v)).collect();
    let values = fill_gaps(&raw).ok_or_else(|| quality("tibia has zero length in every frame"))?;
    Signal::new(values, fps, Unit::Deg)
}

/// Hip rotation range of motion from knee and ankle trajectories.
///
/// Frames whose ankle lies on the `internal_sign` side of its rest position
/// count toward internal rotation, the others toward external; the range of
/// motion is the sum of the two maxima.
pub fn hip_rotation_rom(
    knee: &[Point2],
    ankle: &[Point2],
    rest: Range<usize>,
    internal_sign: f64,
) -> Result<AngularMetrics> {
    let theta = rotation_angle_series(knee, ankle, rest.clone(), 1.0)?;
    let ankle_rest = rest_mean(ankle, &rest)?;
    let (mut internal, mut external) = (0.0f64, 0.0f64);
    for (a, th) in ankle.iter().zip(&theta.values) {
        let dx = a[0] - ankle_rest[0];
        if dx * internal_sign > 0.0 {
            internal = internal.max(*th);
        } else if dx * internal_sign < 0.0 {
            external = external.max(*th);
        }
    }
    Ok(AngularMetrics {
        rom_deg: internal + external,
        mean_angular_velocity_dps: None,
        internal_deg: Some(internal),
        external_deg: Some(external),
    })
}

/// Joint angle at `joint` between the segments to `proximal` and `distal`,
/// degrees in [0, 180]. Frames where either segment has zero length are
/// interpolated from their neighbours.
pub fn joint_angle_series(
    proximal: &[Point2],
    joint: &[Point2],
    distal: &[Point2],
    fps: f64,
) -> Result<Signal> {
    check_lengths(proximal, joint)?;
    check_lengths(joint, distal)?;
    let raw: Vec<Option<f64>> = (0..joint.len())
        .map(|i| vector_angle_deg(sub(proximal[i], joint[i]), sub(distal[i], joint[i])))
        .collect();
    let values = fill_gaps(&raw).ok_or_else(|| quality("degenerate segments in every frame"))?;
    Signal::new(values, fps, Unit::Deg)
}

/// Angle between the `proximal`→`distal` vector in each frame and its mean
/// direction over `rest`, degrees in [0, 180].
pub fn segment_rotation_series(
    proximal: &[Point2],
    distal: &[Point2],
    rest: Range<usize>,
    fps: f64,
) -> Result<Signal> {
    check_lengths(proximal, distal)?;
    let seg: Vec<Point2> = proximal.iter().zip(distal).map(|(&p, &d)| sub(d, p)).collect();
    let rest_vec = rest_mean(&seg, &rest)?;
    let raw: Vec<Option<f64>> = seg.iter().map(|&v| vector_angle_deg(rest_vec, v)).collect();
    let values = fill_gaps(&raw).ok_or_else(|| quality("segment has zero length"))?;
    Signal::new(values, fps, Unit::Deg)
}

/// Largest absolute departure from the mean angle over `rest`.
pub fn rom_from_angle_series(angle: &Signal, rest: Range<usize>) -> Result<AngularMetrics> {
    angle.require_unit(Unit::Deg)?;
    if rest.is_empty() || rest.end > angle.len() {
        return Err(invalid(format!(
            "rest window {rest:?} invalid for {} frames",
            angle.len()
        )));
    }
    let rest_level = mean(&angle.values[rest]).expect("non-empty");
    let rom = angle
        .values
        .iter()
        .map(|v| (v - rest_level).abs())
        .fold(0.0, f64::max);
    Ok(AngularMetrics::rom(rom))
}

/// Mean angular speed from motion onset to peak angular speed, deg/s.
pub fn mean_angular_velocity(angle: &Signal) -> Result<f64> {
    angle.require_unit(Unit::Deg)?;
    if angle.len() < 2 {
        return Err(invalid("angle signal too short"));
    }
    let w: Vec<f64> = gradient(&angle.values, angle.dt()).iter().map(|v| v.abs()).collect();
    let (peak_i, peak) = w
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    if peak == 0.0 {
        return Err(quality("angle never changes"));
    }
    let onset = w
        .iter()
        .position(|&v| v > ONSET_FRACTION * peak)
        .expect("peak exceeds threshold");
    Ok(time_average(&w[onset..=peak_i]))
}
