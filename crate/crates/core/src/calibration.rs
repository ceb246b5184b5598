//! Pixel-to-metre conversion from three references: free fall under gravity,
//! the participant's standing height, and an object of known length.

use serde::Serialize;

use crate::body25::{L_BIG_TOE, L_SHOULDER, R_BIG_TOE, R_SHOULDER};
use crate::error::{CalibrationError, Result};
use crate::mocap_io::KeypointSeries;
use crate::signal::{argmax, median, Signal, Unit};
use crate::task::PtmMethod;

/// Standard gravity, m/s².
pub const G: f64 = 9.80665;

/// Shoulder-to-toe distance as a fraction of adult standing height.
pub const SHOULDER_TO_TOE_FRACTION: f64 = 6.0 / 8.0;

/// Standing rest phase used for the height reference, seconds.
pub const HEIGHT_REST_S: f64 = 0.5;

const MAX_FIT_RESIDUAL: f64 = 0.1;

/// Lag of the second difference that separates free fall from ground contact.
pub const FREE_FALL_LAG_S: f64 = 0.06;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PtmScale {
    pub metres_per_pixel: f64,
    pub method: PtmMethod,
    /// Normalised RMS residual of the free-fall fit (gravity only).
    pub fit_residual: Option<f64>,
}

impl PtmScale {
    fn checked(
        metres_per_pixel: f64,
        method: PtmMethod,
        fit_residual: Option<f64>,
    ) -> Result<Self, CalibrationError> {
        if !(metres_per_pixel.is_finite() && metres_per_pixel > 0.0) {
            return Err(CalibrationError::Precondition(format!(
                "scale must be positive and finite, got {metres_per_pixel}"
            )));
        }
        Ok(PtmScale {
            metres_per_pixel,
            method,
            fit_residual,
        })
    }
}

/// How the free-fall pixel distance is turned into a scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GravityMode {
    /// Least-squares parabola over the flight around the apex.
    #[default]
    Fit,
    /// One ratio `(g t² / 2) / d_px` between the apex and the end of the
    /// descent window.
    SingleRatio,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GravityFit {
    pub apex_index: usize,
    /// Inclusive frame range from the apex to the last frame used before landing.
    pub fall_window: (usize, usize),
    /// Fitted `a` in `d_px(t) = a t²`, px/s².
    pub quadratic_coeff: f64,
    pub g: f64,
    pub residual: f64,
}

/// Scale from a measured free fall: `d_m = g t² / 2` over `d_px`.
pub fn free_fall_ratio(d_px: f64, t_s: f64) -> Result<f64, CalibrationError> {
    if !(d_px > 0.0 && t_s > 0.0) {
        return Err(CalibrationError::Precondition(format!(
            "free-fall distance and time must be positive (d_px={d_px}, t={t_s})"
        )));
    }
    Ok(G * t_s * t_s / 2.0 / d_px)
}

/// Locate the flight apex and the descent window, then fit the free-fall
/// parabola.
///
/// `com_px` is the upward-positive pixel height of the COM proxy.
///
/// Free fall is found from the lagged second difference
/// `v[t + k] - 2 v[t] + v[t - k]` with `k` about [`FREE_FALL_LAG_S`]: it is
/// negative while the body is ballistic and turns positive at take-off and
/// landing. The run of negative values around the apex, less one frame at
/// each end, seeds the fit window, which then grows sample by sample while
/// new samples stay within three noise standard deviations of the fitted
/// parabola. The parabola has free offset and slope, so the curvature does
/// not depend on where the apex falls between samples.
pub fn fit_free_fall(com_px: &Signal) -> Result<GravityFit, CalibrationError> {
    com_px
        .require_unit(Unit::Px)
        .map_err(|e| CalibrationError::Precondition(e.to_string()))?;
    let v = &com_px.values;
    let n = v.len();
    let apex = argmax(v).ok_or(CalibrationError::NoApex)?;
    if apex == 0 || apex + 1 >= n || v[apex + 1..].iter().all(|&x| x >= v[apex]) {
        return Err(CalibrationError::NoApex);
    }
    let k = ((FREE_FALL_LAG_S * com_px.fps).round() as usize).max(1);
    if apex < k || apex + k >= n {
        return Err(CalibrationError::ShortDescent(0));
    }
    let falling = |t: usize| v[t + k] - 2.0 * v[t] + v[t - k] < 0.0;
    if !falling(apex) {
        return Err(CalibrationError::NoApex);
    }
    let mut lo = apex;
    while lo > k && falling(lo - 1) {
        lo -= 1;
    }
    let mut hi = apex;
    while hi + 1 + k < n && falling(hi + 1) {
        hi += 1;
    }
    let (mut start, mut end) = (lo + 1, hi.saturating_sub(1));
    if start >= apex || end <= apex || end - start + 1 < 4 {
        return Err(CalibrationError::ShortDescent(end.saturating_sub(apex) + 1));
    }

    // Grow the window one sample at a time while the next sample stays
    // within three noise standard deviations of the current parabola.
    let dt = com_px.dt();
    let t_of = |i: usize| (i as f64 - apex as f64) * dt;
    let degenerate = || CalibrationError::Precondition("degenerate free-fall window".into());
    let fit = |start: usize, end: usize| -> Option<([f64; 3], f64)> {
        let ts: Vec<f64> = (start..=end).map(t_of).collect();
        let c = fit_quadratic(&ts, &v[start..=end])?;
        let rss: f64 = (start..=end).map(|i| (v[i] - eval(&c, t_of(i))).powi(2)).sum();
        Some((c, rss))
    };
    let (mut coeffs, mut rss) = fit(start, end).ok_or_else(degenerate)?;
    let tol = 3.0 * noise_sigma(v) + 1e-9 * (v[apex] - v[start].min(v[end])).abs();
    loop {
        let fits = |i: usize| (v[i] - eval(&coeffs, t_of(i))).abs() <= tol;
        let grow_left = start > 0 && fits(start - 1);
        let grow_right = end + 1 < n && fits(end + 1);
        if !grow_left && !grow_right {
            break;
        }
        start -= grow_left as usize;
        end += grow_right as usize;
        (coeffs, rss) = fit(start, end).ok_or_else(degenerate)?;
    }

    if end - apex + 1 < 4 {
        return Err(CalibrationError::ShortDescent(end - apex + 1));
    }
    let [_, _, c2] = coeffs;
    let a = -c2;
    if !(a.is_finite() && a > 0.0) {
        return Err(CalibrationError::BadCurvature(a));
    }
    let ys = &v[start..=end];
    let span = ys.iter().cloned().fold(f64::MIN, f64::max) - ys.iter().cloned().fold(f64::MAX, f64::min);
    let residual = if span > 0.0 {
        (rss / ys.len() as f64).sqrt() / span
    } else {
        f64::INFINITY
    };
    Ok(GravityFit {
        apex_index: apex,
        fall_window: (apex, end),
        quadratic_coeff: a,
        g: G,
        residual,
    })
}

/// Robust white-noise level from third differences, which vanish on both
/// resting and ballistic stretches.
fn noise_sigma(v: &[f64]) -> f64 {
    let d3: Vec<f64> = v.windows(4).map(|w| (w[3] - 3.0 * w[2] + 3.0 * w[1] - w[0]).abs()).collect();
    1.4826 * median(&d3).unwrap_or(0.0) / 20f64.sqrt()
}

fn eval(c: &[f64; 3], t: f64) -> f64 {
    c[0] + c[1] * t + c[2] * t * t
}

/// Least-squares `y = c0 + c1 t + c2 t²`.
fn fit_quadratic(ts: &[f64], ys: &[f64]) -> Option<[f64; 3]> {
    let design = nalgebra::DMatrix::from_fn(ts.len(), 3, |r, c| ts[r].powi(c as i32));
    let rhs = nalgebra::DVector::from_column_slice(ys);
    let sol = design.svd(true, true).solve(&rhs, 1e-12).ok()?;
    Some([sol[0], sol[1], sol[2]])
}

/// Gravity reference for a bilateral jump.
pub fn ptm_from_gravity(com_px: &Signal) -> Result<PtmScale, CalibrationError> {
    ptm_from_gravity_with(com_px, GravityMode::Fit)
}

pub fn ptm_from_gravity_with(
    com_px: &Signal,
    mode: GravityMode,
) -> Result<PtmScale, CalibrationError> {
    let fit = fit_free_fall(com_px)?;
    if fit.residual > MAX_FIT_RESIDUAL {
        return Err(CalibrationError::PoorFit(fit.residual));
    }
    let scale = match mode {
        GravityMode::Fit => (G / 2.0) / fit.quadratic_coeff,
        GravityMode::SingleRatio => {
            let (apex, end) = fit.fall_window;
            let d_px = com_px.values[apex] - com_px.values[end];
            free_fall_ratio(d_px, (end - apex) as f64 / com_px.fps)?
        }
    };
    PtmScale::checked(scale, PtmMethod::Gravity, Some(fit.residual))
}

/// Height reference from a known shoulder-to-toe pixel distance.
pub fn ptm_from_shoulder_to_toe(
    shoulder_to_toe_px: f64,
    height_m: f64,
) -> Result<PtmScale, CalibrationError> {
    if !(height_m.is_finite() && height_m > 0.0) {
        return Err(CalibrationError::Precondition(format!(
            "height must be positive, got {height_m}"
        )));
    }
    if !(shoulder_to_toe_px.is_finite() && shoulder_to_toe_px > 0.0) {
        return Err(CalibrationError::Precondition(format!(
            "shoulder-to-toe distance must be positive, got {shoulder_to_toe_px}"
        )));
    }
    let height_px = shoulder_to_toe_px / SHOULDER_TO_TOE_FRACTION;
    PtmScale::checked(height_m / height_px, PtmMethod::Height, None)
}

fn mean_confident_y(series: &KeypointSeries, frame: usize, pair: [usize; 2], min_conf: f64) -> Option<f64> {
    let ys: Vec<f64> = pair
        .iter()
        .map(|&k| series.keypoint(frame, k))
        .filter(|k| k.confidence >= min_conf)
        .map(|k| k.y)
        .collect();
    (!ys.is_empty()).then(|| ys.iter().sum::<f64>() / ys.len() as f64)
}

/// Height reference: median shoulder-to-toe distance over the first half
/// second, scaled up to full height.
pub fn ptm_from_height(series: &KeypointSeries, height_m: f64) -> Result<PtmScale, CalibrationError> {
    if !(height_m.is_finite() && height_m > 0.0) {
        return Err(CalibrationError::Precondition(format!(
            "height must be positive, got {height_m}"
        )));
    }
    let rest = ((HEIGHT_REST_S * series.fps).round() as usize).clamp(1, series.len().max(1));
    let mut shoulders_seen = false;
    let mut distances = Vec::new();
    for f in 0..rest.min(series.len()) {
        let shoulder = mean_confident_y(series, f, [L_SHOULDER, R_SHOULDER], 0.3);
        shoulders_seen |= shoulder.is_some();
        let toe = mean_confident_y(series, f, [L_BIG_TOE, R_BIG_TOE], 0.3);
        if let (Some(s), Some(t)) = (shoulder, toe) {
            distances.push((t - s).abs());
        }
    }
    let Some(d) = median(&distances) else {
        return Err(CalibrationError::Unusable(if shoulders_seen { "toe" } else { "shoulder" }));
    };
    ptm_from_shoulder_to_toe(d, height_m)
}

/// Object reference, e.g. a 1.125 m barbell measured on screen.
pub fn ptm_from_object(object_len_px: f64, object_len_m: f64) -> Result<PtmScale, CalibrationError> {
    if !(object_len_px.is_finite() && object_len_px > 0.0 && object_len_m.is_finite() && object_len_m > 0.0) {
        return Err(CalibrationError::Precondition(format!(
            "object lengths must be positive (px={object_len_px}, m={object_len_m})"
        )));
    }
    PtmScale::checked(object_len_m / object_len_px, PtmMethod::Object, None)
}

/// Convert a pixel signal to metres.
pub fn apply_scale(signal_px: &Signal, ptm: &PtmScale) -> Result<Signal> {
    signal_px.require_unit(Unit::Px)?;
    Ok(signal_px.map(Unit::M, |v| v * ptm.metres_per_pixel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mocap_io::Keypoint;

    /// Upward pixel height of a body that stands, flies for `t_f` seconds and
    /// lands, sampled at `fps` with the takeoff at `t0`.
    fn flight_px(scale: f64, t_f: f64, fps: f64, t0: f64, total: f64) -> Signal {
        let n = (total * fps) as usize;
        let v0 = G * t_f / 2.0;
        let v = (0..n)
            .map(|i| {
                let t = i as f64 / fps - t0;
                let h = if (0.0..=t_f).contains(&t) {
                    v0 * t - G * t * t / 2.0
                } else {
                    0.0
                };
                h / scale
            })
            .collect();
        Signal::new(v, fps, Unit::Px).unwrap()
    }

    #[test]
    fn noiseless_free_fall_recovers_scale() {
        for t0 in [0.5, 0.51, 0.517, 0.5333] {
            let s = flight_px(0.002, 0.6, 30.0, t0, 2.0);
            let ptm = ptm_from_gravity(&s).unwrap();
            let err = (ptm.metres_per_pixel - 0.002).abs() / 0.002;
            assert!(err < 0.005, "t0={t0}: {}", ptm.metres_per_pixel);
        }
    }

    #[test]
    fn single_ratio_substitution() {
        // 0.1 s of fall: d_m = 9.80665 * 0.01 / 2 = 0.0490 m; 49.0 px -> 0.0010 m/px
        let s = free_fall_ratio(49.0, 0.1).unwrap();
        assert!((s - 0.049_033_25 / 49.0).abs() < 1e-15);
        assert!((s - 0.0010).abs() < 1e-6);
    }

    #[test]
    fn single_ratio_mode_is_close_on_clean_fall() {
        let s = flight_px(0.002, 0.6, 100.0, 0.5, 2.0);
        let ptm = ptm_from_gravity_with(&s, GravityMode::SingleRatio).unwrap();
        assert!((ptm.metres_per_pixel - 0.002).abs() / 0.002 < 0.05);
    }

    #[test]
    fn rising_signal_has_no_apex() {
        let s = Signal::new((0..60).map(|i| i as f64).collect(), 30.0, Unit::Px).unwrap();
        assert_eq!(ptm_from_gravity(&s).unwrap_err(), CalibrationError::NoApex);
    }

    #[test]
    fn scaling_pixels_scales_ptm_inversely() {
        let s = flight_px(0.002, 0.5, 30.0, 0.52, 2.0);
        let base = ptm_from_gravity(&s).unwrap().metres_per_pixel;
        for k in [0.5, 2.0, 3.7] {
            let scaled = s.map(Unit::Px, |v| v * k);
            let got = ptm_from_gravity(&scaled).unwrap().metres_per_pixel;
            assert!((got * k - base).abs() / base < 1e-9);
        }
    }

    #[test]
    fn metres_signal_is_rejected() {
        let s = flight_px(0.002, 0.5, 30.0, 0.5, 2.0);
        let m = Signal { unit: Unit::M, ..s };
        assert!(matches!(ptm_from_gravity(&m), Err(CalibrationError::Precondition(_))));
    }

    #[test]
    fn shoulder_to_toe_is_six_eighths_of_height() {
        // 675 px shoulder-to-toe -> 900 px full height; 1.80 m / 900 px = 0.002
        let ptm = ptm_from_shoulder_to_toe(675.0, 1.80).unwrap();
        assert!((ptm.metres_per_pixel - 0.002).abs() < 1e-15);
        assert!(ptm_from_shoulder_to_toe(675.0, 0.0).is_err());
    }

    #[test]
    fn height_reference_from_keypoints() {
        let mut frame = [Keypoint::new(0.0, 0.0, 0.0); 25];
        frame[L_SHOULDER] = Keypoint::new(300.0, 100.0, 0.9);
        frame[R_SHOULDER] = Keypoint::new(200.0, 100.0, 0.9);
        frame[L_BIG_TOE] = Keypoint::new(300.0, 775.0, 0.9);
        frame[R_BIG_TOE] = Keypoint::new(200.0, 775.0, 0.9);
        let series = KeypointSeries::new(vec![frame; 30], 30.0);
        let ptm = ptm_from_height(&series, 1.8).unwrap();
        assert!((ptm.metres_per_pixel - 0.002).abs() < 1e-15);
        assert_eq!(ptm.method, PtmMethod::Height);
    }

    #[test]
    fn missing_toes_are_unusable() {
        let mut frame = [Keypoint::new(0.0, 0.0, 0.0); 25];
        frame[L_SHOULDER] = Keypoint::new(300.0, 100.0, 0.9);
        let series = KeypointSeries::new(vec![frame; 30], 30.0);
        assert_eq!(
            ptm_from_height(&series, 1.8).unwrap_err(),
            CalibrationError::Unusable("toe")
        );
    }

    #[test]
    fn barbell_reference() {
        let ptm = ptm_from_object(450.0, 1.125).unwrap();
        assert!((ptm.metres_per_pixel - 0.0025).abs() < 1e-15);
        assert_eq!(ptm_from_object(3.0, 3.0).unwrap().metres_per_pixel, 1.0);
        assert!(ptm_from_object(0.0, 1.125).is_err());
    }

    #[test]
    fn scale_application() {
        let s = Signal::new(vec![0.0, 100.0, 200.0], 30.0, Unit::Px).unwrap();
        let ptm = ptm_from_object(500.0, 1.0).unwrap();
        let m = apply_scale(&s, &ptm).unwrap();
        assert_eq!(m.unit, Unit::M);
        for (a, b) in m.values.iter().zip([0.0, 0.2, 0.4]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(apply_scale(&m, &ptm).is_err());
        let z = apply_scale(&s.map(Unit::Px, |_| 0.0), &ptm).unwrap();
        assert!(z.values.iter().all(|&v| v == 0.0));
    }
}
