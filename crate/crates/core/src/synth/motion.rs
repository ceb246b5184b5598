//! Continuous-time motion scripts for each synthetic task.

use std::collections::BTreeMap;

use crate::body25::*;
use crate::calibration::G;
use crate::kinemetrics::{internal_direction, ONSET_FRACTION};
use crate::task::{CameraView, Metric, Side, TaskCode};

use super::model::*;

const LEAD_S: f64 = 1.5;
const GAP_S: f64 = 1.6;
const TAIL_S: f64 = 1.2;

pub type Truth = BTreeMap<Metric, f64>;

/// Per-repetition settings after jitter.
#[derive(Debug, Clone, Copy)]
pub struct RepSpec {
    pub flight_s: f64,
    pub contact_s: f64,
    pub amplitude_m: f64,
    pub concentric_s: f64,
    pub rom_deg: f64,
}

pub struct Motion {
    pub duration_s: f64,
    pub view: CameraView,
    pub pose: Box<dyn Fn(f64) -> Pose + Sync>,
    pub force: Option<Box<dyn Fn(f64) -> f64 + Sync>>,
    pub truth: Vec<Truth>,
    /// Representative instant of each repetition (apex, top, end of sweep).
    pub centres: Vec<f64>,
    pub manual_segments: Vec<(f64, f64)>,
    /// Suggested segmentation window (before, after) around each centre.
    pub window: (f64, f64),
}

/// Start times of repetitions laid out with fixed lead, gap and tail.
fn layout(lengths: &[f64], gap: f64) -> (Vec<f64>, f64) {
    let mut t = LEAD_S;
    let mut starts = Vec::with_capacity(lengths.len());
    for (i, l) in lengths.iter().enumerate() {
        if i > 0 {
            t += gap;
        }
        starts.push(t);
        t += l;
    }
    (starts, t + TAIL_S)
}

/// Index of the repetition active at `t` and its local time.
fn active(starts: &[f64], lengths: &[f64], t: f64) -> Option<(usize, f64)> {
    starts
        .iter()
        .zip(lengths)
        .position(|(&s, &l)| t >= s && t < s + l)
        .map(|k| (k, t - starts[k]))
}

fn ballistic(u: f64, flight: f64) -> f64 {
    let v0 = G * flight / 2.0;
    v0 * u - 0.5 * G * u * u
}

// Countermovement jump phases, seconds.
const DIP_S: f64 = 0.5;
const PUSH_S: f64 = 0.3;
const LAND_S: f64 = 0.2;
const RECOVER_S: f64 = 0.5;

fn landing(tau: f64, flight: f64, h: f64) -> (f64, f64) {
    let v0 = G * flight / 2.0;
    let depth = -0.08 * h;
    if tau < LAND_S {
        (0.0, hermite(tau / LAND_S, 0.0, -v0 * LAND_S, depth, 0.0))
    } else {
        (0.0, depth * (1.0 - ease((tau - LAND_S) / RECOVER_S)))
    }
}

fn cmj_offsets(tau: f64, flight: f64, h: f64) -> (f64, f64) {
    let v0 = G * flight / 2.0;
    let dip = -0.14 * h;
    if tau < DIP_S {
        (0.0, dip * ease(tau / DIP_S))
    } else if tau < DIP_S + PUSH_S {
        (0.0, hermite((tau - DIP_S) / PUSH_S, dip, 0.0, 0.0, v0 * PUSH_S))
    } else if tau < DIP_S + PUSH_S + flight {
        let z = ballistic(tau - DIP_S - PUSH_S, flight);
        (z, z)
    } else {
        landing(tau - DIP_S - PUSH_S - flight, flight, h)
    }
}

pub fn cmj(reps: &[RepSpec], h: f64, mass: f64) -> Motion {
    let lengths: Vec<f64> = reps
        .iter()
        .map(|r| DIP_S + PUSH_S + r.flight_s + LAND_S + RECOVER_S)
        .collect();
    let (starts, duration) = layout(&lengths, GAP_S);
    let base = standing_front(h);
    let flights: Vec<f64> = reps.iter().map(|r| r.flight_s).collect();
    let (s1, l1, f1) = (starts.clone(), lengths.clone(), flights.clone());
    let pose = move |t: f64| match active(&s1, &l1, t) {
        Some((k, tau)) => {
            let (foot, body) = cmj_offsets(tau, f1[k], h);
            shifted(&base, foot, body)
        }
        None => base,
    };
    let (s2, l2) = (starts.clone(), lengths.clone());
    let force = move |t: f64| {
        let w = mass * G;
        match active(&s2, &l2, t) {
            Some((k, tau)) => {
                let f = flights[k];
                if tau < DIP_S {
                    w * (1.0 - 0.4 * (std::f64::consts::PI * tau / DIP_S).sin())
                } else if tau < DIP_S + PUSH_S {
                    2.2 * w
                } else if tau < DIP_S + PUSH_S + f {
                    0.0
                } else if tau < DIP_S + PUSH_S + f + LAND_S {
                    3.5 * w
                } else {
                    w * (1.0 + 0.5 * (1.0 - ease((tau - DIP_S - PUSH_S - f - LAND_S) / RECOVER_S)))
                }
            }
            None => w,
        }
    };
    Motion {
        duration_s: duration,
        view: CameraView::Front,
        pose: Box::new(pose),
        force: Some(Box::new(force)),
        truth: reps
            .iter()
            .map(|r| Truth::from([(Metric::JumpHeight, 100.0 * G * r.flight_s.powi(2) / 8.0)]))
            .collect(),
        centres: starts
            .iter()
            .zip(reps)
            .map(|(s, r)| s + DIP_S + PUSH_S + r.flight_s / 2.0)
            .collect(),
        manual_segments: Vec::new(),
        window: (1.5, 1.0),
    }
}

const STEP_REST_S: f64 = 1.0;
const STEP_UP_S: f64 = 1.0;

pub fn drop_jump(reps: &[RepSpec], h: f64, mass: f64) -> Motion {
    let fall = (2.0 * PLATFORM_M / G).sqrt();
    let v_fall = G * fall;
    let lengths: Vec<f64> = reps
        .iter()
        .map(|r| fall + r.contact_s + r.flight_s + LAND_S + RECOVER_S + STEP_REST_S + STEP_UP_S)
        .collect();
    let (starts, duration) = layout(&lengths, GAP_S);
    let base = standing_front(h);
    let specs = reps.to_vec();
    // Offsets (foot, body) and plate force for local time `tau` of rep `r`.
    let phase = move |r: &RepSpec, tau: f64| -> ((f64, f64), f64) {
        let w = mass * G;
        let (c, f) = (r.contact_s, r.flight_s);
        let v0 = G * f / 2.0;
        if tau < fall {
            let z = PLATFORM_M - 0.5 * G * tau * tau;
            ((z, z), 0.0)
        } else if tau < fall + c {
            let s = (tau - fall) / c;
            ((0.0, hermite(s, 0.0, -v_fall * c, 0.0, v0 * c)), 2.5 * w)
        } else if tau < fall + c + f {
            let z = ballistic(tau - fall - c, f);
            ((z, z), 0.0)
        } else if tau < fall + c + f + LAND_S + RECOVER_S {
            let u = tau - fall - c - f;
            (landing(u, f, h), if u < LAND_S { 3.5 * w } else { w })
        } else if tau < fall + c + f + LAND_S + RECOVER_S + STEP_REST_S {
            ((0.0, 0.0), w)
        } else {
            let s = (tau - (fall + c + f + LAND_S + RECOVER_S + STEP_REST_S)) / STEP_UP_S;
            let z = PLATFORM_M * ease(s);
            ((z, z), if s < 0.5 { w } else { 0.0 })
        }
    };
    let phase = std::sync::Arc::new(phase);
    let (s1, l1, r1, p1) = (starts.clone(), lengths.clone(), specs.clone(), phase.clone());
    let pose = move |t: f64| match active(&s1, &l1, t) {
        Some((k, tau)) => {
            let ((foot, body), _) = p1(&r1[k], tau);
            shifted(&base, foot, body)
        }
        None => shifted(&base, PLATFORM_M, PLATFORM_M),
    };
    let (s2, l2, r2) = (starts.clone(), lengths.clone(), specs);
    let force = move |t: f64| match active(&s2, &l2, t) {
        Some((k, tau)) => phase(&r2[k], tau).1,
        None => 0.0,
    };
    Motion {
        duration_s: duration,
        view: CameraView::Front,
        pose: Box::new(pose),
        force: Some(Box::new(force)),
        truth: reps
            .iter()
            .map(|r| {
                Truth::from([
                    (Metric::JumpHeight, 100.0 * G * r.flight_s.powi(2) / 8.0),
                    (Metric::FlightTime, r.flight_s),
                    (Metric::ContactTime, r.contact_s),
                ])
            })
            .collect(),
        centres: starts
            .iter()
            .zip(reps)
            .map(|(s, r)| s + fall + r.contact_s + r.flight_s / 2.0)
            .collect(),
        manual_segments: starts
            .iter()
            .zip(reps)
            .map(|(s, r)| (s - 0.5, s + fall + r.contact_s + r.flight_s + LAND_S + RECOVER_S))
            .collect(),
        window: (1.2, 0.8),
    }
}

/// Repeated hops: `reps + 1` flights so that every contact between flights
/// closes one (flight, contact) pair. Flights use a steep-sided profile so the
/// airborne threshold is crossed within a millisecond of the true instants.
pub fn hops(reps: &[RepSpec], h: f64, mass: f64) -> Motion {
    let mut flights: Vec<f64> = reps.iter().map(|r| r.flight_s).collect();
    flights.push(reps.last().map_or(0.4, |r| r.flight_s));
    let contacts: Vec<f64> = reps.iter().map(|r| r.contact_s).collect();
    let mut bounds = Vec::new();
    let mut t = LEAD_S;
    for (i, f) in flights.iter().enumerate() {
        bounds.push((t, *f));
        t += f;
        if let Some(c) = contacts.get(i) {
            t += c;
        }
    }
    let duration = t + TAIL_S;
    let base = standing_front(h);
    let b1 = bounds.clone();
    let airborne = move |t: f64| {
        b1.iter()
            .find(|(s, f)| t > *s && t < s + f)
            .map(|&(s, f)| (s, f))
    };
    let air = std::sync::Arc::new(airborne);
    let a1 = air.clone();
    let pose = move |t: f64| match a1(t) {
        Some((s, f)) => {
            let peak = G * f * f / 8.0;
            let z = peak * (std::f64::consts::PI * (t - s) / f).sin().max(0.0).sqrt();
            shifted(&base, z, z)
        }
        None => base,
    };
    let first = LEAD_S;
    let force = move |t: f64| {
        let w = mass * G;
        if air(t).is_some() {
            0.0
        } else if t > first && t < duration - TAIL_S {
            2.5 * w
        } else {
            w
        }
    };
    Motion {
        duration_s: duration,
        view: CameraView::Front,
        pose: Box::new(pose),
        force: Some(Box::new(force)),
        truth: reps
            .iter()
            .map(|r| Truth::from([(Metric::FlightTime, r.flight_s), (Metric::ContactTime, r.contact_s)]))
            .collect(),
        centres: bounds.iter().take(reps.len()).map(|(s, f)| s + f / 2.0).collect(),
        manual_segments: Vec::new(),
        window: (LEAD_S, TAIL_S),
    }
}

const HOLD_S: f64 = 0.3;

fn press_truth(r: &RepSpec) -> Truth {
    let (a, t) = (r.amplitude_m, r.concentric_s);
    Truth::from([
        (Metric::PeakVelocity, a * std::f64::consts::PI / (2.0 * t)),
        (Metric::MeanVelocity, a / t),
    ])
}

/// Overhead press: the bar rises from the shoulders by `amplitude_m` along a
/// half-cosine over `concentric_s`, holds, and returns more slowly.
pub fn overhead_press(reps: &[RepSpec], h: f64) -> Motion {
    let lengths: Vec<f64> = reps.iter().map(|r| 2.5 * r.concentric_s + HOLD_S).collect();
    let (starts, duration) = layout(&lengths, GAP_S);
    let mut base = standing_front(h);
    base[R_WRIST] = [-0.14 * h, 0.77 * h];
    base[L_WRIST] = [0.14 * h, 0.77 * h];
    base[R_ELBOW] = [-0.17 * h, 0.66 * h];
    base[L_ELBOW] = [0.17 * h, 0.66 * h];
    let (s1, l1, r1) = (starts.clone(), lengths.clone(), reps.to_vec());
    let pose = move |t: f64| {
        let lift = match active(&s1, &l1, t) {
            Some((k, tau)) => {
                let (a, c) = (r1[k].amplitude_m, r1[k].concentric_s);
                if tau < c {
                    a * ease(tau / c)
                } else if tau < c + HOLD_S {
                    a
                } else {
                    a * (1.0 - ease((tau - c - HOLD_S) / (1.5 * c)))
                }
            }
            None => 0.0,
        };
        let mut p = base;
        for i in [R_WRIST, L_WRIST] {
            p[i][1] += lift;
        }
        for i in [R_ELBOW, L_ELBOW] {
            p[i][1] += 0.5 * lift;
        }
        p
    };
    Motion {
        duration_s: duration,
        view: CameraView::Front,
        pose: Box::new(pose),
        force: None,
        truth: reps.iter().map(press_truth).collect(),
        centres: starts
            .iter()
            .zip(reps)
            .map(|(s, r)| s + r.concentric_s + HOLD_S / 2.0)
            .collect(),
        manual_segments: Vec::new(),
        window: (
            reps.iter().map(|r| r.concentric_s).fold(0.0, f64::max) + HOLD_S / 2.0 + 0.5,
            1.0,
        ),
    }
}

/// Back squat: descend by `amplitude_m` over 1.5 × `concentric_s`, pause,
/// then rise along a half-cosine over `concentric_s`.
pub fn back_squat(reps: &[RepSpec], h: f64) -> Motion {
    let lengths: Vec<f64> = reps.iter().map(|r| 2.5 * r.concentric_s + HOLD_S).collect();
    let (starts, duration) = layout(&lengths, GAP_S);
    let mut base = standing_front(h);
    base[R_WRIST] = [-0.16 * h, 0.77 * h];
    base[L_WRIST] = [0.16 * h, 0.77 * h];
    base[R_ELBOW] = [-0.19 * h, 0.68 * h];
    base[L_ELBOW] = [0.19 * h, 0.68 * h];
    let (s1, l1, r1) = (starts.clone(), lengths.clone(), reps.to_vec());
    let pose = move |t: f64| {
        let depth = match active(&s1, &l1, t) {
            Some((k, tau)) => {
                let (a, c) = (r1[k].amplitude_m, r1[k].concentric_s);
                if tau < 1.5 * c {
                    a * ease(tau / (1.5 * c))
                } else if tau < 1.5 * c + HOLD_S {
                    a
                } else {
                    a * (1.0 - ease((tau - 1.5 * c - HOLD_S) / c))
                }
            }
            None => 0.0,
        };
        shifted(&base, 0.0, -depth)
    };
    let longest = reps.iter().map(|r| r.concentric_s).fold(0.0, f64::max);
    Motion {
        duration_s: duration,
        view: CameraView::Front,
        pose: Box::new(pose),
        force: None,
        truth: reps.iter().map(press_truth).collect(),
        centres: starts
            .iter()
            .zip(reps)
            .map(|(s, r)| s + 1.5 * r.concentric_s + HOLD_S / 2.0)
            .collect(),
        manual_segments: Vec::new(),
        window: (1.0, longest + HOLD_S / 2.0 + 0.5),
    }
}

/// Sweep profile: out over `c`, hold, back over `2c`. Returns the fraction of
/// the programmed excursion.
fn sweep(tau: f64, c: f64) -> f64 {
    if tau < c {
        ease(tau / c)
    } else if tau < c + HOLD_S {
        1.0
    } else {
        1.0 - ease((tau - c - HOLD_S) / (2.0 * c))
    }
}

fn sweep_lengths(reps: &[RepSpec]) -> Vec<f64> {
    reps.iter().map(|r| 3.0 * r.concentric_s + HOLD_S).collect()
}

/// Mean angular speed from 5%-of-peak onset to the peak of a half-cosine
/// sweep of `rom` degrees over `c` seconds.
pub fn sweep_mean_angular_velocity(rom: f64, c: f64) -> f64 {
    let onset = ONSET_FRACTION.asin() / std::f64::consts::PI;
    rom * (0.5 - ease(onset)) / (c * (0.5 - onset))
}

fn sweep_motion(
    reps: &[RepSpec],
    view: CameraView,
    metrics: &[Metric],
    pose: impl Fn(f64) -> Pose + Sync + 'static,
) -> Motion {
    let lengths = sweep_lengths(reps);
    let (starts, duration) = layout(&lengths, GAP_S);
    let longest = reps.iter().map(|r| r.concentric_s).fold(0.0, f64::max);
    Motion {
        duration_s: duration,
        view,
        pose: Box::new(pose),
        force: None,
        truth: reps
            .iter()
            .map(|r| {
                metrics
                    .iter()
                    .map(|&m| {
                        let v = match m {
                            Metric::AngularVelocity => {
                                sweep_mean_angular_velocity(r.rom_deg, r.concentric_s)
                            }
                            _ => r.rom_deg,
                        };
                        (m, v)
                    })
                    .collect()
            })
            .collect(),
        centres: starts
            .iter()
            .zip(reps)
            .map(|(s, r)| s + r.concentric_s + HOLD_S / 2.0)
            .collect(),
        manual_segments: Vec::new(),
        window: (longest + HOLD_S / 2.0 + 0.5, 2.0 * longest + HOLD_S / 2.0 + 0.5),
    }
}

/// Angle (radians) of the programmed sweep at time `t`.
fn sweep_angle(starts: &[f64], lengths: &[f64], reps: &[RepSpec], t: f64) -> f64 {
    match active(starts, lengths, t) {
        Some((k, tau)) => reps[k].rom_deg.to_radians() * sweep(tau, reps[k].concentric_s),
        None => 0.0,
    }
}

/// Seated hip rotation: the shank swings about the knee in the frontal plane,
/// toward internal rotation for HIR and external for HER.
pub fn hip_rotation(task: TaskCode, reps: &[RepSpec], h: f64, side: Side) -> Motion {
    let internal = internal_direction(side, CameraView::Front);
    let dir = if task == TaskCode::Hir { internal } else { -internal };
    let lengths = sweep_lengths(reps);
    let (starts, _) = layout(&lengths, GAP_S);
    let base = seated_front(h);
    let chain = lower_leg(side.is_left());
    let (s1, l1, r1) = (starts, lengths, reps.to_vec());
    let pose = move |t: f64| {
        let mut p = base;
        let phi = sweep_angle(&s1, &l1, &r1, t);
        let knee = p[chain[0]];
        rotate(&mut p, &chain[1..], knee, dir * phi);
        p
    };
    sweep_motion(reps, CameraView::Front, &[Metric::Rom], pose)
}

/// Nordic curl: trunk and thighs lean forward about the knees.
pub fn nordic_curl(reps: &[RepSpec], h: f64) -> Motion {
    let lengths = sweep_lengths(reps);
    let (starts, _) = layout(&lengths, GAP_S);
    let (s1, l1, r1) = (starts, lengths, reps.to_vec());
    let pose = move |t: f64| kneeling_side(h, sweep_angle(&s1, &l1, &r1, t));
    sweep_motion(reps, CameraView::Right, &[Metric::Rom, Metric::AngularVelocity], pose)
}

/// Single-leg squat on the dominant leg.
pub fn single_leg_squat(reps: &[RepSpec], h: f64, side: Side) -> Motion {
    let lengths = sweep_lengths(reps);
    let (starts, _) = layout(&lengths, GAP_S);
    let (s1, l1, r1) = (starts, lengths, reps.to_vec());
    let pose = move |t: f64| single_leg_side(h, sweep_angle(&s1, &l1, &r1, t), side.is_left());
    sweep_motion(reps, CameraView::Right, &[Metric::Rom, Metric::AngularVelocity], pose)
}

/// Straight leg raise of the dominant leg from supine.
pub fn leg_raise(reps: &[RepSpec], h: f64, side: Side) -> Motion {
    let lengths = sweep_lengths(reps);
    let (starts, _) = layout(&lengths, GAP_S);
    let (s1, l1, r1) = (starts, lengths, reps.to_vec());
    let pose = move |t: f64| supine_side(h, sweep_angle(&s1, &l1, &r1, t), side.is_left());
    sweep_motion(reps, CameraView::Right, &[Metric::Rom], pose)
}
