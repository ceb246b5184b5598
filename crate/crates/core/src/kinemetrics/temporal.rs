use serde::Serialize;

use crate::calibration::G;
use crate::error::{invalid, quality, Result};
use crate::mocap_io::ForcePlateRecord;
use crate::preprocess::find_peaks;
use crate::signal::{Signal, Unit};

/// Height above ground level that counts as airborne for hop trains, metres.
pub const AIRBORNE_MARGIN_M: f64 = 0.02;
/// Ground phases longer than this separate hop trains rather than hops.
pub const MAX_CONTACT_S: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TemporalMetrics {
    pub flight_s: f64,
    pub contact_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DropJumpTiming {
    pub timing: TemporalMetrics,
    /// Sample index of the landing from the platform.
    pub drop_landing: usize,
    pub takeoff: usize,
    pub landing: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Run {
    high: bool,
    start: usize,
    end: usize,
}

impl Run {
    fn len(&self) -> usize {
        self.end - self.start
    }
}

fn runs(mask: impl IntoIterator<Item = bool>) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::new();
    for (i, m) in mask.into_iter().enumerate() {
        match out.last_mut() {
            Some(r) if r.high == m => r.end = i + 1,
            _ => out.push(Run {
                high: m,
                start: i,
                end: i + 1,
            }),
        }
    }
    out
}

/// Pairs each interior airborne run with the ground run that follows it,
/// provided another airborne run follows and the ground run is short enough.
fn hop_pairs(runs: &[Run], fps: f64, max_contact: usize) -> Vec<TemporalMetrics> {
    let mut out = Vec::new();
    for w in runs.windows(3) {
        let (flight, contact, next) = (w[0], w[1], w[2]);
        if !flight.high || flight.start == 0 || !next.high {
            continue;
        }
        if contact.len() > max_contact {
            continue;
        }
        out.push(TemporalMetrics {
            flight_s: flight.len() as f64 / fps,
            contact_s: contact.len() as f64 / fps,
        });
    }
    out
}

/// Flight and contact times for a repeated-hop toe trajectory in metres.
///
/// Ground level is the median of the lowest tenth of samples; a sample is
/// airborne when it exceeds ground level by more than 2 cm. Airborne runs
/// touching either end of the recording are incomplete and ignored. Each
/// complete flight is paired with the ground contact that follows it when
/// another flight comes after that contact.
pub fn flight_contact_rjt(toe_m: &Signal) -> Result<Vec<TemporalMetrics>> {
    toe_m.require_unit(Unit::M)?;
    if toe_m.len() < 3 {
        return Err(invalid("signal too short for hop detection"));
    }
    let mut sorted = toe_m.values.clone();
    sorted.sort_by(f64::total_cmp);
    let decile = (sorted.len() / 10).max(1);
    let ground = crate::signal::median(&sorted[..decile]).expect("non-empty");
    let r = runs(toe_m.values.iter().map(|&v| v > ground + AIRBORNE_MARGIN_M));
    let max_contact = (MAX_CONTACT_S * toe_m.fps).round() as usize;
    Ok(hop_pairs(&r, toe_m.fps, max_contact))
}

/// Flight and contact time of a drop jump from the toe trajectory, using the
/// three most prominent toe-speed peaks (landing from the platform, push-off,
/// landing).
pub fn flight_contact_dropjump(toe: &Signal) -> Result<DropJumpTiming> {
    flight_contact_dropjump_with(toe, 3)
}

/// As [`flight_contact_dropjump`] with an explicit number of speed peaks.
/// Contact spans the first two peaks and flight the last two.
///
/// Speed is taken from forward differences between samples. A peak on a
/// descent is an impact: the event is the first sample after it where speed
/// falls below half the peak. A peak on an ascent is a push-off: the event is
/// the sample where speed last rose above half the peak.
pub fn flight_contact_dropjump_with(toe: &Signal, peaks: usize) -> Result<DropJumpTiming> {
    if peaks < 3 {
        return Err(invalid("drop jump timing needs at least three speed peaks"));
    }
    if toe.len() < 4 {
        return Err(invalid("signal too short for drop jump timing"));
    }
    let fps = toe.fps;
    let speed: Vec<f64> = toe.values.windows(2).map(|w| (w[1] - w[0]).abs() * fps).collect();
    let top = speed.iter().cloned().fold(0.0, f64::max);
    if top <= 0.0 {
        return Err(quality("toe is motionless"));
    }
    let distance = (0.1 * fps).max(1.0);
    let mut found = find_peaks(&speed, 0.1 * top, distance);
    if found.len() < peaks {
        return Err(quality(format!(
            "found {} toe speed peaks, need {peaks}",
            found.len()
        )));
    }
    found.sort_by(|a, b| b.prominence.total_cmp(&a.prominence).then(a.index.cmp(&b.index)));
    found.truncate(peaks);
    found.sort_by_key(|p| p.index);

    let event = |p: usize| -> usize {
        let half = 0.5 * speed[p];
        if toe.values[p + 1] < toe.values[p] {
            let mut j = p + 1;
            while j < speed.len() && speed[j] >= half {
                j += 1;
            }
            j
        } else {
            let mut j = p;
            while j > 0 && speed[j - 1] >= half {
                j -= 1;
            }
            j
        }
    };
    let e: Vec<usize> = found.iter().map(|p| event(p.index)).collect();
    let (drop_landing, takeoff, last_start, landing) = (e[0], e[1], e[peaks - 2], e[peaks - 1]);
    if takeoff <= drop_landing || landing <= last_start || last_start < takeoff {
        return Err(quality("toe speed peaks out of order"));
    }
    Ok(DropJumpTiming {
        timing: TemporalMetrics {
            flight_s: (landing - last_start) as f64 / fps,
            contact_s: (takeoff - drop_landing) as f64 / fps,
        },
        drop_landing,
        takeoff: last_start,
        landing,
    })
}

/// Thresholds for splitting vertical force into loaded and unloaded phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateConfig {
    /// Force below which the plate counts as unloaded, newtons.
    pub threshold_n: f64,
    /// Unloaded phases longer than this are the athlete being off the plate.
    pub max_flight_s: f64,
    pub max_contact_s: f64,
}

impl Default for PlateConfig {
    fn default() -> Self {
        PlateConfig {
            threshold_n: 20.0,
            max_flight_s: 1.0,
            max_contact_s: MAX_CONTACT_S,
        }
    }
}

impl PlateConfig {
    fn runs(&self, record: &ForcePlateRecord) -> Vec<Run> {
        runs(record.vertical_force.iter().map(|&f| f < self.threshold_n))
    }

    fn is_flight(&self, run: &Run, total: usize, fps: f64) -> bool {
        run.high && run.start > 0 && run.end < total && run.len() as f64 / fps <= self.max_flight_s
    }
}

/// Flight times from a force plate record, seconds, in temporal order.
pub fn plate_flights(record: &ForcePlateRecord, config: &PlateConfig) -> Vec<f64> {
    let total = record.vertical_force.len();
    config
        .runs(record)
        .iter()
        .filter(|r| config.is_flight(r, total, record.fps))
        .map(|r| r.len() as f64 / record.fps)
        .collect()
}

/// Drop jumps on a force plate: a contact that begins after the athlete was
/// off the plate (stepping from the platform) followed by a flight.
pub fn plate_drop_jumps(record: &ForcePlateRecord, config: &PlateConfig) -> Vec<TemporalMetrics> {
    let total = record.vertical_force.len();
    let fps = record.fps;
    let r = config.runs(record);
    let mut out = Vec::new();
    for w in r.windows(3) {
        let (before, contact, flight) = (w[0], w[1], w[2]);
        if before.high && !config.is_flight(&before, total, fps) && config.is_flight(&flight, total, fps) {
            out.push(TemporalMetrics {
                flight_s: flight.len() as f64 / fps,
                contact_s: contact.len() as f64 / fps,
            });
        }
    }
    out
}

/// Hop pairs on a force plate, paired the same way as [`flight_contact_rjt`].
pub fn plate_hops(record: &ForcePlateRecord, config: &PlateConfig) -> Vec<TemporalMetrics> {
    let total = record.vertical_force.len();
    let fps = record.fps;
    let r: Vec<Run> = config
        .runs(record)
        .into_iter()
        .map(|mut run| {
            // Long unloaded phases are not flights; treat them as breaks.
            if run.high && !config.is_flight(&run, total, fps) && run.start > 0 {
                run.high = false;
            }
            run
        })
        .collect();
    let max_contact = (config.max_contact_s * fps).round() as usize;
    hop_pairs(&r, fps, max_contact)
}

/// Ballistic jump height for a flight time.
pub fn height_from_flight(flight_s: f64) -> f64 {
    G * flight_s * flight_s / 8.0
}
