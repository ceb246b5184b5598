use std::ops::Range;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::body25::*;
use crate::calibration::{
    apply_scale, ptm_from_gravity, ptm_from_height, ptm_from_object, PtmScale,
};
use crate::error::{invalid, quality, Error, Result};
use crate::kinemetrics::{
    flight_contact_dropjump_with, flight_contact_rjt, height_from_flight, hip_rotation_rom,
    internal_direction, joint_angle_series, jump_height, mean_angular_velocity, plate_drop_jumps,
    plate_flights, plate_hops, rom_from_angle_series, rotation_angle_series,
    segment_rotation_series, concentric_window, velocity_metrics, PlateConfig, Point2,
    TemporalMetrics,
};
use crate::mocap_io::{load_session, MarkerSeries, Session, DEFAULT_BARBELL_LENGTH_M};
use crate::preprocess::{
    default_window, detect_limb_swaps, find_rep_maxima, flagged_fraction, mask_low_confidence,
    segment_manual, segment_reps, smooth, MaskedSeries, Segment, SegmentationConfig,
};
use crate::signal::{mean, median, Signal, Unit};
use crate::task::{Device, Metric, PtmMethod, Side, TaskCode};

use super::{sort_records, Discard, MetricRecord, RunConfig};

/// Leading seconds of a recording treated as the resting posture.
const RECORDING_REST_S: f64 = 0.5;
/// Leading seconds of a repetition window treated as its resting posture.
const SEGMENT_REST_S: f64 = 0.3;

/// Everything one session produced.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SessionReport {
    pub source: PathBuf,
    pub records: Vec<MetricRecord>,
    pub discards: Vec<Discard>,
    pub flagged_frames: usize,
    pub notes: Vec<String>,
}

#[derive(Debug, Default)]
pub struct AnalyzeOutcome {
    pub sessions: Vec<SessionReport>,
    pub failures: Vec<(PathBuf, String)>,
}

impl AnalyzeOutcome {
    pub fn records(&self) -> Vec<MetricRecord> {
        let mut all: Vec<MetricRecord> =
            self.sessions.iter().flat_map(|s| s.records.iter().cloned()).collect();
        sort_records(&mut all);
        all
    }

    pub fn discards(&self) -> Vec<Discard> {
        self.sessions.iter().flat_map(|s| s.discards.iter().cloned()).collect()
    }

    /// True when at least one session was processed.
    pub fn any_succeeded(&self) -> bool {
        !self.sessions.is_empty()
    }
}

/// Analyse every manifest concurrently. A failing session is logged and
/// skipped; the others complete.
pub fn analyze_all(paths: &[PathBuf], cfg: &RunConfig) -> AnalyzeOutcome {
    let results: Vec<(PathBuf, Result<SessionReport>)> = paths
        .par_iter()
        .map(|p| (p.clone(), analyze_manifest(p, cfg)))
        .collect();
    let mut out = AnalyzeOutcome::default();
    for (path, r) in results {
        match r {
            Ok(s) => out.sessions.push(s),
            Err(e) => {
                log::error!("{}: session skipped: {e}", path.display());
                out.failures.push((path, e.to_string()));
            }
        }
    }
    out.sessions.sort_by(|a, b| a.source.cmp(&b.source));
    out
}

pub fn analyze_manifest(path: &Path, cfg: &RunConfig) -> Result<SessionReport> {
    let session = load_session(path)?;
    analyze_session(&session, cfg)
}

/// Per-repetition metrics for the markerless stream and the reference device.
pub fn analyze_session(session: &Session, cfg: &RunConfig) -> Result<SessionReport> {
    cfg.validate()?;
    let mut ctx = Ctx::new(session, cfg)?;
    let task = session.manifest.task_code;
    match task {
        TaskCode::Cmjbl | TaskCode::Cmjul => ctx.cmj()?,
        TaskCode::Djbl | TaskCode::Djul => ctx.drop_jump()?,
        TaskCode::Rjt => ctx.hops()?,
        TaskCode::Ohp | TaskCode::Bsq => ctx.press()?,
        TaskCode::Her | TaskCode::Hir => ctx.hip_rotation()?,
        TaskCode::Ndc | TaskCode::Sls => ctx.knee_angle()?,
        TaskCode::Slr => ctx.leg_raise()?,
    }
    let mut report = ctx.report;
    sort_records(&mut report.records);
    for d in &report.discards {
        log::info!(
            "{} {} {} rep {:?} discarded: {}",
            d.participant_id,
            d.task,
            d.device,
            d.rep_index,
            d.reason
        );
    }
    Ok(report)
}

struct Ctx<'a> {
    session: &'a Session,
    cfg: &'a RunConfig,
    masked: MaskedSeries,
    flags: Vec<usize>,
    side: Side,
    report: SessionReport,
}

fn px(values: Vec<f64>, fps: f64) -> Result<Signal> {
    Signal::new(values, fps, Unit::Px)
}

impl<'a> Ctx<'a> {
    fn new(session: &'a Session, cfg: &'a RunConfig) -> Result<Self> {
        let m = &session.manifest;
        if session.mmc.is_empty() {
            return Err(invalid("markerless stream has no frames"));
        }
        let flags = detect_limb_swaps(&session.mmc, m.dominant_side);
        let masked = mask_low_confidence(&session.mmc, cfg.confidence_threshold);
        let mut notes: Vec<String> = session
            .mmc
            .diagnostics
            .iter()
            .map(|d| format!("frame {} ({}): {}", d.frame, d.file, d.message))
            .collect();
        if !flags.is_empty() {
            notes.push(format!("{} frames flagged as possible limb swaps", flags.len()));
        }
        Ok(Ctx {
            session,
            cfg,
            masked,
            side: m.dominant_side,
            report: SessionReport {
                source: session.source.clone(),
                flagged_frames: flags.len(),
                notes,
                ..Default::default()
            },
            flags,
        })
    }

    fn task(&self) -> TaskCode {
        self.session.manifest.task_code
    }

    fn fps(&self) -> f64 {
        self.session.mmc.fps
    }

    fn smooth(&self, s: Signal) -> Result<Signal> {
        if !self.cfg.smoothing {
            return Ok(s);
        }
        let w = self.cfg.smoothing_window.unwrap_or_else(|| default_window(s.fps));
        smooth(&s, w, self.cfg.smoothing_order)
    }

    /// Upward pixel height of keypoint `k`, unsmoothed.
    fn raw_height(&self, k: usize) -> Result<Signal> {
        let (_, y) = self.masked.xy(k)?;
        px(y.into_iter().map(|v| -v).collect(), self.fps())
    }

    fn height(&self, k: usize) -> Result<Signal> {
        self.smooth(self.raw_height(k)?)
    }

    /// Smoothed image-plane trajectory of keypoint `k`.
    fn points(&self, k: usize) -> Result<Vec<Point2>> {
        let (x, y) = self.masked.xy(k)?;
        let x = self.smooth(px(x, self.fps())?)?;
        let y = self.smooth(px(y, self.fps())?)?;
        Ok(x.values.into_iter().zip(y.values).map(|(a, b)| [a, b]).collect())
    }

    fn toe(&self) -> usize {
        if self.side.is_left() {
            L_BIG_TOE
        } else {
            R_BIG_TOE
        }
    }

    fn leg(&self) -> (usize, usize, usize) {
        if self.side.is_left() {
            (L_HIP, L_KNEE, L_ANKLE)
        } else {
            (R_HIP, R_KNEE, R_ANKLE)
        }
    }

    /// Wrist-as-barbell height: mean of both wrists when both are confident,
    /// else the more confident wrist.
    fn wrist_height(&self) -> Result<Signal> {
        let raw = &self.session.mmc;
        let (_, yl) = self.masked.xy(L_WRIST)?;
        let (_, yr) = self.masked.xy(R_WRIST)?;
        let th = self.cfg.confidence_threshold;
        let v = (0..raw.len())
            .map(|f| {
                let (cl, cr) = (raw.keypoint(f, L_WRIST).confidence, raw.keypoint(f, R_WRIST).confidence);
                let y = if cl >= th && cr >= th {
                    (yl[f] + yr[f]) / 2.0
                } else if cl >= cr {
                    yl[f]
                } else {
                    yr[f]
                };
                -y
            })
            .collect();
        self.smooth(px(v, self.fps())?)
    }

    fn seg_config(&self) -> SegmentationConfig {
        let m = &self.session.manifest;
        let (t1, t2) = match self.task() {
            TaskCode::Cmjbl | TaskCode::Cmjul => (1.5, 1.0),
            TaskCode::Djbl | TaskCode::Djul => (1.2, 0.8),
            TaskCode::Ohp => (1.65, 1.0),
            TaskCode::Bsq => (1.0, 1.65),
            _ => (1.65, 2.65),
        };
        let d = SegmentationConfig::default();
        SegmentationConfig {
            t1_s: m.t1_s.unwrap_or(t1),
            t2_s: m.t2_s.unwrap_or(t2),
            expected_reps: m.expected_reps.unwrap_or(d.expected_reps),
            min_peak_separation_s: m.min_peak_separation_s.unwrap_or(d.min_peak_separation_s),
            min_prominence_frac: m.min_prominence_frac.unwrap_or(d.min_prominence_frac),
        }
    }

    fn discard(&mut self, device: Device, ptm: Option<PtmMethod>, rep: Option<usize>, reason: impl Into<String>) {
        self.report.discards.push(Discard {
            participant_id: self.session.manifest.participant_id.clone(),
            task: self.task(),
            device,
            ptm_method: ptm,
            rep_index: rep,
            reason: reason.into(),
        });
    }

    fn record(&mut self, device: Device, ptm: Option<PtmMethod>, rep: usize, metric: Metric, value: f64) {
        let r = MetricRecord::new(
            &self.session.manifest.participant_id,
            self.task(),
            device,
            ptm,
            rep,
            metric,
            value,
        );
        self.report.records.push(r);
    }

    /// Segment `driver` (automatic or manual) and drop repetitions with too
    /// many limb-swap frames. Returns the surviving segments.
    fn segments(&mut self, driver: &Signal, device: Device) -> Result<Vec<Segment>> {
        let m = &self.session.manifest;
        let manual = match device {
            Device::Mmc => &m.manual_segments,
            _ => &m.manual_segments_truth,
        };
        let outcome = if manual.is_empty() {
            let cfg = self.seg_config();
            let maxima = find_rep_maxima(driver, &cfg)?;
            segment_reps(driver, &maxima, &cfg, device)?
        } else {
            segment_manual(driver, manual, device)?
        };
        for d in outcome.dropped {
            self.discard(device, None, Some(d.rep_index), d.reason);
        }
        let mut kept = Vec::new();
        for seg in outcome.segments {
            if device == Device::Mmc {
                let frac = flagged_fraction(&self.flags, seg.start, seg.end());
                if frac > self.cfg.max_flagged_fraction {
                    self.discard(
                        device,
                        None,
                        Some(seg.rep_index),
                        format!("{:.0}% of frames flagged as limb swaps", 100.0 * frac),
                    );
                    continue;
                }
            }
            kept.push(seg);
        }
        Ok(kept)
    }

    /// Session-level scale for each configured method. Gravity uses the median
    /// of per-repetition fits on the unsmoothed COM proxy over `flights`.
    fn scales(&mut self, flights: &[Range<usize>]) -> Vec<PtmScale> {
        let mut out = Vec::new();
        for method in self.cfg.ptm_methods(self.task()) {
            let scale = match method {
                PtmMethod::Height => match self.session.manifest.height_m {
                    Some(h) => ptm_from_height(&self.session.mmc, h).map_err(Error::from),
                    None => Err(invalid("height_m missing from manifest")),
                },
                PtmMethod::Object => match self.session.manifest.barbell_length_px {
                    Some(len_px) => ptm_from_object(
                        len_px,
                        self.session.manifest.barbell_length_m.unwrap_or(DEFAULT_BARBELL_LENGTH_M),
                    )
                    .map_err(Error::from),
                    None => Err(invalid("barbell_length_px missing from manifest")),
                },
                PtmMethod::Gravity => self.gravity_scale(flights),
            };
            match scale {
                Ok(s) => out.push(s),
                Err(e) => self.discard(Device::Mmc, Some(method), None, format!("{} unavailable: {e}", method.label())),
            }
        }
        out
    }

    fn gravity_scale(&mut self, flights: &[Range<usize>]) -> Result<PtmScale> {
        let com = self.raw_height(MID_HIP)?;
        let mut fits = Vec::new();
        for r in flights {
            if r.end <= r.start + 1 || r.end > com.len() {
                continue;
            }
            match ptm_from_gravity(&com.slice(r.start, r.end - 1)) {
                Ok(s) => fits.push(s.metres_per_pixel),
                Err(e) => self.report.notes.push(format!("gravity fit skipped: {e}")),
            }
        }
        let mpp = median(&fits).ok_or_else(|| quality("no usable free-fall phase"))?;
        Ok(PtmScale {
            metres_per_pixel: mpp,
            method: PtmMethod::Gravity,
            fit_residual: None,
        })
    }

    // ---- jumps ----

    fn cmj(&mut self) -> Result<()> {
        let toe = self.height(self.toe())?;
        let segs = self.segments(&toe, Device::Mmc)?;
        let ranges: Vec<Range<usize>> = segs.iter().map(|s| s.start..s.end() + 1).collect();
        for scale in self.scales(&ranges) {
            for seg in &segs {
                self.jump_record(&seg.signal, &scale, seg.rep_index);
            }
        }
        self.plate_truth()
    }

    fn jump_record(&mut self, toe_px: &Signal, scale: &PtmScale, rep: usize) {
        let result = apply_scale(toe_px, scale).and_then(|m| jump_height(&m));
        match result {
            Ok(j) => self.record(Device::Mmc, Some(scale.method), rep, Metric::JumpHeight, 100.0 * j.height_m),
            Err(e) => self.discard(Device::Mmc, Some(scale.method), Some(rep), e.to_string()),
        }
    }

    fn drop_jump(&mut self) -> Result<()> {
        let toe = self.height(self.toe())?;
        // Event timing uses the unsmoothed toe: smoothing spreads the short
        // ground contacts over the filter window.
        let raw = self.raw_height(self.toe())?;
        let segs = self.segments(&toe, Device::Mmc)?;
        let mut after_drop = Vec::new();
        for seg in &segs {
            match flight_contact_dropjump_with(&raw.slice(seg.start, seg.end()), self.cfg.drop_jump_peaks) {
                Ok(t) => {
                    self.timing_records(seg.rep_index, &t.timing);
                    after_drop.push((seg.rep_index, seg.start + t.drop_landing, seg.end()));
                }
                Err(e) => self.discard(Device::Mmc, None, Some(seg.rep_index), e.to_string()),
            }
        }
        let ranges: Vec<Range<usize>> = after_drop.iter().map(|&(_, a, b)| a..b + 1).collect();
        for scale in self.scales(&ranges) {
            for &(rep, a, b) in &after_drop {
                self.jump_record(&toe.slice(a, b), &scale, rep);
            }
        }
        self.plate_truth()
    }

    fn timing_records(&mut self, rep: usize, t: &TemporalMetrics) {
        self.record(Device::Mmc, None, rep, Metric::FlightTime, t.flight_s);
        self.record(Device::Mmc, None, rep, Metric::ContactTime, t.contact_s);
    }

    fn hops(&mut self) -> Result<()> {
        let toe = self.raw_height(self.toe())?;
        // The airborne threshold is metric, so a scale is needed even though
        // the timing itself is scale-free.
        let h = self
            .session
            .manifest
            .height_m
            .ok_or_else(|| invalid("height_m needed to scale the hop threshold"))?;
        let scale = ptm_from_height(&self.session.mmc, h)?;
        let hops = flight_contact_rjt(&apply_scale(&toe, &scale)?)?;
        for (i, t) in hops.iter().enumerate() {
            self.timing_records(i + 1, t);
        }
        if hops.is_empty() {
            self.discard(Device::Mmc, None, None, "no complete hop pairs");
        }
        self.plate_truth()
    }

    fn plate_truth(&mut self) -> Result<()> {
        let Some(plate) = &self.session.forceplate else {
            return Ok(());
        };
        let cfg = PlateConfig::default();
        let fp = Device::ForcePlate;
        match self.task() {
            TaskCode::Cmjbl | TaskCode::Cmjul => {
                for (i, f) in plate_flights(plate, &cfg).into_iter().enumerate() {
                    self.record(fp, None, i + 1, Metric::JumpHeight, 100.0 * height_from_flight(f));
                }
            }
            TaskCode::Djbl | TaskCode::Djul => {
                for (i, t) in plate_drop_jumps(plate, &cfg).into_iter().enumerate() {
                    self.record(fp, None, i + 1, Metric::JumpHeight, 100.0 * height_from_flight(t.flight_s));
                    self.record(fp, None, i + 1, Metric::FlightTime, t.flight_s);
                    self.record(fp, None, i + 1, Metric::ContactTime, t.contact_s);
                }
            }
            TaskCode::Rjt => {
                for (i, t) in plate_hops(plate, &cfg).into_iter().enumerate() {
                    self.record(fp, None, i + 1, Metric::FlightTime, t.flight_s);
                    self.record(fp, None, i + 1, Metric::ContactTime, t.contact_s);
                }
            }
            _ => {}
        }
        Ok(())
    }

    // ---- barbell ----

    fn press(&mut self) -> Result<()> {
        let bar = self.wrist_height()?;
        let squat = self.task() == TaskCode::Bsq;
        let driver = if squat { bar.map(Unit::Px, |v| -v) } else { bar.clone() };
        let segs = self.segments(&driver, Device::Mmc)?;
        let scales = self.scales(&[]);
        for seg in &segs {
            let phase = concentric_part(&bar.slice(seg.start, seg.end()), seg.local_source(), squat);
            for scale in &scales {
                let result = apply_scale(&phase, scale).and_then(|m| {
                    let w = concentric_window(&m)?;
                    velocity_metrics(&m, w)
                });
                match result {
                    Ok(v) => {
                        self.record(Device::Mmc, Some(scale.method), seg.rep_index, Metric::PeakVelocity, v.peak_mps);
                        self.record(Device::Mmc, Some(scale.method), seg.rep_index, Metric::MeanVelocity, v.mean_mps);
                    }
                    Err(e) => self.discard(Device::Mmc, Some(scale.method), Some(seg.rep_index), e.to_string()),
                }
            }
        }
        if let Some(omc) = &self.session.omc {
            if let Err(e) = self.press_truth(omc, squat) {
                self.discard(Device::Omc, None, None, e.to_string());
            }
        }
        Ok(())
    }

    fn press_truth(&mut self, omc: &MarkerSeries, squat: bool) -> Result<()> {
        let z = mean_marker_axis(omc, &["bar_L", "bar_R"], 2)?;
        let bar = self.smooth(Signal::new(z.into_iter().map(|v| v / 1000.0).collect(), omc.fps, Unit::M)?)?;
        let driver = if squat { bar.map(Unit::M, |v| -v) } else { bar.clone() };
        for seg in self.segments(&driver, Device::Omc)? {
            let phase = concentric_part(&bar.slice(seg.start, seg.end()), seg.local_source(), squat);
            match concentric_window(&phase).and_then(|w| velocity_metrics(&phase, w)) {
                Ok(v) => {
                    self.record(Device::Omc, None, seg.rep_index, Metric::PeakVelocity, v.peak_mps);
                    self.record(Device::Omc, None, seg.rep_index, Metric::MeanVelocity, v.mean_mps);
                }
                Err(e) => self.discard(Device::Omc, None, Some(seg.rep_index), e.to_string()),
            }
        }
        Ok(())
    }

    // ---- angles ----

    fn omc_points(&self, omc: &MarkerSeries, name: &str) -> Result<Vec<Point2>> {
        let marker = format!("{name}_{}", if self.side.is_left() { "L" } else { "R" });
        let x = omc.axis(&marker, 0).ok_or_else(|| invalid(format!("OMC marker {marker} missing")))?;
        let z = omc.axis(&marker, 2).expect("axis exists when marker does");
        let metres = |v: Vec<f64>| Signal::new(v.into_iter().map(|c| c / 1000.0).collect(), omc.fps, Unit::M);
        let x = self.smooth(metres(x)?)?;
        let z = self.smooth(metres(z)?)?;
        Ok(x.values.into_iter().zip(z.values).map(|(a, b)| [a, b]).collect())
    }

    /// Run `per_rep` on each repetition of an angle driver built by `driver`
    /// from (proximal, joint, distal) trajectories, on both devices.
    fn angle_task(
        &mut self,
        driver: impl Fn(&[Point2], &[Point2], &[Point2], f64) -> Result<Signal>,
        per_rep: impl Fn(&[Point2], &[Point2], &[Point2], &Segment, f64) -> Result<Vec<(Metric, f64)>>,
    ) -> Result<()> {
        let (hip, knee, ankle) = self.leg();
        let (p, j, d) = (self.points(hip)?, self.points(knee)?, self.points(ankle)?);
        self.angle_device(Device::Mmc, &p, &j, &d, self.fps(), &driver, &per_rep)?;
        if let Some(omc) = &self.session.omc {
            let pts = (|| -> Result<_> {
                Ok((self.omc_points(omc, "hip")?, self.omc_points(omc, "knee")?, self.omc_points(omc, "ankle")?))
            })();
            match pts {
                Ok((p, j, d)) => {
                    if let Err(e) = self.angle_device(Device::Omc, &p, &j, &d, omc.fps, &driver, &per_rep) {
                        self.discard(Device::Omc, None, None, e.to_string());
                    }
                }
                Err(e) => self.discard(Device::Omc, None, None, e.to_string()),
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn angle_device(
        &mut self,
        device: Device,
        p: &[Point2],
        j: &[Point2],
        d: &[Point2],
        fps: f64,
        driver: &impl Fn(&[Point2], &[Point2], &[Point2], f64) -> Result<Signal>,
        per_rep: &impl Fn(&[Point2], &[Point2], &[Point2], &Segment, f64) -> Result<Vec<(Metric, f64)>>,
    ) -> Result<()> {
        let angle = driver(p, j, d, fps)?;
        let rest = rest_frames(fps, RECORDING_REST_S, angle.len());
        let rest_level = mean(&angle.values[..rest]).expect("non-empty rest");
        let deviation = angle.map(Unit::Deg, |v| (v - rest_level).abs());
        for seg in self.segments(&deviation, device)? {
            let r = seg.start..seg.end() + 1;
            match per_rep(&p[r.clone()], &j[r.clone()], &d[r], &seg, fps) {
                Ok(values) => {
                    for (metric, v) in values {
                        self.record(device, None, seg.rep_index, metric, v);
                    }
                }
                Err(e) => self.discard(device, None, Some(seg.rep_index), e.to_string()),
            }
        }
        Ok(())
    }

    fn hip_rotation(&mut self) -> Result<()> {
        let internal = internal_direction(self.side, self.session.manifest.view());
        let task = self.task();
        self.angle_task(
            |_, knee, ankle, fps| {
                rotation_angle_series(knee, ankle, 0..rest_frames(fps, RECORDING_REST_S, knee.len()), fps)
            },
            move |_, knee, ankle, _, fps| {
                let m = hip_rotation_rom(knee, ankle, 0..rest_frames(fps, SEGMENT_REST_S, knee.len()), internal)?;
                let rom = if task == TaskCode::Hir { m.internal_deg } else { m.external_deg };
                Ok(vec![(Metric::Rom, rom.expect("hip rotation reports both sides"))])
            },
        )
    }

    fn knee_angle(&mut self) -> Result<()> {
        self.angle_task(
            joint_angle_series,
            |hip, knee, ankle, seg, fps| {
                let angle = joint_angle_series(hip, knee, ankle, fps)?;
                let rest = rest_frames(fps, SEGMENT_REST_S, angle.len());
                let rom = rom_from_angle_series(&angle, 0..rest)?.rom_deg;
                let outward = angle.slice(0, seg.local_source().max(1));
                let w = mean_angular_velocity(&outward)?;
                Ok(vec![(Metric::Rom, rom), (Metric::AngularVelocity, w)])
            },
        )
    }

    fn leg_raise(&mut self) -> Result<()> {
        self.angle_task(
            |hip, _, ankle, fps| {
                segment_rotation_series(hip, ankle, 0..rest_frames(fps, RECORDING_REST_S, hip.len()), fps)
            },
            |hip, _, ankle, _, fps| {
                let rest = 0..rest_frames(fps, SEGMENT_REST_S, hip.len());
                let angle = segment_rotation_series(hip, ankle, rest.clone(), fps)?;
                Ok(vec![(Metric::Rom, rom_from_angle_series(&angle, rest)?.rom_deg)])
            },
        )
    }
}

fn rest_frames(fps: f64, seconds: f64, len: usize) -> usize {
    ((seconds * fps).round() as usize).clamp(1, len.max(1))
}

/// Part of a repetition window that holds the concentric phase: up to the
/// driving maximum for a press, from it (the squat bottom) for a squat.
fn concentric_part(bar: &Signal, source: usize, squat: bool) -> Signal {
    if squat {
        bar.slice(source, bar.len() - 1)
    } else {
        bar.slice(0, source)
    }
}

fn mean_marker_axis(omc: &MarkerSeries, names: &[&str], axis: usize) -> Result<Vec<f64>> {
    let cols: Vec<Vec<f64>> = names
        .iter()
        .map(|n| omc.axis(n, axis).ok_or_else(|| invalid(format!("OMC marker {n} missing"))))
        .collect::<Result<_>>()?;
    Ok((0..omc.len())
        .map(|i| cols.iter().map(|c| c[i]).sum::<f64>() / cols.len() as f64)
        .collect())
}
