//! Synthetic recordings with analytically known ground truth.
//!
//! A task is scripted as continuous motion in metres, then rendered to
//! BODY_25 keypoints at a pixel scale with Gaussian noise, to OMC markers and
//! to force plate samples. The returned truth is exact by construction.

mod model;
mod motion;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::body25::{self, NUM_KEYPOINTS};
use crate::error::{invalid, Error, IoError, Result};
use crate::mocap_io::{
    write_forceplate_csv, write_omc_csv, write_openpose_dir, ForcePlateRecord, Frame, Keypoint,
    KeypointSeries, MarkerSeries, SessionManifest, DEFAULT_BARBELL_LENGTH_M,
};
use crate::task::{CameraView, Device, Metric, Side, TaskCode};

pub use model::{Pose, PLATFORM_M, SHOULDER_HEIGHT};
pub use motion::sweep_mean_angular_velocity;
use motion::{Motion, RepSpec};

/// Image column of the subject's midline and row of the floor, pixels.
pub const IMAGE_CENTRE_X: f64 = 960.0;
pub const IMAGE_FLOOR_Y: f64 = 1000.0;
/// Keypoint confidence of clean frames and of limb-swapped keypoints.
pub const CLEAN_CONFIDENCE: f64 = 0.9;
pub const SWAP_CONFIDENCE: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthKind {
    Cmj,
    Dropjump,
    Rjt,
    Press,
    Rotation,
    Curl,
}

pub fn kind_for(task: TaskCode) -> SynthKind {
    match task {
        TaskCode::Cmjbl | TaskCode::Cmjul => SynthKind::Cmj,
        TaskCode::Djbl | TaskCode::Djul => SynthKind::Dropjump,
        TaskCode::Rjt => SynthKind::Rjt,
        TaskCode::Bsq | TaskCode::Ohp => SynthKind::Press,
        TaskCode::Her | TaskCode::Hir | TaskCode::Slr => SynthKind::Rotation,
        TaskCode::Ndc | TaskCode::Sls => SynthKind::Curl,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthParams {
    pub task: TaskCode,
    pub fps: f64,
    /// Recording length; `None` uses exactly what the repetitions need.
    pub duration_s: Option<f64>,
    pub reps: usize,
    pub stature_m: f64,
    /// Metres per pixel of the rendered keypoints.
    pub ptm_true: f64,
    pub noise_sigma_px: f64,
    pub seed: u64,
    pub flight_s: f64,
    pub contact_s: f64,
    pub amplitude_m: f64,
    /// Duration of the concentric phase or outward sweep.
    pub concentric_s: f64,
    pub rom_deg: f64,
    /// Each repetition scales its programmed values by 1 + U(−j, j).
    pub rep_jitter: f64,
    pub dominant_side: Side,
    /// Exchange left and right lower-leg keypoints over `[start_s, end_s)`.
    pub limb_swap: Option<(f64, f64)>,
    pub omc_fps: f64,
    pub plate_fps: f64,
    pub mass_kg: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams::for_task(TaskCode::Cmjbl)
    }
}

impl SynthParams {
    /// Typical programmed values for `task`.
    pub fn for_task(task: TaskCode) -> Self {
        let (flight, contact, amplitude, rom) = match task {
            TaskCode::Djbl | TaskCode::Djul => (0.45, 0.3, 0.0, 0.0),
            TaskCode::Rjt => (0.4, 0.25, 0.0, 0.0),
            TaskCode::Ohp => (0.0, 0.0, 0.5, 0.0),
            TaskCode::Bsq => (0.0, 0.0, 0.45, 0.0),
            TaskCode::Ndc => (0.0, 0.0, 0.0, 60.0),
            TaskCode::Sls => (0.0, 0.0, 0.0, 70.0),
            TaskCode::Hir => (0.0, 0.0, 0.0, 35.0),
            TaskCode::Her => (0.0, 0.0, 0.0, 40.0),
            TaskCode::Slr => (0.0, 0.0, 0.0, 70.0),
            _ => (0.5, 0.0, 0.0, 0.0),
        };
        SynthParams {
            task,
            fps: 30.0,
            duration_s: None,
            reps: 3,
            stature_m: 1.75,
            ptm_true: 0.002,
            noise_sigma_px: 0.0,
            seed: 0,
            flight_s: flight,
            contact_s: contact,
            amplitude_m: amplitude,
            concentric_s: 1.0,
            rom_deg: rom,
            rep_jitter: 0.0,
            dominant_side: Side::Right,
            limb_swap: None,
            omc_fps: 100.0,
            plate_fps: 1000.0,
            mass_kg: 75.0,
        }
    }

    pub fn kind(&self) -> SynthKind {
        kind_for(self.task)
    }

    fn validate(&self) -> Result<()> {
        let positive = [
            ("fps", self.fps),
            ("stature_m", self.stature_m),
            ("ptm_true", self.ptm_true),
            ("omc_fps", self.omc_fps),
            ("plate_fps", self.plate_fps),
            ("mass_kg", self.mass_kg),
            ("concentric_s", self.concentric_s),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.reps == 0 {
            return Err(invalid("reps must be at least 1"));
        }
        if !(self.noise_sigma_px >= 0.0) {
            return Err(invalid("noise_sigma_px must be ≥ 0"));
        }
        if !(0.0..0.5).contains(&self.rep_jitter) {
            return Err(invalid("rep_jitter must lie in [0, 0.5)"));
        }
        match self.kind() {
            SynthKind::Cmj | SynthKind::Dropjump | SynthKind::Rjt if !(self.flight_s > 0.0) => {
                Err(invalid(format!("flight_s must be > 0, got {}", self.flight_s)))
            }
            SynthKind::Dropjump | SynthKind::Rjt if !(self.contact_s > 0.0) => {
                Err(invalid(format!("contact_s must be > 0, got {}", self.contact_s)))
            }
            SynthKind::Press if !(self.amplitude_m >= 0.0) => {
                Err(invalid(format!("amplitude_m must be ≥ 0, got {}", self.amplitude_m)))
            }
            SynthKind::Rotation | SynthKind::Curl => {
                let limit = match self.task {
                    TaskCode::Her | TaskCode::Hir => 90.0,
                    TaskCode::Ndc => 90.0,
                    _ => 180.0,
                };
                let top = self.rom_deg * (1.0 + self.rep_jitter);
                if !(self.rom_deg > 0.0 && top < limit + f64::EPSILON && self.rom_deg < 180.0) {
                    Err(invalid(format!(
                        "rom_deg must lie in (0, {limit}) for {}, got {}",
                        self.task, self.rom_deg
                    )))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepTruth {
    pub rep_index: usize,
    pub values: BTreeMap<Metric, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub task: TaskCode,
    pub ptm_true: f64,
    pub reps: Vec<RepTruth>,
}

impl GroundTruth {
    pub fn values(&self, metric: Metric) -> Vec<f64> {
        self.reps
            .iter()
            .filter_map(|r| r.values.get(&metric).copied())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub params: SynthParams,
    pub view: CameraView,
    pub mmc: KeypointSeries,
    pub omc: Option<MarkerSeries>,
    pub forceplate: Option<ForcePlateRecord>,
    pub truth: GroundTruth,
    /// Representative instant of each repetition, seconds.
    pub rep_centres_s: Vec<f64>,
    pub manual_segments: Vec<(f64, f64)>,
    /// Segmentation window (before, after) that fits the scripted timing.
    pub window_s: (f64, f64),
    pub barbell_length_px: Option<f64>,
}

fn rep_specs(params: &SynthParams, rng: &mut ChaCha8Rng) -> Vec<RepSpec> {
    (0..params.reps)
        .map(|_| {
            let j = params.rep_jitter;
            let mut factor = || if j > 0.0 { 1.0 + rng.random_range(-j..j) } else { 1.0 };
            RepSpec {
                flight_s: params.flight_s * factor(),
                contact_s: params.contact_s * factor(),
                amplitude_m: params.amplitude_m * factor(),
                concentric_s: params.concentric_s,
                rom_deg: params.rom_deg * factor(),
            }
        })
        .collect()
}

fn script(params: &SynthParams, reps: &[RepSpec]) -> Motion {
    let h = params.stature_m;
    match params.task {
        TaskCode::Cmjbl | TaskCode::Cmjul => motion::cmj(reps, h, params.mass_kg),
        TaskCode::Djbl | TaskCode::Djul => motion::drop_jump(reps, h, params.mass_kg),
        TaskCode::Rjt => motion::hops(reps, h, params.mass_kg),
        TaskCode::Ohp => motion::overhead_press(reps, h),
        TaskCode::Bsq => motion::back_squat(reps, h),
        TaskCode::Her | TaskCode::Hir => {
            motion::hip_rotation(params.task, reps, h, params.dominant_side)
        }
        TaskCode::Slr => motion::leg_raise(reps, h, params.dominant_side),
        TaskCode::Ndc => motion::nordic_curl(reps, h),
        TaskCode::Sls => motion::single_leg_squat(reps, h, params.dominant_side),
    }
}

fn samples(duration: f64, fps: f64) -> usize {
    (duration * fps).floor() as usize + 1
}

/// OMC marker names and the keypoints they sit on.
const MARKERS: [(&str, usize); 16] = [
    ("shoulder_R", body25::R_SHOULDER),
    ("shoulder_L", body25::L_SHOULDER),
    ("elbow_R", body25::R_ELBOW),
    ("elbow_L", body25::L_ELBOW),
    ("wrist_R", body25::R_WRIST),
    ("wrist_L", body25::L_WRIST),
    ("hip_R", body25::R_HIP),
    ("hip_L", body25::L_HIP),
    ("knee_R", body25::R_KNEE),
    ("knee_L", body25::L_KNEE),
    ("ankle_R", body25::R_ANKLE),
    ("ankle_L", body25::L_ANKLE),
    ("toe_R", body25::R_BIG_TOE),
    ("toe_L", body25::L_BIG_TOE),
    ("heel_R", body25::R_HEEL),
    ("heel_L", body25::L_HEEL),
];

fn render_omc(motion: &Motion, task: TaskCode, fps: f64) -> MarkerSeries {
    let n = samples(motion.duration_s, fps);
    let mut markers: BTreeMap<String, Vec<[f64; 3]>> = BTreeMap::new();
    for i in 0..n {
        let pose = (motion.pose)(i as f64 / fps);
        let mm = |p: [f64; 2]| [p[0] * 1000.0, 0.0, p[1] * 1000.0];
        for (name, k) in MARKERS {
            markers.entry(name.to_string()).or_default().push(mm(pose[k]));
        }
        if matches!(task, TaskCode::Ohp | TaskCode::Bsq) {
            // Bar sleeves just outside the hands (press) or on the shoulders (squat).
            let z = if task == TaskCode::Ohp {
                (pose[body25::R_WRIST][1] + pose[body25::L_WRIST][1]) / 2.0
            } else {
                pose[body25::NECK][1] - 0.05
            };
            let half = DEFAULT_BARBELL_LENGTH_M / 2.0;
            markers.entry("bar_R".into()).or_default().push(mm([-half, z]));
            markers.entry("bar_L".into()).or_default().push(mm([half, z]));
        }
    }
    MarkerSeries { markers, fps }
}

fn render_mmc(motion: &Motion, params: &SynthParams, rng: &mut ChaCha8Rng) -> KeypointSeries {
    let n = samples(motion.duration_s, params.fps);
    let noise = Normal::new(0.0, params.noise_sigma_px.max(f64::MIN_POSITIVE)).expect("σ > 0");
    let mut frames: Vec<Frame> = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / params.fps;
        let pose = (motion.pose)(t);
        let mut frame = [Keypoint::default(); NUM_KEYPOINTS];
        for (k, p) in pose.iter().enumerate() {
            let (mut x, mut y) = (
                IMAGE_CENTRE_X + p[0] / params.ptm_true,
                IMAGE_FLOOR_Y - p[1] / params.ptm_true,
            );
            if params.noise_sigma_px > 0.0 {
                x += noise.sample(rng);
                y += noise.sample(rng);
            }
            frame[k] = Keypoint::new(x, y, CLEAN_CONFIDENCE);
        }
        if let Some((a, b)) = params.limb_swap {
            if t >= a && t < b {
                for (l, r) in body25::lower_leg(true).into_iter().zip(body25::lower_leg(false)) {
                    frame.swap(l, r);
                    frame[l].confidence = SWAP_CONFIDENCE;
                    frame[r].confidence = SWAP_CONFIDENCE;
                }
            }
        }
        frames.push(frame);
    }
    KeypointSeries::new(frames, params.fps)
}

fn render_plate(motion: &Motion, fps: f64) -> Option<ForcePlateRecord> {
    let force = motion.force.as_ref()?;
    let n = samples(motion.duration_s, fps);
    Some(ForcePlateRecord {
        vertical_force: (0..n).map(|i| force(i as f64 / fps)).collect(),
        fps,
    })
}

/// Render a synthetic recording of `params.task`.
pub fn generate(params: &SynthParams) -> Result<SynthOutput> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let reps = rep_specs(params, &mut rng);
    let mut motion = script(params, &reps);
    if let Some(d) = params.duration_s {
        if d < motion.duration_s {
            return Err(invalid(format!(
                "duration {d} s is shorter than the {:.2} s the repetitions need",
                motion.duration_s
            )));
        }
        motion.duration_s = d;
    }
    let mmc = render_mmc(&motion, params, &mut rng);
    let omc = (params.task.ground_truth() == Device::Omc)
        .then(|| render_omc(&motion, params.task, params.omc_fps));
    let forceplate = if params.task.ground_truth() == Device::ForcePlate {
        render_plate(&motion, params.plate_fps)
    } else {
        None
    };
    let truth = GroundTruth {
        task: params.task,
        ptm_true: params.ptm_true,
        reps: motion
            .truth
            .iter()
            .enumerate()
            .map(|(i, v)| RepTruth {
                rep_index: i + 1,
                values: v.clone(),
            })
            .collect(),
    };
    Ok(SynthOutput {
        params: params.clone(),
        view: motion.view,
        mmc,
        omc,
        forceplate,
        truth,
        rep_centres_s: motion.centres.clone(),
        manual_segments: motion.manual_segments.clone(),
        window_s: motion.window,
        barbell_length_px: matches!(params.task, TaskCode::Ohp | TaskCode::Bsq)
            .then(|| DEFAULT_BARBELL_LENGTH_M / params.ptm_true),
    })
}

fn require(params: &SynthParams, kinds: &[SynthKind]) -> Result<()> {
    if kinds.contains(&params.kind()) {
        Ok(())
    } else {
        Err(invalid(format!(
            "task {} is not generated by this function",
            params.task
        )))
    }
}

/// Jumps (CMJ, drop jump, repeated hops).
pub fn gen_jump(params: &SynthParams) -> Result<SynthOutput> {
    require(params, &[SynthKind::Cmj, SynthKind::Dropjump, SynthKind::Rjt])?;
    generate(params)
}

/// Barbell lifts (overhead press, back squat).
pub fn gen_press(params: &SynthParams) -> Result<SynthOutput> {
    require(params, &[SynthKind::Press])?;
    generate(params)
}

/// Rotations and curls (hip rotations, leg raise, Nordic curl, single-leg squat).
pub fn gen_rotation(params: &SynthParams) -> Result<SynthOutput> {
    require(params, &[SynthKind::Rotation, SynthKind::Curl])?;
    generate(params)
}

fn io(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| {
        Error::Io(IoError::Fs {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Write `out` under `dir` in the session input formats: `mmc/` frame files,
/// `omc.csv` or `forceplate.csv`, `truth.json` and `session.json`. Returns the
/// manifest path.
pub fn write_fixture(out: &SynthOutput, dir: &Path, participant_id: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(io(dir))?;
    let p = &out.params;
    write_openpose_dir(&out.mmc, &dir.join("mmc"), participant_id)?;
    let mut manifest = SessionManifest {
        participant_id: participant_id.to_string(),
        task_code: p.task,
        height_m: Some(p.stature_m),
        dominant_side: p.dominant_side,
        camera_view: Some(out.view),
        mmc_dir: PathBuf::from("mmc"),
        mmc_fps: p.fps,
        omc_csv: None,
        forceplate_csv: None,
        barbell_length_px: out.barbell_length_px,
        barbell_length_m: out.barbell_length_px.map(|_| DEFAULT_BARBELL_LENGTH_M),
        t1_s: Some(out.window_s.0),
        t2_s: Some(out.window_s.1),
        expected_reps: Some(if p.task == TaskCode::Rjt { 1 } else { p.reps }),
        min_peak_separation_s: None,
        min_prominence_frac: None,
        manual_segments: out.manual_segments.clone(),
        manual_segments_truth: Vec::new(),
    };
    if let Some(omc) = &out.omc {
        write_omc_csv(omc, &dir.join("omc.csv"))?;
        manifest.omc_csv = Some(PathBuf::from("omc.csv"));
    }
    if let Some(plate) = &out.forceplate {
        write_forceplate_csv(plate, &dir.join("forceplate.csv"))?;
        manifest.forceplate_csv = Some(PathBuf::from("forceplate.csv"));
    }
    let truth_path = dir.join("truth.json");
    let text = serde_json::to_string_pretty(&out.truth).expect("truth serializes");
    fs::write(&truth_path, text).map_err(io(&truth_path))?;
    let manifest_path = dir.join("session.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&manifest_path, text).map_err(io(&manifest_path))?;
    Ok(manifest_path)
}

/// Settings for a multi-participant synthetic study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StudyParams {
    pub participants: usize,
    pub reps: usize,
    pub tasks: Vec<TaskCode>,
    pub fps: f64,
    pub noise_sigma_px: f64,
    /// Spread of programmed values between participants (relative, uniform).
    pub participant_spread: f64,
    pub rep_jitter: f64,
    pub seed: u64,
}

impl Default for StudyParams {
    fn default() -> Self {
        StudyParams {
            participants: 4,
            reps: 3,
            tasks: TaskCode::ALL.to_vec(),
            fps: 30.0,
            noise_sigma_px: 1.0,
            participant_spread: 0.25,
            rep_jitter: 0.05,
            seed: 2024,
        }
    }
}

/// Per-participant parameters of a synthetic study, deterministic in `seed`.
pub fn study_params(study: &StudyParams) -> Vec<(String, SynthParams)> {
    let mut rng = ChaCha8Rng::seed_from_u64(study.seed);
    let mut out = Vec::new();
    for p in 0..study.participants {
        let id = format!("P{:02}", p + 1);
        let stature = rng.random_range(1.6..1.95);
        let ptm = rng.random_range(0.0017..0.0024);
        let side = if rng.random_bool(0.25) { Side::Left } else { Side::Right };
        let s = study.participant_spread;
        let mut spread = || if s > 0.0 { 1.0 + rng.random_range(-s..s) } else { 1.0 };
        let scales = [spread(), spread(), spread(), spread()];
        for (t, &task) in study.tasks.iter().enumerate() {
            let mut params = SynthParams::for_task(task);
            params.fps = study.fps;
            params.reps = study.reps;
            params.stature_m = stature;
            params.ptm_true = ptm;
            params.noise_sigma_px = study.noise_sigma_px;
            params.rep_jitter = study.rep_jitter;
            params.dominant_side = side;
            params.seed = study.seed ^ ((p as u64) << 32) ^ (t as u64 + 1);
            params.flight_s *= scales[0];
            params.contact_s *= scales[1];
            params.amplitude_m *= scales[2];
            params.rom_deg *= scales[3].min(1.2);
            out.push((id.clone(), params));
        }
    }
    out
}

/// Write a whole study as `<dir>/<participant>/<task>/session.json` fixtures.
/// Returns the manifest paths in a stable order.
pub fn write_study(study: &StudyParams, dir: &Path) -> Result<Vec<PathBuf>> {
    use rayon::prelude::*;
    let jobs = study_params(study);
    jobs.par_iter()
        .map(|(id, params)| {
            let out = generate(params)?;
            write_fixture(&out, &dir.join(id).join(params.task.as_str()), id)
        })
        .collect()
}
