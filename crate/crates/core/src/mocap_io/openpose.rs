use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::body25::NUM_KEYPOINTS;
use crate::error::IoError;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Keypoint {
    pub x: f64,
    pub y: f64,
    pub confidence: f64,
}

impl Keypoint {
    pub fn new(x: f64, y: f64, confidence: f64) -> Self {
        Keypoint { x, y, confidence }
    }
}

pub type Frame = [Keypoint; NUM_KEYPOINTS];

/// A problem with one frame file that did not abort parsing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameDiagnostic {
    pub frame: usize,
    pub file: String,
    pub message: String,
}

/// Per-frame BODY_25 keypoints from a pose estimator, in pixels.
///
/// Dropout frames (nobody detected, or a rejected file) hold 25 zero keypoints
/// with confidence 0 so that frame indices stay aligned with time.
#[derive(Debug, Clone, PartialEq)]
pub struct KeypointSeries {
    pub frames: Vec<Frame>,
    pub fps: f64,
    pub diagnostics: Vec<FrameDiagnostic>,
}

impl KeypointSeries {
    pub fn new(frames: Vec<Frame>, fps: f64) -> Self {
        assert!(fps > 0.0, "fps must be positive");
        KeypointSeries {
            frames,
            fps,
            diagnostics: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.frames.len() as f64 / self.fps
    }

    pub fn keypoint(&self, frame: usize, index: usize) -> Keypoint {
        self.frames[frame][index]
    }

    /// One keypoint's trajectory across all frames.
    pub fn track(&self, index: usize) -> Vec<Keypoint> {
        self.frames.iter().map(|f| f[index]).collect()
    }
}

#[derive(Deserialize)]
struct FrameFile {
    #[serde(default)]
    people: Vec<Person>,
}

#[derive(Deserialize)]
struct Person {
    #[serde(default)]
    pose_keypoints_2d: Vec<f64>,
}

#[derive(Serialize)]
struct FrameFileOut<'a> {
    version: f64,
    people: Vec<PersonOut<'a>>,
}

#[derive(Serialize)]
struct PersonOut<'a> {
    person_id: [i32; 1],
    pose_keypoints_2d: &'a [f64],
}

fn frame_index(path: &Path) -> Option<u64> {
    let stem = path.file_stem()?.to_str()?;
    let bytes = stem.as_bytes();
    let end = bytes.iter().rposition(u8::is_ascii_digit)? + 1;
    let start = bytes[..end]
        .iter()
        .rposition(|b| !b.is_ascii_digit())
        .map_or(0, |p| p + 1);
    stem[start..end].parse().ok()
}

fn decode_person(flat: &[f64]) -> Result<(Frame, f64), String> {
    if flat.len() != 3 * NUM_KEYPOINTS {
        return Err(format!(
            "pose_keypoints_2d has {} values, expected {}",
            flat.len(),
            3 * NUM_KEYPOINTS
        ));
    }
    let mut frame = [Keypoint::default(); NUM_KEYPOINTS];
    let mut total = 0.0;
    for (kp, chunk) in frame.iter_mut().zip(flat.chunks_exact(3)) {
        let (x, y, c) = (chunk[0], chunk[1], chunk[2]);
        if !(x.is_finite() && y.is_finite()) || !(0.0..=1.0).contains(&c) {
            return Err(format!("invalid keypoint ({x}, {y}, {c})"));
        }
        *kp = Keypoint::new(x, y, c);
        total += c;
    }
    Ok((frame, total / NUM_KEYPOINTS as f64))
}

/// Select the detected person with the largest mean confidence; ties keep the
/// lower index. Invalid entries are skipped and reported.
fn select_person(people: &[Person], notes: &mut Vec<String>) -> Option<Frame> {
    let mut best: Option<(Frame, f64)> = None;
    for (i, person) in people.iter().enumerate() {
        match decode_person(&person.pose_keypoints_2d) {
            Ok((frame, score)) => {
                if best.as_ref().is_none_or(|(_, s)| score > *s) {
                    best = Some((frame, score));
                }
            }
            Err(msg) => notes.push(format!("person {i} rejected: {msg}")),
        }
    }
    best.map(|(f, _)| f)
}

/// Read an OpenPose output directory (one `*.json` per frame).
///
/// Frames are ordered by the numeric index embedded in each filename; gaps in
/// the index sequence and unreadable frames become dropout frames with a
/// diagnostic.
pub fn parse_openpose_dir(dir: &Path, fps: f64) -> Result<KeypointSeries, IoError> {
    if !dir.is_dir() {
        return Err(IoError::MissingDirectory(dir.to_path_buf()));
    }
    if !(fps.is_finite() && fps > 0.0) {
        return Err(IoError::InvalidFps {
            path: dir.to_path_buf(),
            fps,
        });
    }
    let entries = fs::read_dir(dir).map_err(|source| IoError::Fs {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut files: Vec<(u64, PathBuf)> = Vec::new();
    let mut unindexed = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|source| IoError::Fs {
                path: dir.to_path_buf(),
                source,
            })?
            .path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        match frame_index(&path) {
            Some(i) => files.push((i, path)),
            None => unindexed.push(path),
        }
    }
    files.sort();

    let mut frames = Vec::with_capacity(files.len());
    let mut diagnostics = Vec::new();
    for path in unindexed {
        diagnostics.push(FrameDiagnostic {
            frame: usize::MAX,
            file: path.display().to_string(),
            message: "no frame index in filename; skipped".into(),
        });
    }
    let first_index = files.first().map_or(0, |(i, _)| *i);
    for (file_index, path) in &files {
        let slot = (file_index - first_index) as usize;
        let name = path.display().to_string();
        if slot < frames.len() {
            diagnostics.push(FrameDiagnostic {
                frame: slot,
                file: name,
                message: "duplicate frame index; skipped".into(),
            });
            continue;
        }
        while frames.len() < slot {
            diagnostics.push(FrameDiagnostic {
                frame: frames.len(),
                file: name.clone(),
                message: "missing frame file; dropout inserted".into(),
            });
            frames.push([Keypoint::default(); NUM_KEYPOINTS]);
        }
        let text = fs::read_to_string(path).map_err(|source| IoError::Fs {
            path: path.clone(),
            source,
        })?;
        let frame = match serde_json::from_str::<FrameFile>(&text) {
            Ok(parsed) => {
                let mut notes = Vec::new();
                let chosen = select_person(&parsed.people, &mut notes);
                for message in notes {
                    diagnostics.push(FrameDiagnostic {
                        frame: slot,
                        file: name.clone(),
                        message,
                    });
                }
                chosen.unwrap_or([Keypoint::default(); NUM_KEYPOINTS])
            }
            Err(e) => {
                diagnostics.push(FrameDiagnostic {
                    frame: slot,
                    file: name.clone(),
                    message: format!("malformed JSON ({e}); dropout inserted"),
                });
                [Keypoint::default(); NUM_KEYPOINTS]
            }
        };
        frames.push(frame);
    }
    Ok(KeypointSeries {
        frames,
        fps,
        diagnostics,
    })
}

/// Write `series` in the OpenPose per-frame layout: one single-person file per
/// frame, named `<prefix>_<index:012>_keypoints.json`.
pub fn write_openpose_dir(series: &KeypointSeries, dir: &Path, prefix: &str) -> Result<(), IoError> {
    fs::create_dir_all(dir).map_err(|source| IoError::Fs {
        path: dir.to_path_buf(),
        source,
    })?;
    for (i, frame) in series.frames.iter().enumerate() {
        let flat: Vec<f64> = frame
            .iter()
            .flat_map(|k| [k.x, k.y, k.confidence])
            .collect();
        let doc = FrameFileOut {
            version: 1.3,
            people: vec![PersonOut {
                person_id: [-1],
                pose_keypoints_2d: &flat,
            }],
        };
        let path = dir.join(format!("{prefix}_{i:012}_keypoints.json"));
        let text = serde_json::to_string(&doc).map_err(|source| IoError::Json {
            path: path.clone(),
            source,
        })?;
        fs::write(&path, text).map_err(|source| IoError::Fs { path, source })?;
    }
    Ok(())
}
