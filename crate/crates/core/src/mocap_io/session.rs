use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::IoError;
use crate::task::{CameraView, Device, Side, TaskCode};

use super::{
    parse_forceplate_csv, parse_omc_csv, parse_openpose_dir, read_text, ForcePlateRecord,
    KeypointSeries, MarkerSeries,
};

pub const DEFAULT_BARBELL_LENGTH_M: f64 = 1.125;

fn default_mmc_fps() -> f64 {
    30.0
}

/// Flat JSON description of one participant performing one task.
///
/// Relative paths resolve against the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionManifest {
    pub participant_id: String,
    pub task_code: TaskCode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height_m: Option<f64>,
    #[serde(default)]
    pub dominant_side: Side,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub camera_view: Option<CameraView>,
    pub mmc_dir: PathBuf,
    #[serde(default = "default_mmc_fps")]
    pub mmc_fps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omc_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forceplate_csv: Option<PathBuf>,
    /// On-screen barbell length for the object reference.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub barbell_length_px: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub barbell_length_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t2_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_reps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_peak_separation_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_prominence_frac: Option<f64>,
    /// Per-repetition `[start_s, end_s]` windows on the MMC clock; bypasses
    /// automatic segmentation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub manual_segments: Vec<(f64, f64)>,
    /// Same as `manual_segments`, on the ground-truth device clock.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub manual_segments_truth: Vec<(f64, f64)>,
}

impl SessionManifest {
    pub fn view(&self) -> CameraView {
        self.camera_view.unwrap_or_else(|| self.task_code.default_view())
    }

    pub fn validate(&self) -> Result<(), IoError> {
        if self.participant_id.trim().is_empty() {
            return Err(IoError::Manifest("participant_id is empty".into()));
        }
        if let Some(h) = self.height_m {
            if !(h.is_finite() && h > 0.0) {
                return Err(IoError::Manifest(format!("height_m must be > 0, got {h}")));
            }
        }
        if !(self.mmc_fps.is_finite() && self.mmc_fps > 0.0) {
            return Err(IoError::Manifest(format!("mmc_fps must be > 0, got {}", self.mmc_fps)));
        }
        for (name, v) in [
            ("barbell_length_px", self.barbell_length_px),
            ("barbell_length_m", self.barbell_length_m),
        ] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(IoError::Manifest(format!("{name} must be > 0, got {v}")));
                }
            }
        }
        for &(s, e) in self.manual_segments.iter().chain(&self.manual_segments_truth) {
            if !(s >= 0.0 && e > s) {
                return Err(IoError::Manifest(format!("bad manual segment [{s}, {e}]")));
            }
        }
        match self.task_code.ground_truth() {
            Device::Omc if self.omc_csv.is_none() => Err(IoError::Manifest(format!(
                "task {} needs an OMC stream (omc_csv) as ground truth",
                self.task_code
            ))),
            Device::ForcePlate if self.forceplate_csv.is_none() => {
                Err(IoError::Manifest(format!(
                    "task {} needs a force plate stream (forceplate_csv) as ground truth",
                    self.task_code
                )))
            }
            _ => Ok(()),
        }
    }
}

/// A parsed session: manifest plus every stream it references.
#[derive(Debug, Clone)]
pub struct Session {
    pub manifest: SessionManifest,
    pub source: PathBuf,
    pub mmc: KeypointSeries,
    pub omc: Option<MarkerSeries>,
    pub forceplate: Option<ForcePlateRecord>,
}

impl Session {
    pub fn task(&self) -> TaskCode {
        self.manifest.task_code
    }

    pub fn participant(&self) -> &str {
        &self.manifest.participant_id
    }
}

pub fn load_session(manifest_path: &Path) -> Result<Session, IoError> {
    let text = read_text(manifest_path)?;
    let manifest: SessionManifest =
        serde_json::from_str(&text).map_err(|e| IoError::Manifest(format!("{}: {e}", manifest_path.display())))?;
    manifest.validate()?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let resolve = |p: &Path| -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    };
    let mmc = parse_openpose_dir(&resolve(&manifest.mmc_dir), manifest.mmc_fps)?;
    let omc = manifest
        .omc_csv
        .as_deref()
        .map(|p| parse_omc_csv(&resolve(p)))
        .transpose()?;
    let forceplate = manifest
        .forceplate_csv
        .as_deref()
        .map(|p| parse_forceplate_csv(&resolve(p)))
        .transpose()?;
    Ok(Session {
        manifest,
        source: manifest_path.to_path_buf(),
        mmc,
        omc,
        forceplate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mocap_io::{write_forceplate_csv, write_openpose_dir, Keypoint};
    use std::fs;

    fn fixture(dir: &Path, manifest: &str) -> PathBuf {
        let series = KeypointSeries::new(vec![[Keypoint::new(1.0, 2.0, 0.9); 25]; 3], 30.0);
        write_openpose_dir(&series, &dir.join("mmc"), "clip").unwrap();
        write_forceplate_csv(
            &ForcePlateRecord {
                vertical_force: vec![700.0; 10],
                fps: 1000.0,
            },
            &dir.join("plate.csv"),
        )
        .unwrap();
        let path = dir.join("session.json");
        fs::write(&path, manifest).unwrap();
        path
    }

    #[test]
    fn cmjbl_with_mmc_and_plate_loads_both_streams() {
        let dir = tempfile::tempdir().unwrap();
        let path = fixture(
            dir.path(),
            r#"{"participant_id":"P01","task_code":"CMJBL","height_m":1.8,
                "mmc_dir":"mmc","forceplate_csv":"plate.csv"}"#,
        );
        let s = load_session(&path).unwrap();
        assert_eq!(s.task(), TaskCode::Cmjbl);
        assert_eq!(s.mmc.len(), 3);
        assert!(s.forceplate.is_some());
        assert!(s.omc.is_none());
        assert_eq!(s.manifest.view(), CameraView::Front);
    }

    #[test]
    fn hir_without_omc_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = fixture(
            dir.path(),
            r#"{"participant_id":"P01","task_code":"HIR","mmc_dir":"mmc"}"#,
        );
        let err = load_session(&path).unwrap_err();
        assert!(err.to_string().contains("OMC"), "{err}");
    }

    #[test]
    fn unknown_task_code_is_a_validation_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = fixture(
            dir.path(),
            r#"{"participant_id":"P01","task_code":"XYZ","mmc_dir":"mmc"}"#,
        );
        let err = load_session(&path).unwrap_err();
        assert!(matches!(err, IoError::Manifest(_)));
        assert!(err.to_string().contains("XYZ"));
    }

    #[test]
    fn non_positive_height_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = fixture(
            dir.path(),
            r#"{"participant_id":"P01","task_code":"CMJBL","height_m":0,
                "mmc_dir":"mmc","forceplate_csv":"plate.csv"}"#,
        );
        assert!(load_session(&path).is_err());
    }
}
