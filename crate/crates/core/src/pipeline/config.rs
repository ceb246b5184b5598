use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agreement::TrrEstimator;
use crate::error::{invalid, IoError, Result};
use crate::preprocess::{DEFAULT_CONFIDENCE_THRESHOLD, DEFAULT_POLY_ORDER, MAX_FLAGGED_FRACTION};
use crate::task::{PtmMethod, TaskCode};

use super::Format;

/// Flat JSON run description. Every field is optional in the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub manifests: Vec<PathBuf>,
    /// Restrict every task to one scale; `None` runs all scales valid for the task.
    pub ptm: Option<PtmMethod>,
    /// Per-task scale choice, overriding `ptm`.
    pub ptm_by_task: BTreeMap<TaskCode, PtmMethod>,
    pub smoothing: bool,
    /// Savitzky–Golay window; `None` picks about 0.3 s for the stream rate.
    pub smoothing_window: Option<usize>,
    pub smoothing_order: usize,
    pub confidence_threshold: f64,
    pub max_flagged_fraction: f64,
    pub drop_jump_peaks: usize,
    pub trr_estimator: TrrEstimator,
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            manifests: Vec::new(),
            ptm: None,
            ptm_by_task: BTreeMap::new(),
            smoothing: true,
            smoothing_window: None,
            smoothing_order: DEFAULT_POLY_ORDER,
            confidence_threshold: DEFAULT_CONFIDENCE_THRESHOLD,
            max_flagged_fraction: MAX_FLAGGED_FRACTION,
            drop_jump_peaks: 3,
            trr_estimator: TrrEstimator::Icc21,
            out_dir: PathBuf::from("out"),
            formats: vec![Format::Csv],
        }
    }
}

impl RunConfig {
    /// Read a config file; relative manifest paths resolve against its directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| IoError::Fs {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg: RunConfig = serde_json::from_str(&text).map_err(|source| IoError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        for m in &mut cfg.manifests {
            if m.is_relative() {
                *m = base.join(&*m);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(w) = self.smoothing_window {
            if w % 2 == 0 || w <= self.smoothing_order {
                return Err(invalid(format!(
                    "smoothing_window must be odd and exceed smoothing_order, got {w}"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.confidence_threshold) {
            return Err(invalid("confidence_threshold must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.max_flagged_fraction) {
            return Err(invalid("max_flagged_fraction must lie in [0, 1]"));
        }
        if self.drop_jump_peaks < 3 {
            return Err(invalid("drop_jump_peaks must be at least 3"));
        }
        Ok(())
    }

    /// Scales to run for `task`. Pairings outside the task's usual set are
    /// honoured with a warning.
    pub fn ptm_methods(&self, task: TaskCode) -> Vec<PtmMethod> {
        let chosen = self.ptm_by_task.get(&task).copied().or(self.ptm);
        match chosen {
            Some(m) => {
                if !task.ptm_methods().contains(&m) && !task.ptm_methods().is_empty() {
                    log::warn!("{} is not a usual scale for {task}; running it anyway", m.label());
                }
                if task.ptm_methods().is_empty() {
                    Vec::new()
                } else {
                    vec![m]
                }
            }
            None => task.ptm_methods().to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_json_round_trip() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"ptm": "height", "formats": ["csv", "svg"], "smoothing_window": 7}"#,
        )
        .unwrap();
        assert_eq!(cfg.ptm, Some(PtmMethod::Height));
        assert_eq!(cfg.formats, vec![Format::Csv, Format::Svg]);
        assert!(cfg.validate().is_ok());
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"ptm_mode": "height"}"#).is_err());
    }

    #[test]
    fn scale_selection() {
        let mut cfg = RunConfig::default();
        assert_eq!(
            cfg.ptm_methods(TaskCode::Cmjbl),
            vec![PtmMethod::Gravity, PtmMethod::Height]
        );
        assert!(cfg.ptm_methods(TaskCode::Ndc).is_empty());
        cfg.ptm = Some(PtmMethod::Object);
        assert_eq!(cfg.ptm_methods(TaskCode::Ohp), vec![PtmMethod::Object]);
        cfg.ptm_by_task.insert(TaskCode::Ohp, PtmMethod::Height);
        assert_eq!(cfg.ptm_methods(TaskCode::Ohp), vec![PtmMethod::Height]);
    }
}
