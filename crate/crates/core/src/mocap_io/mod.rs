//! Readers and writers for the three capture devices and the session manifest.
//!
//! * MMC: a directory of OpenPose per-frame JSON files (BODY_25, pixels).
//! * OMC: a CSV of `marker.axis` columns in millimetres, blank cells for occlusion.
//! * Force plate: a single-column CSV of vertical force in newtons with a `# fps=` line.

mod forceplate;
mod omc;
mod openpose;
mod session;

pub use forceplate::{parse_forceplate_csv, write_forceplate_csv, ForcePlateRecord};
pub use omc::{parse_omc_csv, write_omc_csv, MarkerSeries};
pub use openpose::{
    parse_openpose_dir, write_openpose_dir, Frame, FrameDiagnostic, Keypoint, KeypointSeries,
};
pub use session::{load_session, Session, SessionManifest, DEFAULT_BARBELL_LENGTH_M};

use std::path::Path;

use crate::error::IoError;

pub(crate) fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Fs {
        path: path.to_path_buf(),
        source,
    })
}

/// Parse a `# fps=<n>` comment line, if `line` is one.
pub(crate) fn fps_comment(line: &str) -> Option<&str> {
    let rest = line.trim().strip_prefix('#')?.trim();
    let (key, value) = rest.split_once('=')?;
    if key.trim().eq_ignore_ascii_case("fps") {
        Some(value.trim())
    } else {
        None
    }
}
