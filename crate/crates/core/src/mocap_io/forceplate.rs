use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::IoError;

use super::{fps_comment, read_text};

/// Vertical ground reaction force in newtons.
#[derive(Debug, Clone, PartialEq)]
pub struct ForcePlateRecord {
    pub vertical_force: Vec<f64>,
    pub fps: f64,
}

impl ForcePlateRecord {
    pub fn duration_s(&self) -> f64 {
        self.vertical_force.len() as f64 / self.fps
    }
}

/// Parse a single-column force CSV. A `# fps=<n>` line is required; one
/// non-numeric header line (e.g. `force_n`) is tolerated before the data.
pub fn parse_forceplate_csv(path: &Path) -> Result<ForcePlateRecord, IoError> {
    let text = read_text(path)?;
    let mut fps: Option<f64> = None;
    let mut values = Vec::new();
    let mut seen_header = false;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if let Some(v) = fps_comment(line) {
                let parsed: f64 = v.parse().map_err(|_| IoError::Structure {
                    path: path.to_path_buf(),
                    message: format!("unparseable fps '{v}'"),
                })?;
                fps = Some(parsed);
            }
            continue;
        }
        let cell = line.split(',').next().unwrap_or("").trim();
        match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => {
                return Err(IoError::Cell {
                    path: path.to_path_buf(),
                    row: i + 1,
                    column: "force".into(),
                    message: "non-finite value".into(),
                })
            }
            Err(_) if values.is_empty() && !seen_header => seen_header = true,
            Err(_) => {
                return Err(IoError::Cell {
                    path: path.to_path_buf(),
                    row: i + 1,
                    column: "force".into(),
                    message: format!("non-numeric value '{cell}'"),
                })
            }
        }
    }
    let fps = fps.ok_or_else(|| IoError::MissingFps {
        path: path.to_path_buf(),
    })?;
    if !(fps.is_finite() && fps > 0.0) {
        return Err(IoError::InvalidFps {
            path: path.to_path_buf(),
            fps,
        });
    }
    Ok(ForcePlateRecord {
        vertical_force: values,
        fps,
    })
}

pub fn write_forceplate_csv(record: &ForcePlateRecord, path: &Path) -> Result<(), IoError> {
    let mut out = String::new();
    let _ = writeln!(out, "# fps={}", record.fps);
    let _ = writeln!(out, "force_n");
    for v in &record.vertical_force {
        let _ = writeln!(out, "{v}");
    }
    fs::write(path, out).map_err(|source| IoError::Fs {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(content: &str) -> tempfile::NamedTempFile {
        let f = tempfile::NamedTempFile::new().unwrap();
        fs::write(f.path(), content).unwrap();
        f
    }

    #[test]
    fn thousand_samples_at_1khz_is_one_second() {
        let mut s = String::from("# fps=1000\n");
        for _ in 0..1000 {
            s.push_str("735.5\n");
        }
        let r = parse_forceplate_csv(write(&s).path()).unwrap();
        assert_eq!(r.vertical_force.len(), 1000);
        assert!((r.duration_s() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn missing_fps_header() {
        let err = parse_forceplate_csv(write("1\n2\n").path()).unwrap_err();
        assert!(err.to_string().contains("missing fps header"));
    }

    #[test]
    fn negative_fps_is_rejected() {
        let err = parse_forceplate_csv(write("# fps=-5\n1\n").path()).unwrap_err();
        assert!(matches!(err, IoError::InvalidFps { .. }));
    }

    #[test]
    fn all_zero_column_is_valid() {
        let r = parse_forceplate_csv(write("# fps=500\nforce_n\n0\n0\n0\n").path()).unwrap();
        assert_eq!(r.vertical_force, vec![0.0; 3]);
    }

    #[test]
    fn garbage_after_data_is_an_error() {
        assert!(parse_forceplate_csv(write("# fps=10\n1\nabc\n").path()).is_err());
    }
}
