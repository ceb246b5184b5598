use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::IoError;
use crate::signal::fill_gaps;

use super::{fps_comment, read_text};

pub const DEFAULT_OMC_FPS: f64 = 100.0;

/// Marker trajectories in millimetres, one `[x, y, z]` per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkerSeries {
    pub markers: BTreeMap<String, Vec<[f64; 3]>>,
    pub fps: f64,
}

impl MarkerSeries {
    pub fn len(&self) -> usize {
        self.markers.values().next().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn duration_s(&self) -> f64 {
        self.len() as f64 / self.fps
    }

    pub fn marker(&self, name: &str) -> Option<&[[f64; 3]]> {
        self.markers.get(name).map(Vec::as_slice)
    }

    /// One coordinate axis (0 = x, 1 = y, 2 = z) of a marker.
    pub fn axis(&self, name: &str, axis: usize) -> Option<Vec<f64>> {
        self.marker(name).map(|m| m.iter().map(|p| p[axis]).collect())
    }
}

const INDEX_COLUMNS: [&str; 3] = ["frame", "time", "t"];

fn axis_of(c: &str) -> Option<usize> {
    match c {
        "x" | "X" => Some(0),
        "y" | "Y" => Some(1),
        "z" | "Z" => Some(2),
        _ => None,
    }
}

/// Parse an OMC export with `marker.axis` headers (e.g. `toe_R.z`).
///
/// Blank cells mark occlusion and are linearly interpolated; leading and
/// trailing gaps hold the nearest observed value. An optional `# fps=<n>`
/// line overrides the 100 Hz default.
pub fn parse_omc_csv(path: &Path) -> Result<MarkerSeries, IoError> {
    let text = read_text(path)?;
    let mut fps = DEFAULT_OMC_FPS;
    for line in text.lines().filter(|l| l.trim_start().starts_with('#')) {
        if let Some(v) = fps_comment(line) {
            fps = v.parse().map_err(|_| IoError::Structure {
                path: path.to_path_buf(),
                message: format!("unparseable fps '{v}'"),
            })?;
        }
    }
    if !(fps.is_finite() && fps > 0.0) {
        return Err(IoError::InvalidFps {
            path: path.to_path_buf(),
            fps,
        });
    }
    let structure = |message: String| IoError::Structure {
        path: path.to_path_buf(),
        message,
    };

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|source| IoError::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .clone();

    // column -> (marker, axis)
    let mut columns: Vec<Option<(String, usize)>> = Vec::with_capacity(headers.len());
    for h in headers.iter() {
        if INDEX_COLUMNS.iter().any(|c| h.eq_ignore_ascii_case(c)) {
            columns.push(None);
            continue;
        }
        let (marker, axis) = h
            .rsplit_once('.')
            .and_then(|(m, a)| axis_of(a).map(|a| (m.to_string(), a)))
            .filter(|(m, _)| !m.is_empty())
            .ok_or_else(|| structure(format!("header '{h}' is not of the form marker.axis")))?;
        columns.push(Some((marker, axis)));
    }
    let mut raw: BTreeMap<String, [Vec<Option<f64>>; 3]> = BTreeMap::new();
    for (marker, axis) in columns.iter().flatten() {
        if axis_seen(&columns, marker, *axis) > 1 {
            return Err(structure(format!("duplicate column for marker '{marker}'")));
        }
        raw.entry(marker.clone()).or_default();
    }

    for (row, record) in reader.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|source| IoError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        if record.len() != headers.len() {
            return Err(structure(format!(
                "row {line} has {} cells, header has {}",
                record.len(),
                headers.len()
            )));
        }
        for (cell, column) in record.iter().zip(&columns) {
            let Some((marker, axis)) = column else { continue };
            let value = if cell.is_empty() {
                None
            } else {
                let v: f64 = cell.parse().map_err(|_| IoError::Cell {
                    path: path.to_path_buf(),
                    row: line,
                    column: format!("{marker}.{}", ["x", "y", "z"][*axis]),
                    message: format!("non-numeric value '{cell}'"),
                })?;
                if !v.is_finite() {
                    return Err(IoError::Cell {
                        path: path.to_path_buf(),
                        row: line,
                        column: format!("{marker}.{}", ["x", "y", "z"][*axis]),
                        message: "non-finite value".into(),
                    });
                }
                Some(v)
            };
            raw.get_mut(marker).expect("registered marker")[*axis].push(value);
        }
    }

    let mut markers = BTreeMap::new();
    for (name, axes) in raw {
        if axes.iter().any(Vec::is_empty) && axes.iter().any(|a| !a.is_empty()) {
            return Err(structure(format!("marker '{name}' lacks one of x/y/z")));
        }
        let mut filled: Vec<Vec<f64>> = Vec::with_capacity(3);
        for (a, samples) in axes.iter().enumerate() {
            if samples.is_empty() {
                return Err(structure(format!("marker '{name}' lacks axis {a}")));
            }
            filled.push(fill_gaps(samples).ok_or_else(|| {
                structure(format!("marker '{name}' axis {a} is never observed"))
            })?);
        }
        let points = (0..filled[0].len())
            .map(|i| [filled[0][i], filled[1][i], filled[2][i]])
            .collect();
        markers.insert(name, points);
    }
    if markers.is_empty() {
        return Err(structure("no marker columns".into()));
    }
    Ok(MarkerSeries { markers, fps })
}

fn axis_seen(columns: &[Option<(String, usize)>], marker: &str, axis: usize) -> usize {
    columns
        .iter()
        .flatten()
        .filter(|(m, a)| m == marker && *a == axis)
        .count()
}

/// Write a marker series in the layout read by [`parse_omc_csv`].
pub fn write_omc_csv(series: &MarkerSeries, path: &Path) -> Result<(), IoError> {
    let mut out = String::new();
    let _ = writeln!(out, "# fps={}", series.fps);
    let names: Vec<&String> = series.markers.keys().collect();
    let header: Vec<String> = names
        .iter()
        .flat_map(|n| ["x", "y", "z"].map(|a| format!("{n}.{a}")))
        .collect();
    let _ = writeln!(out, "{}", header.join(","));
    for i in 0..series.len() {
        let row: Vec<String> = names
            .iter()
            .flat_map(|n| series.markers[*n][i].map(|v| v.to_string()))
            .collect();
        let _ = writeln!(out, "{}", row.join(","));
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
    fn three_hundred_rows_are_three_seconds() {
        let mut s = String::from("toe_R.x,toe_R.y,toe_R.z\n");
        for i in 0..300 {
            s.push_str(&format!("{i},0,1\n"));
        }
        let f = write(&s);
        let m = parse_omc_csv(f.path()).unwrap();
        assert_eq!(m.len(), 300);
        assert!((m.duration_s() - 3.0).abs() < 1e-12);
        assert_eq!(m.markers.len(), 1);
        assert!(m.marker("toe_R").is_some());
    }

    #[test]
    fn blank_cells_are_interpolated() {
        let f = write("toe_R.x,toe_R.y,toe_R.z\n1.0,0,0\n,0,0\n3.0,0,0\n");
        let m = parse_omc_csv(f.path()).unwrap();
        assert_eq!(m.axis("toe_R", 0).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn edge_gaps_hold_nearest_value() {
        let f = write("a.x,a.y,a.z\n,0,0\n2.0,0,0\n,0,0\n");
        let m = parse_omc_csv(f.path()).unwrap();
        assert_eq!(m.axis("a", 0).unwrap(), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn non_numeric_cell_reports_row_and_column() {
        let f = write("a.x,a.y,a.z\n1,2,3\n1,oops,3\n");
        match parse_omc_csv(f.path()).unwrap_err() {
            IoError::Cell { row, column, .. } => {
                assert_eq!(row, 3);
                assert_eq!(column, "a.y");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn ragged_rows_are_structural_errors() {
        let f = write("a.x,a.y,a.z\n1,2,3\n1,2\n");
        assert!(matches!(
            parse_omc_csv(f.path()).unwrap_err(),
            IoError::Structure { .. }
        ));
    }

    #[test]
    fn fps_comment_and_index_column() {
        let f = write("# fps=200\nframe,a.x,a.y,a.z\n0,1,2,3\n1,1,2,3\n");
        let m = parse_omc_csv(f.path()).unwrap();
        assert_eq!(m.fps, 200.0);
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn incomplete_marker_is_rejected() {
        let f = write("a.x,a.y\n1,2\n");
        assert!(parse_omc_csv(f.path()).is_err());
    }
}
