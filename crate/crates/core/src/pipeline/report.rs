use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::agreement::{AgreementReport, IccLabel, LOA_Z};
use crate::error::{IoError, Result};
use crate::task::{Device, Metric, PtmMethod, TaskCode};

use super::{CompareOutcome, Discard, Format, MetricRecord, ReportRow};

fn fs_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Fs {
        path: path.to_path_buf(),
        source,
    }
}

/// Write `bytes` to a temporary sibling and rename it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(fs_err(dir))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fs_err(dir))?;
    tmp.write_all(bytes).map_err(fs_err(path))?;
    tmp.persist(path).map_err(|e| fs_err(path)(e.error))?;
    Ok(())
}

fn csv_bytes<T: Serialize>(rows: &[T], path: &Path) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|source| IoError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
    }
    w.into_inner().map_err(|e| fs_err(path)(e.into_error()).into())
}

fn json_bytes<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(value).map_err(|source| IoError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    s.push(b'\n');
    Ok(s)
}

/// Per-task output directories holding `records` and `discards` files.
/// Returns the written paths.
pub fn write_analysis(
    records: &[MetricRecord],
    discards: &[Discard],
    out_dir: &Path,
    formats: &[Format],
) -> Result<Vec<PathBuf>> {
    let mut by_task: BTreeMap<TaskCode, (Vec<&MetricRecord>, Vec<&Discard>)> = BTreeMap::new();
    for r in records {
        by_task.entry(r.task).or_default().0.push(r);
    }
    for d in discards {
        by_task.entry(d.task).or_default().1.push(d);
    }
    let mut written = Vec::new();
    for (task, (recs, drops)) in by_task {
        let dir = out_dir.join(task.as_str());
        for &f in formats {
            match f {
                Format::Csv => {
                    let p = dir.join("records.csv");
                    write_atomic(&p, &csv_bytes(&recs, &p)?)?;
                    written.push(p);
                    let p = dir.join("discards.csv");
                    let rows: Vec<DiscardRow> = drops.iter().map(|d| DiscardRow::from(*d)).collect();
                    write_atomic(&p, &csv_bytes(&rows, &p)?)?;
                    written.push(p);
                }
                Format::Json => {
                    let p = dir.join("records.json");
                    write_atomic(&p, &json_bytes(&recs, &p)?)?;
                    written.push(p);
                    let p = dir.join("discards.json");
                    write_atomic(&p, &json_bytes(&drops, &p)?)?;
                    written.push(p);
                }
                Format::Svg => {}
            }
        }
    }
    Ok(written)
}

#[derive(Serialize)]
struct DiscardRow<'a> {
    participant_id: &'a str,
    task: TaskCode,
    device: Device,
    ptm_method: Option<PtmMethod>,
    rep_index: Option<usize>,
    reason: &'a str,
}

impl<'a> From<&'a Discard> for DiscardRow<'a> {
    fn from(d: &'a Discard) -> Self {
        DiscardRow {
            participant_id: &d.participant_id,
            task: d.task,
            device: d.device,
            ptm_method: d.ptm_method,
            rep_index: d.rep_index,
            reason: &d.reason,
        }
    }
}

/// Read records written by [`write_analysis`] (or any CSV with the same columns).
pub fn read_records_csv(path: &Path) -> Result<Vec<MetricRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(|source| IoError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for rec in r.deserialize() {
        out.push(rec.map_err(|source| IoError::Csv {
            path: path.to_path_buf(),
            source,
        })?);
    }
    Ok(out)
}

pub fn read_report_json(path: &Path) -> Result<CompareOutcome> {
    let text = std::fs::read_to_string(path).map_err(fs_err(path))?;
    Ok(serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.to_path_buf(),
        source,
    })?)
}

#[derive(Serialize)]
struct ReportCsvRow<'a> {
    task: TaskCode,
    metric: Metric,
    ptm_method: &'a str,
    reference: Device,
    unit: &'a str,
    n: usize,
    mae: String,
    bias: String,
    loa_low: String,
    loa_high: String,
    trr: String,
    icc: String,
    icc_label: &'a str,
    unmatched: usize,
}

fn num(v: f64) -> String {
    format!("{v:.4}")
}

impl<'a> From<&'a ReportRow> for ReportCsvRow<'a> {
    fn from(r: &'a ReportRow) -> Self {
        let s: &AgreementReport = &r.stats;
        ReportCsvRow {
            task: r.task,
            metric: r.metric,
            ptm_method: r.ptm_label(),
            reference: r.reference,
            unit: &r.unit,
            n: s.n,
            mae: num(s.mae),
            bias: num(s.bias),
            loa_low: num(s.loa_low),
            loa_high: num(s.loa_high),
            trr: s.trr.map(num).unwrap_or_default(),
            icc: num(s.icc),
            icc_label: s.icc_label.as_str(),
            unmatched: r.unmatched,
        }
    }
}

/// Fixed-width text table, one line per report row.
pub fn render_table(rows: &[ReportRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<6} {:<17} {:<6} {:>3} {:>9} {:>9} {:>21} {:>6} {:>6}  label",
        "task", "metric", "ptm", "n", "MAE", "bias", "LoA", "TRR", "ICC"
    );
    for r in rows {
        let st = &r.stats;
        let loa = format!("[{:.3}, {:.3}]", st.loa_low, st.loa_high);
        let trr = st.trr.map_or("-".to_string(), |v| format!("{v:.2}"));
        let _ = writeln!(
            s,
            "{:<6} {:<17} {:<6} {:>3} {:>9.3} {:>9.3} {:>21} {:>6} {:>6.2}  {}",
            r.task.as_str(),
            r.metric.as_str(),
            r.ptm_label(),
            st.n,
            st.mae,
            st.bias,
            loa,
            trr,
            st.icc,
            st.icc_label.as_str()
        );
    }
    s
}

fn label_colour(label: IccLabel) -> &'static str {
    match label {
        IccLabel::Excellent => "#1b7837",
        IccLabel::Good => "#5aae61",
        IccLabel::Moderate => "#d9a400",
        IccLabel::Poor => "#c0392b",
    }
}

/// Bland-Altman scatter as a standalone SVG document.
pub fn render_svg(row: &ReportRow) -> String {
    const W: f64 = 480.0;
    const H: f64 = 320.0;
    const PAD: f64 = 48.0;
    let st = &row.stats;
    let points: Vec<(f64, f64)> = row
        .pairs
        .iter()
        .map(|p| ((p.mmc + p.truth) / 2.0, p.diff()))
        .collect();
    let (mut x0, mut x1) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    if !x0.is_finite() || x1 - x0 < 1e-12 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    let (mut y0, mut y1) = points.iter().fold((st.loa_low, st.loa_high), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let margin = ((y1 - y0) * 0.1).max(1e-6);
    y0 -= margin;
    y1 += margin;
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r##"<rect width="{W}" height="{H}" fill="#ffffff"/>"##);
    let title = format!(
        "{} {} {} (ICC {:.2}, {})",
        row.task,
        row.metric.title(),
        row.ptm_label(),
        st.icc,
        st.icc_label.as_str()
    );
    let _ = writeln!(s, r#"<text x="{PAD}" y="20">{}</text>"#, escape(&title));
    let _ = writeln!(
        s,
        r##"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="#888888"/>"##,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let lines = [
        (st.bias, "#333333", "bias"),
        (st.loa_low, "#777777", &*format!("-{LOA_Z} SD")),
        (st.loa_high, "#777777", &*format!("+{LOA_Z} SD")),
    ];
    for (y, colour, name) in lines {
        let py = sy(y);
        let _ = writeln!(
            s,
            r#"<line x1="{PAD}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="{colour}" stroke-dasharray="4 3"/>"#,
            W - PAD
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" fill="{colour}">{name} {y:.3}</text>"#,
            W - PAD - 90.0,
            py - 3.0
        );
    }
    let colour = label_colour(st.icc_label);
    for (x, y) in &points {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{colour}" fill-opacity="0.7"/>"#,
            sx(*x),
            sy(*y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">mean of devices ({})</text>"#,
        W / 2.0,
        H - 12.0,
        escape(&row.unit)
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" transform="rotate(-90 14 {:.2})" text-anchor="middle">markerless - {} ({})</text>"#,
        H / 2.0,
        H / 2.0,
        row.reference,
        escape(&row.unit)
    );
    let _ = writeln!(s, r#"<text x="{PAD}" y="{:.2}">{x0:.3}</text>"#, H - PAD + 14.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{x1:.3}</text>"#, W - PAD, H - PAD + 14.0);
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[derive(Serialize)]
struct ScatterRow<'a> {
    participant_id: &'a str,
    rep_index: usize,
    mmc: f64,
    reference: f64,
    mean: f64,
    difference: f64,
}

/// Write the report table (`report.txt`), the requested formats
/// (`report.csv`, `report.json`), and per-row Bland-Altman scatter files under
/// `plots/`. Scatter CSVs accompany CSV output and SVGs accompany SVG output.
pub fn write_report(outcome: &CompareOutcome, out_dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    if outcome.rows.is_empty() {
        log::warn!("no report rows to write");
    }
    let mut written = Vec::new();
    let p = out_dir.join("report.txt");
    write_atomic(&p, render_table(&outcome.rows).as_bytes())?;
    written.push(p);
    for &f in formats {
        match f {
            Format::Csv => {
                let p = out_dir.join("report.csv");
                let rows: Vec<ReportCsvRow> = outcome.rows.iter().map(ReportCsvRow::from).collect();
                let bytes = if rows.is_empty() {
                    b"task,metric,ptm_method,reference,unit,n,mae,bias,loa_low,loa_high,trr,icc,icc_label,unmatched\n".to_vec()
                } else {
                    csv_bytes(&rows, &p)?
                };
                write_atomic(&p, &bytes)?;
                written.push(p);
                for row in &outcome.rows {
                    let p = out_dir.join("plots").join(format!("{}.csv", row.stem()));
                    let pts: Vec<ScatterRow> = row
                        .pairs
                        .iter()
                        .map(|q| ScatterRow {
                            participant_id: &q.participant_id,
                            rep_index: q.rep_index,
                            mmc: q.mmc,
                            reference: q.truth,
                            mean: (q.mmc + q.truth) / 2.0,
                            difference: q.diff(),
                        })
                        .collect();
                    write_atomic(&p, &csv_bytes(&pts, &p)?)?;
                    written.push(p);
                }
            }
            Format::Json => {
                let p = out_dir.join("report.json");
                write_atomic(&p, &json_bytes(outcome, &p)?)?;
                written.push(p);
            }
            Format::Svg => {
                for row in &outcome.rows {
                    let p = out_dir.join("plots").join(format!("{}.svg", row.stem()));
                    write_atomic(&p, render_svg(row).as_bytes())?;
                    written.push(p);
                }
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agreement::TrrEstimator;
    use crate::pipeline::compare;

    fn outcome() -> CompareOutcome {
        let mut records = Vec::new();
        for (i, p) in ["A", "B", "C"].iter().enumerate() {
            for rep in 1..=3 {
                let v = 30.0 + 2.0 * i as f64 + rep as f64;
                let noise = ((i * 3 + rep) % 4) as f64 * 0.2;
                records.push(MetricRecord::new(p, TaskCode::Cmjbl, Device::Mmc, Some(PtmMethod::Height), rep, Metric::JumpHeight, v + noise));
                records.push(MetricRecord::new(p, TaskCode::Cmjbl, Device::ForcePlate, None, rep, Metric::JumpHeight, v));
            }
        }
        compare(&records, TrrEstimator::Icc21).unwrap()
    }

    #[test]
    fn one_row_gives_one_table_and_one_scatter_set() {
        let dir = tempfile::tempdir().unwrap();
        let out = outcome();
        let files = write_report(&out, dir.path(), &[Format::Csv, Format::Svg]).unwrap();
        assert!(dir.path().join("report.txt").exists());
        assert!(dir.path().join("plots/CMJBL_jump_height_height.csv").exists());
        assert!(dir.path().join("plots/CMJBL_jump_height_height.svg").exists());
        assert_eq!(files.len(), 4);
        let table = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
        assert_eq!(table.lines().count(), 2);
        assert!(table.contains("PTM_h"));
    }

    #[test]
    fn csv_only_emits_no_svg() {
        let dir = tempfile::tempdir().unwrap();
        write_report(&outcome(), dir.path(), &[Format::Csv]).unwrap();
        let svgs = std::fs::read_dir(dir.path().join("plots"))
            .unwrap()
            .filter(|e| e.as_ref().unwrap().path().extension().unwrap() == "svg")
            .count();
        assert_eq!(svgs, 0);
    }

    #[test]
    fn empty_input_writes_header_only() {
        let dir = tempfile::tempdir().unwrap();
        write_report(&CompareOutcome::default(), dir.path(), &[Format::Csv]).unwrap();
        let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
        assert_eq!(csv.lines().count(), 1);
        let table = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
        assert_eq!(table.lines().count(), 1);
    }

    #[test]
    fn records_round_trip_through_csv() {
        let dir = tempfile::tempdir().unwrap();
        let recs = vec![
            MetricRecord::new("P01", TaskCode::Ohp, Device::Mmc, Some(PtmMethod::Object), 2, Metric::PeakVelocity, 1.25),
            MetricRecord::new("P01", TaskCode::Ohp, Device::Omc, None, 2, Metric::PeakVelocity, 1.5),
        ];
        write_analysis(&recs, &[], dir.path(), &[Format::Csv, Format::Json]).unwrap();
        let back = read_records_csv(&dir.path().join("OHP/records.csv")).unwrap();
        assert_eq!(back, recs);
    }

    #[test]
    fn report_json_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let out = outcome();
        write_report(&out, dir.path(), &[Format::Json]).unwrap();
        assert_eq!(read_report_json(&dir.path().join("report.json")).unwrap(), out);
    }
}
