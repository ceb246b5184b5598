//! End-to-end runs: sessions in, per-repetition metrics and agreement reports out.

mod analyze;
mod compare;
mod config;
mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::task::{Device, Metric, PtmMethod, TaskCode};

pub use analyze::{analyze_all, analyze_manifest, analyze_session, AnalyzeOutcome, SessionReport};
pub use compare::{compare, CompareOutcome, ReportRow};
pub use config::RunConfig;
pub use report::{
    read_records_csv, read_report_json, render_svg, render_table, write_analysis, write_atomic,
    write_report,
};

/// One metric value for one repetition on one device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub participant_id: String,
    pub task: TaskCode,
    pub device: Device,
    /// Scale used for distance-based markerless metrics.
    pub ptm_method: Option<PtmMethod>,
    pub rep_index: usize,
    pub metric: Metric,
    pub value: f64,
    pub unit: String,
}

impl MetricRecord {
    pub(crate) fn new(
        participant_id: &str,
        task: TaskCode,
        device: Device,
        ptm_method: Option<PtmMethod>,
        rep_index: usize,
        metric: Metric,
        value: f64,
    ) -> Self {
        MetricRecord {
            participant_id: participant_id.to_string(),
            task,
            device,
            ptm_method,
            rep_index,
            metric,
            value,
            unit: metric.unit().to_string(),
        }
    }

    fn sort_key(&self) -> impl Ord + '_ {
        (
            self.task,
            self.metric,
            self.device.as_str(),
            self.ptm_method,
            self.participant_id.as_str(),
            self.rep_index,
        )
    }
}

pub(crate) fn sort_records(records: &mut [MetricRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// A repetition (or a whole device stream) that produced no metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discard {
    pub participant_id: String,
    pub task: TaskCode,
    pub device: Device,
    pub ptm_method: Option<PtmMethod>,
    pub rep_index: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown format {other:?} (expected csv, json or svg)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        })
    }
}
