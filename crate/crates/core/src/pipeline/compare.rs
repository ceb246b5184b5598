use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::agreement::{agreement_report, AgreementReport, Pair, PairedMeasurements, TrrEstimator};
use crate::error::{invalid, Result};
use crate::task::{Device, Metric, PtmMethod, TaskCode};

use super::MetricRecord;

/// One Table-II-style row: a metric on a task under one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub task: TaskCode,
    pub metric: Metric,
    pub ptm_method: Option<PtmMethod>,
    pub reference: Device,
    pub unit: String,
    #[serde(flatten)]
    pub stats: AgreementReport,
    /// Repetitions present on only one of the two devices.
    pub unmatched: usize,
    pub pairs: Vec<Pair>,
}

impl ReportRow {
    pub fn ptm_label(&self) -> &'static str {
        self.ptm_method.map_or("-", PtmMethod::label)
    }

    /// File stem for this row's plot files.
    pub fn stem(&self) -> String {
        match self.ptm_method {
            Some(m) => format!("{}_{}_{}", self.task, self.metric, m),
            None => format!("{}_{}", self.task, self.metric),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CompareOutcome {
    pub rows: Vec<ReportRow>,
    pub unmatched: usize,
    /// Row keys that could not be evaluated, with the reason.
    pub skipped: Vec<String>,
}

type Key = (String, usize);

/// Pair markerless records with the task's reference device and compute
/// agreement per (task, metric, scale).
pub fn compare(records: &[MetricRecord], estimator: TrrEstimator) -> Result<CompareOutcome> {
    let devices: std::collections::BTreeSet<&str> = records.iter().map(|r| r.device.as_str()).collect();
    if !records.is_empty() && devices.len() < 2 {
        return Err(invalid("need two devices to compare"));
    }
    // (task, metric) -> reference values and markerless values per scale.
    let mut refs: BTreeMap<(TaskCode, Metric), BTreeMap<Key, f64>> = BTreeMap::new();
    let mut mmc: BTreeMap<(TaskCode, Metric, Option<PtmMethod>), BTreeMap<Key, f64>> = BTreeMap::new();
    for r in records {
        let key = (r.participant_id.clone(), r.rep_index);
        if r.device == Device::Mmc {
            mmc.entry((r.task, r.metric, r.ptm_method)).or_default().insert(key, r.value);
        } else if r.device == r.task.ground_truth() {
            refs.entry((r.task, r.metric)).or_default().insert(key, r.value);
        }
    }
    let mut out = CompareOutcome::default();
    for ((task, metric, ptm), values) in &mmc {
        let label = match ptm {
            Some(m) => format!("{task} {metric} {}", m.label()),
            None => format!("{task} {metric}"),
        };
        let Some(truth) = refs.get(&(*task, *metric)) else {
            out.skipped.push(format!("{label}: no {} records", task.ground_truth()));
            continue;
        };
        let mut pairs = Vec::new();
        let mut unmatched = 0;
        for (key, &v) in values {
            match truth.get(key) {
                Some(&t) => pairs.push(Pair {
                    participant_id: key.0.clone(),
                    rep_index: key.1,
                    mmc: v,
                    truth: t,
                }),
                None => unmatched += 1,
            }
        }
        unmatched += truth.keys().filter(|k| !values.contains_key(*k)).count();
        if unmatched > 0 {
            log::warn!("{label}: {unmatched} unmatched repetitions dropped");
        }
        out.unmatched += unmatched;
        let data = PairedMeasurements::new(pairs, metric.unit())?;
        match agreement_report(&data, estimator) {
            Ok(stats) => out.rows.push(ReportRow {
                task: *task,
                metric: *metric,
                ptm_method: *ptm,
                reference: task.ground_truth(),
                unit: metric.unit().to_string(),
                stats,
                unmatched,
                pairs: data.pairs,
            }),
            Err(e) => {
                log::warn!("{label}: {e}");
                out.skipped.push(format!("{label}: {e}"));
            }
        }
    }
    Ok(out)
}
