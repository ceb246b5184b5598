//! Agreement statistics between a markerless measurement and a reference.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// z-value for 95% limits of agreement.
pub const LOA_Z: f64 = 1.96;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub participant_id: String,
    pub rep_index: usize,
    pub mmc: f64,
    pub truth: f64,
}

impl Pair {
    pub fn diff(&self) -> f64 {
        self.mmc - self.truth
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PairedMeasurements {
    pub pairs: Vec<Pair>,
    pub unit: String,
}

impl PairedMeasurements {
    pub fn new(pairs: Vec<Pair>, unit: impl Into<String>) -> Result<Self> {
        if let Some(p) = pairs.iter().find(|p| !p.mmc.is_finite() || !p.truth.is_finite()) {
            return Err(invalid(format!(
                "non-finite value for {} rep {}",
                p.participant_id, p.rep_index
            )));
        }
        Ok(PairedMeasurements {
            pairs,
            unit: unit.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Two-column rating matrix (markerless, reference), one row per pair.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.pairs.iter().map(|p| vec![p.mmc, p.truth]).collect()
    }

    /// Participants × repetitions matrix of markerless values. Repetitions are
    /// aligned by position after sorting on `rep_index`; participants with
    /// fewer repetitions than the widest row get NaN cells, which ICC drops.
    pub fn repetition_matrix(&self) -> Vec<Vec<f64>> {
        let mut by: std::collections::BTreeMap<&str, Vec<(usize, f64)>> = Default::default();
        for p in &self.pairs {
            by.entry(&p.participant_id).or_default().push((p.rep_index, p.mmc));
        }
        let width = by.values().map(Vec::len).max().unwrap_or(0);
        by.into_values()
            .map(|mut reps| {
                reps.sort_by_key(|r| r.0);
                let mut row: Vec<f64> = reps.into_iter().map(|r| r.1).collect();
                row.resize(width, f64::NAN);
                row
            })
            .collect()
    }

    /// Bland–Altman scatter points `(mean, difference)`.
    pub fn scatter(&self) -> Vec<(f64, f64)> {
        self.pairs
            .iter()
            .map(|p| ((p.mmc + p.truth) / 2.0, p.diff()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IccLabel {
    Poor,
    Moderate,
    Good,
    Excellent,
}

impl IccLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            IccLabel::Poor => "poor",
            IccLabel::Moderate => "moderate",
            IccLabel::Good => "good",
            IccLabel::Excellent => "excellent",
        }
    }
}

impl fmt::Display for IccLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_icc(value: f64) -> IccLabel {
    if value < 0.5 {
        IccLabel::Poor
    } else if value < 0.75 {
        IccLabel::Moderate
    } else if value < 0.9 {
        IccLabel::Good
    } else {
        IccLabel::Excellent
    }
}

/// Mean squares of a complete two-way layout (rows = subjects, columns = raters).
struct MeanSquares {
    n: f64,
    k: f64,
    rows: f64,
    cols: f64,
    error: f64,
    total_ss: f64,
}

fn complete_rows(matrix: &[Vec<f64>]) -> Result<Vec<&[f64]>> {
    let k = matrix.first().map_or(0, Vec::len);
    if matrix.iter().any(|r| r.len() != k) {
        return Err(invalid("ragged rating matrix"));
    }
    if k < 2 {
        return Err(invalid(format!("need at least 2 raters, got {k}")));
    }
    let rows: Vec<&[f64]> = matrix
        .iter()
        .filter(|r| r.iter().all(|v| v.is_finite()))
        .map(Vec::as_slice)
        .collect();
    if rows.len() < 2 {
        return Err(invalid(format!(
            "need at least 2 complete subjects, got {}",
            rows.len()
        )));
    }
    Ok(rows)
}

fn mean_squares(rows: &[&[f64]]) -> MeanSquares {
    let n = rows.len();
    let k = rows[0].len();
    let grand = rows.iter().flat_map(|r| r.iter()).sum::<f64>() / (n * k) as f64;
    let row_means: Vec<f64> = rows.iter().map(|r| r.iter().sum::<f64>() / k as f64).collect();
    let col_means: Vec<f64> = (0..k)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let total_ss: f64 = rows
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| (v - grand).powi(2))
        .sum();
    let ssr = k as f64 * row_means.iter().map(|m| (m - grand).powi(2)).sum::<f64>();
    let ssc = n as f64 * col_means.iter().map(|m| (m - grand).powi(2)).sum::<f64>();
    let sse = (total_ss - ssr - ssc).max(0.0);
    let (nf, kf) = (n as f64, k as f64);
    MeanSquares {
        n: nf,
        k: kf,
        rows: ssr / (nf - 1.0),
        cols: ssc / (kf - 1.0),
        error: sse / ((nf - 1.0) * (kf - 1.0)),
        total_ss,
    }
}

/// ICC(2,1): two-way random effects, absolute agreement, single measurement.
/// Rows holding any non-finite cell are dropped. A matrix with zero total
/// variance agrees perfectly and yields 1.
pub fn icc_2_1(matrix: &[Vec<f64>]) -> Result<f64> {
    let rows = complete_rows(matrix)?;
    let ms = mean_squares(&rows);
    if ms.total_ss == 0.0 {
        return Ok(1.0);
    }
    let den = ms.rows + (ms.k - 1.0) * ms.error + ms.k / ms.n * (ms.cols - ms.error);
    if den == 0.0 {
        return Err(invalid("ICC(2,1) undefined: zero denominator"));
    }
    Ok((ms.rows - ms.error) / den)
}

/// ICC(3,1): two-way mixed effects, consistency, single measurement.
pub fn icc_3_1(matrix: &[Vec<f64>]) -> Result<f64> {
    let rows = complete_rows(matrix)?;
    let ms = mean_squares(&rows);
    if ms.total_ss == 0.0 {
        return Ok(1.0);
    }
    let den = ms.rows + (ms.k - 1.0) * ms.error;
    if den == 0.0 {
        return Err(invalid("ICC(3,1) undefined: zero denominator"));
    }
    Ok((ms.rows - ms.error) / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrrEstimator {
    #[default]
    Icc21,
    Icc31,
}

/// Test–retest reliability over repetitions (columns) of one device.
pub fn trr(rep_matrix: &[Vec<f64>], estimator: TrrEstimator) -> Result<f64> {
    let r = rep_matrix.first().map_or(0, Vec::len);
    if r < 2 {
        return Err(invalid(format!("need at least 2 repetitions, got {r}")));
    }
    match estimator {
        TrrEstimator::Icc21 => icc_2_1(rep_matrix),
        TrrEstimator::Icc31 => icc_3_1(rep_matrix),
    }
}

/// Bias and 95% limits of agreement of `mmc − truth`.
pub fn bland_altman(pairs: &[Pair]) -> Result<(f64, f64, f64)> {
    let n = pairs.len();
    if n < 2 {
        return Err(invalid(format!("Bland–Altman needs at least 2 pairs, got {n}")));
    }
    let bias = pairs.iter().map(Pair::diff).sum::<f64>() / n as f64;
    let var = pairs.iter().map(|p| (p.diff() - bias).powi(2)).sum::<f64>() / (n - 1) as f64;
    let half = LOA_Z * var.sqrt();
    Ok((bias, bias - half, bias + half))
}

pub fn mae(pairs: &[Pair]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(invalid("MAE of no pairs"));
    }
    Ok(pairs.iter().map(|p| p.diff().abs()).sum::<f64>() / pairs.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub n: usize,
    pub mae: f64,
    pub bias: f64,
    pub loa_low: f64,
    pub loa_high: f64,
    /// Absent when fewer than two participants have two repetitions.
    pub trr: Option<f64>,
    pub icc: f64,
    pub icc_label: IccLabel,
}

/// All agreement statistics for one set of pooled repetitions.
pub fn agreement_report(data: &PairedMeasurements, estimator: TrrEstimator) -> Result<AgreementReport> {
    let (bias, loa_low, loa_high) = bland_altman(&data.pairs)?;
    let icc = icc_2_1(&data.matrix())?;
    let trr = trr(&data.repetition_matrix(), estimator).ok();
    Ok(AgreementReport {
        n: data.len(),
        mae: mae(&data.pairs)?,
        bias,
        loa_low,
        loa_high,
        trr,
        icc,
        icc_label: classify_icc(icc),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(v: &[(f64, f64)]) -> Vec<Pair> {
        v.iter()
            .enumerate()
            .map(|(i, &(m, t))| Pair {
                participant_id: format!("P{}", i / 3),
                rep_index: i % 3 + 1,
                mmc: m,
                truth: t,
            })
            .collect()
    }

    #[test]
    fn identical_columns() {
        let m = vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![5.0, 5.0]];
        assert!((icc_2_1(&m).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(icc_2_1(&[vec![3.0, 3.0], vec![3.0, 3.0]]).unwrap(), 1.0);
    }

    #[test]
    fn bias_is_penalised() {
        // Rows 1..4 with small spread, column 2 shifted by 10.
        // Hand ANOVA: grand 7.5, SSR = 2·(2.25+0.25+0.25+2.25) = 10, MSR = 10/3,
        // SSC = 4·(25+25) = 200, MSC = 200, SSE = 0.
        // ICC = (10/3) / (10/3 + 0 + 2/4·200) = 0.03226.
        let m: Vec<Vec<f64>> = (1..=4).map(|i| vec![i as f64, i as f64 + 10.0]).collect();
        let icc = icc_2_1(&m).unwrap();
        assert!((icc - (10.0 / 3.0) / (10.0 / 3.0 + 100.0)).abs() < 1e-12, "{icc}");
        assert!(icc < 0.05);
    }

    #[test]
    fn missing_rows_are_dropped() {
        let m = vec![vec![1.0, 1.1], vec![f64::NAN, 2.0], vec![3.0, 2.9], vec![4.0, 4.2]];
        let full = vec![vec![1.0, 1.1], vec![3.0, 2.9], vec![4.0, 4.2]];
        assert_eq!(icc_2_1(&m).unwrap(), icc_2_1(&full).unwrap());
        assert!(icc_2_1(&[vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn bland_altman_examples() {
        let zero = pairs(&[(1.0, 1.0), (2.0, 2.0)]);
        assert_eq!(bland_altman(&zero).unwrap(), (0.0, 0.0, 0.0));
        let pm = pairs(&[(0.0, 1.0), (2.0, 1.0)]);
        let (b, lo, hi) = bland_altman(&pm).unwrap();
        assert_eq!(b, 0.0);
        assert!((hi - 1.96 * 2f64.sqrt()).abs() < 1e-12);
        assert!((lo + 2.772).abs() < 1e-3);
        assert!(bland_altman(&pm[..1]).is_err());
    }

    #[test]
    fn mae_examples() {
        assert_eq!(mae(&pairs(&[(1.0, 1.0)])).unwrap(), 0.0);
        assert_eq!(mae(&pairs(&[(1.0, 0.0), (0.0, 3.0)])).unwrap(), 2.0);
        assert!(mae(&[]).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(classify_icc(0.96), IccLabel::Excellent);
        assert_eq!(classify_icc(0.5), IccLabel::Moderate);
        assert_eq!(classify_icc(0.25), IccLabel::Poor);
        assert_eq!(classify_icc(0.75), IccLabel::Good);
        assert_eq!(classify_icc(0.9), IccLabel::Excellent);
    }

    #[test]
    fn trr_needs_two_repetitions() {
        assert!(trr(&[vec![1.0], vec![2.0]], TrrEstimator::Icc21).is_err());
        let m = vec![vec![1.0, 1.0, 1.0], vec![4.0, 4.0, 4.0], vec![2.0, 2.0, 2.0]];
        assert!((trr(&m, TrrEstimator::Icc21).unwrap() - 1.0).abs() < 1e-12);
        assert!((trr(&m, TrrEstimator::Icc31).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repetition_matrix_pads_missing() {
        let mut p = pairs(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (4.0, 0.0), (5.0, 0.0)]);
        p.swap(0, 2);
        let d = PairedMeasurements::new(p, "cm").unwrap();
        let m = d.repetition_matrix();
        assert_eq!(m[0], vec![1.0, 2.0, 3.0]);
        assert_eq!(m[1][..2], [4.0, 5.0]);
        assert!(m[1][2].is_nan());
    }
}
