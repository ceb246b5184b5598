//! Univariate sampled signals and small numeric helpers shared by the pipeline.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Px,
    M,
    Deg,
    MPerS,
    DegPerS,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::Px => "px",
            Unit::M => "m",
            Unit::Deg => "deg",
            Unit::MPerS => "m_per_s",
            Unit::DegPerS => "deg_per_s",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    pub values: Vec<f64>,
    pub fps: f64,
    pub unit: Unit,
}

impl Signal {
    pub fn new(values: Vec<f64>, fps: f64, unit: Unit) -> Result<Self> {
        if !(fps.is_finite() && fps > 0.0) {
            return Err(invalid(format!("fps must be positive, got {fps}")));
        }
        Ok(Signal { values, fps, unit })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.values.len() as f64 / self.fps
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.fps
    }

    /// Copy of samples `start..=end`.
    pub fn slice(&self, start: usize, end: usize) -> Signal {
        Signal {
            values: self.values[start..=end].to_vec(),
            fps: self.fps,
            unit: self.unit,
        }
    }

    pub fn map(&self, unit: Unit, f: impl Fn(f64) -> f64) -> Signal {
        Signal {
            values: self.values.iter().map(|&v| f(v)).collect(),
            fps: self.fps,
            unit,
        }
    }

    pub fn require_unit(&self, unit: Unit) -> Result<()> {
        if self.unit != unit {
            return Err(Error::UnitMismatch {
                expected: unit.to_string(),
                found: self.unit.to_string(),
            });
        }
        Ok(())
    }

    /// Number of samples spanning `seconds`, rounded.
    pub fn frames(&self, seconds: f64) -> usize {
        (seconds * self.fps).round() as usize
    }
}

/// First-order derivative: central differences inside, one-sided at the ends.
pub fn gradient(values: &[f64], dt: f64) -> Vec<f64> {
    let n = values.len();
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| {
                if i == 0 {
                    (values[1] - values[0]) / dt
                } else if i == n - 1 {
                    (values[n - 1] - values[n - 2]) / dt
                } else {
                    (values[i + 1] - values[i - 1]) / (2.0 * dt)
                }
            })
            .collect(),
    }
}

/// Trapezoidal time average of uniformly sampled values.
pub fn time_average(values: &[f64]) -> f64 {
    match values.len() {
        0 => f64::NAN,
        1 => values[0],
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            (inner + 0.5 * (values[0] + values[n - 1])) / (n - 1) as f64
        }
    }
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Index of the first maximum.
pub fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some(b) if values[b] >= v => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Index of the first minimum.
pub fn argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some(b) if values[b] <= v => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Fill `None` samples by linear interpolation between observed neighbours;
/// leading and trailing gaps take the nearest observed value.
/// Returns `None` when nothing is observed.
pub fn fill_gaps(samples: &[Option<f64>]) -> Option<Vec<f64>> {
    let observed: Vec<usize> = (0..samples.len()).filter(|&i| samples[i].is_some()).collect();
    let (&first, &last) = (observed.first()?, observed.last()?);
    let mut out = vec![0.0; samples.len()];
    for slot in out.iter_mut().take(first) {
        *slot = samples[first].unwrap();
    }
    for w in observed.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (va, vb) = (samples[a].unwrap(), samples[b].unwrap());
        out[a] = va;
        for (k, slot) in out.iter_mut().enumerate().take(b).skip(a + 1) {
            let frac = (k - a) as f64 / (b - a) as f64;
            *slot = va + (vb - va) * frac;
        }
    }
    for slot in out.iter_mut().skip(last) {
        *slot = samples[last].unwrap();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fill_gaps_interpolates_and_holds_edges() {
        let v = fill_gaps(&[None, Some(1.0), None, Some(3.0), None]).unwrap();
        assert_eq!(v, vec![1.0, 1.0, 2.0, 3.0, 3.0]);
        assert!(fill_gaps(&[None, None]).is_none());
    }

    #[test]
    fn time_average_of_linear_ramp_is_midpoint() {
        let v: Vec<f64> = (0..11).map(|i| i as f64).collect();
        assert!((time_average(&v) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn gradient_of_line_is_constant() {
        let v: Vec<f64> = (0..5).map(|i| 2.0 * i as f64).collect();
        assert_eq!(gradient(&v, 1.0), vec![2.0; 5]);
    }

    #[test]
    fn argmax_and_argmin_take_first_occurrence() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0]), Some(1));
        assert_eq!(argmin(&[2.0, 0.0, 0.0]), Some(1));
        assert_eq!(argmax(&[]), None);
    }
}
