use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::geometry::Line;
use crate::hough::HoughSpace;
use crate::reconstruct::{extract_lines, PostprocessConfig};

use super::{match_lines, MatchReport};

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f1_from(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// `steps` evenly spaced thresholds from `t0` to `t1`, both inclusive.
pub fn threshold_grid(t0: f64, t1: f64, steps: usize) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&t0) || !(0.0..=1.0).contains(&t1) || t0 > t1 {
        return Err(invalid("sweep", format!("need 0 <= t0 <= t1 <= 1, got {t0}:{t1}")));
    }
    match steps {
        0 => Err(invalid("sweep", "steps must be >= 1")),
        1 if t0 != t1 => Err(invalid("sweep", "a single step needs t0 == t1")),
        1 => Ok(vec![t0]),
        _ => {
            let dt = (t1 - t0) / (steps - 1) as f64;
            let mut v: Vec<f64> = (0..steps).map(|i| t0 + dt * i as f64).collect();
            v[steps - 1] = t1;
            Ok(v)
        }
    }
}

/// One image worth of sweep input: a predicted accumulator and the true lines.
#[derive(Debug, Clone)]
pub struct SweepSample {
    pub hough: HoughSpace,
    pub gt: Vec<Line>,
}

/// Precision, recall and F1 averaged over samples at each threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    pub thresholds: Vec<f64>,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub f1: Vec<f64>,
    /// `reports[i][s]` is the match of sample `s` at `thresholds[i]`.
    pub reports: Vec<Vec<MatchReport>>,
}

impl SweepCurve {
    /// Index of the threshold with the highest F1 (the lowest such threshold on ties).
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.f1.len() {
            if self.f1[i] > self.f1[best] {
                best = i;
            }
        }
        best
    }

    pub fn best_threshold(&self) -> f64 {
        self.thresholds[self.best_index()]
    }
}

/// Re-extracts lines at every threshold, matches them against ground truth
/// and averages precision and recall over samples. F1 at each point is the
/// harmonic mean of the averaged precision and recall.
pub fn f1_sweep(
    samples: &[SweepSample],
    width: usize,
    height: usize,
    ea_accept: f64,
    thresholds: &[f64],
    base: &PostprocessConfig,
) -> Result<SweepCurve> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("sweep samples"));
    }
    if thresholds.is_empty() {
        return Err(Error::EmptyInput("sweep thresholds"));
    }
    if thresholds.windows(2).any(|w| w[0] > w[1]) {
        return Err(invalid("thresholds", "must be ascending"));
    }
    let n = samples.len() as f64;
    let mut curve = SweepCurve {
        thresholds: thresholds.to_vec(),
        precision: Vec::new(),
        recall: Vec::new(),
        f1: Vec::new(),
        reports: Vec::new(),
    };
    for &t in thresholds {
        let cfg = PostprocessConfig { threshold: t, ..*base };
        let reports = samples
            .par_iter()
            .map(|s| {
                let pred = extract_lines(&s.hough, &cfg)?;
                match_lines(&pred.lines, &s.gt, width, height, ea_accept)
            })
            .collect::<Result<Vec<_>>>()?;
        let p = reports.iter().map(MatchReport::precision).sum::<f64>() / n;
        let r = reports.iter().map(MatchReport::recall).sum::<f64>() / n;
        curve.precision.push(p);
        curve.recall.push(r);
        curve.f1.push(f1_from(p, r));
        curve.reports.push(reports);
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hough::HoughShape;

    #[test]
    fn grid_is_inclusive() {
        assert_eq!(threshold_grid(0.0, 0.4, 5).unwrap(), vec![0.0, 0.1, 0.2, 0.30000000000000004, 0.4]);
        assert_eq!(threshold_grid(0.35, 0.35, 1).unwrap(), vec![0.35]);
        assert!(threshold_grid(0.5, 0.2, 3).is_err());
        assert!(threshold_grid(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn f1_of_zero_is_zero() {
        assert_eq!(f1_from(0.0, 0.0), 0.0);
        assert_eq!(f1_from(1.0, 1.0), 1.0);
    }

    #[test]
    fn zero_predictions_have_no_recall() {
        let shape = HoughShape::for_image(32, 32).unwrap();
        let gt = vec![Line::new(0.4, 10.0).unwrap()];
        let s = SweepSample { hough: HoughSpace::zeros(shape), gt };
        let c = f1_sweep(&[s], 32, 32, 0.9, &[0.0, 0.5], &PostprocessConfig::default()).unwrap();
        assert_eq!(c.recall, vec![0.0, 0.0]);
        assert_eq!(c.f1, vec![0.0, 0.0]);
    }

    #[test]
    fn empty_samples_rejected() {
        assert!(f1_sweep(&[], 8, 8, 0.9, &[0.2], &PostprocessConfig::default()).is_err());
    }
}
