use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::Line;
use crate::grid::{BinaryMask, DEFAULT_PIXEL_SPACING_MM};

use super::{avg_hausdorff_mm, dice, match_lines, MatchReport, DEFAULT_EA_ACCEPT};

/// Linear-interpolation quantile of ascending `sorted` data, `q ∈ [0, 1]`.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Box-plot summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (`n − 1` denominator); 0 for one value.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    /// Most extreme values within 1.5·IQR of the quartiles.
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: usize,
}

impl BoxStats {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("statistics"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let mut s = values.to_vec();
        s.sort_by(f64::total_cmp);
        let n = s.len();
        let mean = s.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let (q1, median, q3) = (quantile(&s, 0.25), quantile(&s, 0.5), quantile(&s, 0.75));
        let iqr = q3 - q1;
        let (lo, hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
        let inside: Vec<f64> = s.iter().copied().filter(|v| (lo..=hi).contains(v)).collect();
        Ok(Self {
            n,
            mean,
            std,
            min: s[0],
            max: s[n - 1],
            q1,
            median,
            q3,
            whisker_low: inside.first().copied().unwrap_or(q1),
            whisker_high: inside.last().copied().unwrap_or(q3),
            outliers: n - inside.len(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    /// Millimetres per pixel for distance metrics.
    pub pixel_spacing: f64,
    pub ea_accept: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            pixel_spacing: DEFAULT_PIXEL_SPACING_MM,
            ea_accept: DEFAULT_EA_ACCEPT,
        }
    }
}

/// A mask together with the lines that bound it.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMask {
    pub mask: BinaryMask,
    pub lines: Vec<Line>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub dice: f64,
    /// `None` when either mask is empty.
    pub ahd_mm: Option<f64>,
    pub matches: MatchReport,
}

/// Per-sample metrics and their aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub samples: Vec<SampleRecord>,
    pub dice: BoxStats,
    /// `None` when no sample has a defined distance.
    pub ahd_mm: Option<BoxStats>,
    pub undefined_ahd: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Scores every prediction against its ground truth; samples run in
/// parallel and aggregate in input order.
pub fn evaluate_dataset(gt: &[LabeledMask], predictions: &[LabeledMask], cfg: &EvalConfig) -> Result<MetricReport> {
    if gt.len() != predictions.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} ground-truth samples vs {} predictions",
            gt.len(),
            predictions.len()
        )));
    }
    if gt.is_empty() {
        return Err(Error::EmptyInput("evaluation samples"));
    }
    if !(cfg.pixel_spacing.is_finite() && cfg.pixel_spacing > 0.0) {
        return Err(invalid("pixel_spacing", format!("{} must be positive", cfg.pixel_spacing)));
    }
    let samples = gt
        .par_iter()
        .zip(predictions)
        .map(|(g, p)| {
            let d = dice(&p.mask, &g.mask)?;
            let ahd = match avg_hausdorff_mm(&p.mask, &g.mask, cfg.pixel_spacing) {
                Ok(v) => Some(v),
                Err(Error::EmptyMaskDistance) => None,
                Err(e) => return Err(e),
            };
            let matches = match_lines(&p.lines, &g.lines, g.mask.width(), g.mask.height(), cfg.ea_accept)?;
            Ok(SampleRecord {
                dice: d,
                ahd_mm: ahd,
                matches,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    aggregate(samples)
}

fn aggregate(samples: Vec<SampleRecord>) -> Result<MetricReport> {
    let n = samples.len() as f64;
    let dices: Vec<f64> = samples.iter().map(|s| s.dice).collect();
    let ahds: Vec<f64> = samples.iter().filter_map(|s| s.ahd_mm).collect();
    let precision = samples.iter().map(|s| s.matches.precision()).sum::<f64>() / n;
    let recall = samples.iter().map(|s| s.matches.recall()).sum::<f64>() / n;
    Ok(MetricReport {
        dice: BoxStats::from_values(&dices)?,
        ahd_mm: if ahds.is_empty() {
            None
        } else {
            Some(BoxStats::from_values(&ahds)?)
        },
        undefined_ahd: samples.len() - ahds.len(),
        precision,
        recall,
        f1: super::f1_from(precision, recall),
        samples,
    })
}
