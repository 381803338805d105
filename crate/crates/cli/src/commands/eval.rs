use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use lineshape::metrics::{evaluate_dataset, f1_sweep, threshold_grid, BoxStats, EvalConfig, LabeledMask, SweepSample};
use lineshape::reconstruct::PostprocessConfig;
use lineshape::{HoughSpace, Line};

use crate::config::RunConfig;
use crate::formats::{self, HoughQuantization, LineRecord};
use crate::CliError;

/// Inclusive threshold grid written `t0:t1:steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn thresholds(&self) -> Result<Vec<f64>, CliError> {
        Ok(threshold_grid(self.t0, self.t1, self.steps)?)
    }
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [t0, t1, steps] = parts[..] else {
            return Err(format!("expected t0:t1:steps, got {s:?}"));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("bad threshold {v:?}: {e}"));
        Ok(Self {
            t0: num(t0)?,
            t1: num(t1)?,
            steps: steps.trim().parse().map_err(|e| format!("bad step count {steps:?}: {e}"))?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct EvalArgs {
    pub pred: PathBuf,
    pub gt: PathBuf,
    /// JSON report path; the per-sample CSV goes next to it with a `.csv`
    /// extension.
    pub report: PathBuf,
    /// Overrides `eval.ea_accept`.
    pub ea_accept: Option<f64>,
    pub sweep: Option<SweepSpec>,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// The JSON aggregate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub samples: usize,
    pub pixel_spacing: f64,
    pub ea_accept: f64,
    pub dice: BoxStats,
    /// `None` when every sample had an empty mask on either side.
    pub ahd_mm: Option<BoxStats>,
    pub undefined_ahd: usize,
    /// Averages over samples of the per-sample ratios, with F1 the harmonic
    /// mean of the averages.
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub sweep: Vec<SweepPoint>,
    /// Lowest threshold reaching the best sweep F1.
    pub best_threshold: Option<f64>,
}

/// Fields read from a line sidecar; either kind (generated or predicted) works.
#[derive(Debug, Deserialize)]
struct Sidecar {
    width: usize,
    height: usize,
    pixel_spacing: f64,
    lines: Vec<LineRecord>,
    hough: HoughQuantization,
    #[serde(default)]
    postprocess: Option<PostprocessConfig>,
}

struct Loaded {
    gt: LabeledMask,
    pred: LabeledMask,
    spacing: f64,
    post: Option<PostprocessConfig>,
}

fn to_lines(records: &[LineRecord]) -> Result<Vec<Line>, CliError> {
    records.iter().map(|r| r.to_line()).collect()
}

fn load(dir: &Path, id: usize) -> Result<(LabeledMask, Sidecar), CliError> {
    let mask = formats::read_mask(&dir.join(format!("mask_{id}.pgm")))?;
    let path = dir.join(format!("lines_{id}.json"));
    let side: Sidecar = formats::read_json(&path)?;
    if (side.width, side.height) != (mask.width(), mask.height()) {
        return Err(CliError::Usage(format!(
            "{}: size {}x{} does not match mask {}x{}",
            path.display(),
            side.width,
            side.height,
            mask.width(),
            mask.height()
        )));
    }
    let lines = to_lines(&side.lines)?;
    Ok((LabeledMask { mask, lines }, side))
}

fn sample_ids(dir: &Path) -> Result<BTreeSet<usize>, CliError> {
    let mut ids = super::scan_ids(dir, "mask_", "pgm")?;
    ids.extend(super::scan_ids(dir, "lines_", "json")?);
    Ok(ids)
}

fn missing(kind: &str, dir: &Path, ids: Vec<usize>) -> CliError {
    CliError::MissingIds {
        kind: format!("{kind} in {}", dir.display()),
        ids,
    }
}

/// Scores every prediction in `pred` against the same id in `gt` and writes
/// the CSV and JSON reports.
pub fn cmd_eval(cfg: &RunConfig, args: &EvalArgs) -> Result<EvalReport, CliError> {
    cfg.validate()?;
    let ea_accept = args.ea_accept.unwrap_or(cfg.eval.ea_accept);
    if !(0.0..=1.0).contains(&ea_accept) {
        return Err(CliError::Config(format!("invalid `eval.ea_accept` (--ea-accept): {ea_accept} not in [0, 1]")));
    }
    let thresholds = args.sweep.map(|s| s.thresholds()).transpose()?;

    let gt_ids = sample_ids(&args.gt)?;
    let pred_ids = sample_ids(&args.pred)?;
    let no_pred: Vec<usize> = gt_ids.difference(&pred_ids).copied().collect();
    if !no_pred.is_empty() {
        return Err(missing("predictions", &args.pred, no_pred));
    }
    let no_gt: Vec<usize> = pred_ids.difference(&gt_ids).copied().collect();
    if !no_gt.is_empty() {
        return Err(missing("ground truth", &args.gt, no_gt));
    }
    let ids: Vec<usize> = gt_ids.into_iter().collect();
    if ids.is_empty() {
        return Err(CliError::Usage(format!("no samples found in {}", args.gt.display())));
    }
    if thresholds.is_some() {
        let hough_ids = super::scan_ids(&args.pred, "hough_", "pfm")?;
        let no_hough: Vec<usize> = ids.iter().copied().filter(|i| !hough_ids.contains(i)).collect();
        if !no_hough.is_empty() {
            return Err(missing("Hough accumulators for the sweep", &args.pred, no_hough));
        }
    }
    info!("evaluating {} samples", ids.len());

    super::with_pool(args.jobs, || {
        let loaded = ids
            .par_iter()
            .map(|&id| {
                let (gt, gside) = load(&args.gt, id)?;
                let (pred, pside) = load(&args.pred, id)?;
                if (gt.mask.width(), gt.mask.height()) != (pred.mask.width(), pred.mask.height()) {
                    return Err(CliError::Usage(format!("sample {id}: prediction and ground truth differ in size")));
                }
                Ok(Loaded {
                    gt,
                    pred,
                    spacing: gside.pixel_spacing,
                    post: pside.postprocess,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;

        let spacing = loaded[0].spacing;
        if let Some(i) = loaded.iter().position(|l| l.spacing != spacing) {
            return Err(CliError::Usage(format!(
                "sample {}: pixel spacing {} differs from {spacing}",
                ids[i], loaded[i].spacing
            )));
        }
        let eval_cfg = EvalConfig {
            pixel_spacing: spacing,
            ea_accept,
        };
        let gts: Vec<LabeledMask> = loaded.iter().map(|l| l.gt.clone()).collect();
        let preds: Vec<LabeledMask> = loaded.iter().map(|l| l.pred.clone()).collect();
        let report = evaluate_dataset(&gts, &preds, &eval_cfg)?;

        let mut sweep = Vec::new();
        let mut best_threshold = None;
        if let Some(ts) = &thresholds {
            // Re-extraction uses the predictions' own post-processing settings
            // (blob-area floor) when they recorded them.
            let base = loaded.iter().find_map(|l| l.post).unwrap_or(cfg.postprocess);
            let samples = ids
                .par_iter()
                .zip(&loaded)
                .map(|(&id, l)| {
                    let side: Sidecar = formats::read_json(&args.pred.join(format!("lines_{id}.json")))?;
                    let hough: HoughSpace =
                        formats::read_hough(&args.pred.join(format!("hough_{id}.pfm")), &side.hough)?;
                    Ok(SweepSample {
                        hough,
                        gt: l.gt.lines.clone(),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let (w, h) = (gts[0].mask.width(), gts[0].mask.height());
            if gts.iter().any(|g| (g.mask.width(), g.mask.height()) != (w, h)) {
                return Err(CliError::Usage("a threshold sweep needs samples of one size".into()));
            }
            let curve = f1_sweep(&samples, w, h, ea_accept, ts, &base)?;
            sweep = (0..curve.thresholds.len())
                .map(|i| SweepPoint {
                    threshold: curve.thresholds[i],
                    precision: curve.precision[i],
                    recall: curve.recall[i],
                    f1: curve.f1[i],
                })
                .collect();
            best_threshold = Some(curve.best_threshold());
        }

        write_csv(&csv_path(&args.report), &ids, &report)?;
        let out = EvalReport {
            samples: ids.len(),
            pixel_spacing: spacing,
            ea_accept,
            dice: report.dice,
            ahd_mm: report.ahd_mm,
            undefined_ahd: report.undefined_ahd,
            precision: report.precision,
            recall: report.recall,
            f1: report.f1,
            sweep,
            best_threshold,
        };
        formats::write_json(&args.report, &out)?;
        Ok(out)
    })
}

/// The per-sample CSV lives next to the JSON report.
pub fn csv_path(report: &Path) -> PathBuf {
    report.with_extension("csv")
}

fn write_csv(path: &Path, ids: &[usize], report: &lineshape::metrics::MetricReport) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Usage(format!("{}: {e}", path.display()));
    w.write_record(["id", "dice", "ahd_mm", "tp", "fp", "fn", "ea"]).map_err(csv_err)?;
    for (id, s) in ids.iter().zip(&report.samples) {
        let ea: Vec<String> = s.matches.pairs.iter().map(|p| p.2.to_string()).collect();
        w.write_record([
            id.to_string(),
            s.dice.to_string(),
            s.ahd_mm.map(|v| v.to_string()).unwrap_or_default(),
            s.matches.true_positives().to_string(),
            s.matches.false_positives().to_string(),
            s.matches.false_negatives().to_string(),
            ea.join(";"),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        super::ensure_dir(dir)?;
    }
    formats::write_atomic(path, &bytes)
}
