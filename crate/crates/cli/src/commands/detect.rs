use std::path::{Path, PathBuf};

use log::info;

use lineshape::hough::diagonal;
use lineshape::reconstruct::{
    bright_region_seed, classical_edge_path, classical_shape, lines_to_mask, run_pipeline, PostprocessConfig,
};
use lineshape::{BinaryMask, HoughShape, HoughSpace};

use crate::config::RunConfig;
use crate::formats::{self, HoughQuantization, LineRecord, LinesHeader, PredictedLines};
use crate::CliError;

#[derive(Debug, Clone)]
pub enum DetectInput {
    /// A raw radiograph; lines come from the classical Sobel + Hough path.
    Image(PathBuf),
    /// Network-style outputs: a region mask and a Hough accumulator.
    Supplied {
        mask: PathBuf,
        hough: PathBuf,
        /// JSON sidecar holding a `hough` quantization block. Without it the
        /// default quantization for the mask size is assumed.
        meta: Option<PathBuf>,
    },
}

#[derive(Debug, Clone)]
pub struct DetectArgs {
    pub input: DetectInput,
    /// Overrides `postprocess.threshold`.
    pub threshold: Option<f64>,
    pub out: PathBuf,
    /// Name outputs `mask_<id>.pgm`, `lines_<id>.json`, `hough_<id>.pfm` so
    /// the directory can be evaluated; otherwise `pred_*`.
    pub id: Option<usize>,
}

/// Runs line detection and the fill, then writes the predicted mask, lines
/// and the Hough accumulator the lines were read from.
pub fn cmd_detect(cfg: &RunConfig, args: &DetectArgs) -> Result<PredictedLines, CliError> {
    cfg.validate()?;
    let threshold = args.threshold.unwrap_or(cfg.postprocess.threshold);
    let spacing = cfg.spacing();
    let (mask, hough, lines, seed, source, post) = match &args.input {
        DetectInput::Image(path) => {
            let img = formats::read_image(path, spacing)?;
            let post = PostprocessConfig::classical(threshold);
            post.validate().map_err(bad_threshold)?;
            let shape = classical_shape(img.width(), img.height())?;
            let (hough, lines) = classical_edge_path(&img, &post, &shape)?;
            let seed = bright_region_seed(&img)?;
            let mask = lines_to_mask(&lines.lines, seed, img.width(), img.height())?;
            (mask, hough, lines, seed, "classical", post)
        }
        DetectInput::Supplied { mask, hough, meta } => {
            let region = formats::read_mask(mask)?;
            let h = read_supplied_hough(hough, meta.as_deref(), &region)?;
            let post = PostprocessConfig {
                threshold,
                ..cfg.postprocess
            };
            post.validate().map_err(bad_threshold)?;
            let r = run_pipeline(&region, &h, &post)?;
            (r.mask, h, r.lines, r.seed, "supplied", post)
        }
    };
    info!("{} lines at t = {threshold}", lines.len());

    super::ensure_dir(&args.out)?;
    let (mask_name, lines_name, hough_name) = match args.id {
        Some(id) => (format!("mask_{id}.pgm"), format!("lines_{id}.json"), format!("hough_{id}.pfm")),
        None => ("pred_mask.pgm".into(), "pred_lines.json".into(), "pred_hough.pfm".into()),
    };
    let pred = PredictedLines {
        id: args.id,
        width: mask.width(),
        height: mask.height(),
        pixel_spacing: spacing,
        lines: lines.lines.iter().map(LineRecord::from).collect(),
        seed,
        hough: HoughQuantization::from(hough.shape()),
        source: source.into(),
        postprocess: post,
    };
    formats::write_mask(&args.out.join(mask_name), &mask)?;
    formats::write_hough(&args.out.join(hough_name), &hough)?;
    formats::write_json(&args.out.join(lines_name), &pred)?;
    Ok(pred)
}

fn bad_threshold(e: lineshape::Error) -> CliError {
    CliError::Config(format!("invalid `postprocess.threshold` (--t): {e}"))
}

fn read_supplied_hough(path: &Path, meta: Option<&Path>, region: &BinaryMask) -> Result<HoughSpace, CliError> {
    let (w, h, data) = formats::read_pfm(path)?;
    let quant = match meta {
        Some(m) => formats::read_json::<LinesHeader>(m)?.hough,
        None => {
            let d = diagonal(region.width(), region.height());
            let shape = HoughShape::new(h, (2.0 * d).ceil() as usize, -d, d)?;
            if shape.n_rho != w {
                return Err(CliError::Usage(format!(
                    "{}: {w} rho bins do not match the default {} for a {}x{} mask; pass --meta",
                    path.display(),
                    shape.n_rho,
                    region.width(),
                    region.height()
                )));
            }
            HoughQuantization::from(&shape)
        }
    };
    formats::hough_from_pfm(path, w, h, data, &quant)
}
