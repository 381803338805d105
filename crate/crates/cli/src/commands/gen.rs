use std::path::PathBuf;

use log::{debug, info};
use rayon::prelude::*;

use lineshape::simulate::{generate_sample, BaseImages};

use crate::config::RunConfig;
use crate::formats::{self, HoughQuantization, LineRecord, Manifest, ManifestEntry, SampleLines};
use crate::CliError;

#[derive(Debug, Clone)]
pub struct GenArgs {
    pub out: PathBuf,
    pub count: usize,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    /// Optional PFM base images, used round-robin instead of phantoms.
    pub base: Vec<PathBuf>,
}

/// Generates `count` samples into `out` and writes `manifest.json` last.
///
/// Sample `i` depends only on the resolved config and `i`, so the output is
/// byte-identical for any worker count.
pub fn cmd_gen(cfg: &RunConfig, args: &GenArgs) -> Result<Manifest, CliError> {
    cfg.validate()?;
    if args.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let sim = cfg.resolved_simulation();
    let base = if args.base.is_empty() {
        BaseImages::Phantom
    } else {
        let imgs = args
            .base
            .iter()
            .map(|p| formats::read_image(p, sim.pixel_spacing))
            .collect::<Result<Vec<_>, _>>()?;
        BaseImages::Images(imgs)
    };
    let base_names = args
        .base
        .iter()
        .map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default())
        .collect();
    let hough = HoughQuantization::from(&sim.hough_shape()?);
    super::ensure_dir(&args.out)?;
    info!("generating {} samples into {}", args.count, args.out.display());

    let samples = super::with_pool(args.jobs, || {
        (0..args.count)
            .into_par_iter()
            .map(|id| {
                let s = generate_sample(&sim, id, &base)?;
                let entry = ManifestEntry::for_id(id);
                let dir = &args.out;
                formats::write_image(&dir.join(&entry.image), &s.image)?;
                formats::write_mask(&dir.join(&entry.mask), &s.roi_mask)?;
                formats::write_hough(&dir.join(&entry.hough), &s.hough_label)?;
                let sidecar = SampleLines {
                    id,
                    width: sim.width,
                    height: sim.height,
                    pixel_spacing: sim.pixel_spacing,
                    lines: s.gt_lines.edges.iter().map(LineRecord::from).collect(),
                    roi_reference_point: s.gt_lines.roi_reference_point,
                    hough,
                    config: sim.clone(),
                };
                formats::write_json(&dir.join(&entry.lines), &sidecar)?;
                debug!("sample {id}: {} edges", sidecar.lines.len());
                Ok(entry)
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;

    let manifest = Manifest {
        count: args.count,
        seed: sim.rng_seed,
        config: sim,
        base_images: base_names,
        samples,
    };
    formats::write_json(&args.out.join("manifest.json"), &manifest)?;
    Ok(manifest)
}
