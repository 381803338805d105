use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::PolygonSpec;
use crate::grid::{BinaryMask, ImageGrid};
use crate::hough::HoughSpace;

use super::{apply_collimation, make_hough_label, phantom, sample_polygon, SimulationConfig};

/// One simulated radiograph with its labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSample {
    pub image: ImageGrid,
    pub roi_mask: BinaryMask,
    pub gt_lines: PolygonSpec,
    pub hough_label: HoughSpace,
}

/// Source of uncollimated base images.
#[derive(Debug, Clone, Default)]
pub enum BaseImages {
    /// Procedural phantoms, one per sample.
    #[default]
    Phantom,
    /// External images, used round-robin by sample index.
    Images(Vec<ImageGrid>),
}

/// Per-sample RNG seed: a SplitMix64 mix of the dataset seed and the index,
/// so samples can be generated independently and in any order.
pub fn sample_seed(rng_seed: u64, index: u64) -> u64 {
    let mut z = rng_seed
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generates sample `index` of the dataset described by `cfg`.
pub fn generate_sample(cfg: &SimulationConfig, index: usize, base: &BaseImages) -> Result<SyntheticSample> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(cfg.rng_seed, index as u64));
    let base_img = match base {
        BaseImages::Phantom => phantom(cfg.width, cfg.height, cfg.pixel_spacing, &mut rng)?,
        BaseImages::Images(list) => {
            if list.is_empty() {
                return Err(Error::EmptyInput("base images"));
            }
            let img = &list[index % list.len()];
            if img.width() != cfg.width || img.height() != cfg.height {
                return Err(Error::ShapeMismatch(format!(
                    "base image {}x{} vs configured {}x{}",
                    img.width(),
                    img.height(),
                    cfg.width,
                    cfg.height
                )));
            }
            img.clone()
        }
    };
    let poly = sample_polygon(cfg, &mut rng)?;
    let image = apply_collimation(&base_img, &poly, cfg, &mut rng)?;
    let roi_mask = poly.roi_mask(cfg.width, cfg.height)?;
    let hough_label = make_hough_label(&poly, &cfg.hough_shape()?, cfg.label_sigma)?;
    Ok(SyntheticSample {
        image,
        roi_mask,
        gt_lines: poly,
        hough_label,
    })
}

/// Generates `n` samples sequentially; identical `(cfg, n)` give identical data.
pub fn generate_dataset(cfg: &SimulationConfig, n: usize, base: &BaseImages) -> Result<Vec<SyntheticSample>> {
    if n == 0 {
        return Err(Error::EmptyInput("sample count"));
    }
    (0..n).map(|i| generate_sample(cfg, i, base)).collect()
}
