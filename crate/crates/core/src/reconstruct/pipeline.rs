use crate::error::{Error, Result};
use crate::grid::{mask_centroid, BinaryMask, ImageGrid};
use crate::hough::{HoughShape, HoughSpace};
use crate::operators::{hough_forward, sobel};

use super::{extract_lines, lines_to_mask, LineSet, PostprocessConfig};

/// Output of the lines-to-shapes fusion.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub mask: BinaryMask,
    pub lines: LineSet,
    /// Center of mass of the region mask, before any barrier relocation.
    pub seed: (f64, f64),
}

/// Fuses a region estimate with a Hough-space line encoding.
///
/// The region mask only contributes its center of mass as the fill seed; the
/// Hough space contributes the bounding lines.
pub fn run_pipeline(
    region_mask: &BinaryMask,
    hough: &HoughSpace,
    cfg: &PostprocessConfig,
) -> Result<Reconstruction> {
    let seed = mask_centroid(region_mask)?;
    let lines = extract_lines(hough, cfg)?;
    let mask = lines_to_mask(&lines.lines, seed, region_mask.width(), region_mask.height())?;
    Ok(Reconstruction { mask, lines, seed })
}

/// θ resolution for Hough transforms of raw edge images. At 1° a long edge
/// far from the origin traces a ridge too steep to stay 8-connected across
/// θ rows, so one edge splits into several blobs; 0.5° keeps it whole.
pub const CLASSICAL_N_THETA: usize = 360;

/// Blob-area floor for raw edge images: nearest-bin voting leaves isolated
/// aliasing clusters of a few cells near the lattice diagonals.
pub const CLASSICAL_MIN_BLOB_AREA: usize = 6;

/// Hough quantization used for the classical edge path.
pub fn classical_shape(width: usize, height: usize) -> Result<HoughShape> {
    HoughShape::for_image_with(width, height, CLASSICAL_N_THETA)
}

/// Classical stand-in for the learned line branch: Hough transform of the
/// Sobel magnitude, scaled to a maximum of one, then blob extraction.
pub fn classical_edge_path(
    img: &ImageGrid,
    cfg: &PostprocessConfig,
    shape: &HoughShape,
) -> Result<(HoughSpace, LineSet)> {
    let edges = sobel(img)?;
    let hough = hough_forward(&edges.magnitude, shape)?.normalized_to_max();
    let lines = extract_lines(&hough, cfg)?;
    Ok((hough, lines))
}

/// Crude region estimate for raw images: centroid of the pixels brighter than
/// the image mean. The exposed field is brighter than the collimator shadow
/// unless scatter dominates.
pub fn bright_region_seed(img: &ImageGrid) -> Result<(f64, f64)> {
    let mean = img.sum() / img.data().len() as f64;
    let mask = BinaryMask::from_fn(img.width(), img.height(), |x, y| img.get(x, y) > mean)?;
    match mask_centroid(&mask) {
        Ok(c) => Ok(c),
        // Flat image: fall back to the detector center.
        Err(Error::EmptyMask) => Ok((
            (img.width() - 1) as f64 / 2.0,
            (img.height() - 1) as f64 / 2.0,
        )),
        Err(e) => Err(e),
    }
}
