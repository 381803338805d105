//! From lines to shapes: Hough-space thresholding, blob-centroid line
//! extraction, line rasterization and seed-driven flood filling.

mod blobs;
mod fill;
mod pipeline;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::Line;

pub use blobs::{extract_lines, label_components};
pub use fill::{lines_to_mask, rasterize_lines, BARRIER_HALF_WIDTH};
pub use pipeline::{
    bright_region_seed, classical_edge_path, classical_shape, run_pipeline, Reconstruction,
    CLASSICAL_MIN_BLOB_AREA, CLASSICAL_N_THETA,
};

/// Post-processing knobs.
///
/// Blob labeling in Hough space is always 8-connected; the flood fill is
/// always 4-connected so that it cannot leak diagonally through a rasterized
/// (8-connected) line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PostprocessConfig {
    /// Threshold as a fraction of the Hough-space maximum, in `[0, 1]`.
    pub threshold: f64,
    /// Components with fewer cells are discarded.
    pub min_blob_area: usize,
}

impl Default for PostprocessConfig {
    fn default() -> Self {
        Self {
            threshold: 0.2,
            min_blob_area: 1,
        }
    }
}

impl PostprocessConfig {
    pub fn with_threshold(threshold: f64) -> Self {
        Self {
            threshold,
            ..Self::default()
        }
    }

    /// Settings for lines extracted from raw-image edge maps.
    pub fn classical(threshold: f64) -> Self {
        Self {
            threshold,
            min_blob_area: CLASSICAL_MIN_BLOB_AREA,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(invalid("threshold", format!("{} not in [0, 1]", self.threshold)));
        }
        if self.min_blob_area < 1 {
            return Err(invalid("min_blob_area", "must be >= 1"));
        }
        Ok(())
    }
}

/// Lines decoded from Hough-space blobs, strongest first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LineSet {
    pub lines: Vec<Line>,
    /// Accumulated Hough magnitude of the blob behind each line.
    pub source_blob_mass: Vec<f64>,
}

impl LineSet {
    /// Wraps known lines (e.g. ground truth) with unit mass.
    pub fn from_lines(lines: Vec<Line>) -> Self {
        let source_blob_mass = vec![1.0; lines.len()];
        Self {
            lines,
            source_blob_mass,
        }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}
