//! Synthetic collimated radiographs with exact ROI and Hough-space labels.
//!
//! A sample is produced in three steps: draw a convex polygon of up to four
//! collimator edges, shade a base image with the collimator shadow (partial
//! transmission, penumbra blur, scatter and quantum noise), and render the
//! Hough label as Gaussian-smoothed impulses at the edge bins.

mod collimation;
mod dataset;
mod label;
mod phantom;
mod polygon;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::grid::DEFAULT_PIXEL_SPACING_MM;
use crate::hough::{HoughShape, DEFAULT_N_THETA};

pub use collimation::{apply_collimation, blurred_roi};
pub use dataset::{generate_dataset, generate_sample, sample_seed, BaseImages, SyntheticSample};
pub use label::make_hough_label;
pub use phantom::phantom;
pub use polygon::{edge_lengths, sample_polygon, MAX_ATTEMPTS};

/// Every knob of the simulator. Field names double as config-file keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub width: usize,
    pub height: usize,
    /// Detector pitch in mm per pixel.
    pub pixel_spacing: f64,
    /// Inclusive range for the number of collimator edges, within `[0, 4]`.
    pub n_edges_range: [usize; 2],
    /// Fraction of the primary signal passing the collimator blades, `(0, 1]`.
    pub transmission: f64,
    /// Penumbra blur in pixels; 0 disables it.
    pub edge_blur_sigma: f64,
    /// Peak scatter in the shadow as a fraction of the mean ROI intensity.
    pub scatter_amplitude: f64,
    /// Correlation length of the scatter field in pixels.
    pub scatter_sigma: f64,
    /// Expected photon count at the brightest base pixel; `None` disables noise.
    pub photon_scale: Option<f64>,
    /// Accepted ROI area as a fraction of the detector, `(min, max]`.
    pub area_fraction_range: [f64; 2],
    /// Width of the Hough label peaks, in bins.
    pub label_sigma: f64,
    pub n_theta: usize,
    /// Edge angles avoid this many θ bins at each end of `[0, π)`, where a
    /// line's Hough peak would wrap around.
    pub theta_margin_bins: usize,
    /// Minimum Chebyshev distance between the bins of two edges.
    pub min_edge_separation_bins: usize,
    /// Two edges that meet inside the detector must differ in direction by
    /// at least this many θ bins (no near-straight corners).
    pub min_corner_turn_bins: usize,
    /// Every edge must bound the ROI over at least this fraction of the
    /// longest edge's length...
    pub min_edge_length_ratio: f64,
    /// ...and over at least this many pixels.
    pub min_edge_length_px: f64,
    pub rng_seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            width: 256,
            height: 256,
            pixel_spacing: DEFAULT_PIXEL_SPACING_MM,
            n_edges_range: [1, 4],
            transmission: 0.1,
            edge_blur_sigma: 1.0,
            scatter_amplitude: 0.2,
            scatter_sigma: 24.0,
            photon_scale: Some(2000.0),
            area_fraction_range: [0.25, 0.9],
            label_sigma: 1.5,
            n_theta: DEFAULT_N_THETA,
            theta_margin_bins: 6,
            min_edge_separation_bins: 12,
            min_corner_turn_bins: 20,
            min_edge_length_ratio: 0.5,
            min_edge_length_px: 32.0,
            rng_seed: 0,
        }
    }
}

impl SimulationConfig {
    /// Noise-free, scatter-free configuration with sharp-ish edges.
    pub fn clean() -> Self {
        Self {
            scatter_amplitude: 0.0,
            photon_scale: None,
            ..Self::default()
        }
    }

    pub fn hough_shape(&self) -> Result<HoughShape> {
        HoughShape::for_image_with(self.width, self.height, self.n_theta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width < 3 || self.height < 3 {
            return Err(invalid("width/height", "detector must be at least 3x3"));
        }
        if !(self.pixel_spacing > 0.0 && self.pixel_spacing.is_finite()) {
            return Err(invalid("pixel_spacing", "must be > 0"));
        }
        let [lo, hi] = self.n_edges_range;
        if lo > hi || hi > crate::geometry::MAX_EDGES {
            return Err(invalid("n_edges_range", format!("[{lo}, {hi}] not within [0, 4]")));
        }
        if !(self.transmission > 0.0 && self.transmission <= 1.0) {
            return Err(invalid("transmission", "must be in (0, 1]"));
        }
        if !(self.edge_blur_sigma >= 0.0 && self.edge_blur_sigma.is_finite()) {
            return Err(invalid("edge_blur_sigma", "must be >= 0"));
        }
        if !(self.scatter_amplitude >= 0.0 && self.scatter_amplitude.is_finite()) {
            return Err(invalid("scatter_amplitude", "must be >= 0"));
        }
        if !(self.scatter_sigma > 0.0 && self.scatter_sigma.is_finite()) {
            return Err(invalid("scatter_sigma", "must be > 0"));
        }
        if let Some(p) = self.photon_scale {
            if !(p > 0.0 && p.is_finite()) {
                return Err(invalid("photon_scale", "must be > 0"));
            }
        }
        let [amin, amax] = self.area_fraction_range;
        if !(amin > 0.0 && amin < amax && amax <= 1.0) {
            return Err(invalid(
                "area_fraction_range",
                format!("[{amin}, {amax}] must satisfy 0 < min < max <= 1"),
            ));
        }
        if !(self.label_sigma > 0.0 && self.label_sigma.is_finite()) {
            return Err(invalid("label_sigma", "must be > 0"));
        }
        if self.n_theta == 0 || self.n_theta <= 2 * self.theta_margin_bins {
            return Err(invalid("theta_margin_bins", "leaves no admissible angle"));
        }
        if !(0.0..=1.0).contains(&self.min_edge_length_ratio) {
            return Err(invalid("min_edge_length_ratio", "must be in [0, 1]"));
        }
        if !(self.min_edge_length_px >= 0.0) {
            return Err(invalid("min_edge_length_px", "must be >= 0"));
        }
        Ok(())
    }
}
