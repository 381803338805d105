//! Geometry-constrained segmentation of X-ray collimator shadows.
//!
//! The crate turns a Hough-space line encoding and a coarse region estimate
//! into a segmentation mask bounded by straight lines:
//!
//! * [`operators`]: Sobel, Gaussian and Hough known operators with adjoints.
//! * [`reconstruct`]: threshold → blobs → lines → flood fill.
//! * [`simulate`]: synthetic collimated radiographs with exact labels.
//! * [`metrics`]: EA line matching, F1 sweeps, Dice, average Hausdorff
//!   distance and the Dice + MS-SSIM training loss.

mod error;
pub mod geometry;
pub mod grid;
pub mod hough;
pub mod metrics;
pub mod operators;
pub mod reconstruct;
pub mod simulate;

pub use error::{Error, Result};
pub use geometry::{Line, PolygonSpec, MAX_EDGES};
pub use grid::{mask_centroid, BinaryMask, ImageGrid, DEFAULT_PIXEL_SPACING_MM};
pub use hough::{HoughShape, HoughSpace};
