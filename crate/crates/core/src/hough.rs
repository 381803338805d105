//! Hough accumulator geometry: the `(θ, ρ)` quantization shared by the
//! transform, label generation and line decoding.
//!
//! Bin `k` along θ is centered on `(k + 0.5)·π/n_theta`, bin `j` along ρ on
//! `rho_min + (j + 0.5)·(rho_max − rho_min)/n_rho`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::Line;

/// Default number of θ bins (1° resolution).
pub const DEFAULT_N_THETA: usize = 180;

/// Quantization of a Hough accumulator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoughShape {
    pub n_theta: usize,
    pub n_rho: usize,
    pub rho_min: f64,
    pub rho_max: f64,
}

impl HoughShape {
    pub fn new(n_theta: usize, n_rho: usize, rho_min: f64, rho_max: f64) -> Result<Self> {
        if n_theta == 0 || n_rho == 0 {
            return Err(Error::InvalidDimensions(format!("hough {n_theta}x{n_rho}")));
        }
        if !(rho_min.is_finite() && rho_max.is_finite() && rho_max > rho_min) {
            return Err(invalid("rho_range", format!("[{rho_min}, {rho_max}]")));
        }
        Ok(Self {
            n_theta,
            n_rho,
            rho_min,
            rho_max,
        })
    }

    /// Default quantization for a `width × height` image: 180 θ bins and a
    /// symmetric ρ range `[−D, D]`, `D` the image diagonal, with bins of
    /// (just under) one pixel.
    pub fn for_image(width: usize, height: usize) -> Result<Self> {
        Self::for_image_with(width, height, DEFAULT_N_THETA)
    }

    pub fn for_image_with(width: usize, height: usize, n_theta: usize) -> Result<Self> {
        let d = diagonal(width, height);
        let n_rho = (2.0 * d).ceil() as usize;
        Self::new(n_theta, n_rho, -d, d)
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_rho
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn theta_step(&self) -> f64 {
        PI / self.n_theta as f64
    }

    pub fn rho_step(&self) -> f64 {
        (self.rho_max - self.rho_min) / self.n_rho as f64
    }

    #[inline]
    pub fn theta_at(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * PI / self.n_theta as f64
    }

    #[inline]
    pub fn rho_at(&self, j: usize) -> f64 {
        self.rho_min + (j as f64 + 0.5) * (self.rho_max - self.rho_min) / self.n_rho as f64
    }

    /// ρ bin holding `rho`, or `None` outside `[rho_min, rho_max]`.
    #[inline]
    pub fn rho_bin(&self, rho: f64) -> Option<usize> {
        if !(rho >= self.rho_min && rho <= self.rho_max) {
            return None;
        }
        let j = ((rho - self.rho_min) / ((self.rho_max - self.rho_min) / self.n_rho as f64)).floor();
        Some((j as usize).min(self.n_rho - 1))
    }

    #[inline]
    pub fn theta_bin(&self, theta: f64) -> usize {
        let k = (theta / (PI / self.n_theta as f64)).floor();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(self.n_theta - 1)
        }
    }

    /// Line through the centers of bins `(k, j)`.
    pub fn line_from_bins(&self, k: usize, j: usize) -> Result<Line> {
        if k >= self.n_theta || j >= self.n_rho {
            return Err(Error::IndexOutOfRange(format!(
                "bin ({k}, {j}) outside {}x{}",
                self.n_theta, self.n_rho
            )));
        }
        Ok(Line {
            theta: self.theta_at(k),
            rho: self.rho_at(j),
        })
    }

    /// Bin indices `(k, j)` whose cell contains the line parameters.
    pub fn bins_from_line(&self, line: &Line) -> Result<(usize, usize)> {
        if !(0.0..PI).contains(&line.theta) {
            return Err(invalid("theta", format!("{} not in [0, pi)", line.theta)));
        }
        let j = self.rho_bin(line.rho).ok_or(Error::RhoOutOfRange {
            rho: line.rho,
            min: self.rho_min,
            max: self.rho_max,
        })?;
        Ok((self.theta_bin(line.theta), j))
    }

    /// Decodes continuous bin coordinates (as produced by a centroid) to a line.
    pub fn line_at(&self, k: f64, j: f64) -> Line {
        Line::normalized(
            (k + 0.5) * self.theta_step(),
            self.rho_min + (j + 0.5) * self.rho_step(),
        )
    }

    /// Continuous bin coordinates of a line; inverse of [`HoughShape::line_at`].
    pub fn bin_coords(&self, line: &Line) -> (f64, f64) {
        (
            line.theta / self.theta_step() - 0.5,
            (line.rho - self.rho_min) / self.rho_step() - 0.5,
        )
    }

    /// Whether every pixel center of a `width × height` image maps inside the
    /// ρ range for every θ bin.
    pub fn covers_image(&self, width: usize, height: usize) -> bool {
        let (xm, ym) = ((width - 1) as f64, (height - 1) as f64);
        (0..self.n_theta).all(|k| {
            let (s, c) = self.theta_at(k).sin_cos();
            [(0.0, 0.0), (xm, 0.0), (0.0, ym), (xm, ym)]
                .iter()
                .all(|&(x, y)| self.rho_bin(x * c + y * s).is_some())
        })
    }
}

/// Image diagonal length `√(w² + h²)`.
pub fn diagonal(width: usize, height: usize) -> f64 {
    ((width * width + height * height) as f64).sqrt()
}

/// A `(θ, ρ)` accumulator, row-major with one row per θ bin.
#[derive(Debug, Clone, PartialEq)]
pub struct HoughSpace {
    shape: HoughShape,
    data: Vec<f64>,
}

impl HoughSpace {
    pub fn new(shape: HoughShape, data: Vec<f64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::InvalidDimensions(format!(
                "hough data length {} != {}x{}",
                data.len(),
                shape.n_theta,
                shape.n_rho
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: HoughShape) -> Self {
        Self {
            shape,
            data: vec![0.0; shape.len()],
        }
    }

    pub fn shape(&self) -> &HoughShape {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, k: usize, j: usize) -> f64 {
        self.data[k * self.shape.n_rho + j]
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Scales the accumulator so its maximum is 1; left untouched when the
    /// maximum is not positive.
    pub fn normalized_to_max(mut self) -> Self {
        let m = self.max();
        if m > 0.0 {
            self.data.iter_mut().for_each(|v| *v /= m);
        }
        self
    }

    pub fn line_from_bins(&self, k: usize, j: usize) -> Result<Line> {
        self.shape.line_from_bins(k, j)
    }

    pub fn bins_from_line(&self, line: &Line) -> Result<(usize, usize)> {
        self.shape.bins_from_line(line)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape() -> HoughShape {
        HoughShape::new(180, 200, -100.0, 100.0).unwrap()
    }

    #[test]
    fn bin_centers() {
        let h = shape();
        let l = h.line_from_bins(0, 100).unwrap();
        assert!((l.theta - PI / 360.0).abs() < 1e-15);
        assert!((l.rho - 0.5).abs() < 1e-12);
        let l = h.line_from_bins(89, 0).unwrap();
        assert!((l.theta - 89.5 * PI / 180.0).abs() < 1e-15);
        assert!((l.rho + 99.5).abs() < 1e-12);
        assert!(h.line_from_bins(180, 0).is_err());
        assert!(h.line_from_bins(0, 200).is_err());
    }

    #[test]
    fn inverse_of_bin_centers() {
        let h = shape();
        assert_eq!(h.bins_from_line(&Line::new(PI / 360.0, 0.5).unwrap()).unwrap(), (0, 100));
        let below_pi = Line::new(PI - 1e-12, 0.0).unwrap();
        assert_eq!(h.bins_from_line(&below_pi).unwrap().0, 179);
        assert!(h.bins_from_line(&Line::new(0.3, 100.5).unwrap()).is_err());
        assert_eq!(h.bins_from_line(&Line::new(0.3, 100.0).unwrap()).unwrap().1, 199);
    }

    #[test]
    fn exhaustive_round_trip() {
        let h = shape();
        for k in 0..h.n_theta {
            for j in 0..h.n_rho {
                let l = h.line_from_bins(k, j).unwrap();
                assert_eq!(h.bins_from_line(&l).unwrap(), (k, j));
                let (kc, jc) = h.bin_coords(&l);
                assert!((kc - k as f64).abs() < 1e-9 && (jc - j as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn default_shape_covers_image() {
        let h = HoughShape::for_image(256, 200).unwrap();
        assert_eq!(h.n_theta, 180);
        assert!((h.rho_max - diagonal(256, 200)).abs() < 1e-12);
        assert!(h.covers_image(256, 200));
        assert!(!HoughShape::new(180, 10, -5.0, 5.0).unwrap().covers_image(16, 16));
    }
}
