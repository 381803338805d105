//! Scalar image grids and binary masks.
//!
//! Both types are row-major with the origin at the center of the top-left
//! pixel, `x` growing rightward and `y` growing downward.

use crate::error::{invalid, Error, Result};

/// Default detector pixel pitch in millimetres.
pub const DEFAULT_PIXEL_SPACING_MM: f64 = 0.15;

/// A 2D field of finite scalar values with a physical pixel spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    width: usize,
    height: usize,
    pixel_spacing: f64,
    data: Vec<f64>,
}

impl ImageGrid {
    pub fn new(width: usize, height: usize, pixel_spacing: f64, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions(format!("{width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::InvalidDimensions(format!(
                "data length {} != {width}x{height}",
                data.len()
            )));
        }
        if !(pixel_spacing > 0.0 && pixel_spacing.is_finite()) {
            return Err(invalid("pixel_spacing", format!("{pixel_spacing} is not > 0")));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            width,
            height,
            pixel_spacing,
            data,
        })
    }

    pub fn zeros(width: usize, height: usize, pixel_spacing: f64) -> Result<Self> {
        Self::new(width, height, pixel_spacing, vec![0.0; width * height])
    }

    pub fn filled(width: usize, height: usize, pixel_spacing: f64, value: f64) -> Result<Self> {
        Self::new(width, height, pixel_spacing, vec![value; width * height])
    }

    /// Builds a grid by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        pixel_spacing: f64,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, pixel_spacing, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_spacing(&self) -> f64 {
        self.pixel_spacing
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Returns a grid with the same geometry and new values.
    pub fn with_data(&self, data: Vec<f64>) -> Result<Self> {
        Self::new(self.width, self.height, self.pixel_spacing, data)
    }

    pub fn same_shape(&self, other: &ImageGrid) -> bool {
        self.width == other.width && self.height == other.height
    }
}

/// A 2D boolean field; `true` marks pixels inside the region of interest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions(format!("{width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::InvalidDimensions(format!(
                "data length {} != {width}x{height}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    pub fn full(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![true; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.data.iter().any(|&v| v)
    }

    pub fn same_shape(&self, other: &BinaryMask) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Converts the mask to a 0/1 scalar field.
    pub fn to_grid(&self, pixel_spacing: f64) -> Result<ImageGrid> {
        ImageGrid::new(
            self.width,
            self.height,
            pixel_spacing,
            self.data.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        )
    }

    /// Iterates over `(x, y)` of all set pixels in row-major order.
    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(move |(i, _)| (i % w, i / w))
    }
}

/// Center of mass of the set pixels, in continuous pixel coordinates.
pub fn mask_centroid(mask: &BinaryMask) -> Result<(f64, f64)> {
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
    for (x, y) in mask.iter_set() {
        sx += x as f64;
        sy += y as f64;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    Ok((sx / n as f64, sy / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centroid_of_single_pixel() {
        let m = BinaryMask::from_fn(8, 10, |x, y| x == 3 && y == 7).unwrap();
        assert_eq!(mask_centroid(&m).unwrap(), (3.0, 7.0));
    }

    #[test]
    fn centroid_of_full_mask_is_center() {
        let m = BinaryMask::full(4, 4).unwrap();
        assert_eq!(mask_centroid(&m).unwrap(), (1.5, 1.5));
    }

    #[test]
    fn centroid_of_l_shape() {
        let m = BinaryMask::from_fn(3, 3, |x, y| (x, y) == (0, 0) || (x, y) == (1, 0) || (x, y) == (0, 1))
            .unwrap();
        let (cx, cy) = mask_centroid(&m).unwrap();
        assert!((cx - 1.0 / 3.0).abs() < 1e-15 && (cy - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn centroid_of_empty_mask_fails() {
        let m = BinaryMask::empty(4, 4).unwrap();
        let err = mask_centroid(&m).unwrap_err();
        assert_eq!(err.to_string(), "empty mask, no seed available");
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(ImageGrid::new(2, 2, 1.0, vec![0.0; 3]).is_err());
        assert!(ImageGrid::new(2, 2, 0.0, vec![0.0; 4]).is_err());
        assert_eq!(
            ImageGrid::new(2, 2, 1.0, vec![0.0, f64::NAN, 0.0, 0.0]),
            Err(Error::NonFinite(1))
        );
        assert!(BinaryMask::new(3, 1, vec![true; 2]).is_err());
    }
}
