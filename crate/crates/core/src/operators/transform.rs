use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::ImageGrid;
use crate::hough::{HoughShape, HoughSpace};

/// Hough transform with nearest-bin voting.
///
/// Every pixel `(x, y)` adds its value to cell `(k, j)` for each θ bin `k`,
/// where `j` is the ρ bin of `x·cos θ_k + y·sin θ_k`. The map is linear, so
/// votes are accumulated as weighted sums rather than counts. θ rows are
/// computed in parallel; each cell sums its votes in row-major pixel order,
/// so the result does not depend on the thread count.
pub fn hough_forward(img: &ImageGrid, shape: &HoughShape) -> Result<HoughSpace> {
    let (w, h) = (img.width(), img.height());
    if !shape.covers_image(w, h) {
        return Err(Error::ShapeMismatch(format!(
            "rho range [{}, {}] does not cover a {w}x{h} image",
            shape.rho_min, shape.rho_max
        )));
    }
    let mut data = vec![0.0; shape.len()];
    let src = img.data();
    data.par_chunks_mut(shape.n_rho)
        .enumerate()
        .for_each(|(k, row)| {
            let theta = shape.theta_at(k);
            let (s, c) = theta.sin_cos();
            for y in 0..h {
                for x in 0..w {
                    let v = src[y * w + x];
                    if v != 0.0 {
                        let rho = x as f64 * c + y as f64 * s;
                        // covers_image guarantees the bin exists.
                        let j = shape.rho_bin(rho).expect("rho inside range");
                        row[j] += v;
                    }
                }
            }
        });
    HoughSpace::new(*shape, data)
}

/// Exact transpose of [`hough_forward`]: every pixel collects the value of
/// the cell it would vote into, summed over all θ bins.
///
/// This is the unfiltered inverse Hough transform (back-projection).
pub fn hough_adjoint(
    hough: &HoughSpace,
    width: usize,
    height: usize,
    pixel_spacing: f64,
) -> Result<ImageGrid> {
    let shape = hough.shape();
    if width == 0 || height == 0 || !shape.covers_image(width, height) {
        return Err(Error::ShapeMismatch(format!(
            "hough space [{}, {}] inconsistent with a {width}x{height} image",
            shape.rho_min, shape.rho_max
        )));
    }
    let trig: Vec<(f64, f64)> = (0..shape.n_theta)
        .map(|k| shape.theta_at(k).sin_cos())
        .collect();
    let mut out = vec![0.0; width * height];
    out.par_chunks_mut(width).enumerate().for_each(|(y, row)| {
        for (x, px) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, &(s, c)) in trig.iter().enumerate() {
                let rho = x as f64 * c + y as f64 * s;
                let j = shape.rho_bin(rho).expect("rho inside range");
                acc += hough.get(k, j);
            }
            *px = acc;
        }
    });
    ImageGrid::new(width, height, pixel_spacing, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_in_zero_out() {
        let img = ImageGrid::zeros(10, 7, 1.0).unwrap();
        let shape = HoughShape::for_image(10, 7).unwrap();
        let hs = hough_forward(&img, &shape).unwrap();
        assert!(hs.data().iter().all(|&v| v == 0.0));
        let back = hough_adjoint(&HoughSpace::zeros(shape), 10, 7, 1.0).unwrap();
        assert!(back.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_pixel_votes_once_per_row() {
        let (x0, y0) = (4usize, 9usize);
        let img = ImageGrid::from_fn(16, 12, 1.0, |x, y| if (x, y) == (x0, y0) { 1.0 } else { 0.0 })
            .unwrap();
        let shape = HoughShape::for_image(16, 12).unwrap();
        let hs = hough_forward(&img, &shape).unwrap();
        for k in 0..shape.n_theta {
            let row = &hs.data()[k * shape.n_rho..(k + 1) * shape.n_rho];
            let nz: Vec<usize> = (0..shape.n_rho).filter(|&j| row[j] != 0.0).collect();
            assert_eq!(nz.len(), 1);
            assert_eq!(row[nz[0]], 1.0);
            let (s, c) = shape.theta_at(k).sin_cos();
            assert_eq!(Some(nz[0]), shape.rho_bin(x0 as f64 * c + y0 as f64 * s));
        }
    }

    #[test]
    fn adjoint_of_single_cell_marks_its_pixels() {
        let (w, h) = (20, 15);
        let shape = HoughShape::for_image(w, h).unwrap();
        let (k, j) = (37, shape.n_rho / 2 + 3);
        let mut data = vec![0.0; shape.len()];
        data[k * shape.n_rho + j] = 1.0;
        let img = hough_adjoint(&HoughSpace::new(shape, data).unwrap(), w, h, 1.0).unwrap();
        let (s, c) = shape.theta_at(k).sin_cos();
        let mut hits = 0;
        for y in 0..h {
            for x in 0..w {
                let on = shape.rho_bin(x as f64 * c + y as f64 * s) == Some(j);
                assert_eq!(img.get(x, y), if on { 1.0 } else { 0.0 });
                hits += on as usize;
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn too_small_rho_range_is_rejected() {
        let img = ImageGrid::zeros(16, 16, 1.0).unwrap();
        let shape = HoughShape::new(180, 20, -10.0, 10.0).unwrap();
        assert!(hough_forward(&img, &shape).is_err());
        assert!(hough_adjoint(&HoughSpace::zeros(shape), 16, 16, 1.0).is_err());
    }
}
