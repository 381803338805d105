use crate::error::{invalid, Error, Result};
use crate::grid::BinaryMask;

/// Mask pixels with a 4-neighbour outside the mask or outside the image.
pub fn boundary_pixels(mask: &BinaryMask) -> Vec<(usize, usize)> {
    let (w, h) = (mask.width(), mask.height());
    mask.iter_set()
        .filter(|&(x, y)| {
            x == 0
                || y == 0
                || x + 1 == w
                || y + 1 == h
                || !mask.get(x - 1, y)
                || !mask.get(x + 1, y)
                || !mask.get(x, y - 1)
                || !mask.get(x, y + 1)
        })
        .collect()
}

/// Average Hausdorff distance in millimetres.
///
/// The mean of the two directed mean boundary-to-boundary distances, scaled
/// by `spacing` (mm per pixel).
pub fn avg_hausdorff_mm(a: &BinaryMask, b: &BinaryMask, spacing: f64) -> Result<f64> {
    if !a.same_shape(b) {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(invalid("spacing", format!("{spacing} must be positive")));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyMaskDistance);
    }
    let ba = boundary_pixels(a);
    let bb = boundary_pixels(b);
    let ab = directed_mean(&ba, &bb, a.width(), a.height());
    let ba_ = directed_mean(&bb, &ba, a.width(), a.height());
    Ok(0.5 * (ab + ba_) * spacing)
}

fn directed_mean(from: &[(usize, usize)], to: &[(usize, usize)], w: usize, h: usize) -> f64 {
    let dt = squared_distance_transform(to, w, h);
    let total: f64 = from.iter().map(|&(x, y)| dt[y * w + x].sqrt()).sum();
    total / from.len() as f64
}

/// Exact squared Euclidean distance to the nearest site, by separable
/// lower-envelope passes.
fn squared_distance_transform(sites: &[(usize, usize)], w: usize, h: usize) -> Vec<f64> {
    let mut grid = vec![f64::INFINITY; w * h];
    for &(x, y) in sites {
        grid[y * w + x] = 0.0;
    }
    let n = w.max(h);
    let mut f = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0; n + 1];
    for x in 0..w {
        for y in 0..h {
            f[y] = grid[y * w + x];
        }
        lower_envelope(&f[..h], &mut d[..h], &mut v, &mut z);
        for y in 0..h {
            grid[y * w + x] = d[y];
        }
    }
    for y in 0..h {
        f[..w].copy_from_slice(&grid[y * w..(y + 1) * w]);
        lower_envelope(&f[..w], &mut d[..w], &mut v, &mut z);
        grid[y * w..(y + 1) * w].copy_from_slice(&d[..w]);
    }
    grid
}

fn lower_envelope(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    // Columns without any finite sample stay infinite.
    let Some(first) = f.iter().position(|x| x.is_finite()) else {
        d.fill(f64::INFINITY);
        return;
    };
    let mut k = 0usize;
    v[0] = first;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in first + 1..n {
        if !f[q].is_finite() {
            continue;
        }
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] {
                k -= 1;
                continue;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    let mut k = 0usize;
    for (q, out) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        *out = dq * dq + f[p];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(w: usize, x0: usize, y0: usize, side: usize) -> BinaryMask {
        BinaryMask::from_fn(w, w, |x, y| (x0..x0 + side).contains(&x) && (y0..y0 + side).contains(&y)).unwrap()
    }

    #[test]
    fn identical_masks_are_zero() {
        let a = square(32, 4, 6, 10);
        assert_eq!(avg_hausdorff_mm(&a, &a, 0.15).unwrap(), 0.0);
    }

    #[test]
    fn empty_mask_is_an_error() {
        let a = square(16, 2, 2, 4);
        let e = BinaryMask::empty(16, 16).unwrap();
        let err = avg_hausdorff_mm(&a, &e, 1.0).unwrap_err();
        assert_eq!(err.to_string(), "undefined distance for empty mask");
    }

    #[test]
    fn border_pixels_count_as_boundary() {
        let full = BinaryMask::full(5, 4).unwrap();
        assert_eq!(boundary_pixels(&full).len(), 5 * 4 - 3 * 2);
    }

    #[test]
    fn distance_transform_matches_brute_force() {
        let sites = [(1usize, 2usize), (7, 0), (4, 9), (9, 9)];
        let (w, h) = (11, 10);
        let dt = squared_distance_transform(&sites, w, h);
        for y in 0..h {
            for x in 0..w {
                let bf = sites
                    .iter()
                    .map(|&(sx, sy)| {
                        let dx = x as f64 - sx as f64;
                        let dy = y as f64 - sy as f64;
                        dx * dx + dy * dy
                    })
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(dt[y * w + x], bf, "({x},{y})");
            }
        }
    }

    #[test]
    fn single_column_of_sites() {
        let dt = squared_distance_transform(&[(3, 1)], 4, 3);
        assert_eq!(dt[0], 10.0);
        assert_eq!(dt[2 * 4 + 3], 1.0);
    }
}
