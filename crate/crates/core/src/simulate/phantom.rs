use rand::Rng;

use crate::error::Result;
use crate::grid::ImageGrid;

/// A smooth, strictly positive stand-in for an uncollimated radiograph: a
/// linear intensity gradient plus a few soft-edged elliptical structures.
///
/// Features are deliberately low-contrast and curved so they do not compete
/// with collimator edges for Hough votes.
pub fn phantom<R: Rng + ?Sized>(
    width: usize,
    height: usize,
    pixel_spacing: f64,
    rng: &mut R,
) -> Result<ImageGrid> {
    let (gx, gy) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let n = rng.random_range(2..=5usize);
    let size = width.min(height) as f64;
    let blobs: Vec<[f64; 6]> = (0..n)
        .map(|_| {
            [
                rng.random_range(0.15..0.85) * width as f64,
                rng.random_range(0.15..0.85) * height as f64,
                rng.random_range(0.1..0.35) * size,
                rng.random_range(0.1..0.35) * size,
                rng.random_range(0.0..std::f64::consts::PI),
                rng.random_range(-0.08..0.08),
            ]
        })
        .collect();
    const SOFTNESS_PX: f64 = 8.0;
    ImageGrid::from_fn(width, height, pixel_spacing, |x, y| {
        let u = 2.0 * x as f64 / width as f64 - 1.0;
        let v = 2.0 * y as f64 / height as f64 - 1.0;
        let mut value = 0.8 + 0.1 * (gx * u + gy * v);
        for &[cx, cy, a, b, phi, contrast] in &blobs {
            let (s, c) = phi.sin_cos();
            let (dx, dy) = (x as f64 - cx, y as f64 - cy);
            let (p, q) = (dx * c + dy * s, -dx * s + dy * c);
            let r = ((p / a).powi(2) + (q / b).powi(2)).sqrt();
            value += contrast * 0.5 * (1.0 - ((r - 1.0) * a.min(b) / SOFTNESS_PX).tanh());
        }
        value.max(0.05)
    })
}
