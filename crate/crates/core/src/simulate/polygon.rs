use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{Line, PolygonSpec};
use crate::grid::{mask_centroid, BinaryMask};

use super::SimulationConfig;

/// Rejection-sampling budget per polygon.
pub const MAX_ATTEMPTS: usize = 10_000;

/// Draws a random convex collimation polygon.
///
/// Edges are drawn on the Hough grid (bin-center angles and offsets) so the
/// Hough label of every edge is exact. Each edge passes through a uniformly
/// drawn detector point and keeps the detector center on its ROI side. A
/// draw is rejected until the ROI area fraction is in range, the ROI
/// centroid sits strictly inside (off every edge's digital line), edges are
/// well separated in Hough space, and every edge visibly bounds the ROI.
pub fn sample_polygon<R: Rng + ?Sized>(cfg: &SimulationConfig, rng: &mut R) -> Result<PolygonSpec> {
    cfg.validate()?;
    let shape = cfg.hough_shape()?;
    let (w, h) = (cfg.width, cfg.height);
    let (cx, cy) = ((w - 1) as f64 / 2.0, (h - 1) as f64 / 2.0);
    let [amin, amax] = cfg.area_fraction_range;
    let total = (w * h) as f64;

    for _ in 0..MAX_ATTEMPTS {
        let k = rng.random_range(cfg.n_edges_range[0]..=cfg.n_edges_range[1]);
        let mut edges = Vec::with_capacity(k);
        let mut bins = Vec::with_capacity(k);
        for _ in 0..k {
            let kb = rng.random_range(cfg.theta_margin_bins..cfg.n_theta - cfg.theta_margin_bins);
            let (px, py) = (
                rng.random_range(0.0..(w - 1) as f64),
                rng.random_range(0.0..(h - 1) as f64),
            );
            let (s, c) = shape.theta_at(kb).sin_cos();
            let Some(jb) = shape.rho_bin(px * c + py * s) else {
                continue;
            };
            edges.push(shape.line_from_bins(kb, jb)?);
            bins.push((kb, jb));
        }
        if edges.len() != k
            || !separated(&bins, cfg.min_edge_separation_bins)
            || has_shallow_corner(&edges, &bins, cfg.min_corner_turn_bins, cfg.n_theta, w, h)
        {
            continue;
        }
        let sides: Vec<f64> = edges.iter().map(|e| e.signed_distance(cx, cy).signum()).collect();
        if sides.contains(&0.0) {
            continue;
        }
        let mask = half_plane_mask(&edges, &sides, w, h)?;
        let frac = mask.count() as f64 / total;
        if !(frac >= amin && frac <= amax) {
            continue;
        }
        let centroid = mask_centroid(&mask)?;
        let strictly_inside = edges
            .iter()
            .zip(&sides)
            .all(|(e, s)| s * e.signed_distance(centroid.0, centroid.1) > 0.5);
        if !strictly_inside {
            continue;
        }
        let poly = PolygonSpec::new(edges, centroid)?;
        let lengths = edge_lengths(&poly, &mask);
        let longest = lengths.iter().copied().fold(0.0, f64::max);
        if lengths
            .iter()
            .any(|&l| l < cfg.min_edge_length_px || l < cfg.min_edge_length_ratio * longest)
        {
            continue;
        }
        return Ok(poly);
    }
    Err(Error::UnsatisfiablePolygon)
}

fn separated(bins: &[(usize, usize)], min_sep: usize) -> bool {
    bins.iter().enumerate().all(|(i, a)| {
        bins[i + 1..]
            .iter()
            .all(|b| a.0.abs_diff(b.0).max(a.1.abs_diff(b.1)) >= min_sep)
    })
}

fn has_shallow_corner(edges: &[Line], bins: &[(usize, usize)], min_turn: usize, n_theta: usize, w: usize, h: usize) -> bool {
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let d = bins[i].0.abs_diff(bins[j].0);
            if d.min(n_theta - d) >= min_turn {
                continue;
            }
            if let Some((x, y)) = intersection(&edges[i], &edges[j]) {
                if (-0.5..=w as f64 - 0.5).contains(&x) && (-0.5..=h as f64 - 0.5).contains(&y) {
                    return true;
                }
            }
        }
    }
    false
}

fn intersection(a: &Line, b: &Line) -> Option<(f64, f64)> {
    let (sa, ca) = a.theta.sin_cos();
    let (sb, cb) = b.theta.sin_cos();
    let det = ca * sb - sa * cb;
    if det.abs() < 1e-12 {
        return None;
    }
    Some(((a.rho * sb - b.rho * sa) / det, (ca * b.rho - cb * a.rho) / det))
}

fn half_plane_mask(edges: &[Line], sides: &[f64], w: usize, h: usize) -> Result<BinaryMask> {
    // Same membership rule as PolygonSpec::contains, with explicit sides.
    let poly = PolygonSpec {
        edges: edges.to_vec(),
        roi_reference_point: (0.0, 0.0),
    };
    BinaryMask::from_fn(w, h, |x, y| poly.contains(sides, x as f64, y as f64))
}

/// Approximate length (pixels) over which each edge bounds the ROI `mask`.
///
/// Counts ROI pixels on the edge's digital line; that band portion is
/// `major_step` wide, so the count divided by it estimates the length.
pub fn edge_lengths(poly: &PolygonSpec, mask: &BinaryMask) -> Vec<f64> {
    let sides = poly.sides();
    poly.edges
        .iter()
        .zip(&sides)
        .map(|(e, s)| {
            let n = mask
                .iter_set()
                .filter(|&(x, y)| s * e.signed_distance(x as f64, y as f64) <= 0.5)
                .count();
            n as f64 / e.major_step()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn zero_edges_give_full_detector() {
        let cfg = SimulationConfig {
            width: 32,
            height: 24,
            n_edges_range: [0, 0],
            area_fraction_range: [0.5, 1.0],
            ..Default::default()
        };
        let poly = sample_polygon(&cfg, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(poly.edges.is_empty());
        assert_eq!(poly.roi_mask(32, 24).unwrap().count(), 32 * 24);
    }

    #[test]
    fn single_edge_respects_area_range() {
        let cfg = SimulationConfig {
            n_edges_range: [1, 1],
            area_fraction_range: [0.4, 0.6],
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let poly = sample_polygon(&cfg, &mut rng).unwrap();
            assert_eq!(poly.edges.len(), 1);
            let area = poly.roi_mask(256, 256).unwrap().count() as f64;
            assert!((0.4 * 65536.0..=0.6 * 65536.0).contains(&area), "{area}");
        }
    }

    #[test]
    fn impossible_constraints_fail() {
        let cfg = SimulationConfig {
            width: 16,
            height: 16,
            n_edges_range: [0, 0],
            area_fraction_range: [0.1, 0.5],
            ..Default::default()
        };
        assert_eq!(
            sample_polygon(&cfg, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::UnsatisfiablePolygon)
        );
    }
}
