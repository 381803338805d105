//! Normal-form lines and the convex polygonal regions they bound.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::BinaryMask;

/// Maximum number of collimator edges a polygon may carry.
pub const MAX_EDGES: usize = 4;

/// A line in normal form: pixel center `(x, y)` lies on it iff
/// `x·cos(theta) + y·sin(theta) = rho`.
///
/// `theta` is measured from the +x axis (y pointing down) and lies in `[0, π)`;
/// `rho` is signed and in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub theta: f64,
    pub rho: f64,
}

impl Line {
    pub fn new(theta: f64, rho: f64) -> Result<Self> {
        if !(theta.is_finite() && rho.is_finite()) {
            return Err(invalid("line", format!("non-finite ({theta}, {rho})")));
        }
        if !(0.0..PI).contains(&theta) {
            return Err(invalid("theta", format!("{theta} not in [0, pi)")));
        }
        Ok(Self { theta, rho })
    }

    /// Builds a line from any angle, folding it into `[0, π)` via the
    /// identity `(θ, ρ) ~ (θ ± π, −ρ)`.
    pub fn normalized(theta: f64, rho: f64) -> Self {
        let mut t = theta.rem_euclid(2.0 * PI);
        let mut r = rho;
        if t >= PI {
            t -= PI;
            r = -r;
        }
        if t >= PI {
            t = 0.0;
        }
        Self { theta: t, rho: r }
    }

    /// Signed perpendicular distance of `(x, y)` from the line.
    #[inline]
    pub fn signed_distance(&self, x: f64, y: f64) -> f64 {
        x * self.theta.cos() + y * self.theta.sin() - self.rho
    }

    /// Largest change of the signed distance over a single 4-neighbour step.
    #[inline]
    pub fn major_step(&self) -> f64 {
        self.theta.cos().abs().max(self.theta.sin().abs())
    }

    /// Clips the line to the image rectangle spanned by the outer pixel edges,
    /// `[-0.5, w - 0.5] × [-0.5, h - 0.5]`. Returns `None` if it misses it.
    pub fn chord(&self, width: usize, height: usize) -> Option<((f64, f64), (f64, f64))> {
        let (s, c) = self.theta.sin_cos();
        let (x0, y0) = (self.rho * c, self.rho * s);
        let (dx, dy) = (-s, c);
        let bounds = [
            (x0, dx, -0.5, width as f64 - 0.5),
            (y0, dy, -0.5, height as f64 - 0.5),
        ];
        let (mut t_lo, mut t_hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (p, d, lo, hi) in bounds {
            if d.abs() < 1e-12 {
                if p < lo || p > hi {
                    return None;
                }
            } else {
                let (a, b) = ((lo - p) / d, (hi - p) / d);
                t_lo = t_lo.max(a.min(b));
                t_hi = t_hi.min(a.max(b));
            }
        }
        if t_lo > t_hi {
            return None;
        }
        Some(((x0 + t_lo * dx, y0 + t_lo * dy), (x0 + t_hi * dx, y0 + t_hi * dy)))
    }
}

/// A convex collimation region: the intersection of up to four half-planes
/// with the detector rectangle.
///
/// The ROI side of every edge is the side holding `roi_reference_point`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonSpec {
    pub edges: Vec<Line>,
    pub roi_reference_point: (f64, f64),
}

impl PolygonSpec {
    pub fn new(edges: Vec<Line>, roi_reference_point: (f64, f64)) -> Result<Self> {
        if edges.len() > MAX_EDGES {
            return Err(invalid("edges", format!("{} > {MAX_EDGES}", edges.len())));
        }
        let (rx, ry) = roi_reference_point;
        for e in &edges {
            if e.signed_distance(rx, ry) == 0.0 {
                return Err(invalid("roi_reference_point", "lies on an edge"));
            }
        }
        Ok(Self {
            edges,
            roi_reference_point,
        })
    }

    /// Orientation (+1 or -1) of the ROI side of each edge.
    pub fn sides(&self) -> Vec<f64> {
        let (rx, ry) = self.roi_reference_point;
        self.edges
            .iter()
            .map(|e| e.signed_distance(rx, ry).signum())
            .collect()
    }

    /// Whether pixel center `(x, y)` belongs to the rasterized ROI.
    ///
    /// A pixel belongs to the ROI if it lies on the ROI side of every edge, or
    /// on an edge's digital line next to the ROI interior. Concretely, the
    /// oriented distance must exceed `0.5 − major_step`, which is exactly the
    /// set of line-band pixels with a 4-neighbour strictly inside the ROI.
    pub fn contains(&self, sides: &[f64], x: f64, y: f64) -> bool {
        self.edges
            .iter()
            .zip(sides)
            .all(|(e, s)| s * e.signed_distance(x, y) > 0.5 - e.major_step())
    }

    /// Rasterized ROI on a `width × height` grid.
    pub fn roi_mask(&self, width: usize, height: usize) -> Result<BinaryMask> {
        let sides = self.sides();
        BinaryMask::from_fn(width, height, |x, y| {
            self.contains(&sides, x as f64, y as f64)
        })
    }

    /// Checks that the ROI is non-empty on the grid and holds the reference point.
    pub fn validate(&self, width: usize, height: usize) -> Result<()> {
        let (rx, ry) = self.roi_reference_point;
        if !(rx >= -0.5 && ry >= -0.5 && rx <= width as f64 - 0.5 && ry <= height as f64 - 0.5) {
            return Err(invalid("roi_reference_point", "outside the detector"));
        }
        if self.roi_mask(width, height)?.is_empty() {
            return Err(Error::InvalidDimensions("polygon ROI is empty".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_folds_angle() {
        let l = Line::normalized(PI + 0.25, 10.0);
        assert!((l.theta - 0.25).abs() < 1e-12);
        assert_eq!(l.rho, -10.0);
        let l = Line::normalized(-0.25, 3.0);
        assert!((l.theta - (PI - 0.25)).abs() < 1e-12);
        assert_eq!(l.rho, -3.0);
    }

    #[test]
    fn line_new_rejects_out_of_range_theta() {
        assert!(Line::new(PI, 0.0).is_err());
        assert!(Line::new(-0.1, 0.0).is_err());
        assert!(Line::new(0.0, f64::NAN).is_err());
    }

    #[test]
    fn chord_of_vertical_line() {
        let l = Line::new(0.0, 10.0).unwrap();
        let (a, b) = l.chord(64, 32).unwrap();
        let (lo, hi) = if a.1 < b.1 { (a, b) } else { (b, a) };
        assert!((lo.0 - 10.0).abs() < 1e-12 && (lo.1 + 0.5).abs() < 1e-12);
        assert!((hi.0 - 10.0).abs() < 1e-12 && (hi.1 - 31.5).abs() < 1e-12);
        assert!(Line::new(0.0, 100.0).unwrap().chord(64, 32).is_none());
    }

    #[test]
    fn half_plane_roi_includes_line_column() {
        // x = 32 with the ROI to the right.
        let p = PolygonSpec::new(vec![Line::new(0.0, 32.0).unwrap()], (48.0, 10.0)).unwrap();
        let m = p.roi_mask(64, 16).unwrap();
        for y in 0..16 {
            for x in 0..64 {
                assert_eq!(m.get(x, y), x >= 32);
            }
        }
    }

    #[test]
    fn reference_point_on_edge_is_rejected() {
        assert!(PolygonSpec::new(vec![Line::new(0.0, 5.0).unwrap()], (5.0, 1.0)).is_err());
    }
}
