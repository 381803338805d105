use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::geometry::Line;

/// Euclidean-and-angular line similarity in `[0, 1]`.
///
/// With `dθ` the unoriented angle between the lines and `d` the distance
/// between their chord midpoints in image coordinates normalized to the unit
/// square, the score is `((1 − dθ/(π/2)) · (1 − d/√2))²`, each factor
/// clipped at zero.
pub fn ea_score(a: &Line, b: &Line, width: usize, height: usize) -> Result<f64> {
    let ma = chord_midpoint(a, width, height)?;
    let mb = chord_midpoint(b, width, height)?;
    let mut dtheta = (a.theta - b.theta).abs() % PI;
    dtheta = dtheta.min(PI - dtheta);
    let angular = (1.0 - dtheta / FRAC_PI_2).max(0.0);
    let dx = (ma.0 - mb.0) / width as f64;
    let dy = (ma.1 - mb.1) / height as f64;
    let euclid = (1.0 - dx.hypot(dy) / SQRT_2).max(0.0);
    Ok((angular * euclid).powi(2))
}

fn chord_midpoint(l: &Line, width: usize, height: usize) -> Result<(f64, f64)> {
    let (p, q) = l.chord(width, height).ok_or(Error::LineOutsideImage)?;
    Ok(((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0))
}
