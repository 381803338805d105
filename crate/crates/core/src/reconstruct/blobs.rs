use std::collections::VecDeque;

use crate::error::Result;
use crate::hough::HoughSpace;

use super::{LineSet, PostprocessConfig};

/// Labels 8-connected components of `keep` on a `rows × cols` grid.
///
/// Labels start at 1 in row-major order of each component's first cell;
/// 0 marks background. Returns the label image and the component count.
pub fn label_components(keep: &[bool], rows: usize, cols: usize) -> (Vec<u32>, usize) {
    let mut labels = vec![0u32; rows * cols];
    let mut next = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..keep.len() {
        if !keep[start] || labels[start] != 0 {
            continue;
        }
        next += 1;
        labels[start] = next;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (r, c) = ((i / cols) as isize, (i % cols) as isize);
            for dr in -1..=1isize {
                for dc in -1..=1isize {
                    let (nr, nc) = (r + dr, c + dc);
                    if nr < 0 || nc < 0 || nr >= rows as isize || nc >= cols as isize {
                        continue;
                    }
                    let n = nr as usize * cols + nc as usize;
                    if keep[n] && labels[n] == 0 {
                        labels[n] = next;
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    (labels, next as usize)
}

#[derive(Default, Clone, Copy)]
struct Blob {
    area: usize,
    mass: f64,
    k_moment: f64,
    j_moment: f64,
}

/// Thresholds the accumulator at `t · max(h, 0)` and turns every surviving
/// blob into one line at its magnitude-weighted center of mass.
///
/// A cell survives when it is positive and at least the threshold, so
/// `t = 0` keeps every positive cell. Components are 8-connected in `(θ, ρ)`
/// without wrapping θ around π. A non-positive maximum yields an empty set.
pub fn extract_lines(h: &HoughSpace, cfg: &PostprocessConfig) -> Result<LineSet> {
    cfg.validate()?;
    let shape = h.shape();
    let max = h.max();
    if !(max > 0.0) {
        return Ok(LineSet::default());
    }
    let cut = cfg.threshold * max;
    let keep: Vec<bool> = h.data().iter().map(|&v| v > 0.0 && v >= cut).collect();
    let (labels, count) = label_components(&keep, shape.n_theta, shape.n_rho);

    let mut blobs = vec![Blob::default(); count];
    for (i, &l) in labels.iter().enumerate() {
        if l == 0 {
            continue;
        }
        let v = h.data()[i];
        let b = &mut blobs[l as usize - 1];
        b.area += 1;
        b.mass += v;
        b.k_moment += v * (i / shape.n_rho) as f64;
        b.j_moment += v * (i % shape.n_rho) as f64;
    }

    // (kc, jc, mass)
    let mut found: Vec<(f64, f64, f64)> = blobs
        .iter()
        .filter(|b| b.area >= cfg.min_blob_area)
        .map(|b| (b.k_moment / b.mass, b.j_moment / b.mass, b.mass))
        .collect();
    found.sort_by(|a, b| {
        b.2.total_cmp(&a.2)
            .then(a.0.total_cmp(&b.0))
            .then(a.1.total_cmp(&b.1))
    });

    // Two blobs whose centroids fall in the same bin describe the same line;
    // the heavier one (seen first) wins.
    let mut seen = Vec::new();
    let mut out = LineSet::default();
    for (kc, jc, mass) in found {
        let key = (kc.round() as i64, jc.round() as i64);
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        out.lines.push(shape.line_at(kc, jc));
        out.source_blob_mass.push(mass);
    }
    Ok(out)
}
