use std::collections::VecDeque;

use crate::error::{invalid, Error, Result};
use crate::geometry::Line;
use crate::grid::BinaryMask;

/// Pixels whose center lies within this perpendicular distance of a line
/// belong to its digital rasterization.
pub const BARRIER_HALF_WIDTH: f64 = 0.5;

/// Rasterizes every line across the whole grid.
///
/// A closed band of width one pixel is an 8-connected digital line that no
/// 4-connected path can cross: a 4-neighbour step changes the signed
/// distance by at most one.
pub fn rasterize_lines(lines: &[Line], width: usize, height: usize) -> Result<BinaryMask> {
    let trig: Vec<(f64, f64, f64)> = lines
        .iter()
        .map(|l| {
            let (s, c) = l.theta.sin_cos();
            (c, s, l.rho)
        })
        .collect();
    BinaryMask::from_fn(width, height, |x, y| {
        let (x, y) = (x as f64, y as f64);
        trig.iter()
            .any(|&(c, s, rho)| (x * c + y * s - rho).abs() <= BARRIER_HALF_WIDTH)
    })
}

/// Nearest pixel to `start` (Euclidean) that is not a barrier; ties go to
/// the first pixel in row-major order.
fn relocate_seed(barrier: &BinaryMask, start: (usize, usize)) -> Option<(usize, usize)> {
    let (w, h) = (barrier.width() as isize, barrier.height() as isize);
    let (sx, sy) = (start.0 as isize, start.1 as isize);
    let mut best: Option<(isize, isize, isize)> = None; // (d², y, x)
    for r in 1..=w.max(h) {
        if let Some((d2, _, _)) = best {
            if r * r > d2 {
                break;
            }
        }
        for y in (sy - r).max(0)..=(sy + r).min(h - 1) {
            for x in (sx - r).max(0)..=(sx + r).min(w - 1) {
                if (x - sx).abs().max((y - sy).abs()) != r {
                    continue;
                }
                if barrier.get(x as usize, y as usize) {
                    continue;
                }
                let cand = ((x - sx).pow(2) + (y - sy).pow(2), y, x);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
    }
    best.map(|(_, y, x)| (x as usize, y as usize))
}

/// Flood-fills the region around `seed` bounded by the rasterized lines.
///
/// The fill is 4-connected over non-barrier pixels; afterwards every barrier
/// pixel 4-adjacent to the filled region joins the mask, so the bounding
/// lines belong to the region they enclose, and so does any pixel where two
/// absorbed lines meet. A seed on a barrier pixel is moved to the nearest
/// free pixel.
pub fn lines_to_mask(
    lines: &[Line],
    seed: (f64, f64),
    width: usize,
    height: usize,
) -> Result<BinaryMask> {
    let (sx, sy) = seed;
    if !(sx >= -0.5 && sy >= -0.5 && sx < width as f64 - 0.5 && sy < height as f64 - 0.5) {
        return Err(invalid("seed", format!("({sx}, {sy}) outside {width}x{height}")));
    }
    let start = ((sx + 0.5).floor() as usize, (sy + 0.5).floor() as usize);
    let barrier = rasterize_lines(lines, width, height)?;
    let start = if barrier.get(start.0, start.1) {
        relocate_seed(&barrier, start).ok_or(Error::DegenerateBarrier)?
    } else {
        start
    };

    let mut filled = vec![false; width * height];
    let mut queue = VecDeque::new();
    filled[start.1 * width + start.0] = true;
    queue.push_back(start);
    while let Some((x, y)) = queue.pop_front() {
        for (nx, ny) in neighbours4(x, y, width, height) {
            let i = ny * width + nx;
            if !filled[i] && !barrier.data()[i] {
                filled[i] = true;
                queue.push_back((nx, ny));
            }
        }
    }

    let mut out = filled.clone();
    for y in 0..height {
        for x in 0..width {
            if barrier.get(x, y)
                && neighbours4(x, y, width, height).any(|(nx, ny)| filled[ny * width + nx])
            {
                out[y * width + x] = true;
            }
        }
    }
    close_corners(lines, &barrier, &filled, start, &mut out);
    BinaryMask::new(width, height, out)
}

/// Absorbs corner pixels: a barrier pixel on two lines whose 4-neighbours
/// include an absorbed pixel of each line, provided it is no further outside
/// any line than an absorbed pixel can be. Without this a polygon vertex
/// sitting exactly on both digital lines would be cut off, since none of its
/// 4-neighbours is free.
fn close_corners(
    lines: &[Line],
    barrier: &BinaryMask,
    filled: &[bool],
    start: (usize, usize),
    out: &mut [bool],
) {
    let (w, h) = (barrier.width(), barrier.height());
    let on = |li: usize, x: usize, y: usize| {
        lines[li].signed_distance(x as f64, y as f64).abs() <= BARRIER_HALF_WIDTH
    };
    // The fill never crosses a line, so every filled pixel shares the seed's side.
    let sides: Vec<f64> = lines
        .iter()
        .map(|l| l.signed_distance(start.0 as f64, start.1 as f64).signum())
        .collect();
    let inside = |x: usize, y: usize| {
        lines.iter().zip(&sides).all(|(l, s)| {
            s * l.signed_distance(x as f64, y as f64) > BARRIER_HALF_WIDTH - l.major_step()
        })
    };
    let absorbed = |x: usize, y: usize| out[y * w + x] && !filled[y * w + x];
    let mut corners = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if !barrier.get(x, y) || out[y * w + x] {
                continue;
            }
            let here: Vec<usize> = (0..lines.len()).filter(|&li| on(li, x, y)).collect();
            if here.len() < 2 {
                continue;
            }
            let touched: Vec<usize> = here
                .iter()
                .copied()
                .filter(|&li| {
                    neighbours4(x, y, w, h).any(|(nx, ny)| absorbed(nx, ny) && on(li, nx, ny))
                })
                .collect();
            if touched.len() >= 2 && inside(x, y) {
                corners.push(y * w + x);
            }
        }
    }
    for i in corners {
        out[i] = true;
    }
}

fn neighbours4(
    x: usize,
    y: usize,
    w: usize,
    h: usize,
) -> impl Iterator<Item = (usize, usize)> {
    let cand = [
        (x.wrapping_sub(1), y),
        (x + 1, y),
        (x, y.wrapping_sub(1)),
        (x, y + 1),
    ];
    cand.into_iter().filter(move |&(a, b)| a < w && b < h)
}
