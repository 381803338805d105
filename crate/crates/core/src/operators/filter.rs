use crate::error::{invalid, Error, Result};
use crate::grid::ImageGrid;

/// Horizontal Sobel kernel, indexed `[dy][dx]`.
pub const SOBEL_X: [[f64; 3]; 3] = [[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]];
/// Vertical Sobel kernel, the transpose of [`SOBEL_X`].
pub const SOBEL_Y: [[f64; 3]; 3] = [[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]];

/// A truncated, normalized Gaussian kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianKernelSpec {
    pub sigma: f64,
    pub radius: usize,
}

impl GaussianKernelSpec {
    /// Kernel with the default truncation radius `⌈3σ⌉` (at least 1).
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(invalid("sigma", format!("{sigma} is not > 0")));
        }
        let radius = ((3.0 * sigma).ceil() as usize).max(1);
        Ok(Self { sigma, radius })
    }

    pub fn with_radius(sigma: f64, radius: usize) -> Result<Self> {
        let mut spec = Self::new(sigma)?;
        if radius == 0 {
            return Err(invalid("radius", "must be >= 1"));
        }
        spec.radius = radius;
        Ok(spec)
    }

    /// The `2·radius + 1` one-dimensional weights, summing to one.
    pub fn weights(&self) -> Vec<f64> {
        let r = self.radius as isize;
        let raw: Vec<f64> = (-r..=r)
            .map(|i| (-((i * i) as f64) / (2.0 * self.sigma * self.sigma)).exp())
            .collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }
}

#[inline]
fn clamp(i: isize, n: usize) -> usize {
    i.clamp(0, n as isize - 1) as usize
}

fn correlate_rows(src: &[f64], w: usize, h: usize, weights: &[f64]) -> Vec<f64> {
    let r = (weights.len() / 2) as isize;
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = 0.0;
            for (i, wt) in weights.iter().enumerate() {
                acc += wt * row[clamp(x as isize + i as isize - r, w)];
            }
            out[y * w + x] = acc;
        }
    }
    out
}

fn correlate_cols(src: &[f64], w: usize, h: usize, weights: &[f64]) -> Vec<f64> {
    let r = (weights.len() / 2) as isize;
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for (i, wt) in weights.iter().enumerate() {
            let sy = clamp(y as isize + i as isize - r, h);
            let src_row = &src[sy * w..(sy + 1) * w];
            let dst = &mut out[y * w..(y + 1) * w];
            for (d, s) in dst.iter_mut().zip(src_row) {
                *d += wt * s;
            }
        }
    }
    out
}

fn correlate_rows_adjoint(grad: &[f64], w: usize, h: usize, weights: &[f64]) -> Vec<f64> {
    let r = (weights.len() / 2) as isize;
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let g = grad[y * w + x];
            for (i, wt) in weights.iter().enumerate() {
                out[y * w + clamp(x as isize + i as isize - r, w)] += wt * g;
            }
        }
    }
    out
}

fn correlate_cols_adjoint(grad: &[f64], w: usize, h: usize, weights: &[f64]) -> Vec<f64> {
    let r = (weights.len() / 2) as isize;
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for (i, wt) in weights.iter().enumerate() {
            let sy = clamp(y as isize + i as isize - r, h);
            for x in 0..w {
                out[sy * w + x] += wt * grad[y * w + x];
            }
        }
    }
    out
}

/// Separable replicate-border smoothing of a raw row-major buffer.
pub(crate) fn smooth_raw(src: &[f64], w: usize, h: usize, weights: &[f64]) -> Vec<f64> {
    let tmp = correlate_rows(src, w, h, weights);
    correlate_cols(&tmp, w, h, weights)
}

fn smooth_raw_adjoint(grad: &[f64], w: usize, h: usize, weights: &[f64]) -> Vec<f64> {
    let tmp = correlate_cols_adjoint(grad, w, h, weights);
    correlate_rows_adjoint(&tmp, w, h, weights)
}

/// Separable Gaussian smoothing with replicate-border padding.
pub fn gaussian_smooth(img: &ImageGrid, spec: &GaussianKernelSpec) -> Result<ImageGrid> {
    if !(spec.sigma > 0.0) {
        return Err(invalid("sigma", format!("{} is not > 0", spec.sigma)));
    }
    let out = smooth_raw(img.data(), img.width(), img.height(), &spec.weights());
    img.with_data(out)
}

/// Transpose of [`gaussian_smooth`]: maps an output-space gradient back to the input.
pub fn gaussian_smooth_adjoint(grad: &ImageGrid, spec: &GaussianKernelSpec) -> Result<ImageGrid> {
    if !(spec.sigma > 0.0) {
        return Err(invalid("sigma", format!("{} is not > 0", spec.sigma)));
    }
    let out = smooth_raw_adjoint(grad.data(), grad.width(), grad.height(), &spec.weights());
    grad.with_data(out)
}

/// Sobel responses in factored form, `[1, 2, 1]` smoothing times a central
/// difference; equal to correlating with [`SOBEL_X`] / [`SOBEL_Y`] and exactly
/// zero on flat regions.
fn sobel_pair(src: &[f64], w: usize, h: usize) -> (Vec<f64>, Vec<f64>) {
    const SMOOTH: [f64; 3] = [1.0, 2.0, 1.0];
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    let at = |x: isize, y: isize| src[clamp(y, h) * w + clamp(x, w)];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let (mut ax, mut ay) = (0.0, 0.0);
            for (d, s) in SMOOTH.iter().enumerate() {
                let o = d as isize - 1;
                ax += s * (at(x + 1, y + o) - at(x - 1, y + o));
                ay += s * (at(x + o, y + 1) - at(x + o, y - 1));
            }
            gx[y as usize * w + x as usize] = ax;
            gy[y as usize * w + x as usize] = ay;
        }
    }
    (gx, gy)
}

fn correlate3_adjoint(grad: &[f64], w: usize, h: usize, k: &[[f64; 3]; 3], out: &mut [f64]) {
    for y in 0..h {
        for x in 0..w {
            let g = grad[y * w + x];
            for (dy, krow) in k.iter().enumerate() {
                let sy = clamp(y as isize + dy as isize - 1, h);
                for (dx, kv) in krow.iter().enumerate() {
                    if *kv != 0.0 {
                        out[sy * w + clamp(x as isize + dx as isize - 1, w)] += kv * g;
                    }
                }
            }
        }
    }
}

/// Per-axis Sobel responses and their magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct SobelResponse {
    pub gx: ImageGrid,
    pub gy: ImageGrid,
    pub magnitude: ImageGrid,
}

/// 3×3 Sobel correlation with replicate-border padding.
pub fn sobel(img: &ImageGrid) -> Result<SobelResponse> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(Error::InvalidDimensions(format!(
            "sobel needs at least 3x3, got {w}x{h}"
        )));
    }
    let (gx, gy) = sobel_pair(img.data(), w, h);
    let magnitude = gx.iter().zip(&gy).map(|(a, b)| a.hypot(*b)).collect();
    Ok(SobelResponse {
        gx: img.with_data(gx)?,
        gy: img.with_data(gy)?,
        magnitude: img.with_data(magnitude)?,
    })
}

/// Transpose of the Sobel pair: returns `Sxᵀ·grad_gx + Syᵀ·grad_gy`.
pub fn sobel_adjoint(grad_gx: &ImageGrid, grad_gy: &ImageGrid) -> Result<ImageGrid> {
    if !grad_gx.same_shape(grad_gy) {
        return Err(Error::ShapeMismatch("sobel gradient shapes differ".into()));
    }
    let (w, h) = (grad_gx.width(), grad_gx.height());
    let mut out = vec![0.0; w * h];
    correlate3_adjoint(grad_gx.data(), w, h, &SOBEL_X, &mut out);
    correlate3_adjoint(grad_gy.data(), w, h, &SOBEL_Y, &mut out);
    grad_gx.with_data(out)
}

/// Pulls a gradient on the Sobel magnitude back to the input image.
///
/// Where the magnitude vanishes the (sub)gradient is taken as zero.
pub fn sobel_magnitude_adjoint(resp: &SobelResponse, grad_mag: &ImageGrid) -> Result<ImageGrid> {
    if !resp.magnitude.same_shape(grad_mag) {
        return Err(Error::ShapeMismatch("magnitude gradient shape".into()));
    }
    let n = grad_mag.data().len();
    let (mut ggx, mut ggy) = (vec![0.0; n], vec![0.0; n]);
    for i in 0..n {
        let m = resp.magnitude.data()[i];
        if m > 0.0 {
            ggx[i] = grad_mag.data()[i] * resp.gx.data()[i] / m;
            ggy[i] = grad_mag.data()[i] * resp.gy.data()[i] / m;
        }
    }
    sobel_adjoint(&grad_mag.with_data(ggx)?, &grad_mag.with_data(ggy)?)
}
