//! Central finite-difference verification of analytic gradients, plus the
//! scalar energy functionals used to exercise each operator.

use crate::error::Result;
use crate::grid::ImageGrid;
use crate::hough::HoughShape;

use super::{
    gaussian_smooth, gaussian_smooth_adjoint, hough_adjoint, hough_forward, sobel, sobel_adjoint,
    GaussianKernelSpec,
};

/// Outcome of a finite-difference gradient comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheckReport {
    /// Largest per-entry relative error, see [`finite_difference_check`].
    pub max_rel_error: f64,
    pub max_abs_error: f64,
    pub worst_index: usize,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares `grad(input)` with central differences of `f` at every entry.
///
/// The relative error of entry `i` is `|fd_i − g_i| / max(|g_i|, |fd_i|, 1e-3·‖g‖∞)`;
/// the floor keeps entries whose true derivative is (near) zero from
/// dominating the report.
pub fn finite_difference_check<F, G>(
    f: F,
    grad: G,
    input: &[f64],
    step: f64,
    tolerance: f64,
) -> GradCheckReport
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let analytic = grad(input);
    assert_eq!(analytic.len(), input.len(), "gradient length mismatch");
    let scale = analytic.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let floor = (1e-3 * scale).max(f64::MIN_POSITIVE);
    let mut x = input.to_vec();
    let mut report = GradCheckReport {
        max_rel_error: 0.0,
        max_abs_error: 0.0,
        worst_index: 0,
        tolerance,
        passed: true,
    };
    for i in 0..x.len() {
        let orig = x[i];
        x[i] = orig + step;
        let fp = f(&x);
        x[i] = orig - step;
        let fm = f(&x);
        x[i] = orig;
        let fd = (fp - fm) / (2.0 * step);
        let abs = (fd - analytic[i]).abs();
        let rel = abs / analytic[i].abs().max(fd.abs()).max(floor);
        report.max_abs_error = report.max_abs_error.max(abs);
        if rel > report.max_rel_error {
            report.max_rel_error = rel;
            report.worst_index = i;
        }
    }
    report.passed = report.max_rel_error <= tolerance;
    report
}

/// `Σ |∇f|²` over the Sobel response, with its gradient `2·(Sxᵀgx + Syᵀgy)`.
pub fn sobel_energy(img: &ImageGrid) -> Result<(f64, Vec<f64>)> {
    let r = sobel(img)?;
    let value = r.magnitude.data().iter().map(|m| m * m).sum();
    let two = |g: &ImageGrid| g.with_data(g.data().iter().map(|v| 2.0 * v).collect());
    let grad = sobel_adjoint(&two(&r.gx)?, &two(&r.gy)?)?;
    Ok((value, grad.into_data()))
}

/// `Σ (G f)²` for Gaussian smoothing `G`, with gradient `2·Gᵀ(G f)`.
pub fn gaussian_energy(img: &ImageGrid, spec: &GaussianKernelSpec) -> Result<(f64, Vec<f64>)> {
    let s = gaussian_smooth(img, spec)?;
    let value = s.data().iter().map(|v| v * v).sum();
    let doubled = s.with_data(s.data().iter().map(|v| 2.0 * v).collect())?;
    Ok((value, gaussian_smooth_adjoint(&doubled, spec)?.into_data()))
}

/// `Σ (H f)²` for the Hough transform `H`, with gradient `2·Hᵀ(H f)`.
pub fn hough_energy(img: &ImageGrid, shape: &HoughShape) -> Result<(f64, Vec<f64>)> {
    let hs = hough_forward(img, shape)?;
    let value = hs.data().iter().map(|v| v * v).sum();
    let doubled = crate::hough::HoughSpace::new(*shape, hs.data().iter().map(|v| 2.0 * v).collect())?;
    let grad = hough_adjoint(&doubled, img.width(), img.height(), img.pixel_spacing())?;
    Ok((value, grad.into_data()))
}
