use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::geometry::PolygonSpec;
use crate::grid::ImageGrid;
use crate::operators::{gaussian_smooth, GaussianKernelSpec};

use super::SimulationConfig;

/// The ROI indicator blurred by the penumbra kernel, clamped to `[0, 1]`.
pub fn blurred_roi(poly: &PolygonSpec, base: &ImageGrid, edge_blur_sigma: f64) -> Result<ImageGrid> {
    let roi = poly
        .roi_mask(base.width(), base.height())?
        .to_grid(base.pixel_spacing())?;
    if edge_blur_sigma <= 0.0 {
        return Ok(roi);
    }
    let m = gaussian_smooth(&roi, &GaussianKernelSpec::new(edge_blur_sigma)?)?;
    m.with_data(m.data().iter().map(|v| v.clamp(0.0, 1.0)).collect())
}

/// Casts a collimator shadow onto `base`.
///
/// With `m` the blurred ROI indicator and `α` the blade transmission:
/// `out = base·(α + (1−α)·m) + scatter·(1−m)`, where the scatter field is a
/// smoothed uniform noise field rescaled to `[0, 1]` and multiplied by
/// `scatter_amplitude · mean(base over ROI)`. When `photon_scale` is set,
/// every pixel is then replaced by a Poisson draw with mean
/// `out·photon_scale/max(base)`, divided back by the same factor.
pub fn apply_collimation<R: Rng + ?Sized>(
    base: &ImageGrid,
    poly: &PolygonSpec,
    cfg: &SimulationConfig,
    rng: &mut R,
) -> Result<ImageGrid> {
    if let Some((index, &value)) = base.data().iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::NegativeValue { index, value });
    }
    let (w, h) = (base.width(), base.height());
    let alpha = cfg.transmission;
    let m = blurred_roi(poly, base, cfg.edge_blur_sigma)?;
    let mut out: Vec<f64> = base
        .data()
        .iter()
        .zip(m.data())
        .map(|(b, m)| b * (alpha + (1.0 - alpha) * m))
        .collect();

    if cfg.scatter_amplitude > 0.0 {
        let roi = poly.roi_mask(w, h)?;
        let n_roi = roi.count();
        let roi_mean = if n_roi == 0 {
            0.0
        } else {
            roi.iter_set().map(|(x, y)| base.get(x, y)).sum::<f64>() / n_roi as f64
        };
        let noise: Vec<f64> = (0..w * h).map(|_| rng.random::<f64>()).collect();
        let field = gaussian_smooth(
            &base.with_data(noise)?,
            &GaussianKernelSpec::new(cfg.scatter_sigma)?,
        )?;
        let (lo, hi) = field
            .data()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let span = if hi > lo { hi - lo } else { 1.0 };
        let gain = cfg.scatter_amplitude * roi_mean;
        for ((o, f), m) in out.iter_mut().zip(field.data()).zip(m.data()) {
            *o += gain * (f - lo) / span * (1.0 - m);
        }
    }

    if let Some(photons) = cfg.photon_scale {
        let peak = base.max();
        if peak > 0.0 {
            let scale = photons / peak;
            for o in out.iter_mut() {
                let mean = *o * scale;
                *o = if mean > 0.0 {
                    let dist = Poisson::new(mean).map_err(|e| Error::InvalidParameter {
                        name: "photon_scale",
                        reason: e.to_string(),
                    })?;
                    dist.sample(rng) / scale
                } else {
                    0.0
                };
            }
        }
    }
    base.with_data(out)
}
