use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::grid::{BinaryMask, ImageGrid};
use crate::hough::HoughSpace;

use super::{dice_loss, ms_ssim_loss, MsSsimConfig};

/// Weights of the mask (Dice) and Hough (MS-SSIM) loss terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LossWeights {
    pub delta: f64,
    pub epsilon: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            delta: 1.0,
            epsilon: 1.0,
        }
    }
}

impl LossWeights {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("delta", self.delta), ("epsilon", self.epsilon)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("{v} must be nonnegative")));
            }
        }
        Ok(())
    }
}

/// Composite loss with its components and gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct LossBreakdown {
    pub total: f64,
    pub mask: f64,
    pub hough: f64,
    /// Gradient of `total` with respect to the soft mask prediction.
    pub grad_mask: Vec<f64>,
    /// Gradient of `total` with respect to the Hough prediction.
    pub grad_hough: Vec<f64>,
}

/// `delta · dice_loss + epsilon · ms_ssim_loss`.
pub fn total_loss(
    pred_mask: &ImageGrid,
    gt_mask: &BinaryMask,
    pred_hough: &HoughSpace,
    gt_hough: &HoughSpace,
    weights: &LossWeights,
    ssim: &MsSsimConfig,
) -> Result<LossBreakdown> {
    weights.validate()?;
    let (mask, gm) = dice_loss(pred_mask, gt_mask)?;
    let (hough, gh) = ms_ssim_loss(pred_hough, gt_hough, ssim)?;
    Ok(LossBreakdown {
        total: weights.delta * mask + weights.epsilon * hough,
        mask,
        hough,
        grad_mask: gm.into_iter().map(|g| weights.delta * g).collect(),
        grad_hough: gh.into_iter().map(|g| weights.epsilon * g).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hough::HoughShape;

    fn inputs() -> (ImageGrid, BinaryMask, HoughSpace, HoughSpace) {
        let gt = BinaryMask::from_fn(12, 12, |x, y| x > 3 && y < 9).unwrap();
        let pred = ImageGrid::from_fn(12, 12, 1.0, |x, y| ((x * 5 + y * 3) % 7) as f64 / 7.0).unwrap();
        let shape = HoughShape::new(20, 20, -10.0, 10.0).unwrap();
        let a: Vec<f64> = (0..400).map(|i| ((i * 13) % 17) as f64).collect();
        let b: Vec<f64> = (0..400).map(|i| ((i * 7) % 11) as f64).collect();
        (
            pred,
            gt,
            HoughSpace::new(shape, a).unwrap(),
            HoughSpace::new(shape, b).unwrap(),
        )
    }

    #[test]
    fn linear_in_weights() {
        let (p, g, ph, gh) = inputs();
        let cfg = MsSsimConfig { scales: 1, window: 7, sigma: 1.5 };
        let one = total_loss(&p, &g, &ph, &gh, &LossWeights::default(), &cfg).unwrap();
        assert_eq!(one.total, one.mask + one.hough);
        let zero = LossWeights { delta: 0.0, epsilon: 0.0 };
        assert_eq!(total_loss(&p, &g, &ph, &gh, &zero, &cfg).unwrap().total, 0.0);
        let w = LossWeights { delta: 2.5, epsilon: 0.5 };
        let r = total_loss(&p, &g, &ph, &gh, &w, &cfg).unwrap();
        assert!((r.total - (2.5 * one.mask + 0.5 * one.hough)).abs() < 1e-15);
    }

    #[test]
    fn negative_weight_rejected() {
        let (p, g, ph, gh) = inputs();
        let w = LossWeights { delta: -1.0, epsilon: 1.0 };
        assert!(total_loss(&p, &g, &ph, &gh, &w, &MsSsimConfig::default()).is_err());
    }
}
