use crate::error::{invalid, Error, Result};
use crate::grid::{BinaryMask, ImageGrid};

/// Additive smoothing in the Dice loss numerator and denominator.
pub const DICE_LOSS_SMOOTHING: f64 = 1.0;

/// Dice coefficient `2|A∩B| / (|A|+|B|)`; 1 when both masks are empty.
pub fn dice(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    check_shape(a, b)?;
    let inter = a.data().iter().zip(b.data()).filter(|(&x, &y)| x && y).count();
    let total = a.count() + b.count();
    if total == 0 {
        return Ok(1.0);
    }
    Ok(2.0 * inter as f64 / total as f64)
}

/// Smoothed soft Dice loss and its gradient with respect to `pred`.
///
/// `1 − (2Σ p·g + s) / (Σ p + Σ g + s)` with `s = 1`.
pub fn dice_loss(pred: &ImageGrid, gt: &BinaryMask) -> Result<(f64, Vec<f64>)> {
    if pred.width() != gt.width() || pred.height() != gt.height() {
        return Err(Error::ShapeMismatch(format!(
            "pred {}x{} vs gt {}x{}",
            pred.width(),
            pred.height(),
            gt.width(),
            gt.height()
        )));
    }
    if let Some((i, v)) = pred.data().iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
        return Err(invalid("pred", format!("value {v} at index {i} outside [0, 1]")));
    }
    let s = DICE_LOSS_SMOOTHING;
    let mut inter = 0.0;
    let mut psum = 0.0;
    for (&p, &g) in pred.data().iter().zip(gt.data()) {
        psum += p;
        if g {
            inter += p;
        }
    }
    let gsum = gt.count() as f64;
    let num = 2.0 * inter + s;
    let den = psum + gsum + s;
    let loss = 1.0 - num / den;
    let grad = gt
        .data()
        .iter()
        .map(|&g| {
            let dnum = if g { 2.0 } else { 0.0 };
            -(dnum * den - num) / (den * den)
        })
        .collect();
    Ok((loss, grad))
}

fn check_shape(a: &BinaryMask, b: &BinaryMask) -> Result<()> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip(w: usize, x0: usize, x1: usize) -> BinaryMask {
        BinaryMask::from_fn(w, 1, |x, _| (x0..x1).contains(&x)).unwrap()
    }

    #[test]
    fn dice_examples() {
        let a = strip(20, 0, 8);
        assert_eq!(dice(&a, &a).unwrap(), 1.0);
        assert_eq!(dice(&a, &strip(20, 10, 18)).unwrap(), 0.0);
        assert_eq!(dice(&a, &strip(20, 4, 12)).unwrap(), 0.5);
        let e = BinaryMask::empty(20, 1).unwrap();
        assert_eq!(dice(&e, &e).unwrap(), 1.0);
        assert!(matches!(dice(&a, &strip(21, 0, 8)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn dice_loss_plug_in() {
        let gt = BinaryMask::from_fn(30, 30, |x, y| x < 25 && y < 20).unwrap();
        let zero = ImageGrid::zeros(30, 30, 1.0).unwrap();
        let (l, _) = dice_loss(&zero, &gt).unwrap();
        assert!((l - (1.0 - 1.0 / 501.0)).abs() < 1e-15);
        let perfect = gt.to_grid(1.0).unwrap();
        let (l, _) = dice_loss(&perfect, &gt).unwrap();
        assert!((0.0..=1e-3).contains(&l));
    }

    #[test]
    fn dice_loss_rejects_out_of_range() {
        let gt = BinaryMask::empty(2, 2).unwrap();
        let p = ImageGrid::new(2, 2, 1.0, vec![0.0, 0.5, 1.2, 0.0]).unwrap();
        assert!(dice_loss(&p, &gt).is_err());
    }
}
