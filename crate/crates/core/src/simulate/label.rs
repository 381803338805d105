use crate::error::Result;
use crate::geometry::PolygonSpec;
use crate::hough::{HoughShape, HoughSpace};
use crate::operators::{smooth_raw, GaussianKernelSpec};

/// Hough-space ground truth: one unit impulse per edge at its bin, Gaussian
/// smoothed with `label_sigma` (in bins) and scaled to a peak of one.
pub fn make_hough_label(poly: &PolygonSpec, shape: &HoughShape, label_sigma: f64) -> Result<HoughSpace> {
    let spec = GaussianKernelSpec::new(label_sigma)?;
    let mut impulses = vec![0.0; shape.len()];
    for edge in &poly.edges {
        let (k, j) = shape.bins_from_line(edge)?;
        impulses[k * shape.n_rho + j] += 1.0;
    }
    if poly.edges.is_empty() {
        return HoughSpace::new(*shape, impulses);
    }
    let smoothed = smooth_raw(&impulses, shape.n_rho, shape.n_theta, &spec.weights());
    Ok(HoughSpace::new(*shape, smoothed)?.normalized_to_max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Line;

    #[test]
    fn no_edges_no_label() {
        let shape = HoughShape::for_image(64, 64).unwrap();
        let poly = PolygonSpec::new(vec![], (10.0, 10.0)).unwrap();
        let h = make_hough_label(&poly, &shape, 1.5).unwrap();
        assert!(h.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_edge_peaks_at_its_bin() {
        let shape = HoughShape::for_image(64, 64).unwrap();
        let edge = shape.line_from_bins(40, 70).unwrap();
        let poly = PolygonSpec::new(vec![edge], (5.0, 5.0)).unwrap();
        let h = make_hough_label(&poly, &shape, 1.5).unwrap();
        let (argmax, &max) = h
            .data()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert_eq!(max, 1.0);
        assert_eq!((argmax / shape.n_rho, argmax % shape.n_rho), (40, 70));
    }

    #[test]
    fn edge_outside_range_is_an_error() {
        let shape = HoughShape::for_image(16, 16).unwrap();
        let poly = PolygonSpec::new(vec![Line::new(0.3, 500.0).unwrap()], (1.0, 1.0)).unwrap();
        assert!(make_hough_label(&poly, &shape, 1.0).is_err());
    }
}
