use std::f64::consts::PI;

use lineshape::reconstruct::lines_to_mask;
use lineshape::{mask_centroid, BinaryMask, HoughShape, Line, PolygonSpec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn line_bin_round_trip(theta in 0.0f64..PI, frac in 0.0f64..1.0) {
        let shape = HoughShape::for_image(256, 256).unwrap();
        let rho = shape.rho_min + frac * (shape.rho_max - shape.rho_min);
        let line = Line::new(theta, rho).unwrap();
        let (k, j) = shape.bins_from_line(&line).unwrap();
        let back = shape.line_from_bins(k, j).unwrap();
        prop_assert!((back.theta - line.theta).abs() <= shape.theta_step() / 2.0 + 1e-12);
        prop_assert!((back.rho - line.rho).abs() <= shape.rho_step() / 2.0 + 1e-12);
        prop_assert_eq!(shape.bins_from_line(&back).unwrap(), (k, j));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalized_lines_describe_the_same_points(theta in -10.0f64..10.0, rho in -50.0f64..50.0) {
        let n = Line::normalized(theta, rho);
        prop_assert!((0.0..PI).contains(&n.theta));
        for &(x, y) in &[(0.0, 0.0), (3.0, -7.0), (12.5, 4.0)] {
            let d = x * theta.cos() + y * theta.sin() - rho;
            prop_assert!((n.signed_distance(x, y).abs() - d.abs()).abs() < 1e-9);
        }
    }

    #[test]
    fn centroid_inside_bounding_box(bits in prop::collection::vec(any::<bool>(), 48)) {
        let mask = BinaryMask::new(8, 6, bits).unwrap();
        match mask_centroid(&mask) {
            Ok((cx, cy)) => {
                let xs: Vec<usize> = mask.iter_set().map(|p| p.0).collect();
                let ys: Vec<usize> = mask.iter_set().map(|p| p.1).collect();
                prop_assert!(cx >= *xs.iter().min().unwrap() as f64 && cx <= *xs.iter().max().unwrap() as f64);
                prop_assert!(cy >= *ys.iter().min().unwrap() as f64 && cy <= *ys.iter().max().unwrap() as f64);
            }
            Err(_) => prop_assert!(mask.is_empty()),
        }
    }

    #[test]
    fn roi_mask_equals_fill_for_one_line(t in 0.0f64..PI, p in 5.0f64..55.0) {
        let (c, r) = (30.0, 30.0);
        let edge = Line::normalized(t, p * t.cos() + (60.0 - p) * t.sin());
        prop_assume!(edge.signed_distance(c, r).abs() > 1.0);
        let poly = PolygonSpec::new(vec![edge], (c, r)).unwrap();
        let roi = poly.roi_mask(60, 60).unwrap();
        let fill = lines_to_mask(&[edge], (c, r), 60, 60).unwrap();
        prop_assert_eq!(roi, fill);
    }

    #[test]
    fn roi_mask_and_fill_differ_only_at_corners(
        t1 in 0.1f64..3.0, t2 in 0.1f64..3.0,
        p1 in 10.0f64..50.0, p2 in 10.0f64..50.0,
    ) {
        // Near a corner the per-edge ROI rule can keep pixels that lie on a
        // digital line and have no free 4-neighbour, or a wedge tip too thin
        // to stay 4-connected. Away from the corner the two agree exactly.
        let (c, r) = (30.0, 30.0);
        let through = |t: f64, p: f64| Line::normalized(t, p * t.cos() + (60.0 - p) * t.sin());
        let edges = vec![through(t1, p1), through(t2, p2)];
        prop_assume!(edges.iter().all(|e| e.signed_distance(c, r).abs() > 1.0));
        let turn = (edges[0].theta - edges[1].theta).abs();
        let turn = turn.min(PI - turn);
        prop_assume!(turn >= 20f64.to_radians());
        let (s0, c0) = edges[0].theta.sin_cos();
        let (s1, c1) = edges[1].theta.sin_cos();
        let det = c0 * s1 - s0 * c1;
        let corner = (
            (edges[0].rho * s1 - edges[1].rho * s0) / det,
            (c0 * edges[1].rho - c1 * edges[0].rho) / det,
        );
        let reach = 1.5 / (turn / 2.0).tan() + 1.5;
        let poly = PolygonSpec::new(edges.clone(), (c, r)).unwrap();
        let roi = poly.roi_mask(60, 60).unwrap();
        let fill = lines_to_mask(&edges, (c, r), 60, 60).unwrap();
        for y in 0..60 {
            for x in 0..60 {
                if roi.get(x, y) == fill.get(x, y) {
                    continue;
                }
                prop_assert!(roi.get(x, y), "fill leaked to ({}, {})", x, y);
                let d = (x as f64 - corner.0).hypot(y as f64 - corner.1);
                prop_assert!(d <= reach, "({}, {}) is {} from the corner", x, y, d);
            }
        }
    }
}

#[test]
fn chord_endpoints_lie_on_line_and_border() {
    let line = Line::normalized(0.4, 20.0);
    let ((x0, y0), (x1, y1)) = line.chord(64, 48).unwrap();
    for (x, y) in [(x0, y0), (x1, y1)] {
        assert!(line.signed_distance(x, y).abs() < 1e-9);
        let on_border = [x + 0.5, y + 0.5, 63.5 - x, 47.5 - y]
            .iter()
            .any(|d| d.abs() < 1e-9);
        assert!(on_border, "({x}, {y})");
    }
    assert!(Line::normalized(0.0, 500.0).chord(64, 48).is_none());
}
