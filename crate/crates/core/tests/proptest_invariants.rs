//! Randomized invariants: the developing map, the group action and the
//! angle intervals under arbitrary inputs.

use proptest::prelude::*;

use flatscan::geometry::AngleInterval;
use flatscan::surface::Placement;
use flatscan::{presets, sl2, Mat2, Vec2};

fn unimodular() -> impl Strategy<Value = Mat2> {
    // a, b, c free; d forced by det = 1 (a kept away from zero).
    (0.2f64..3.0, -2.0f64..2.0, -2.0f64..2.0, prop::bool::ANY).prop_map(|(a, b, c, flip)| {
        let a = if flip { -a } else { a };
        Mat2::new(a, b, c, (1.0 + b * c) / a)
    })
}

proptest! {
    #[test]
    fn crossing_an_edge_twice_is_the_identity(
        x in -100.0f64..100.0,
        y in -100.0f64..100.0,
        tri in 0usize..6,
        edge in 0usize..3,
    ) {
        let surface = presets::regular_octagon();
        let placement = Placement { tri, offset: Vec2::new(x, y) };
        let there = surface.cross_edge(placement, edge);
        let (_, partner) = surface.opposite(tri, edge);
        let back = surface.cross_edge(there, partner);
        prop_assert_eq!(back.tri, tri);
        let err = (back.offset - placement.offset).norm();
        prop_assert!(err <= 1e-12 * (1.0 + placement.offset.norm()));
    }

    #[test]
    fn action_composes_right_to_left(m1 in unimodular(), m2 in unimodular()) {
        let surface = presets::square_torus();
        let stepwise = sl2::apply(&sl2::apply(&surface, m1).unwrap(), m2).unwrap();
        let product = sl2::apply(&surface, m2 * m1).unwrap();
        for (a, b) in stepwise.triangles().iter().zip(product.triangles()) {
            for e in 0..3 {
                let rel = (a.edges[e] - b.edges[e]).norm() / (1.0 + b.edges[e].norm());
                prop_assert!(rel <= 1e-12);
            }
        }
    }

    #[test]
    fn unimodular_action_preserves_area(m in unimodular()) {
        // One hundred cases by default configuration.
        let surface = presets::regular_octagon();
        let image = sl2::apply(&surface, m).unwrap();
        let rel = (image.area() - surface.area()).abs() / surface.area();
        prop_assert!(rel <= 1e-9, "area changed by {}", rel);
    }

    #[test]
    fn interval_partition_covers_each_angle_once(
        angle in 0.0f64..std::f64::consts::TAU,
        cut1 in 0.1f64..3.0,
        cut2 in 3.2f64..6.2,
    ) {
        let parts = [
            AngleInterval::new(0.0, cut1).unwrap(),
            AngleInterval::new(cut1, cut2).unwrap(),
            AngleInterval::new(cut2, std::f64::consts::TAU).unwrap(),
        ];
        let hits = parts.iter().filter(|i| i.contains(angle)).count();
        prop_assert_eq!(hits, 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn circle_average_is_rotation_invariant(phi in 0.0f64..6.28, t in 0.0f64..2.5) {
        let v = Vec2::new(1.0, 0.0);
        let base = flatscan::stats::vector_circle_average(v, t, 0.25).unwrap();
        let rotated =
            flatscan::stats::vector_circle_average(Mat2::rotation(phi).apply(v), t, 0.25).unwrap();
        prop_assert!((rotated - base).abs() <= 1e-6 * base);
    }
}
