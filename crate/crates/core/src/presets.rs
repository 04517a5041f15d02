//! Ready-made sample surfaces used by the CLI, the tests and the docs.

use std::f64::consts::PI;

use crate::geometry::Vec2;
use crate::surface::{SurfaceDescription, TranslationSurface};

/// Unit square with opposite sides glued: the flat torus with one marked
/// point of cone angle 2pi and area 1.
pub fn square_torus_description() -> SurfaceDescription {
    SurfaceDescription {
        polygons: vec![vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, -1.0),
        ]],
        gluings: vec![((0, 0), (0, 2)), ((0, 1), (0, 3))],
    }
}

pub fn square_torus() -> TranslationSurface {
    TranslationSurface::build(square_torus_description()).expect("square torus is valid")
}

/// Regular octagon with unit sides and opposite sides glued: genus two,
/// one cone point of angle 6pi, area 2(1 + sqrt 2).
pub fn regular_octagon_description() -> SurfaceDescription {
    let edges: Vec<Vec2> = (0..8)
        .map(|k| {
            let a = k as f64 * PI / 4.0;
            Vec2::new(a.cos(), a.sin())
        })
        .collect();
    // Opposite sides have exactly negated vectors up to rounding; negate
    // explicitly so gluings match bit for bit.
    let mut polygons = vec![edges];
    for k in 0..4 {
        let v = polygons[0][k];
        polygons[0][k + 4] = -v;
    }
    SurfaceDescription {
        polygons,
        gluings: (0..4).map(|k| ((0, k), (0, k + 4))).collect(),
    }
}

pub fn regular_octagon() -> TranslationSurface {
    TranslationSurface::build(regular_octagon_description()).expect("regular octagon is valid")
}
