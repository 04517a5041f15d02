//! Straight segments on a surface and their crossings with saddle
//! connections.
//!
//! A [`SurfaceSegment`] is a straight geodesic segment given by a base
//! point inside a named triangle and a planar displacement. Developing it
//! across edges breaks it into one straight piece per triangle, and
//! transverse crossings with a saddle connection are counted piecewise in
//! each triangle, deduplicating crossings that land exactly on a shared
//! edge.

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::scan::SaddleConnection;
use crate::surface::{Placement, TranslationSurface};

/// Perpendicular tolerance for a traced segment passing through a vertex.
const SINGULARITY_TOL: f64 = 1e-9;

/// A straight segment on the surface: from `start` (in the local frame of
/// triangle `tri`, vertex 0 at the origin) along `displacement`.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceSegment {
    pub tri: usize,
    pub start: Vec2,
    pub displacement: Vec2,
}

impl SurfaceSegment {
    pub fn length(&self) -> f64 {
        self.displacement.norm()
    }

    /// Develops the segment and returns one straight piece per triangle
    /// crossed, in triangle-local coordinates.
    ///
    /// Fails with [`Error::SegmentHitsSingularity`] when the closed
    /// segment passes through a cone point, and with
    /// [`Error::InvalidSegment`] when the base point is not inside its
    /// triangle.
    pub fn trace(&self, surface: &TranslationSurface) -> Result<Vec<(usize, Vec2, Vec2)>> {
        let disp = self.displacement;
        if disp.norm() == 0.0 {
            return Err(Error::InvalidSegment("zero displacement".into()));
        }
        let tri0 = &surface.triangles()[self.tri];
        if !point_in_triangle(self.start, tri0) {
            return Err(Error::InvalidSegment(format!(
                "base point ({}, {}) is outside triangle {}",
                self.start.x, self.start.y, self.tri
            )));
        }

        // Develop with the base point at the origin; the segment is then
        // the straight chord from 0 to `disp`, parameter in [0, 1].
        let mut placement = Placement {
            tri: self.tri,
            offset: -self.start,
        };
        let mut entry: Option<usize> = None;
        // A base point lying on an edge with the displacement pointing
        // out of the triangle really starts in the neighbor.
        for _ in 0..2 {
            let tri = &surface.triangles()[placement.tri];
            let scale = tri.longest_edge();
            let mut crossed = false;
            for e in 0..3 {
                let a = placement.vertex(surface, e);
                let b = placement.vertex(surface, e + 1);
                let on_edge = (b - a).cross(-a).abs() <= 1e-12 * scale * scale;
                if on_edge && (b - a).cross(disp) < 0.0 {
                    let from = placement.tri;
                    placement = surface.cross_edge(placement, e);
                    entry = Some(surface.opposite(from, e).1);
                    crossed = true;
                    break;
                }
            }
            if !crossed {
                break;
            }
        }
        let mut out = Vec::new();
        let mut tau_in = 0.0f64;
        let vertex_tol = SINGULARITY_TOL;

        loop {
            let _tri = &surface.triangles()[placement.tri];
            // Any vertex of the current triangle on the chord is a
            // singularity hit.
            for i in 0..3 {
                let w = placement.vertex(surface, i);
                let t_w = disp.dot(w) / disp.norm_sq();
                if disp.cross(w).abs() <= vertex_tol * disp.norm()
                    && (-1e-12..=1.0 + 1e-12).contains(&t_w)
                {
                    return Err(Error::SegmentHitsSingularity);
                }
            }

            // Exit crossing: smallest chord parameter beyond the entry.
            let mut exit: Option<(f64, usize)> = None;
            for e in 0..3 {
                if Some(e) == entry {
                    continue;
                }
                let a = placement.vertex(surface, e);
                let b = placement.vertex(surface, e + 1);
                let denom = disp.cross(b - a);
                if denom.abs() < 1e-15 {
                    continue;
                }
                let tau = a.cross(b - a) / denom;
                let u = (disp * tau - a).dot(b - a) / (b - a).norm_sq();
                if tau > tau_in + 1e-12
                    && (-1e-9..=1.0 + 1e-9).contains(&u)
                    && exit.map_or(true, |(t, _)| tau < t)
                {
                    exit = Some((tau, e));
                }
            }

            match exit {
                Some((tau, e)) if tau < 1.0 => {
                    out.push((
                        placement.tri,
                        disp * tau_in - placement.offset,
                        disp * tau - placement.offset,
                    ));
                    placement = surface.cross_edge(placement, e);
                    let (_, e2) = surface.opposite(out.last().unwrap().0, e);
                    entry = Some(e2);
                    tau_in = tau;
                }
                _ => {
                    // Ends inside the current triangle.
                    out.push((
                        placement.tri,
                        disp * tau_in - placement.offset,
                        disp - placement.offset,
                    ));
                    return Ok(out);
                }
            }
        }
    }
}

/// Counts transverse crossings of a saddle connection with a straight
/// segment, both taken without their endpoints.
///
/// The count is bounded by `|s| ((|a| + 1) / systole)^2` for any segment
/// `a` not parallel to `s`; the test suites exercise that bound.
pub fn count_intersections(
    surface: &TranslationSurface,
    s: &SaddleConnection,
    a: &SurfaceSegment,
) -> Result<usize> {
    let cross = s.holonomy.cross(a.displacement).abs();
    if cross <= 1e-12 * s.length() * a.length() {
        return Err(Error::ParallelInput);
    }
    let segs_a = a.trace(surface)?;
    let segs_s = s.triangle_segments(surface);

    // Cumulative arc length lets each crossing be keyed by its position
    // along s, which collapses crossings seen from both sides of a
    // triangulation edge.
    let mut cum_s = Vec::with_capacity(segs_s.len());
    let mut acc = 0.0;
    for (_, p, q) in &segs_s {
        cum_s.push(acc);
        acc += (*q - *p).norm();
    }
    let mut cum_a = Vec::with_capacity(segs_a.len());
    let mut acc_a = 0.0;
    for (_, p, q) in &segs_a {
        cum_a.push(acc_a);
        acc_a += (*q - *p).norm();
    }
    let (len_s, len_a) = (s.length(), a.length());

    let mut positions: Vec<f64> = Vec::new();
    for (i, (tri_s, p, q)) in segs_s.iter().enumerate() {
        let r = *q - *p;
        for (j, (tri_a, m, n)) in segs_a.iter().enumerate() {
            if tri_a != tri_s {
                continue;
            }
            let d = *n - *m;
            let denom = r.cross(d);
            if denom.abs() < 1e-15 {
                continue;
            }
            let t = (*m - *p).cross(d) / denom;
            let u = (*m - *p).cross(r) / denom;
            if !(-1e-9..=1.0 + 1e-9).contains(&t) || !(-1e-9..=1.0 + 1e-9).contains(&u) {
                continue;
            }
            // Positions along the full s and a, excluding endpoints.
            let pos_s = cum_s[i] + t.clamp(0.0, 1.0) * r.norm();
            let pos_a = cum_a[j] + u.clamp(0.0, 1.0) * d.norm();
            let eps = 1e-9;
            if pos_s <= eps * len_s || pos_s >= len_s * (1.0 - eps) {
                continue;
            }
            if pos_a <= eps * len_a || pos_a >= len_a * (1.0 - eps) {
                continue;
            }
            positions.push(pos_s);
        }
    }
    positions.sort_by(f64::total_cmp);
    let mut count = 0;
    let mut last = f64::NEG_INFINITY;
    for pos in positions {
        if pos - last > 1e-9 * len_s.max(1.0) {
            count += 1;
            last = pos;
        }
    }
    Ok(count)
}

fn point_in_triangle(p: Vec2, tri: &crate::surface::Triangle) -> bool {
    let eps = -1e-12 * tri.longest_edge().powi(2);
    (0..3).all(|i| {
        let a = tri.vertex(i);
        let b = tri.vertex(i + 1);
        (b - a).cross(p - a) >= eps
    })
}
