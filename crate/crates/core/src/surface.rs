//! Translation surfaces as complexes of Euclidean triangles glued
//! edge-to-edge by translations.
//!
//! A surface is built from a [`SurfaceDescription`]: a list of polygons,
//! each given by its edge vectors in counterclockwise order, and a list of
//! gluings pairing polygon edges whose vectors are exact negatives. The
//! polygons are ear-clipped into triangles; all geometric queries run on
//! the triangulated complex. The triangulation is an implementation
//! detail: triangles remember which polygon they came from and where they
//! sit inside it, so results can always be reported in the coordinates of
//! the defining polygons.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Validation tolerances for surface construction.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Absolute tolerance on glued edge vectors matching as negatives.
    pub glue: f64,
    /// Absolute tolerance (radians) on vertex links closing to a multiple
    /// of 2pi.
    pub angle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            glue: 1e-9,
            angle: 1e-9,
        }
    }
}

/// One side of a polygon in a [`SurfaceDescription`].
pub type PolyEdge = (usize, usize);

/// Polygon presentation of a translation surface: edge vectors per polygon
/// (counterclockwise, summing to zero) plus a pairing of the sides.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceDescription {
    pub polygons: Vec<Vec<Vec2>>,
    pub gluings: Vec<(PolyEdge, PolyEdge)>,
}

/// A Euclidean triangle, stored as its three edge vectors in
/// counterclockwise order. Vertex `i` is the tail of edge `i`.
#[derive(Clone, Copy, Debug)]
pub struct Triangle {
    pub edges: [Vec2; 3],
}

impl Triangle {
    /// Position of vertex `i` in the triangle's model frame (vertex 0 at
    /// the origin).
    pub fn vertex(&self, i: usize) -> Vec2 {
        match i % 3 {
            0 => Vec2::ZERO,
            1 => self.edges[0],
            _ => self.edges[0] + self.edges[1],
        }
    }

    pub fn area(&self) -> f64 {
        0.5 * self.edges[0].cross(self.edges[1])
    }

    /// Interior angle at vertex `i`, in `(0, pi)`.
    pub fn corner_angle(&self, i: usize) -> f64 {
        let out = self.edges[i % 3];
        let inward = -self.edges[(i + 2) % 3];
        let a = out.cross(inward).atan2(out.dot(inward));
        debug_assert!(a > 0.0);
        a
    }

    pub fn longest_edge(&self) -> f64 {
        self.edges.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }
}

/// A cone point: one vertex class of the glued complex.
///
/// The total angle is a positive integer multiple `2pi k`; `k = 1` marks a
/// regular (marked) point, which is treated like any other singularity.
#[derive(Clone, Debug)]
pub struct ConePoint {
    pub id: usize,
    /// Total angle around the vertex class, in radians.
    pub angle: f64,
    /// `angle / 2pi`, rounded to the nearest integer.
    pub turns: usize,
    /// Incident triangle corners `(triangle, vertex)` in counterclockwise
    /// cyclic order around the point, starting from the lowest corner.
    pub corners: Vec<(u32, u8)>,
    /// Cumulative angle at the start of each corner in `corners`.
    pub corner_base: Vec<f64>,
}

impl ConePoint {
    /// Order of the zero: `turns - 1`. Zero for marked regular points.
    pub fn order(&self) -> usize {
        self.turns - 1
    }
}

/// A triangle of the complex developed into the plane: the model triangle
/// translated by `offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Placement {
    pub tri: usize,
    pub offset: Vec2,
}

impl Placement {
    pub fn vertex(&self, surface: &TranslationSurface, i: usize) -> Vec2 {
        self.offset + surface.triangles[self.tri].vertex(i)
    }
}

/// A triangulated flat surface: the single source of geometric truth for
/// every operation in this crate. Immutable after construction.
#[derive(Clone, Debug)]
pub struct TranslationSurface {
    triangles: Vec<Triangle>,
    /// Edge pairing: `opposite[t][e]` is the (triangle, edge) glued to
    /// edge `e` of triangle `t`.
    opposite: Vec<[(u32, u8); 3]>,
    /// Polygon of origin for each triangle.
    tri_polygon: Vec<u32>,
    /// Position of each triangle's vertex 0 in its polygon's plane.
    tri_anchor: Vec<Vec2>,
    /// Vertex class of each corner: `corner_class[t][v]` is a cone id.
    corner_class: Vec<[u32; 3]>,
    cone_points: Vec<ConePoint>,
    description: SurfaceDescription,
    tolerances: Tolerances,
}

impl TranslationSurface {
    /// Builds a surface from a polygon description with default
    /// tolerances, verifying all structural invariants.
    pub fn build(description: SurfaceDescription) -> Result<Self> {
        Self::build_with(description, Tolerances::default())
    }

    pub fn build_with(description: SurfaceDescription, tol: Tolerances) -> Result<Self> {
        validate_description(&description, tol)?;

        let mut triangles = Vec::new();
        let mut tri_polygon = Vec::new();
        let mut tri_anchor = Vec::new();
        // (poly, orig edge) -> (tri, edge)
        let mut boundary_side: HashMap<(usize, usize), (u32, u8)> = HashMap::new();
        // diagonal id -> sides seen so far
        let mut diagonal_sides: Vec<Vec<(u32, u8)>> = Vec::new();

        for (poly_id, edges) in description.polygons.iter().enumerate() {
            let ears = ear_clip(edges)
                .map_err(|msg| Error::TriangulationFailed(format!("polygon {poly_id}: {msg}")))?;
            // Diagonal ids are local to each polygon's clipping.
            let diag_base = diagonal_sides.len();
            for ear in ears {
                let t = triangles.len() as u32;
                triangles.push(Triangle { edges: ear.edges });
                tri_polygon.push(poly_id as u32);
                tri_anchor.push(ear.anchor);
                for (side, label) in ear.labels.iter().enumerate() {
                    match *label {
                        SideLabel::Boundary(orig) => {
                            boundary_side.insert((poly_id, orig), (t, side as u8));
                        }
                        SideLabel::Diagonal(d) => {
                            let d = diag_base + d;
                            while diagonal_sides.len() <= d {
                                diagonal_sides.push(Vec::new());
                            }
                            diagonal_sides[d].push((t, side as u8));
                        }
                    }
                }
            }
        }

        // Edge pairing: internal diagonals pair with themselves, boundary
        // sides follow the description's gluings.
        let mut opposite = vec![[(u32::MAX, 0u8); 3]; triangles.len()];
        let mut set_pair = |a: (u32, u8), b: (u32, u8)| {
            opposite[a.0 as usize][a.1 as usize] = b;
            opposite[b.0 as usize][b.1 as usize] = a;
        };
        for sides in &diagonal_sides {
            debug_assert_eq!(sides.len(), 2);
            set_pair(sides[0], sides[1]);
        }
        for &(ea, eb) in &description.gluings {
            let a = boundary_side[&(ea.0, ea.1)];
            let b = boundary_side[&(eb.0, eb.1)];
            set_pair(a, b);
        }

        // Glued triangle edges must be negatives within tolerance. The
        // description-level check already enforced this for boundary
        // sides; diagonals match exactly by construction, so this is a
        // consistency sweep over the assembled complex.
        for (t, tri) in triangles.iter().enumerate() {
            for e in 0..3 {
                let (t2, e2) = opposite[t][e];
                if t2 == u32::MAX {
                    return Err(Error::GluingMismatch(format!(
                        "triangle {t} edge {e} is unpaired"
                    )));
                }
                let v = tri.edges[e];
                let w = triangles[t2 as usize].edges[e2 as usize];
                if (v + w).norm() > tol.glue {
                    return Err(Error::GluingMismatch(format!(
                        "triangle {t} edge {e} does not match its partner: ({}, {}) vs ({}, {})",
                        v.x, v.y, w.x, w.y
                    )));
                }
            }
        }

        // Connectivity of the glued complex.
        let mut uf = UnionFind::new(triangles.len());
        for (t, opp) in opposite.iter().enumerate() {
            for &(t2, _) in opp {
                uf.union(t, t2 as usize);
            }
        }
        let components = uf.count();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }

        // Vertex classes: gluing edge e of t to edge e2 of t2 identifies
        // the tail of one with the head of the other.
        let mut cuf = UnionFind::new(3 * triangles.len());
        let cid = |t: usize, v: usize| 3 * t + (v % 3);
        for (t, opp) in opposite.iter().enumerate() {
            for (e, &(t2, e2)) in opp.iter().enumerate() {
                let (t2, e2) = (t2 as usize, e2 as usize);
                cuf.union(cid(t, e), cid(t2, e2 + 1));
                cuf.union(cid(t, e + 1), cid(t2, e2));
            }
        }

        let mut class_of_root: HashMap<usize, u32> = HashMap::new();
        let mut corner_class = vec![[0u32; 3]; triangles.len()];
        let mut class_corners: Vec<Vec<(u32, u8)>> = Vec::new();
        for t in 0..triangles.len() {
            for v in 0..3 {
                let root = cuf.find(cid(t, v));
                let next = class_corners.len() as u32;
                let id = *class_of_root.entry(root).or_insert(next);
                if id == next {
                    class_corners.push(Vec::new());
                }
                corner_class[t][v] = id;
                class_corners[id as usize].push((t as u32, v as u8));
            }
        }

        let mut surface = TranslationSurface {
            triangles,
            opposite,
            tri_polygon,
            tri_anchor,
            corner_class,
            cone_points: Vec::new(),
            description,
            tolerances: tol,
        };
        surface.cone_points = surface.derive_cone_points(&class_corners)?;
        Ok(surface)
    }

    /// Walks each vertex class counterclockwise and checks that the link
    /// closes to a positive multiple of 2pi.
    fn derive_cone_points(&self, class_corners: &[Vec<(u32, u8)>]) -> Result<Vec<ConePoint>> {
        let mut cones = Vec::with_capacity(class_corners.len());
        for (id, members) in class_corners.iter().enumerate() {
            let start = *members.iter().min().unwrap();
            let mut corners = Vec::with_capacity(members.len());
            let mut corner_base = Vec::with_capacity(members.len());
            let mut total = 0.0;
            let mut cur = start;
            loop {
                corners.push(cur);
                corner_base.push(total);
                total += self.triangles[cur.0 as usize].corner_angle(cur.1 as usize);
                cur = self.next_corner_ccw(cur.0 as usize, cur.1 as usize);
                if cur == start {
                    break;
                }
                if corners.len() > members.len() {
                    return Err(Error::BadConeAngle { angle: total });
                }
            }
            if corners.len() != members.len() {
                return Err(Error::BadConeAngle { angle: total });
            }
            let turns = (total / TAU).round();
            if turns < 1.0 || (total - turns * TAU).abs() > self.tolerances.angle {
                return Err(Error::BadConeAngle { angle: total });
            }
            cones.push(ConePoint {
                id,
                angle: total,
                turns: turns as usize,
                corners,
                corner_base,
            });
        }
        Ok(cones)
    }

    /// The next corner counterclockwise around the same vertex class:
    /// cross the edge arriving at the vertex.
    pub fn next_corner_ccw(&self, tri: usize, vertex: usize) -> (u32, u8) {
        let incoming = (vertex + 2) % 3;
        self.opposite[tri][incoming]
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// The (triangle, edge) glued to edge `e` of triangle `t`.
    pub fn opposite(&self, t: usize, e: usize) -> (usize, usize) {
        let (t2, e2) = self.opposite[t][e % 3];
        (t2 as usize, e2 as usize)
    }

    pub fn cone_points(&self) -> &[ConePoint] {
        &self.cone_points
    }

    /// Vertex class of corner `(t, v)`.
    pub fn corner_cone(&self, t: usize, v: usize) -> usize {
        self.corner_class[t][v % 3] as usize
    }

    /// Polygon of origin of a triangle.
    pub fn triangle_polygon(&self, t: usize) -> usize {
        self.tri_polygon[t] as usize
    }

    /// Position of triangle `t`'s vertex 0 in its polygon's plane.
    pub fn triangle_anchor(&self, t: usize) -> Vec2 {
        self.tri_anchor[t]
    }

    pub fn description(&self) -> &SurfaceDescription {
        &self.description
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances
    }

    /// Flat area: the sum of the triangle areas.
    pub fn area(&self) -> f64 {
        self.triangles.iter().map(|t| t.area()).sum()
    }

    /// Euler characteristic of the glued complex.
    pub fn euler_characteristic(&self) -> i64 {
        let f = self.triangles.len() as i64;
        let v = self.cone_points.len() as i64;
        // Each of the 3F triangle sides is half of a glued edge.
        v - 3 * f / 2 + f
    }

    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    /// Rebuilds the surface with every vector mapped through `f`, keeping
    /// the combinatorics. `f` must be linear and orientation preserving.
    pub(crate) fn map_vectors(&self, f: impl Fn(Vec2) -> Vec2) -> Result<TranslationSurface> {
        let description = SurfaceDescription {
            polygons: self
                .description
                .polygons
                .iter()
                .map(|p| p.iter().map(|&e| f(e)).collect())
                .collect(),
            gluings: self.description.gluings.clone(),
        };
        let triangles: Vec<Triangle> = self
            .triangles
            .iter()
            .map(|t| Triangle {
                edges: [f(t.edges[0]), f(t.edges[1]), f(t.edges[2])],
            })
            .collect();
        let tri_anchor: Vec<Vec2> = self.tri_anchor.iter().map(|&a| f(a)).collect();

        let mut out = TranslationSurface {
            triangles,
            opposite: self.opposite.clone(),
            tri_polygon: self.tri_polygon.clone(),
            tri_anchor,
            corner_class: self.corner_class.clone(),
            cone_points: Vec::new(),
            description,
            tolerances: self.tolerances,
        };
        let class_corners: Vec<Vec<(u32, u8)>> = self
            .cone_points
            .iter()
            .map(|c| c.corners.clone())
            .collect();
        out.cone_points = out.derive_cone_points(&class_corners)?;
        Ok(out)
    }

    /// Scales every length by `s > 0`.
    pub fn scaled(&self, s: f64) -> TranslationSurface {
        self.map_vectors(|v| v * s)
            .expect("scaling preserves validity")
    }

    /// Rescales the surface to unit area.
    pub fn normalized(&self) -> TranslationSurface {
        self.scaled(1.0 / self.area().sqrt())
    }

    /// Develops the triangle adjacent to `placement.tri` across `edge`:
    /// the returned placement puts the two copies of the glued edge on the
    /// same planar segment, point for point.
    pub fn cross_edge(&self, placement: Placement, edge: usize) -> Placement {
        let (t2, e2) = self.opposite(placement.tri, edge);
        let head = placement.vertex(self, edge + 1);
        let offset = head - self.triangles[t2].vertex(e2);
        Placement { tri: t2, offset }
    }

    /// A crude upper bound for the diameter, used to scale path budgets.
    pub fn diameter_bound(&self) -> f64 {
        self.triangles.iter().map(|t| t.longest_edge()).sum()
    }

    /// Hash of the geometry, used to tie scan results to a surface.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for t in &self.triangles {
            for e in &t.edges {
                e.x.to_bits().hash(&mut h);
                e.y.to_bits().hash(&mut h);
            }
        }
        for opp in &self.opposite {
            opp.hash(&mut h);
        }
        h.finish()
    }

    /// Interior angle swept from the low boundary edge of corner `(t, v)`
    /// to `dir`, used to index outgoing directions around a cone point.
    pub fn angle_in_corner(&self, t: usize, v: usize, dir: Vec2) -> f64 {
        let low = self.triangles[t].edges[v % 3];
        let a = low.cross(dir).atan2(low.dot(dir));
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    }

    /// The 2pi-sector index (in `0..k`) of direction `dir` leaving the
    /// cone point through corner `(t, v)`.
    pub fn sector_index(&self, t: usize, v: usize, dir: Vec2) -> usize {
        let cone = &self.cone_points[self.corner_cone(t, v)];
        let pos = cone
            .corners
            .iter()
            .position(|&c| c == (t as u32, v as u8))
            .expect("corner belongs to its cone");
        let total = cone.corner_base[pos] + self.angle_in_corner(t, v, dir);
        ((total / TAU).floor() as usize).min(cone.turns - 1)
    }
}

enum SideLabel {
    Boundary(usize),
    Diagonal(usize),
}

struct EarTriangle {
    edges: [Vec2; 3],
    anchor: Vec2,
    labels: [SideLabel; 3],
}

/// Ear-clips a counterclockwise simple polygon given by its edge vectors.
/// Ears are chosen at the lowest original vertex index, so the output is
/// reproducible.
fn ear_clip(edges: &[Vec2]) -> std::result::Result<Vec<EarTriangle>, String> {
    let n = edges.len();
    if n < 3 {
        return Err("fewer than three sides".into());
    }
    let mut pos = Vec::with_capacity(n);
    let mut p = Vec2::ZERO;
    for e in edges {
        pos.push(p);
        p = p + *e;
    }
    let signed_area: f64 = (0..n)
        .map(|i| pos[i].cross(pos[(i + 1) % n]))
        .sum::<f64>()
        / 2.0;
    if signed_area <= 0.0 {
        return Err("not counterclockwise".into());
    }
    let scale = edges.iter().map(|e| e.norm()).fold(0.0, f64::max);
    let eps = 1e-12 * scale * scale;

    // ring[i] = original vertex index; ring edge i runs ring[i] -> ring[i+1].
    let mut ring: Vec<usize> = (0..n).collect();
    let mut ring_label: Vec<SideLabel> = (0..n).map(SideLabel::Boundary).collect();
    let mut next_diag = 0usize;
    let mut out = Vec::with_capacity(n - 2);

    while ring.len() > 3 {
        let m = ring.len();
        // Candidate ear positions ordered by original vertex index.
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&i| ring[i]);
        let mut clipped = false;
        for &i in &order {
            let prev = (i + m - 1) % m;
            let next = (i + 1) % m;
            let (a, b, c) = (pos[ring[prev]], pos[ring[i]], pos[ring[next]]);
            let cross = (b - a).cross(c - b);
            if cross <= eps {
                continue;
            }
            let mut blocked = false;
            for (j, &rv) in ring.iter().enumerate() {
                if j == prev || j == i || j == next {
                    continue;
                }
                if point_in_triangle(pos[rv], a, b, c, eps) {
                    blocked = true;
                    break;
                }
            }
            if blocked {
                continue;
            }
            // Clip the ear (a, b, c).
            let lbl_ab = std::mem::replace(&mut ring_label[prev], SideLabel::Diagonal(usize::MAX));
            let lbl_bc = std::mem::replace(&mut ring_label[i], SideLabel::Diagonal(usize::MAX));
            let d = next_diag;
            next_diag += 1;
            out.push(EarTriangle {
                edges: [b - a, c - b, a - c],
                anchor: a,
                labels: [lbl_ab, lbl_bc, SideLabel::Diagonal(d)],
            });
            // The ring edge prev now runs a -> c and carries the other
            // side of the new diagonal.
            ring_label[prev] = SideLabel::Diagonal(d);
            ring.remove(i);
            ring_label.remove(i);
            clipped = true;
            break;
        }
        if !clipped {
            return Err("no ear found (polygon may be non-simple)".into());
        }
    }

    let (a, b, c) = (pos[ring[0]], pos[ring[1]], pos[ring[2]]);
    if (b - a).cross(c - b) <= 0.0 {
        return Err("degenerate final triangle".into());
    }
    let mut labels = ring_label.drain(..);
    out.push(EarTriangle {
        edges: [b - a, c - b, a - c],
        anchor: a,
        labels: [
            labels.next().unwrap(),
            labels.next().unwrap(),
            labels.next().unwrap(),
        ],
    });
    Ok(out)
}

fn point_in_triangle(p: Vec2, a: Vec2, b: Vec2, c: Vec2, eps: f64) -> bool {
    let s1 = (b - a).cross(p - a);
    let s2 = (c - b).cross(p - b);
    let s3 = (a - c).cross(p - c);
    s1 >= -eps && s2 >= -eps && s3 >= -eps
}

fn validate_description(description: &SurfaceDescription, tol: Tolerances) -> Result<()> {
    for (i, poly) in description.polygons.iter().enumerate() {
        let total = poly.iter().fold(Vec2::ZERO, |acc, &e| acc + e);
        for e in poly {
            if !e.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "polygon {i} has a non-finite edge vector"
                )));
            }
        }
        if total.norm() > tol.glue {
            return Err(Error::NonClosedPolygon {
                polygon: i,
                x: total.x,
                y: total.y,
            });
        }
    }

    let mut seen: HashMap<PolyEdge, usize> = HashMap::new();
    for (k, &(a, b)) in description.gluings.iter().enumerate() {
        for side in [a, b] {
            let (p, e) = side;
            if p >= description.polygons.len() || e >= description.polygons[p].len() {
                return Err(Error::GluingMismatch(format!(
                    "gluing {k} references missing edge {p}.{e}"
                )));
            }
            if seen.insert(side, k).is_some() {
                return Err(Error::GluingMismatch(format!(
                    "edge {p}.{e} appears in more than one gluing"
                )));
            }
        }
        if a == b {
            return Err(Error::GluingMismatch(format!(
                "gluing {k} pairs edge {}.{} with itself",
                a.0, a.1
            )));
        }
        let va = description.polygons[a.0][a.1];
        let vb = description.polygons[b.0][b.1];
        if (va + vb).norm() > tol.glue {
            return Err(Error::GluingMismatch(format!(
                "edges {}.{} and {}.{} are not negatives: ({}, {}) vs ({}, {})",
                a.0, a.1, b.0, b.1, va.x, va.y, vb.x, vb.y
            )));
        }
    }
    let total_edges: usize = description.polygons.iter().map(|p| p.len()).sum();
    if seen.len() != total_edges {
        return Err(Error::GluingMismatch(format!(
            "{} of {} polygon edges are glued",
            seen.len(),
            total_edges
        )));
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn count(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&i| self.find(i) == i).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use std::f64::consts::PI;

    #[test]
    fn square_torus_builds() {
        let s = presets::square_torus();
        assert_eq!(s.triangle_count(), 2);
        assert!((s.area() - 1.0).abs() < 1e-15);
        assert_eq!(s.cone_points().len(), 1);
        let cone = &s.cone_points()[0];
        assert_eq!(cone.turns, 1);
        assert!((cone.angle - TAU).abs() < 1e-12);
        assert_eq!(s.genus(), 1);
    }

    #[test]
    fn octagon_area_and_cone_angle() {
        let s = presets::regular_octagon();
        // Shoelace oracle for the area of the unit-side regular octagon.
        let mut p = Vec2::ZERO;
        let mut pts = Vec::new();
        for e in &s.description().polygons[0] {
            pts.push(p);
            p = p + *e;
        }
        let shoelace: f64 = (0..8)
            .map(|i| pts[i].cross(pts[(i + 1) % 8]))
            .sum::<f64>()
            / 2.0;
        assert!((s.area() - shoelace).abs() < 1e-12);
        assert!((s.area() - 2.0 * (1.0 + 2.0f64.sqrt())).abs() < 1e-12);

        // Eight corners of 3pi/4 glue into a single cone point of 6pi.
        assert_eq!(s.cone_points().len(), 1);
        let cone = &s.cone_points()[0];
        assert_eq!(cone.turns, 3);
        assert!((cone.angle - 8.0 * (3.0 * PI / 4.0)).abs() < 1e-12);
        assert_eq!(s.genus(), 2);
    }

    #[test]
    fn gauss_bonnet_on_presets() {
        for s in [presets::square_torus(), presets::regular_octagon()] {
            let lhs: i64 = s.cone_points().iter().map(|c| c.order() as i64).sum();
            assert_eq!(lhs, 2 * s.genus() - 2);
        }
    }

    #[test]
    fn non_closed_polygon_is_rejected() {
        let mut d = presets::square_torus_description();
        d.polygons[0][0] = Vec2::new(1.0 + 1e-6, 0.0);
        match TranslationSurface::build(d) {
            Err(Error::NonClosedPolygon { polygon: 0, .. }) => {}
            other => panic!("expected NonClosedPolygon, got {other:?}"),
        }
    }

    #[test]
    fn gluing_vector_mismatch_is_rejected() {
        // Glue the bottom of the square to the right side: not negatives.
        let d = SurfaceDescription {
            polygons: vec![vec![
                Vec2::new(1.0, 0.0),
                Vec2::new(0.0, 1.0),
                Vec2::new(-1.0, 0.0),
                Vec2::new(0.0, -1.0),
            ]],
            gluings: vec![((0, 0), (0, 1)), ((0, 2), (0, 3))],
        };
        assert!(matches!(
            TranslationSurface::build(d),
            Err(Error::GluingMismatch(_))
        ));
    }

    #[test]
    fn disconnected_complex_is_rejected() {
        let square = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, -1.0),
        ];
        let d = SurfaceDescription {
            polygons: vec![square.clone(), square],
            gluings: vec![
                ((0, 0), (0, 2)),
                ((0, 1), (0, 3)),
                ((1, 0), (1, 2)),
                ((1, 1), (1, 3)),
            ],
        };
        assert!(matches!(
            TranslationSurface::build(d),
            Err(Error::Disconnected { components: 2 })
        ));
    }

    #[test]
    fn bad_cone_angle_is_reported_under_loose_gluing_tolerance() {
        // Criss-cross a square with a slightly tilted rhombus: each side
        // pair matches within a loose gluing tolerance, but the two vertex
        // links close to 2pi -+ 2e-4 instead of 2pi.
        let phi = 1e-4f64;
        let square = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(0.0, -1.0),
        ];
        let rhombus = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(phi.sin(), phi.cos()),
            Vec2::new(-1.0, 0.0),
            Vec2::new(-phi.sin(), -phi.cos()),
        ];
        let d = SurfaceDescription {
            polygons: vec![square, rhombus],
            gluings: vec![
                ((0, 0), (1, 2)),
                ((1, 0), (0, 2)),
                ((0, 1), (1, 3)),
                ((1, 1), (0, 3)),
            ],
        };
        let tol = Tolerances {
            glue: 1e-3,
            angle: 1e-9,
        };
        assert!(matches!(
            TranslationSurface::build_with(d, tol),
            Err(Error::BadConeAngle { .. })
        ));
        // The same complex built with an honest rhombus-to-rhombus match
        // is fine, confirming the failure comes from the link check.
        let d_exact = SurfaceDescription {
            polygons: vec![
                vec![
                    Vec2::new(1.0, 0.0),
                    Vec2::new(0.0, 1.0),
                    Vec2::new(-1.0, 0.0),
                    Vec2::new(0.0, -1.0),
                ];
                2
            ],
            gluings: vec![
                ((0, 0), (1, 2)),
                ((1, 0), (0, 2)),
                ((0, 1), (1, 3)),
                ((1, 1), (0, 3)),
            ],
        };
        assert!(TranslationSurface::build_with(d_exact, tol).is_ok());
    }

    #[test]
    fn cross_edge_torus_translates_by_one() {
        let s = presets::square_torus();
        // Find the triangle whose edge is the bottom side (1, 0) and walk
        // across the right side of the square.
        // The square [0,1]^2 is fanned from its last vertex; locate the
        // triangle edge equal to (0, 1) at x = 1 (the right side).
        let mut found = false;
        for t in 0..s.triangle_count() {
            for e in 0..3 {
                let tri = &s.triangles()[t];
                let anchor = s.triangle_anchor(t);
                let tail = anchor + tri.vertex(e);
                if (tri.edges[e] - Vec2::new(0.0, 1.0)).norm() < 1e-15
                    && (tail - Vec2::new(1.0, 0.0)).norm() < 1e-15
                {
                    // Place the triangle at its polygon position and cross.
                    let placement = Placement { tri: t, offset: anchor };
                    let crossed = s.cross_edge(placement, e);
                    let (t2, e2) = s.opposite(t, e);
                    assert_eq!(crossed.tri, t2);
                    // The partner edge is the left side of the square; its
                    // head must land on the shared segment at x = 1.
                    let head = crossed.vertex(&s, e2);
                    assert!((head - Vec2::new(1.0, 1.0)).norm() < 1e-12);
                    assert!((crossed.offset - s.triangle_anchor(t2) - Vec2::new(1.0, 0.0)).norm() < 1e-12);
                    found = true;
                }
            }
        }
        assert!(found, "right side of the square not found");
    }

    #[test]
    fn cross_edge_is_an_involution() {
        let s = presets::regular_octagon();
        for t in 0..s.triangle_count() {
            let placement = Placement {
                tri: t,
                offset: Vec2::new(0.3, -1.7),
            };
            for e in 0..3 {
                let there = s.cross_edge(placement, e);
                let (_, e2) = s.opposite(t, e);
                let back = s.cross_edge(there, e2);
                assert_eq!(back.tri, t);
                let err = (back.offset - placement.offset).norm();
                assert!(err <= 1e-12 * (1.0 + placement.offset.norm()));
            }
        }
    }

    #[test]
    fn developing_around_octagon_cone_winds_three_turns() {
        let s = presets::regular_octagon();
        let cone = &s.cone_points()[0];
        // The cyclic corner walk visits every corner once and the angles
        // sum to 6pi: three full turns.
        assert_eq!(cone.corners.len(), 3 * s.triangle_count());
        assert!((cone.angle - 3.0 * TAU).abs() < 1e-12);
        let last = *cone.corner_base.last().unwrap()
            + s.triangles()[cone.corners.last().unwrap().0 as usize]
                .corner_angle(cone.corners.last().unwrap().1 as usize);
        assert!((last - 3.0 * TAU).abs() < 1e-12);
    }

    #[test]
    fn area_scaling_law() {
        let s = presets::square_torus();
        let doubled = s.scaled(2.0);
        assert!((doubled.area() - 4.0 * s.area()).abs() < 1e-12);
    }

    #[test]
    fn normalize_area_examples() {
        let torus = presets::square_torus();
        assert!((torus.normalized().area() - 1.0).abs() < 1e-12);

        let big = torus.scaled(2.0);
        let back = big.normalized();
        assert!((back.area() - 1.0).abs() < 1e-12);
        assert!((back.triangles()[0].edges[0].norm()
            - torus.triangles()[0].edges[0].norm())
        .abs()
            < 1e-12);

        let oct = presets::regular_octagon().normalized();
        assert!((oct.area() - 1.0).abs() < 1e-12);
        let expected = 1.0 / (2.0 * (1.0 + 2.0f64.sqrt())).sqrt();
        // All original octagon sides have unit length, so every boundary
        // edge of the normalized surface has length 1/sqrt(area).
        let e0 = oct.description().polygons[0][0].norm();
        assert!((e0 - expected).abs() < 1e-12);
    }

    #[test]
    fn area_invariant_under_retriangulation() {
        // Present the same octagon starting from a different vertex: the
        // fan lands on different diagonals.
        let base = presets::regular_octagon_description();
        let mut rotated = base.clone();
        rotated.polygons[0].rotate_left(3);
        rotated.gluings = vec![
            ((0, 0), (0, 4)),
            ((0, 1), (0, 5)),
            ((0, 2), (0, 6)),
            ((0, 3), (0, 7)),
        ];
        let a = TranslationSurface::build(base).unwrap();
        let b = TranslationSurface::build(rotated).unwrap();
        assert!((a.area() - b.area()).abs() < 1e-12 * a.area());
    }

    #[test]
    fn fingerprint_distinguishes_surfaces() {
        let a = presets::square_torus();
        let b = presets::regular_octagon();
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), presets::square_torus().fingerprint());
    }
}
