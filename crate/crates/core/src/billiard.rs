//! Unfolding of rational polygonal billiards.
//!
//! A polygon whose interior angles are rational multiples of pi unfolds
//! into a translation surface: one copy of the polygon per element of the
//! dihedral group of order `2N`, `N = lcm` of the angle denominators,
//! generated by the linear parts of the reflections in the sides. Each
//! copy is glued to its mirror image along the reflecting side, and
//! billiard trajectories become straight lines on the glued surface.
//!
//! Copies are indexed by exact group elements (rotation or reflection
//! index mod `N`), so the gluing combinatorics never depend on floating
//! point. Coincident copies are not merged: when the 2N-copy surface is a
//! translation cover of something smaller, the cover is returned.

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::surface::{SurfaceDescription, TranslationSurface};

/// Largest denominator tried when recovering a rational angle from
/// floating-point geometry.
pub const ANGLE_DENOMINATOR_CAP: u64 = 1000;

/// Tolerance (radians) for matching a geometric angle to `p pi / q`.
pub const ANGLE_TOL: f64 = 1e-9;

/// A simple polygon with every interior angle a rational multiple of pi.
#[derive(Clone, Debug)]
pub struct RationalPolygon {
    vertices: Vec<Vec2>,
    /// Interior angle at vertex `i` is `pi * angles[i].0 / angles[i].1`.
    angles: Vec<(u64, u64)>,
}

impl RationalPolygon {
    /// Builds from vertices, recovering each angle as a fraction of pi by
    /// continued-fraction approximation with denominator at most
    /// [`ANGLE_DENOMINATOR_CAP`].
    pub fn from_vertices(vertices: Vec<Vec2>) -> Result<Self> {
        let angles = interior_angles(&vertices)?
            .iter()
            .map(|&a| {
                approximate_fraction(a / std::f64::consts::PI, ANGLE_DENOMINATOR_CAP)
                    .filter(|&(p, q)| {
                        (a - std::f64::consts::PI * p as f64 / q as f64).abs() <= ANGLE_TOL
                    })
                    .ok_or(Error::IrrationalAngle {
                        angle: a,
                        q_max: ANGLE_DENOMINATOR_CAP,
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices, angles)
    }

    /// Builds from vertices and explicitly supplied angles `p_i / q_i`
    /// (in units of pi), bypassing recovery. The supplied angles must
    /// match the geometry within [`ANGLE_TOL`].
    pub fn new(vertices: Vec<Vec2>, angles: Vec<(u64, u64)>) -> Result<Self> {
        if angles.len() != vertices.len() {
            return Err(Error::InvalidParameter(format!(
                "{} angles for {} vertices",
                angles.len(),
                vertices.len()
            )));
        }
        let geometric = interior_angles(&vertices)?;
        let mut reduced = Vec::with_capacity(angles.len());
        for (i, (&(p, q), &g)) in angles.iter().zip(&geometric).enumerate() {
            if p == 0 || q == 0 {
                return Err(Error::InvalidParameter(format!("angle {i} is {p}/{q}")));
            }
            let d = gcd(p, q);
            let (p, q) = (p / d, q / d);
            let value = std::f64::consts::PI * p as f64 / q as f64;
            if (value - g).abs() > ANGLE_TOL {
                return Err(Error::InvalidParameter(format!(
                    "angle {i} is {p}pi/{q} = {value} but the geometry gives {g}"
                )));
            }
            reduced.push((p, q));
        }
        Ok(RationalPolygon {
            vertices,
            angles: reduced,
        })
    }

    /// A triangle with the given angles (units of pi) and first side of
    /// unit length along the positive x-axis.
    pub fn triangle_from_angles(a: (u64, u64), b: (u64, u64), c: (u64, u64)) -> Result<Self> {
        for (p, q) in [a, b, c] {
            if p == 0 || q == 0 {
                return Err(Error::InvalidParameter("zero angle".into()));
            }
        }
        let sum = a.0 * b.1 * c.1 + b.0 * a.1 * c.1 + c.0 * a.1 * b.1;
        if sum != a.1 * b.1 * c.1 {
            return Err(Error::InvalidParameter(format!(
                "triangle angles {}/{} + {}/{} + {}/{} do not sum to pi",
                a.0, a.1, b.0, b.1, c.0, c.1
            )));
        }
        let alpha = std::f64::consts::PI * a.0 as f64 / a.1 as f64;
        let beta = std::f64::consts::PI * b.0 as f64 / b.1 as f64;
        let gamma = std::f64::consts::PI - alpha - beta;
        // Unit base from vertex 0 to vertex 1; the apex is fixed by the
        // base angles, with the law of sines giving the left side length.
        let apex_dir = Vec2::new(alpha.cos(), alpha.sin());
        let len = beta.sin() / gamma.sin();
        let vertices = vec![Vec2::ZERO, Vec2::new(1.0, 0.0), apex_dir * len];
        RationalPolygon::new(vertices, vec![a, b, c])
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn angles(&self) -> &[(u64, u64)] {
        &self.angles
    }

    pub fn side_count(&self) -> usize {
        self.vertices.len()
    }

    /// Edge vector of side `i` (vertex `i` to vertex `i+1`).
    pub fn side(&self, i: usize) -> Vec2 {
        let n = self.vertices.len();
        self.vertices[(i + 1) % n] - self.vertices[i]
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
            / 2.0
    }

    /// `lcm` of the angle denominators: the order of the rotation part of
    /// the unfolding group.
    pub fn unfolding_order(&self) -> u64 {
        self.angles.iter().fold(1, |acc, &(_, q)| lcm(acc, q))
    }
}

/// Exact dihedral group element: a rotation by `2 pi k / N` or a
/// reflection in the line at angle `phi0 + pi k / N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Dihedral {
    Rotation(u64),
    Reflection(u64),
}

impl Dihedral {
    /// Right multiplication by the reflection `F_m`.
    fn compose_reflection(self, m: u64, n: u64) -> Dihedral {
        match self {
            Dihedral::Rotation(k) => Dihedral::Reflection((m + k) % n),
            Dihedral::Reflection(k) => Dihedral::Rotation((k + n - m) % n),
        }
    }

    fn is_reflection(self) -> bool {
        matches!(self, Dihedral::Reflection(_))
    }

    /// Columns of the acting matrix.
    fn matrix(self, phi0: f64, n: u64) -> [Vec2; 2] {
        match self {
            Dihedral::Rotation(k) => {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                let (s, c) = a.sin_cos();
                [Vec2::new(c, s), Vec2::new(-s, c)]
            }
            Dihedral::Reflection(k) => {
                let phi = phi0 + std::f64::consts::PI * k as f64 / n as f64;
                let (s2, c2) = (2.0 * phi).sin_cos();
                [Vec2::new(c2, s2), Vec2::new(s2, -c2)]
            }
        }
    }

    fn index(self, n: u64) -> usize {
        match self {
            Dihedral::Rotation(k) => k as usize,
            Dihedral::Reflection(k) => (n + k) as usize,
        }
    }
}

/// Unfolds a rational polygon into a translation surface with `2N` copies
/// of the polygon, `N = lcm(q_i)`. The area is exactly `2N` times the
/// polygon's.
pub fn unfold(polygon: &RationalPolygon) -> Result<TranslationSurface> {
    let n_sides = polygon.side_count();
    let n = polygon.unfolding_order();

    // Reflection index of each side: side i's direction sits at angle
    // phi0 + pi * m_i / N where phi0 is side 0's direction. The steps are
    // exact integers because each turning angle is pi (q-p)/q.
    let mut side_index = vec![0u64; n_sides];
    let mut acc = 0u64;
    for i in 1..n_sides {
        let (p, q) = polygon.angles[i];
        let step = n / q * ((2 * q - p) % (2 * q)) % n;
        acc = (acc + step) % n;
        side_index[i] = acc;
    }
    let phi0 = polygon.side(0).angle();

    // All 2N group elements, rotations first.
    let elements: Vec<Dihedral> = (0..n)
        .map(Dihedral::Rotation)
        .chain((0..n).map(Dihedral::Reflection))
        .collect();

    let mut polygons = Vec::with_capacity(elements.len());
    let mut gluings = Vec::new();
    for &g in &elements {
        let cols = g.matrix(phi0, n);
        let apply = |v: Vec2| cols[0] * v.x + cols[1] * v.y;
        let mut edges: Vec<Vec2> = (0..n_sides).map(|i| apply(polygon.side(i))).collect();
        if g.is_reflection() {
            // Reflected copies are re-wound counterclockwise: geometric
            // side i lands at list position n_sides - 2 - i (mod n_sides).
            let mut rewound = vec![Vec2::ZERO; n_sides];
            for (i, e) in edges.iter().enumerate() {
                rewound[(2 * n_sides - 2 - i) % n_sides] = -*e;
            }
            edges = rewound;
        }
        polygons.push(edges);

        // Glue side i of copy g to side i of copy g * F_{m_i}; emit each
        // pair once, from the rotation copies.
        if let Dihedral::Rotation(_) = g {
            for i in 0..n_sides {
                let partner = g.compose_reflection(side_index[i], n);
                let a = (g.index(n), i);
                let b = (partner.index(n), (2 * n_sides - 2 - i) % n_sides);
                gluings.push((a, b));
            }
        }
    }

    let description = SurfaceDescription { polygons, gluings };
    let surface = TranslationSurface::build(description)?;
    debug_assert!((surface.area() - 2.0 * n as f64 * polygon.area()).abs() <= 1e-9 * surface.area());
    Ok(surface)
}

fn interior_angles(vertices: &[Vec2]) -> Result<Vec<f64>> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::InvalidParameter("fewer than three vertices".into()));
    }
    let signed_area: f64 = (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum::<f64>()
        / 2.0;
    if signed_area <= 0.0 {
        return Err(Error::InvalidParameter(
            "vertices must be in counterclockwise order".into(),
        ));
    }
    check_simple(vertices)?;
    let mut angles = Vec::with_capacity(n);
    for i in 0..n {
        let prev = vertices[(i + n - 1) % n];
        let here = vertices[i];
        let next = vertices[(i + 1) % n];
        let u = here - prev;
        let w = next - here;
        // Interior angle = pi - turning angle; the turn is signed, so
        // reflex vertices come out bigger than pi.
        let turn = u.cross(w).atan2(u.dot(w));
        angles.push(std::f64::consts::PI - turn);
    }
    Ok(angles)
}

fn check_simple(vertices: &[Vec2]) -> Result<()> {
    let n = vertices.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if segments_cross(a, b, c, d) {
                return Err(Error::NonSimplePolygon(i, j));
            }
        }
    }
    Ok(())
}

fn segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Best rational approximation `p/q` of `x > 0` with `q <= q_max`, by
/// continued fractions.
fn approximate_fraction(x: f64, q_max: u64) -> Option<(u64, u64)> {
    if !(x > 0.0) || !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0) = (1u64, 0u64);
    let (mut p1, mut q1) = (x.floor() as u64, 1u64);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if frac.abs() < 1e-13 {
            break;
        }
        frac = 1.0 / frac;
        let a = frac.floor();
        frac -= a;
        let a = a as u64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > q_max {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    if q1 == 0 || p1 == 0 {
        return None;
    }
    Some((p1, q1))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
