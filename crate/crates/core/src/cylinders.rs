//! Cylinder decompositions in periodic directions.
//!
//! For a direction `theta` in which every separatrix closes up, the
//! saddle connections parallel to `theta` cut the surface into flat
//! cylinders. The decomposition first rotates the surface so `theta`
//! becomes horizontal, traces the eastbound separatrix out of every
//! outgoing sector of every cone point, and then reads the cylinders off
//! the cyclic order of the separatrix germs around each cone point: the
//! flow line just above a cut continues along the next eastbound germ
//! counterclockwise from its arrival, which chains the cuts bounding each
//! cylinder from below. Heights come from a vertical first-return ray.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{Mat2, Vec2};
use crate::scan::SaddleConnection;
use crate::sl2;
use crate::surface::{Placement, TranslationSurface};

/// Perpendicular distance (for unit direction) below which a traced ray
/// is considered to hit a vertex image.
const VERTEX_HIT_TOL: f64 = 1e-9;

/// Relative tolerance for treating an edge as parallel to the flow.
const PARALLEL_TOL: f64 = 1e-9;

/// A maximal family of parallel periodic geodesics.
#[derive(Clone, Debug)]
pub struct Cylinder {
    /// Flow direction on the original surface, radians.
    pub direction: f64,
    /// Length of each periodic geodesic in the family.
    pub circumference: f64,
    /// Distance between the two boundary components.
    pub height: f64,
    /// Indices into the cut system of the saddle connections bounding the
    /// cylinder from below (the side the flow sees on its left is `top`).
    pub bottom: Vec<usize>,
    pub top: Vec<usize>,
}

impl Cylinder {
    pub fn area(&self) -> f64 {
        self.circumference * self.height
    }
}

/// A full decomposition: the cylinders plus the cut system that bounds
/// them, expressed on the rotated surface where the direction is
/// horizontal.
#[derive(Clone, Debug)]
pub struct CylinderDecomposition {
    pub direction: f64,
    pub cylinders: Vec<Cylinder>,
    /// Eastbound horizontal saddle connections of the rotated surface.
    pub cuts: Vec<SaddleConnection>,
    /// The surface rotated by `-direction`.
    pub rotated: TranslationSurface,
}

impl CylinderDecomposition {
    pub fn total_area(&self) -> f64 {
        self.cylinders.iter().map(Cylinder::area).sum()
    }
}

/// Decomposes the surface into cylinders in direction `theta`.
///
/// The direction must be completely periodic: every separatrix must
/// close up on a cone point within the length budget (one thousand
/// diameters by default), otherwise [`Error::NotPeriodicDirection`] is
/// returned.
pub fn cylinder_decomposition(
    surface: &TranslationSurface,
    theta: f64,
) -> Result<CylinderDecomposition> {
    let budget = 1e3 * surface.diameter_bound();
    cylinder_decomposition_with(surface, theta, budget)
}

pub fn cylinder_decomposition_with(
    surface: &TranslationSurface,
    theta: f64,
    length_budget: f64,
) -> Result<CylinderDecomposition> {
    let rotated = sl2::apply(surface, Mat2::rotation(-theta))?;
    let east = Vec2::new(1.0, 0.0);

    // Trace the eastbound separatrix out of every corner whose wedge
    // contains east, and collect horizontal edges once, from their
    // east-pointing side.
    let mut cuts: Vec<SaddleConnection> = Vec::new();
    for t in 0..rotated.triangle_count() {
        for v in 0..3 {
            let low = rotated.triangles()[t].edges[v];
            let high = -rotated.triangles()[t].edges[(v + 2) % 3];
            if low.y.abs() <= PARALLEL_TOL * low.norm() {
                if low.x > 0.0 {
                    cuts.push(edge_connection(&rotated, t, v));
                }
                continue;
            }
            let inside = low.cross(east) > 0.0 && high.cross(east) < 0.0;
            if inside {
                cuts.push(trace_separatrix(&rotated, t, v, east, length_budget)?);
            }
        }
    }

    // Cyclic germ order around each cone point: outgoing east germs from
    // cut starts, outgoing west germs from reversed cut arrivals. In a
    // periodic direction these alternate east, west around every cone.
    #[derive(Clone, Copy)]
    struct Germ {
        angle: f64,
        east: bool,
        cut: usize,
    }
    let mut germs: Vec<Vec<Germ>> = vec![Vec::new(); rotated.cone_points().len()];
    for (id, cut) in cuts.iter().enumerate() {
        let (t, v) = (cut.start_corner.0 as usize, cut.start_corner.1 as usize);
        germs[cut.start_cone].push(Germ {
            angle: germ_angle(&rotated, t, v, east),
            east: true,
            cut: id,
        });
        let rev = cut.reversed(&rotated);
        let (t, v) = (rev.start_corner.0 as usize, rev.start_corner.1 as usize);
        germs[cut.end_cone].push(Germ {
            angle: germ_angle(&rotated, t, v, -east),
            east: false,
            cut: id,
        });
    }

    let mut above = vec![usize::MAX; cuts.len()];
    let mut below = vec![usize::MAX; cuts.len()];
    for (cone, list) in germs.iter_mut().enumerate() {
        let turns = rotated.cone_points()[cone].turns;
        if list.len() != 2 * turns {
            return Err(Error::NotPeriodicDirection {
                budget: length_budget,
            });
        }
        list.sort_by(|a, b| a.angle.total_cmp(&b.angle));
        let n = list.len();
        for (i, g) in list.iter().enumerate() {
            if g.east {
                continue;
            }
            let next = list[(i + 1) % n];
            let prev = list[(i + n - 1) % n];
            debug_assert!(next.east && prev.east, "germs must alternate");
            // The flow just above the arriving cut wraps around the cone
            // point and continues along the adjacent east germ clockwise
            // of the arrival; the flow just below takes the one
            // counterclockwise.
            above[g.cut] = prev.cut;
            below[g.cut] = next.cut;
        }
    }

    // Bottom chains: orbits of `above`. Top chains: orbits of `below`.
    let bottom_orbit = orbits(&above);
    let top_orbit = orbits(&below);

    let cuts_by_tri = index_cut_segments(&rotated, &cuts);

    let mut cylinders = Vec::new();
    for chain in &bottom_orbit {
        let circumference: f64 = chain.iter().map(|&i| cuts[i].length()).sum();
        let (height, hit) = measure_height(&rotated, &cuts, &cuts_by_tri, chain[0])?;
        let top_chain = top_orbit
            .iter()
            .find(|orbit| orbit.contains(&hit))
            .expect("hit cut belongs to a top chain")
            .clone();
        cylinders.push(Cylinder {
            direction: theta,
            circumference,
            height,
            bottom: chain.clone(),
            top: top_chain,
        });
    }

    Ok(CylinderDecomposition {
        direction: theta,
        cylinders,
        cuts,
        rotated,
    })
}

/// The saddle connection running along edge `e` of triangle `t`.
fn edge_connection(surface: &TranslationSurface, t: usize, e: usize) -> SaddleConnection {
    let hol = surface.triangles()[t].edges[e];
    SaddleConnection {
        holonomy: hol,
        start_cone: surface.corner_cone(t, e),
        end_cone: surface.corner_cone(t, e + 1),
        start_sector: surface.sector_index(t, e, hol),
        start_corner: (t as u32, e as u8),
        path: Vec::new(),
        end_vertex: ((e + 1) % 3) as u8,
    }
}

/// Follows the straight ray leaving the cone point through corner
/// `(t, v)` in direction `dir` (strictly inside the corner wedge) until
/// it hits a cone point image.
fn trace_separatrix(
    surface: &TranslationSurface,
    t: usize,
    v: usize,
    dir: Vec2,
    length_budget: f64,
) -> Result<SaddleConnection> {
    let mut path: Vec<(u32, u8)> = Vec::new();
    let mut placement = Placement {
        tri: t,
        offset: -surface.triangles()[t].vertex(v),
    };
    let mut exit = (v + 1) % 3;
    loop {
        path.push((placement.tri as u32, exit as u8));
        placement = surface.cross_edge(placement, exit);
        let (_, entry) = surface.opposite(path.last().unwrap().0 as usize, exit);
        let apex = (entry + 2) % 3;
        let w = placement.vertex(surface, apex);
        if dir.cross(w).abs() <= VERTEX_HIT_TOL && dir.dot(w) > 0.0 {
            let hol = w;
            return Ok(SaddleConnection {
                holonomy: hol,
                start_cone: surface.corner_cone(t, v),
                end_cone: surface.corner_cone(placement.tri, apex),
                start_sector: surface.sector_index(t, v, hol),
                start_corner: (t as u32, v as u8),
                path,
                end_vertex: apex as u8,
            });
        }
        // Projection of the entry edge onto the ray bounds the length
        // travelled so far.
        let along = dir.dot(placement.vertex(surface, entry));
        if along > length_budget {
            return Err(Error::NotPeriodicDirection {
                budget: length_budget,
            });
        }
        exit = if dir.cross(w) > 0.0 {
            (entry + 1) % 3
        } else {
            (entry + 2) % 3
        };
    }
}

/// Angle of an outgoing germ within the cyclic order around its cone
/// point.
fn germ_angle(surface: &TranslationSurface, t: usize, v: usize, dir: Vec2) -> f64 {
    let cone = &surface.cone_points()[surface.corner_cone(t, v)];
    let pos = cone
        .corners
        .iter()
        .position(|&c| c == (t as u32, v as u8))
        .expect("corner belongs to cone");
    cone.corner_base[pos] + surface.angle_in_corner(t, v, dir)
}

/// Orbit decomposition of a permutation given as a successor array.
fn orbits(succ: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; succ.len()];
    let mut out = Vec::new();
    for start in 0..succ.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            orbit.push(cur);
            cur = succ[cur];
        }
        out.push(orbit);
    }
    out
}

type CutSegments = HashMap<usize, Vec<(usize, Vec2, Vec2)>>;

/// Per-triangle index of the cut sub-segments, in triangle-local
/// coordinates.
fn index_cut_segments(surface: &TranslationSurface, cuts: &[SaddleConnection]) -> CutSegments {
    let mut by_tri: CutSegments = HashMap::new();
    for (id, cut) in cuts.iter().enumerate() {
        for (tri, a, b) in cut.triangle_segments(surface) {
            by_tri.entry(tri).or_default().push((id, a, b));
        }
    }
    by_tri
}

/// Shoots a vertical ray up from an interior point of cut `bottom` and
/// returns the distance to the first cut it hits, together with that
/// cut's index.
fn measure_height(
    surface: &TranslationSurface,
    cuts: &[SaddleConnection],
    cuts_by_tri: &CutSegments,
    bottom: usize,
) -> Result<(f64, usize)> {
    // Interior parameters to try; later ones only matter when the
    // vertical through the first choice runs into a cone point.
    const PARAMS: [f64; 5] = [0.5, 0.367879441171442, 0.318309886183791, 0.414213562373095, 0.23];
    let segs = cuts[bottom].triangle_segments(surface);
    let total = cuts[bottom].length();
    'outer: for &u in &PARAMS {
        // Locate the sub-segment containing parameter u.
        let mut acc = 0.0;
        let mut start: Option<(usize, Vec2)> = None;
        for (tri, a, b) in &segs {
            let len = (*b - *a).norm();
            if acc + len >= u * total {
                let local = (u * total - acc) / len;
                start = Some((*tri, *a + (*b - *a) * local));
                break;
            }
            acc += len;
        }
        let (mut tri, p) = start.expect("parameter within the cut");
        let mut offset = -p;
        let up = Vec2::new(0.0, 1.0);
        let cap = 10.0 * surface.diameter_bound();
        let mut entry: Option<usize> = None;
        loop {
            // Nearest cut crossing in this triangle. The ray is the
            // vertical x = 0, so a crossing of segment [a, b] happens at
            // parameter u = -a.x / (b.x - a.x), height a.y + u (b.y - a.y).
            let mut best: Option<(f64, usize)> = None;
            let mut grazed = false;
            if let Some(list) = cuts_by_tri.get(&tri) {
                for &(id, a, b) in list {
                    let (a, b) = (offset + a, offset + b);
                    let dx = b.x - a.x;
                    if dx.abs() < 1e-15 {
                        continue;
                    }
                    let u_seg = -a.x / dx;
                    let s = a.y + u_seg * (b.y - a.y);
                    if s > 1e-9 && (-1e-9..=1.0 + 1e-9).contains(&u_seg) {
                        if !(1e-7..=1.0 - 1e-7).contains(&u_seg) {
                            // Grazes a cut endpoint: restart elsewhere.
                            grazed = true;
                            break;
                        }
                        if best.map_or(true, |(bs, _)| s < bs) {
                            best = Some((s, id));
                        }
                    }
                }
            }
            if grazed {
                continue 'outer;
            }

            // Exit edge of the current triangle.
            let t_ref = &surface.triangles()[tri];
            let exit = match entry {
                Some(e) => {
                    let apex = (e + 2) % 3;
                    let w = offset + t_ref.vertex(apex);
                    if up.cross(w).abs() <= VERTEX_HIT_TOL {
                        continue 'outer;
                    }
                    if up.cross(w) > 0.0 {
                        (e + 1) % 3
                    } else {
                        (e + 2) % 3
                    }
                }
                None => {
                    // First triangle: the ray starts on or inside it.
                    let mut found = None;
                    for e in 0..3 {
                        let a = offset + t_ref.vertex(e);
                        let b = offset + t_ref.vertex(e + 1);
                        let dx = b.x - a.x;
                        if dx.abs() < 1e-15 {
                            continue;
                        }
                        let u_seg = -a.x / dx;
                        let s = a.y + u_seg * (b.y - a.y);
                        if s > 1e-12 && (0.0..=1.0).contains(&u_seg)
                            && found.map_or(true, |(fs, _)| s < fs)
                        {
                            found = Some((s, e));
                        }
                    }
                    match found {
                        Some((_, e)) => e,
                        None => continue 'outer,
                    }
                }
            };

            let exit_a = offset + t_ref.vertex(exit);
            let exit_b = offset + t_ref.vertex(exit + 1);
            let s_exit = exit_a.y - exit_a.x * (exit_b.y - exit_a.y) / (exit_b.x - exit_a.x);

            if let Some((s, id)) = best {
                if s <= s_exit + 1e-12 {
                    return Ok((s, id));
                }
            }
            if s_exit > cap {
                return Err(Error::NotPeriodicDirection { budget: cap });
            }
            let crossed = surface.cross_edge(Placement { tri, offset }, exit);
            let (_, e2) = surface.opposite(tri, exit);
            tri = crossed.tri;
            offset = crossed.offset;
            entry = Some(e2);
        }
    }
    Err(Error::NotPeriodicDirection {
        budget: 10.0 * surface.diameter_bound(),
    })
}
