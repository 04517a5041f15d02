//! Enumeration of saddle connections by breadth-first sector search.
//!
//! For every triangle corner the search develops the surface into the
//! plane, keeping for each branch the angular sector of directions in
//! which the source cone point still sees the current triangle. Crossing
//! an edge reveals one new vertex image; the sector splits there, and a
//! branch dies once the near point of its portal edge is farther than the
//! radius. Holonomies of the triangulation edges themselves are collected
//! directly, so the sector search only deals with connections that cross
//! at least one triangle interior.
//!
//! Saddle connections are oriented: a geodesic from `p` to `q` and its
//! reverse are distinct entries with holonomies `v` and `-v`. The full
//! circle scan is therefore closed under `v -> -v`.

use std::f64::consts::TAU;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{AngleInterval, Vec2};
use crate::surface::{Placement, TranslationSurface};

/// Angular tolerance (as a sine) deciding whether a vertex image sits on
/// a sector boundary ray. Images on a boundary are occluded by the vertex
/// that created the boundary and are skipped, not recorded.
const RAY_TOL: f64 = 1e-12;

/// Sectors narrower than this are dropped (and counted): at desk-scale
/// radii they cannot contain a further vertex image unless two cone-point
/// images nearly coincide, which the boundary counter flags.
const MIN_SECTOR_WIDTH: f64 = 1e-14;

/// Triangles thinner than this area abort the scan.
const MIN_TRIANGLE_AREA: f64 = 1e-14;

/// Relative tolerance used when re-developing a connection's path.
pub const HIT_TOL: f64 = 1e-9;

/// Absolute tolerance on holonomy components for deduplication.
pub const DEDUP_TOL: f64 = 1e-9;

/// An oriented saddle connection: a flat geodesic from one cone point to
/// another with no cone point in its interior.
#[derive(Clone, Debug)]
pub struct SaddleConnection {
    /// Planar displacement from start to end along the developed segment.
    pub holonomy: Vec2,
    /// Cone point the connection leaves.
    pub start_cone: usize,
    /// Cone point the connection reaches.
    pub end_cone: usize,
    /// Which of the `k` outgoing 2pi-sectors at `start_cone` contains the
    /// outgoing direction.
    pub start_sector: usize,
    /// Corner `(triangle, vertex)` the connection leaves through.
    pub start_corner: (u32, u8),
    /// Edges crossed, in order, as `(triangle, edge of that triangle)`.
    /// Empty for connections that run along a triangulation edge.
    pub path: Vec<(u32, u8)>,
    /// Vertex of the final triangle where the connection ends.
    pub end_vertex: u8,
}

impl SaddleConnection {
    pub fn length(&self) -> f64 {
        self.holonomy.norm()
    }

    /// Direction angle in `[0, 2pi)`.
    pub fn angle(&self) -> f64 {
        self.holonomy.angle()
    }

    /// Initial placement: the start triangle developed with the start
    /// vertex at the origin.
    pub fn start_placement(&self, surface: &TranslationSurface) -> Placement {
        let (t, v) = self.start_corner;
        Placement {
            tri: t as usize,
            offset: -surface.triangles()[t as usize].vertex(v as usize),
        }
    }

    /// Re-develops the stored path and returns the vertex image it ends
    /// on. Agrees with `holonomy` within `HIT_TOL * length` on a valid
    /// connection.
    pub fn develop(&self, surface: &TranslationSurface) -> Vec2 {
        let mut placement = self.start_placement(surface);
        for &(t, e) in &self.path {
            debug_assert_eq!(placement.tri, t as usize);
            placement = surface.cross_edge(placement, e as usize);
        }
        placement.vertex(surface, self.end_vertex as usize)
    }

    /// The same geodesic traversed backwards.
    pub fn reversed(&self, surface: &TranslationSurface) -> SaddleConnection {
        let mut placement = self.start_placement(surface);
        let mut partners = Vec::with_capacity(self.path.len());
        for &(t, e) in &self.path {
            placement = surface.cross_edge(placement, e as usize);
            let (t2, e2) = surface.opposite(t as usize, e as usize);
            partners.push((t2 as u32, e2 as u8));
        }
        partners.reverse();
        let start_corner = if self.path.is_empty() {
            // Edge connection: the reverse runs along the partner side.
            let (t, v) = self.start_corner;
            let (t2, e2) = surface.opposite(t as usize, v as usize);
            (t2 as u32, e2 as u8)
        } else {
            (placement.tri as u32, self.end_vertex)
        };
        let end_vertex = if self.path.is_empty() {
            (start_corner.1 + 1) % 3
        } else {
            self.start_corner.1
        };
        let holonomy = -self.holonomy;
        let (t, v) = (start_corner.0 as usize, start_corner.1 as usize);
        SaddleConnection {
            holonomy,
            start_cone: self.end_cone,
            end_cone: self.start_cone,
            start_sector: surface.sector_index(t, v, holonomy),
            start_corner,
            path: partners,
            end_vertex,
        }
    }

    /// The connection broken into straight pieces, one per triangle
    /// crossed, in the local frame of each triangle (vertex 0 at the
    /// origin).
    pub fn triangle_segments(&self, surface: &TranslationSurface) -> Vec<(usize, Vec2, Vec2)> {
        let w = self.holonomy;
        let mut placement = self.start_placement(surface);
        let mut out = Vec::with_capacity(self.path.len() + 1);
        let mut t_in = 0.0;
        for &(_, e) in &self.path {
            let a = placement.vertex(surface, e as usize);
            let b = placement.vertex(surface, e as usize + 1);
            let denom = w.cross(b - a);
            let t_out = a.cross(b - a) / denom;
            out.push((
                placement.tri,
                w * t_in - placement.offset,
                w * t_out - placement.offset,
            ));
            placement = surface.cross_edge(placement, e as usize);
            t_in = t_out;
        }
        out.push((
            placement.tri,
            w * t_in - placement.offset,
            w - placement.offset,
        ));
        out
    }

    /// Like [`Self::triangle_segments`], but in the coordinates of each
    /// triangle's defining polygon.
    pub fn polygon_segments(&self, surface: &TranslationSurface) -> Vec<(usize, Vec2, Vec2)> {
        self.triangle_segments(surface)
            .into_iter()
            .map(|(t, a, b)| {
                let anchor = surface.triangle_anchor(t);
                (surface.triangle_polygon(t), anchor + a, anchor + b)
            })
            .collect()
    }
}

/// The set of saddle connections of length at most `radius` (optionally
/// restricted to a half-open interval of directions).
#[derive(Clone, Debug)]
pub struct ScanResult {
    pub radius: f64,
    pub sector: Option<AngleInterval>,
    pub connections: Vec<SaddleConnection>,
    /// Fingerprint of the scanned surface.
    pub fingerprint: u64,
    /// Branches dropped because their sector was narrower than the
    /// representable width.
    pub degenerate_sectors_dropped: usize,
    /// Vertex images skipped because they sat on a sector boundary ray
    /// within tolerance (occluded by a nearer cone point image).
    pub boundary_skips: usize,
    /// Entries merged by the `(start, end, holonomy)` deduplication.
    pub merged_duplicates: usize,
}

impl ScanResult {
    pub fn count(&self) -> usize {
        self.connections.len()
    }

    pub fn holonomies(&self) -> Vec<Vec2> {
        self.connections.iter().map(|c| c.holonomy).collect()
    }

    /// Number of connections with direction in `interval`.
    pub fn count_in(&self, interval: &AngleInterval) -> usize {
        self.connections
            .iter()
            .filter(|c| interval.contains(c.angle()))
            .count()
    }

    /// CSV rows `hol_x,hol_y,length,angle,start_cone,end_cone` in the
    /// canonical order (angle, then length, then start cone).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("hol_x,hol_y,length,angle,start_cone,end_cone\n");
        for c in &self.connections {
            out.push_str(&format!(
                "{:?},{:?},{:?},{:?},{},{}\n",
                c.holonomy.x,
                c.holonomy.y,
                c.length(),
                c.angle(),
                c.start_cone,
                c.end_cone
            ));
        }
        out
    }
}

/// Scan parameters beyond the radius.
#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    /// Maximum number of search states before aborting.
    pub budget: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { budget: 100_000_000 }
    }
}

/// Enumerates all saddle connections of length at most `radius` whose
/// direction lies in `sector` (full circle when `None`).
pub fn scan(
    surface: &TranslationSurface,
    radius: f64,
    sector: Option<AngleInterval>,
) -> Result<ScanResult> {
    scan_with(surface, radius, sector, ScanOptions::default())
}

pub fn scan_with(
    surface: &TranslationSurface,
    radius: f64,
    sector: Option<AngleInterval>,
    options: ScanOptions,
) -> Result<ScanResult> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!("bad scan radius {radius}")));
    }
    scan_impl(surface, radius, sector, options, false)
}

/// The shortest saddle connection and its length.
#[derive(Clone, Debug)]
pub struct Systole {
    pub length: f64,
    pub connection: SaddleConnection,
}

/// Finds the shortest saddle connection. Ties are broken by the smallest
/// direction angle in `[0, 2pi)`.
///
/// Every triangulation edge is itself a saddle connection, so the
/// shortest edge bounds the search radius from above and the sector
/// search then only explores the immediate neighborhood of the cone
/// points, shrinking the bound as shorter connections turn up.
pub fn systole(surface: &TranslationSurface) -> Result<Systole> {
    let bound = surface
        .triangles()
        .iter()
        .flat_map(|t| t.edges.iter())
        .map(|e| e.norm())
        .fold(f64::INFINITY, f64::min);
    let result = scan_impl(surface, bound, None, ScanOptions::default(), true)?;
    let min_len = result
        .connections
        .iter()
        .map(|c| c.length())
        .fold(f64::INFINITY, f64::min);
    // The shrinking bound may keep only one orientation of the minimum;
    // reversals are free, so both compete for the angle tie-break.
    let connection = result
        .connections
        .into_iter()
        .filter(|c| c.length() <= min_len * (1.0 + 1e-12))
        .flat_map(|c| {
            let r = c.reversed(surface);
            [c, r]
        })
        .min_by(|a, b| a.angle().total_cmp(&b.angle()))
        .ok_or(Error::EmptyScan)?;
    Ok(Systole {
        length: connection.length(),
        connection,
    })
}

struct SearchState {
    tri: u32,
    entry: u8,
    offset: Vec2,
    lo: Vec2,
    hi: Vec2,
    path_node: u32,
}

#[derive(Default)]
struct SeedOutcome {
    found: Vec<SaddleConnection>,
    degenerate: usize,
    boundary: usize,
    states: u64,
}

fn scan_impl(
    surface: &TranslationSurface,
    radius: f64,
    sector: Option<AngleInterval>,
    options: ScanOptions,
    shrink: bool,
) -> Result<ScanResult> {
    // Shared shrinking bound; only used (and only sound) when the caller
    // asks for the minimum rather than the full set.
    let bound_bits = AtomicU64::new(radius.to_bits());

    // Triangulation edges are saddle connections with an empty path.
    let mut connections: Vec<SaddleConnection> = Vec::new();
    for t in 0..surface.triangle_count() {
        for e in 0..3 {
            let hol = surface.triangles()[t].edges[e];
            let len = hol.norm();
            if len <= radius {
                if shrink {
                    update_min(&bound_bits, len);
                }
                connections.push(SaddleConnection {
                    holonomy: hol,
                    start_cone: surface.corner_cone(t, e),
                    end_cone: surface.corner_cone(t, e + 1),
                    start_sector: surface.sector_index(t, e, hol),
                    start_corner: (t as u32, e as u8),
                    path: Vec::new(),
                    end_vertex: ((e + 1) % 3) as u8,
                });
            }
        }
    }

    // One seed per triangle corner: the open wedge of directions entering
    // the triangle at that corner.
    let seeds: Vec<(usize, usize)> = (0..surface.triangle_count())
        .flat_map(|t| (0..3).map(move |v| (t, v)))
        .collect();

    let per_seed_budget = options.budget / (seeds.len() as u64).max(1);
    let outcomes: Vec<Result<SeedOutcome>> = seeds
        .par_iter()
        .map(|&(t, v)| search_seed(surface, t, v, radius, &bound_bits, per_seed_budget, shrink))
        .collect();

    let mut degenerate = 0;
    let mut boundary = 0;
    let mut states = 0u64;
    for outcome in outcomes {
        let outcome = outcome?;
        degenerate += outcome.degenerate;
        boundary += outcome.boundary;
        states += outcome.states;
        connections.extend(outcome.found);
    }
    if states > options.budget {
        return Err(Error::RadiusTooLarge {
            budget: options.budget,
        });
    }

    if let Some(ref interval) = sector {
        connections.retain(|c| interval.contains(c.angle()));
    }

    connections.sort_by(|a, b| {
        a.angle()
            .total_cmp(&b.angle())
            .then(a.length().total_cmp(&b.length()))
            .then(a.start_cone.cmp(&b.start_cone))
            .then(a.end_cone.cmp(&b.end_cone))
            .then(a.start_sector.cmp(&b.start_sector))
            .then(a.start_corner.cmp(&b.start_corner))
            .then(a.path.len().cmp(&b.path.len()))
    });
    let merged = dedup_sorted(&mut connections);

    Ok(ScanResult {
        radius,
        sector,
        connections,
        fingerprint: surface.fingerprint(),
        degenerate_sectors_dropped: degenerate,
        boundary_skips: boundary,
        merged_duplicates: merged,
    })
}

fn update_min(bits: &AtomicU64, candidate: f64) {
    let _ = bits.fetch_update(Ordering::Relaxed, Ordering::Relaxed, |cur| {
        if candidate < f64::from_bits(cur) {
            Some(candidate.to_bits())
        } else {
            None
        }
    });
}

fn search_seed(
    surface: &TranslationSurface,
    t: usize,
    v: usize,
    radius: f64,
    bound_bits: &AtomicU64,
    budget: u64,
    shrink: bool,
) -> Result<SeedOutcome> {
    let mut outcome = SeedOutcome::default();
    let tri = &surface.triangles()[t];
    let start_cone = surface.corner_cone(t, v);
    let source_offset = -tri.vertex(v);

    // Open wedge between the two edges at the corner.
    let lo = tri.edges[v];
    let hi = -tri.edges[(v + 2) % 3];
    if lo.angle_between(hi) < MIN_SECTOR_WIDTH {
        outcome.degenerate += 1;
        return Ok(outcome);
    }

    let seed_placement = Placement {
        tri: t,
        offset: source_offset,
    };
    let portal = (v + 1) % 3;
    let bound = || f64::from_bits(bound_bits.load(Ordering::Relaxed));
    let a = seed_placement.vertex(surface, portal);
    let b = seed_placement.vertex(surface, portal + 1);
    match clipped_segment_distance(a, b, lo, hi) {
        Some(d) if d <= bound() => {}
        _ => return Ok(outcome),
    }

    // Path arena: nodes of (parent, crossed edge), one per state.
    let mut arena: Vec<(u32, (u32, u8))> = Vec::new();
    let mut stack: Vec<SearchState> = Vec::new();

    let crossed = surface.cross_edge(seed_placement, portal);
    let (_, entry) = surface.opposite(t, portal);
    arena.push((u32::MAX, (t as u32, portal as u8)));
    stack.push(SearchState {
        tri: crossed.tri as u32,
        entry: entry as u8,
        offset: crossed.offset,
        lo,
        hi,
        path_node: 0,
    });

    while let Some(state) = stack.pop() {
        outcome.states += 1;
        if outcome.states > budget {
            return Err(Error::RadiusTooLarge { budget });
        }
        let cur = state.tri as usize;
        let tri_cur = &surface.triangles()[cur];
        let area = tri_cur.area();
        if area < MIN_TRIANGLE_AREA {
            return Err(Error::DegenerateTriangle {
                triangle: cur,
                area,
            });
        }

        let entry = state.entry as usize;
        let apex = (entry + 2) % 3;
        let w = state.offset + tri_cur.vertex(apex);
        let nw = w.norm();
        let s1 = state.lo.cross(w) / (state.lo.norm() * nw);
        let s2 = state.hi.cross(w) / (state.hi.norm() * nw);
        let inside = s1 > RAY_TOL && s2 < -RAY_TOL;
        let on_lo = s1.abs() <= RAY_TOL;
        let on_hi = s2.abs() <= RAY_TOL;

        let limit = if shrink { bound() } else { radius };
        if inside && nw <= limit {
            if shrink {
                update_min(bound_bits, nw);
            }
            outcome.found.push(SaddleConnection {
                holonomy: w,
                start_cone,
                end_cone: surface.corner_cone(cur, apex),
                start_sector: surface.sector_index(t, v, w),
                start_corner: (t as u32, v as u8),
                path: collect_path(&arena, state.path_node),
                end_vertex: apex as u8,
            });
        } else if (on_lo || on_hi) && nw <= limit {
            outcome.boundary += 1;
        }

        // Child sectors. The edge after the entry edge spans directions
        // clockwise of the apex, the edge before it the rest.
        let low_edge = (entry + 1) % 3;
        let high_edge = (entry + 2) % 3;
        let push_child = |edge: usize, lo: Vec2, hi: Vec2,
                              arena: &mut Vec<(u32, (u32, u8))>,
                              stack: &mut Vec<SearchState>,
                              outcome: &mut SeedOutcome| {
            if lo.angle_between(hi) < MIN_SECTOR_WIDTH {
                outcome.degenerate += 1;
                return;
            }
            let a = state.offset + tri_cur.vertex(edge);
            let b = state.offset + tri_cur.vertex(edge + 1);
            let reach = if shrink { bound() } else { radius };
            match clipped_segment_distance(a, b, lo, hi) {
                Some(d) if d <= reach => {}
                _ => return,
            }
            let placement = surface.cross_edge(
                Placement {
                    tri: cur,
                    offset: state.offset,
                },
                edge,
            );
            let (_, e2) = surface.opposite(cur, edge);
            let node = arena.len() as u32;
            arena.push((state.path_node, (cur as u32, edge as u8)));
            stack.push(SearchState {
                tri: placement.tri as u32,
                entry: e2 as u8,
                offset: placement.offset,
                lo,
                hi,
                path_node: node,
            });
        };

        if inside {
            // Depth-first, low side first.
            push_child(high_edge, w, state.hi, &mut arena, &mut stack, &mut outcome);
            push_child(low_edge, state.lo, w, &mut arena, &mut stack, &mut outcome);
        } else if on_lo {
            push_child(high_edge, state.lo, state.hi, &mut arena, &mut stack, &mut outcome);
        } else if on_hi {
            push_child(low_edge, state.lo, state.hi, &mut arena, &mut stack, &mut outcome);
        } else if s1 < 0.0 {
            // Apex clockwise of the sector: everything continues across
            // the far edge on the counterclockwise side.
            push_child(high_edge, state.lo, state.hi, &mut arena, &mut stack, &mut outcome);
        } else {
            push_child(low_edge, state.lo, state.hi, &mut arena, &mut stack, &mut outcome);
        }
    }

    Ok(outcome)
}

fn collect_path(arena: &[(u32, (u32, u8))], mut node: u32) -> Vec<(u32, u8)> {
    let mut path = Vec::new();
    while node != u32::MAX {
        let (parent, edge) = arena[node as usize];
        path.push(edge);
        node = parent;
    }
    path.reverse();
    path
}

/// Distance from the origin to the part of segment `[a, b]` inside the
/// closed cone between `lo` and `hi` (counterclockwise, width < pi).
/// `None` when the clipped segment is empty.
fn clipped_segment_distance(a: Vec2, b: Vec2, lo: Vec2, hi: Vec2) -> Option<f64> {
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    // Constraints cross(lo, p) >= 0 and cross(hi, p) <= 0, linear in t.
    for (fa, fb) in [
        (lo.cross(a), lo.cross(b)),
        (-hi.cross(a), -hi.cross(b)),
    ] {
        if fa < 0.0 && fb < 0.0 {
            return None;
        }
        if fa < 0.0 {
            t0 = t0.max(fa / (fa - fb));
        } else if fb < 0.0 {
            t1 = t1.min(fa / (fa - fb));
        }
    }
    if t0 > t1 {
        return None;
    }
    let p = a + (b - a) * t0;
    let q = a + (b - a) * t1;
    Some(segment_distance_to_origin(p, q))
}

fn segment_distance_to_origin(p: Vec2, q: Vec2) -> f64 {
    let d = q - p;
    let len_sq = d.norm_sq();
    if len_sq == 0.0 {
        return p.norm();
    }
    let t = (-p.dot(d) / len_sq).clamp(0.0, 1.0);
    (p + d * t).norm()
}

/// Merges sorted entries that agree in both cone points and in holonomy
/// within [`DEDUP_TOL`]. Returns the number of merged entries.
fn dedup_sorted(connections: &mut Vec<SaddleConnection>) -> usize {
    let mut merged = 0;
    let mut out: Vec<SaddleConnection> = Vec::with_capacity(connections.len());
    for c in connections.drain(..) {
        let dup = out.iter().rev()
            .take_while(|p| c.angle() - p.angle() <= 1e-6)
            .any(|p| is_duplicate(p, &c));
        if dup {
            merged += 1;
        } else {
            out.push(c);
        }
    }
    // The angle sort can separate duplicates straddling the 0/2pi seam.
    if out.len() >= 2 {
        let head: Vec<usize> = (0..out.len())
            .take_while(|&i| out[i].angle() <= 1e-6)
            .collect();
        let mut drop = Vec::new();
        for i in (0..out.len()).rev() {
            if TAU - out[i].angle() > 1e-6 {
                break;
            }
            if head.iter().any(|&j| is_duplicate(&out[j], &out[i])) {
                drop.push(i);
            }
        }
        for i in drop {
            out.remove(i);
            merged += 1;
        }
    }
    *connections = out;
    merged
}

fn is_duplicate(a: &SaddleConnection, b: &SaddleConnection) -> bool {
    a.start_cone == b.start_cone
        && a.end_cone == b.end_cone
        && (a.holonomy.x - b.holonomy.x).abs() <= DEDUP_TOL
        && (a.holonomy.y - b.holonomy.y).abs() <= DEDUP_TOL
}
