//! Counting functions and empirical measures built from saddle
//! connection scans: direction histograms against Lebesgue measure,
//! occupation measures on the surface against area, Cesàro sums, the
//! near-horizontal connection construction, annular wedge counts under
//! the diagonal flow, and circle averages of vector norms and systoles.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{AngleInterval, Mat2, Vec2};
use crate::scan::{scan, systole, SaddleConnection, ScanResult};
use crate::sl2;
use crate::surface::TranslationSurface;

/// Universal upper bound for the shortest saddle connection on a
/// unit-area surface: `2 / sqrt(pi)`.
pub fn unit_area_systole_bound() -> f64 {
    2.0 / PI.sqrt()
}

/// Lower-bound constant for the Cesàro sum: `pi / (16 sqrt 2)`. For
/// large `R`, the sum of reciprocal lengths over a direction interval `I`
/// is at least this constant times `|I| R`.
pub fn cesaro_lower_const() -> f64 {
    PI / (16.0 * 2.0f64.sqrt())
}

/// Angle bound constant for the near-horizontal construction:
/// `2 sqrt 2 / pi`.
pub fn near_horizontal_const() -> f64 {
    2.0 * 2.0f64.sqrt() / PI
}

/// Number of saddle connections of length at most `radius` with direction
/// in `interval` (oriented convention).
pub fn count(
    surface: &TranslationSurface,
    radius: f64,
    interval: Option<AngleInterval>,
) -> Result<usize> {
    Ok(scan(surface, radius, interval)?.count())
}

/// Normalized histogram of saddle connection directions, with its sup
/// distance from the uniform distribution at bin-edge resolution.
#[derive(Clone, Debug)]
pub struct AngleMeasure {
    pub radius: f64,
    pub n_bins: usize,
    /// Bin masses over `[0, 2pi)` in uniform half-open bins; sums to 1.
    pub masses: Vec<f64>,
    pub total: usize,
    /// Sup distance between the empirical and uniform distribution
    /// functions sampled at the bin edges. A lower bound for the exact
    /// sup over all points.
    pub ks_distance: f64,
}

pub fn angle_measure(
    surface: &TranslationSurface,
    radius: f64,
    n_bins: usize,
) -> Result<AngleMeasure> {
    let result = scan(surface, radius, None)?;
    angle_measure_from(&result, n_bins)
}

pub fn angle_measure_from(result: &ScanResult, n_bins: usize) -> Result<AngleMeasure> {
    if n_bins == 0 {
        return Err(Error::InvalidParameter("zero bins".into()));
    }
    let total = result.count();
    if total == 0 {
        return Err(Error::EmptyScan);
    }
    let mut counts = vec![0usize; n_bins];
    for c in &result.connections {
        let bin = ((c.angle() / TAU) * n_bins as f64) as usize;
        counts[bin.min(n_bins - 1)] += 1;
    }
    let masses: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    let mut ks: f64 = 0.0;
    let mut cum = 0.0;
    for (i, m) in masses.iter().enumerate() {
        cum += m;
        let uniform = (i + 1) as f64 / n_bins as f64;
        ks = ks.max((cum - uniform).abs());
    }
    Ok(AngleMeasure {
        radius: result.radius,
        n_bins,
        masses,
        total,
        ks_distance: ks,
    })
}

/// Occupation measure of the saddle connections on the surface, averaged
/// per connection and binned on an `n x n` rectangular grid over each
/// defining polygon's bounding box.
#[derive(Clone, Debug)]
pub struct SurfaceMeasure {
    pub radius: f64,
    pub grid: usize,
    /// One entry per polygon: bounding box `(min, max)`.
    pub boxes: Vec<(Vec2, Vec2)>,
    /// `masses[poly][j * grid + i]`: fraction of the averaged measure in
    /// cell `(i, j)`; all cells sum to 1.
    pub masses: Vec<Vec<f64>>,
    /// Reference values: flat area of each cell's intersection with its
    /// polygon, normalized by the total area.
    pub reference: Vec<Vec<f64>>,
    /// `max |mass - reference|` over all cells.
    pub sup_discrepancy: f64,
}

impl SurfaceMeasure {
    /// CSV rows `polygon,i,j,mass,reference`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("polygon,i,j,mass,reference\n");
        for (poly, (m, r)) in self.masses.iter().zip(&self.reference).enumerate() {
            for j in 0..self.grid {
                for i in 0..self.grid {
                    out.push_str(&format!(
                        "{},{},{},{:?},{:?}\n",
                        poly,
                        i,
                        j,
                        m[j * self.grid + i],
                        r[j * self.grid + i]
                    ));
                }
            }
        }
        out
    }
}

pub fn surface_measure(
    surface: &TranslationSurface,
    radius: f64,
    grid: usize,
) -> Result<SurfaceMeasure> {
    let result = scan(surface, radius, None)?;
    if result.count() == 0 {
        return Err(Error::EmptyScan);
    }
    surface_measure_from(surface, &result.connections, radius, grid)
}

/// Builds the occupation measure for an explicit family of connections;
/// used both by [`surface_measure`] and for restricted subfamilies.
pub fn surface_measure_from(
    surface: &TranslationSurface,
    connections: &[SaddleConnection],
    radius: f64,
    grid: usize,
) -> Result<SurfaceMeasure> {
    if grid == 0 {
        return Err(Error::InvalidParameter("zero grid".into()));
    }
    if connections.is_empty() {
        return Err(Error::EmptyScan);
    }
    let polygons = &surface.description().polygons;
    let boxes: Vec<(Vec2, Vec2)> = polygons.iter().map(|p| polygon_bbox(p)).collect();

    let mut masses: Vec<Vec<f64>> = boxes.iter().map(|_| vec![0.0; grid * grid]).collect();
    let total_area = surface.area();
    let n = connections.len() as f64;

    for c in connections {
        let len = c.length();
        for (poly, a, b) in c.polygon_segments(surface) {
            let (lo, hi) = boxes[poly];
            let cw = (hi.x - lo.x) / grid as f64;
            let ch = (hi.y - lo.y) / grid as f64;
            // Cells possibly touched by this piece.
            let (i0, i1) = cell_range(a.x.min(b.x), a.x.max(b.x), lo.x, cw, grid);
            let (j0, j1) = cell_range(a.y.min(b.y), a.y.max(b.y), lo.y, ch, grid);
            let mut clipped: Vec<(usize, f64)> = Vec::new();
            let mut clipped_total = 0.0;
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let x0 = lo.x + i as f64 * cw;
                    let y0 = lo.y + j as f64 * ch;
                    let l = clip_segment_length(a, b, x0, x0 + cw, y0, y0 + ch);
                    if l > 0.0 {
                        clipped.push((j * grid + i, l));
                        clipped_total += l;
                    }
                }
            }
            let seg_len = (b - a).norm();
            if seg_len == 0.0 {
                continue;
            }
            if clipped_total == 0.0 {
                // A piece sitting on the bounding box edge can round a
                // hair outside every closed cell; charge it to the cell
                // under its midpoint.
                let mid = (a + b) * 0.5;
                let (i, _) = cell_range(mid.x, mid.x, lo.x, cw, grid);
                let (j, _) = cell_range(mid.y, mid.y, lo.y, ch, grid);
                masses[poly][j * grid + i] += seg_len / (len * n);
                continue;
            }
            // Pieces running exactly along a shared cell boundary are
            // clipped into both closed cells; rescaling by the piece
            // length keeps the total measure conserved.
            let scale = seg_len / clipped_total / (len * n);
            for (cell, l) in clipped {
                masses[poly][cell] += l * scale;
            }
        }
    }

    let mut reference: Vec<Vec<f64>> = Vec::with_capacity(polygons.len());
    for (poly, bbox) in polygons.iter().zip(&boxes) {
        let verts = polygon_vertices(poly);
        let (lo, hi) = *bbox;
        let cw = (hi.x - lo.x) / grid as f64;
        let ch = (hi.y - lo.y) / grid as f64;
        let mut cells = vec![0.0; grid * grid];
        for j in 0..grid {
            for i in 0..grid {
                let x0 = lo.x + i as f64 * cw;
                let y0 = lo.y + j as f64 * ch;
                cells[j * grid + i] =
                    clip_polygon_area(&verts, x0, x0 + cw, y0, y0 + ch) / total_area;
            }
        }
        reference.push(cells);
    }

    let sup_discrepancy = masses
        .iter()
        .flatten()
        .zip(reference.iter().flatten())
        .map(|(m, r)| (m - r).abs())
        .fold(0.0, f64::max);

    Ok(SurfaceMeasure {
        radius,
        grid,
        boxes,
        masses,
        reference,
        sup_discrepancy,
    })
}

/// Cesàro sum of reciprocal lengths over a direction interval, compared
/// against its linear lower bound.
#[derive(Clone, Debug)]
pub struct CesaroReport {
    pub radius: f64,
    pub interval: AngleInterval,
    /// `sum of 1/|s|` over connections with direction in the interval.
    pub sum: f64,
    /// `cesaro_lower_const() * |I| * R`.
    pub bound: f64,
    pub holds: bool,
}

pub fn cesaro_sum(
    surface: &TranslationSurface,
    radius: f64,
    interval: AngleInterval,
) -> Result<CesaroReport> {
    let result = scan(surface, radius, None)?;
    Ok(cesaro_sum_from(&result, interval))
}

pub fn cesaro_sum_from(result: &ScanResult, interval: AngleInterval) -> CesaroReport {
    let sum: f64 = result
        .connections
        .iter()
        .filter(|c| interval.contains(c.angle()))
        .map(|c| 1.0 / c.length())
        .sum();
    let bound = cesaro_lower_const() * interval.length() * result.radius;
    CesaroReport {
        radius: result.radius,
        interval,
        sum,
        bound,
        holds: sum >= bound,
    }
}

/// A saddle connection close to horizontal, with its angle certificate.
#[derive(Clone, Debug)]
pub struct NearHorizontal {
    pub connection: SaddleConnection,
    /// Signed angle to the horizontal, in `(-pi/2, pi/2]`.
    pub theta: f64,
    /// `near_horizontal_const() / (R |s|)`.
    pub bound: f64,
    pub holds: bool,
    /// Diagonal flow time used by the construction.
    pub flow_time: f64,
}

/// Produces a saddle connection whose angle to the horizontal is at most
/// `near_horizontal_const() / (R |s|)`, by flowing for time
/// `t = log(R sqrt(pi) / 2)`, taking the shortest connection there, and
/// pulling it back.
pub fn near_horizontal(surface: &TranslationSurface, radius: f64) -> Result<NearHorizontal> {
    let sys = systole(surface)?;
    let b = unit_area_systole_bound();
    let threshold = 2.0f64.sqrt() * b * b / sys.length;
    if radius < threshold {
        return Err(Error::ThresholdNotMet {
            radius,
            threshold,
        });
    }
    let t = (radius / b).ln();
    let deformed = sl2::apply(surface, Mat2::g(t))?;
    let short = systole(&deformed)?;
    let mut conn = short.connection;
    if conn.holonomy.x.abs() <= 1e-12 * short.length {
        return Err(Error::VerticalDegenerate);
    }
    if conn.holonomy.x < 0.0 {
        conn = conn.reversed(&deformed);
    }
    // Pull back along the same combinatorial path on the undeformed
    // surface; redeveloping there gives the exact holonomy.
    let mut pulled = conn.clone();
    pulled.holonomy = conn.develop(surface);
    let (ct, cv) = (pulled.start_corner.0 as usize, pulled.start_corner.1 as usize);
    pulled.start_sector = surface.sector_index(ct, cv, pulled.holonomy);

    let theta = pulled.holonomy.y.atan2(pulled.holonomy.x);
    let bound = near_horizontal_const() / (radius * pulled.length());
    Ok(NearHorizontal {
        theta,
        bound,
        holds: theta.abs() <= bound,
        flow_time: t,
        connection: pulled,
    })
}

/// Counts of flowed holonomies landing in the closed annular wedge
/// `{ 1/2 <= r <= 1, |angle| <= pi/4 }`, against the direct count of
/// connections with length in `(R/2, R]`-style half-annuli.
#[derive(Clone, Debug)]
pub struct AnnularWedge {
    pub flow_time: f64,
    pub radius: f64,
    pub interval: AngleInterval,
    /// `N(X, R, I) - N(X, R/2, I)`.
    pub direct: usize,
    /// Wedge membership count per quadrature node over the doubled
    /// interval.
    pub node_counts: Vec<(f64, usize)>,
    /// `2 R^2` times the larger half-interval integral of the node
    /// counts.
    pub quadrature_bound: f64,
    pub holds: bool,
}

/// Whether a vector lies in the closed wedge
/// `{ 1/2 <= |v| <= 1, |angle to horizontal| <= pi/4 }`.
pub fn in_annular_wedge(v: Vec2) -> bool {
    let n = v.norm();
    (0.5..=1.0).contains(&n) && v.x > 0.0 && v.y.abs() <= v.x * FRAC_PI_4.tan() + 1e-15
}

pub fn count_annular_wedge(
    surface: &TranslationSurface,
    flow_time: f64,
    interval: AngleInterval,
    nodes: usize,
) -> Result<AnnularWedge> {
    if flow_time < 0.0 {
        return Err(Error::InvalidParameter("negative flow time".into()));
    }
    let radius = flow_time.exp();
    let full = scan(surface, radius, None)?;
    let in_interval = |c: &SaddleConnection| interval.contains(c.angle());
    let direct = full
        .connections
        .iter()
        .filter(|c| in_interval(c) && c.length() > radius / 2.0)
        .count();

    let doubled = interval.doubled();
    let h = doubled.length() / nodes.max(1) as f64;
    let node_counts: Vec<(f64, usize)> = (0..nodes)
        .into_par_iter()
        .map(|j| {
            let theta = doubled.lo() + (j as f64 + 0.5) * h;
            let deformed = sl2::apply(surface, Mat2::g(flow_time) * Mat2::rotation(theta))
                .expect("g r is unimodular");
            let result = scan(&deformed, 2.0, None)?;
            let count = result
                .connections
                .iter()
                .filter(|c| in_annular_wedge(c.holonomy))
                .count();
            Ok((theta, count))
        })
        .collect::<Result<Vec<_>>>()?;

    // Larger half of the doubled interval, by quadrature.
    let mid = doubled.lo() + doubled.length() / 2.0;
    let (mut first, mut second) = (0.0, 0.0);
    for &(theta, c) in &node_counts {
        if theta < mid {
            first += c as f64 * h;
        } else {
            second += c as f64 * h;
        }
    }
    let quadrature_bound = 2.0 * radius * radius * first.max(second);
    Ok(AnnularWedge {
        flow_time,
        radius,
        interval,
        direct,
        node_counts,
        quadrature_bound,
        holds: (direct as f64) <= quadrature_bound,
    })
}

/// `integral over [0, 2pi] of |g_t r_theta v|^(-(1+delta)) dtheta`, by
/// adaptive quadrature to about 1e-6 relative error. The integrand peaks
/// sharply where the rotated vector aligns with the horizontal; the
/// initial subdivision puts knots there.
pub fn vector_circle_average(v: Vec2, t: f64, delta: f64) -> Result<f64> {
    if v.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!(
            "delta {delta} outside [0, 1)"
        )));
    }
    if t < 0.0 {
        return Err(Error::InvalidParameter("negative flow time".into()));
    }
    let (et, emt) = (t.exp(), (-t).exp());
    let f = |theta: f64| -> f64 {
        let (s, c) = theta.sin_cos();
        let x = emt * (c * v.x - s * v.y);
        let y = et * (s * v.x + c * v.y);
        x.hypot(y).powf(-(1.0 + delta))
    };
    // Peaks where r_theta v is horizontal.
    let peak = (-v.y.atan2(v.x)).rem_euclid(PI);
    let mut knots = vec![0.0, peak, peak + PI, TAU];
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

    let rough: f64 = knots
        .windows(2)
        .map(|w| simpson(&f, w[0], w[1]))
        .sum();
    let tol = 1e-7 * rough.abs().max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    for w in knots.windows(2) {
        total += adaptive_simpson(&f, w[0], w[1], tol * (w[1] - w[0]) / TAU, 60);
    }
    Ok(total)
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let m = 0.5 * (a + b);
    let whole = simpson(f, a, b);
    let left = simpson(f, a, m);
    let right = simpson(f, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(f, a, m, tol / 2.0, depth - 1)
            + adaptive_simpson(f, m, b, tol / 2.0, depth - 1)
    }
}

/// Parameters for [`circle_integral`].
#[derive(Clone, Copy, Debug)]
pub struct CircleIntegralParams {
    /// Exponent offset, strictly inside `(0, 1/2)`.
    pub delta: f64,
    /// Diagonal flow time, non-negative.
    pub flow_time: f64,
    pub interval: AngleInterval,
    /// Number of uniform quadrature nodes, at least 16.
    pub nodes: usize,
}

impl CircleIntegralParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "delta {} outside (0, 1/2)",
                self.delta
            )));
        }
        if self.flow_time < 0.0 {
            return Err(Error::InvalidParameter("negative flow time".into()));
        }
        if self.nodes < 16 {
            return Err(Error::InvalidParameter(format!(
                "{} quadrature nodes (need at least 16)",
                self.nodes
            )));
        }
        Ok(())
    }

    /// Node count below which the systole's angular variation is not
    /// resolved: `64 e^T |I|`.
    pub fn recommended_nodes(&self) -> usize {
        (64.0 * self.flow_time.exp() * self.interval.length()).ceil() as usize
    }
}

/// Uniform-node estimate of
/// `integral over I of systole(g_T r_theta X)^(-(1+delta)) dtheta`.
#[derive(Clone, Debug)]
pub struct CircleIntegral {
    pub params: CircleIntegralParams,
    pub value: f64,
    /// Per-node `(theta, systole length)` diagnostics.
    pub nodes: Vec<(f64, f64)>,
    /// Set when fewer nodes than `64 e^T |I|` were used.
    pub under_resolved: bool,
}

pub fn circle_integral(
    surface: &TranslationSurface,
    params: CircleIntegralParams,
) -> Result<CircleIntegral> {
    params.validate()?;
    let interval = params.interval;
    if interval.is_empty() {
        return Ok(CircleIntegral {
            params,
            value: 0.0,
            nodes: Vec::new(),
            under_resolved: false,
        });
    }
    let h = interval.length() / params.nodes as f64;
    let g = Mat2::g(params.flow_time);
    let nodes: Vec<(f64, f64)> = (0..params.nodes)
        .into_par_iter()
        .map(|j| {
            let theta = interval.lo() + (j as f64 + 0.5) * h;
            let deformed = sl2::apply(surface, g * Mat2::rotation(theta))?;
            Ok((theta, systole(&deformed)?.length))
        })
        .collect::<Result<Vec<_>>>()?;
    let value = nodes
        .iter()
        .map(|&(_, l)| l.powf(-(1.0 + params.delta)))
        .sum::<f64>()
        * h;
    Ok(CircleIntegral {
        under_resolved: params.nodes < params.recommended_nodes(),
        params,
        value,
        nodes,
    })
}

/// One named inequality check with the values that went into it.
#[derive(Clone, Debug)]
pub struct ConstantCheck {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    /// True when the inequality holds in the asserted direction.
    pub pass: bool,
}

/// Summary statistics of one scan: direction histogram, occupation
/// measure, Cesàro sum, and the explicit-constant checks.
#[derive(Clone, Debug)]
pub struct MeasureReport {
    pub radius: f64,
    pub total: usize,
    pub angle: AngleMeasure,
    pub surface: SurfaceMeasure,
    pub cesaro: CesaroReport,
    pub checks: Vec<ConstantCheck>,
}

pub fn measure_report(
    surface: &TranslationSurface,
    radius: f64,
    n_bins: usize,
    grid: usize,
    interval: AngleInterval,
) -> Result<MeasureReport> {
    let result = scan(surface, radius, None)?;
    if result.count() == 0 {
        return Err(Error::EmptyScan);
    }
    let angle = angle_measure_from(&result, n_bins)?;
    let surf = surface_measure_from(surface, &result.connections, radius, grid)?;
    let cesaro = cesaro_sum_from(&result, interval);

    let sys = systole(surface)?;
    let area = surface.area();
    let sys_bound = unit_area_systole_bound() * area.sqrt();
    let mut checks = vec![
        ConstantCheck {
            name: "systole-universal-bound",
            value: sys.length,
            threshold: sys_bound,
            pass: sys.length <= sys_bound,
        },
        ConstantCheck {
            name: "cesaro-linear-lower",
            value: cesaro.sum,
            threshold: cesaro.bound,
            pass: cesaro.holds,
        },
    ];
    if let Ok(nh) = near_horizontal(surface, radius) {
        checks.push(ConstantCheck {
            name: "near-horizontal-angle",
            value: nh.theta.abs(),
            threshold: nh.bound,
            pass: nh.holds,
        });
    }

    Ok(MeasureReport {
        radius,
        total: result.count(),
        angle,
        surface: surf,
        cesaro,
        checks,
    })
}

impl MeasureReport {
    /// Human-readable report.
    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("radius: {}\n", self.radius));
        out.push_str(&format!("connections: {}\n", self.total));
        out.push_str(&format!(
            "angle bins: {} (ks distance to uniform: {:.6})\n",
            self.angle.n_bins, self.angle.ks_distance
        ));
        out.push_str(&format!(
            "surface grid: {}x{} per polygon (sup cell discrepancy: {:.6})\n",
            self.surface.grid, self.surface.grid, self.surface.sup_discrepancy
        ));
        out.push_str(&format!(
            "cesaro sum over [{:.6}, {:.6}): {:.6} (bound {:.6}: {})\n",
            self.cesaro.interval.lo(),
            self.cesaro.interval.hi(),
            self.cesaro.sum,
            self.cesaro.bound,
            if self.cesaro.holds { "pass" } else { "fail" }
        ));
        for c in &self.checks {
            out.push_str(&format!(
                "check {}: value {:.9} vs threshold {:.9}: {}\n",
                c.name,
                c.value,
                c.threshold,
                if c.pass { "pass" } else { "fail" }
            ));
        }
        out
    }

    /// CSV rows `statistic,radius,value`.
    pub fn stats_csv(&self) -> String {
        let mut out = String::from("statistic,radius,value\n");
        let mut push = |name: &str, value: f64| {
            out.push_str(&format!("{},{:?},{:?}\n", name, self.radius, value));
        };
        push("count", self.total as f64);
        push("ks_distance", self.angle.ks_distance);
        push("sup_discrepancy", self.surface.sup_discrepancy);
        push("cesaro_sum", self.cesaro.sum);
        push("cesaro_bound", self.cesaro.bound);
        for c in &self.checks {
            push(c.name, c.value);
        }
        out
    }
}

fn polygon_vertices(edges: &[Vec2]) -> Vec<Vec2> {
    let mut out = Vec::with_capacity(edges.len());
    let mut p = Vec2::ZERO;
    for e in edges {
        out.push(p);
        p = p + *e;
    }
    out
}

fn polygon_bbox(edges: &[Vec2]) -> (Vec2, Vec2) {
    let verts = polygon_vertices(edges);
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in verts {
        lo.x = lo.x.min(v.x);
        lo.y = lo.y.min(v.y);
        hi.x = hi.x.max(v.x);
        hi.y = hi.y.max(v.y);
    }
    (lo, hi)
}

/// Indices of grid cells whose slab `[lo + i w, lo + (i+1) w]` meets
/// `[min, max]`.
fn cell_range(min: f64, max: f64, lo: f64, w: f64, grid: usize) -> (usize, usize) {
    let i0 = (((min - lo) / w).floor() as i64).clamp(0, grid as i64 - 1) as usize;
    let i1 = (((max - lo) / w).floor() as i64).clamp(0, grid as i64 - 1) as usize;
    (i0, i1)
}

/// Length of the part of segment `[p, q]` inside the closed rectangle.
/// Each side contributes a constraint `a + b t >= 0` on the parameter.
fn clip_segment_length(p: Vec2, q: Vec2, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let d = q - p;
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (a, b) in [
        (p.x - x0, d.x),
        (x1 - p.x, -d.x),
        (p.y - y0, d.y),
        (y1 - p.y, -d.y),
    ] {
        if b.abs() < 1e-15 {
            if a < 0.0 {
                return 0.0;
            }
            continue;
        }
        let t = -a / b;
        if b > 0.0 {
            t0 = t0.max(t);
        } else {
            t1 = t1.min(t);
        }
    }
    if t1 > t0 {
        (t1 - t0) * d.norm()
    } else {
        0.0
    }
}

/// Area of a counterclockwise polygon clipped to an axis rectangle
/// (Sutherland-Hodgman, then shoelace).
fn clip_polygon_area(vertices: &[Vec2], x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let mut pts = vertices.to_vec();
    let sides: [(bool, f64, bool); 4] = [
        (true, x0, true),   // x >= x0
        (true, x1, false),  // x <= x1
        (false, y0, true),  // y >= y0
        (false, y1, false), // y <= y1
    ];
    for (on_x, bound, keep_ge) in sides {
        if pts.is_empty() {
            return 0.0;
        }
        let inside = |p: Vec2| {
            let c = if on_x { p.x } else { p.y };
            if keep_ge {
                c >= bound
            } else {
                c <= bound
            }
        };
        let cross_at = |a: Vec2, b: Vec2| {
            let (ca, cb) = if on_x { (a.x, b.x) } else { (a.y, b.y) };
            let t = (bound - ca) / (cb - ca);
            a + (b - a) * t
        };
        let mut next = Vec::with_capacity(pts.len() + 4);
        let mut prev = *pts.last().unwrap();
        for &p in &pts {
            match (inside(prev), inside(p)) {
                (true, true) => next.push(p),
                (true, false) => next.push(cross_at(prev, p)),
                (false, true) => {
                    next.push(cross_at(prev, p));
                    next.push(p);
                }
                (false, false) => {}
            }
            prev = p;
        }
        pts = next;
    }
    if pts.len() < 3 {
        return 0.0;
    }
    let n = pts.len();
    (0..n)
        .map(|i| pts[i].cross(pts[(i + 1) % n]))
        .sum::<f64>()
        .abs()
        / 2.0
}
