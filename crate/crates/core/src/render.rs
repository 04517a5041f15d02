//! SVG renderings of saddle connection families.
//!
//! Every connection is drawn as the union of its straight pieces in the
//! defining polygons' coordinates, with stroke width inversely
//! proportional to its length: each connection then carries the same
//! total amount of ink, and in the large-radius limit the picture shades
//! toward uniform coverage. Polygons of a multi-polygon description are
//! laid out side by side.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::scan::ScanResult;
use crate::surface::TranslationSurface;

/// Rendering options.
#[derive(Clone, Debug)]
pub struct RenderSpec {
    /// Width numerator: a connection of length `l` is stroked at
    /// `width_scale / l` display pixels. `None` picks the value that
    /// gives the shortest rendered connection a width of 2 pixels.
    pub width_scale: Option<f64>,
    pub color: String,
    /// Pixel width of the output image.
    pub canvas: f64,
    /// Draw the polygon outlines.
    pub outlines: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            width_scale: None,
            color: "#23518f".into(),
            canvas: 800.0,
            outlines: true,
        }
    }
}

/// Renders a scan as an SVG 1.1 document.
pub fn render_svg(
    surface: &TranslationSurface,
    result: &ScanResult,
    spec: &RenderSpec,
) -> Result<String> {
    if let Some(w) = spec.width_scale {
        if !(w > 0.0) {
            return Err(Error::InvalidParameter(format!("width scale {w}")));
        }
    }
    if !(spec.canvas > 0.0) {
        return Err(Error::InvalidParameter(format!("canvas {}", spec.canvas)));
    }

    // Side-by-side layout of the defining polygons.
    let polygons = &surface.description().polygons;
    let mut outlines: Vec<Vec<Vec2>> = Vec::with_capacity(polygons.len());
    let mut offsets: Vec<Vec2> = Vec::with_capacity(polygons.len());
    let mut cursor = 0.0f64;
    let mut height: f64 = 0.0;
    for edges in polygons {
        let mut p = Vec2::ZERO;
        let mut verts = Vec::with_capacity(edges.len());
        for e in edges {
            verts.push(p);
            p = p + *e;
        }
        let (lo, hi) = bbox(&verts);
        let margin = 0.05 * (hi - lo).norm().max(1e-9);
        offsets.push(Vec2::new(cursor - lo.x, -lo.y));
        cursor += hi.x - lo.x + margin;
        height = height.max(hi.y - lo.y);
        outlines.push(verts);
    }
    let width = cursor;
    let margin = 0.03 * width.max(height);
    let view_w = width + 2.0 * margin;
    let view_h = height + 2.0 * margin;
    let px_per_unit = spec.canvas / view_w;

    let min_len = result
        .connections
        .iter()
        .map(|c| c.length())
        .fold(f64::INFINITY, f64::min);
    let width_scale_px = spec.width_scale.unwrap_or_else(|| {
        if min_len.is_finite() {
            2.0 * min_len
        } else {
            1.0
        }
    });

    let mut svg = String::new();
    let canvas_h = spec.canvas * view_h / view_w;
    let _ = writeln!(
        svg,
        r#"<svg version="1.1" xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {view_w} {view_h}">"#,
        spec.canvas, canvas_h
    );
    // Flip y so the flat-plane orientation matches the screen.
    let map = |poly: usize, p: Vec2| -> Vec2 {
        let q = p + offsets[poly];
        Vec2::new(q.x + margin, view_h - (q.y + margin))
    };

    let _ = writeln!(svg, r#"  <g stroke-linecap="round">"#);
    for c in &result.connections {
        let len = c.length();
        let w_units = (width_scale_px / len) / px_per_unit;
        if !(w_units > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "non-positive stroke width for connection of length {len}"
            )));
        }
        for (poly, a, b) in c.polygon_segments(surface) {
            let a = map(poly, a);
            let b = map(poly, b);
            let _ = writeln!(
                svg,
                r#"    <line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="{}" stroke-width="{:.6}" stroke-opacity="0.85"/>"#,
                a.x, a.y, b.x, b.y, spec.color, w_units
            );
        }
    }
    let _ = writeln!(svg, "  </g>");

    if spec.outlines {
        for (poly, verts) in outlines.iter().enumerate() {
            let mut d = String::new();
            for (i, v) in verts.iter().enumerate() {
                let p = map(poly, *v);
                let _ = write!(d, "{}{:.6},{:.6} ", if i == 0 { "M" } else { "L" }, p.x, p.y);
            }
            d.push('Z');
            let _ = writeln!(
                svg,
                r##"  <path d="{d}" fill="none" stroke="#000" stroke-width="{:.6}"/>"##,
                1.5 / px_per_unit
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn bbox(verts: &[Vec2]) -> (Vec2, Vec2) {
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
