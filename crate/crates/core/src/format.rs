//! Plain-text surface files.
//!
//! A surface file lists polygons as edge vectors and gluings as pairs of
//! `polygon.edge` references:
//!
//! ```text
//! # flatscan surface v1
//! polygon
//!   edge (1, 0)
//!   edge (0, 1)
//!   edge (-1, 0)
//!   edge (0, -1)
//! glue (0.0 ~ 0.2)
//! glue (0.1 ~ 0.3)
//! ```
//!
//! Numbers are decimal with however many digits round-trip the value
//! exactly; the writer is canonical, so write-read-write is byte stable.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::surface::{SurfaceDescription, TranslationSurface};

pub const HEADER: &str = "# flatscan surface v1";

/// Canonical text form of a surface description.
pub fn write_description(description: &SurfaceDescription) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for polygon in &description.polygons {
        out.push_str("polygon\n");
        for e in polygon {
            out.push_str(&format!("  edge ({:?}, {:?})\n", e.x, e.y));
        }
    }
    let mut gluings = description.gluings.clone();
    for pair in &mut gluings {
        if pair.1 < pair.0 {
            *pair = (pair.1, pair.0);
        }
    }
    gluings.sort();
    for ((pa, ea), (pb, eb)) in gluings {
        out.push_str(&format!("glue ({pa}.{ea} ~ {pb}.{eb})\n"));
    }
    out
}

/// Parses the text form. Accepts blank lines and `#` comments anywhere.
pub fn parse_description(text: &str) -> Result<SurfaceDescription> {
    let mut polygons: Vec<Vec<Vec2>> = Vec::new();
    let mut gluings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content == "polygon" {
            polygons.push(Vec::new());
            continue;
        }
        if let Some(rest) = content.strip_prefix("edge") {
            let polygon = polygons.last_mut().ok_or(Error::Parse {
                line,
                message: "edge before any polygon".into(),
            })?;
            let (x, y) = parse_pair(rest, line)?;
            polygon.push(Vec2::new(x, y));
            continue;
        }
        if let Some(rest) = content.strip_prefix("glue") {
            gluings.push(parse_gluing(rest, line)?);
            continue;
        }
        return Err(Error::Parse {
            line,
            message: format!("unrecognized directive: {content}"),
        });
    }
    Ok(SurfaceDescription { polygons, gluings })
}

fn parse_pair(rest: &str, line: usize) -> Result<(f64, f64)> {
    let inner = rest
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or(Error::Parse {
            line,
            message: "expected (x, y)".into(),
        })?;
    let mut parts = inner.split(',');
    let x = parse_number(parts.next(), line)?;
    let y = parse_number(parts.next(), line)?;
    if parts.next().is_some() {
        return Err(Error::Parse {
            line,
            message: "too many components".into(),
        });
    }
    Ok((x, y))
}

fn parse_number(part: Option<&str>, line: usize) -> Result<f64> {
    part.map(str::trim)
        .filter(|s| !s.is_empty())
        .and_then(|s| s.parse().ok())
        .ok_or(Error::Parse {
            line,
            message: "bad number".into(),
        })
}

fn parse_gluing(rest: &str, line: usize) -> Result<((usize, usize), (usize, usize))> {
    let inner = rest
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or(Error::Parse {
            line,
            message: "expected (a.b ~ c.d)".into(),
        })?;
    let mut sides = inner.split('~');
    let a = parse_side(sides.next(), line)?;
    let b = parse_side(sides.next(), line)?;
    if sides.next().is_some() {
        return Err(Error::Parse {
            line,
            message: "too many sides".into(),
        });
    }
    Ok((a, b))
}

fn parse_side(part: Option<&str>, line: usize) -> Result<(usize, usize)> {
    let s = part.map(str::trim).unwrap_or("");
    let mut nums = s.split('.');
    let parse = |p: Option<&str>| -> Result<usize> {
        p.map(str::trim)
            .and_then(|v| v.parse().ok())
            .ok_or(Error::Parse {
                line,
                message: format!("bad edge reference: {s}"),
            })
    };
    let poly = parse(nums.next())?;
    let edge = parse(nums.next())?;
    if nums.next().is_some() {
        return Err(Error::Parse {
            line,
            message: format!("bad edge reference: {s}"),
        });
    }
    Ok((poly, edge))
}

/// Reads and builds a surface from a file.
pub fn load_surface(path: impl AsRef<Path>) -> Result<TranslationSurface> {
    let text = fs::read_to_string(path)?;
    TranslationSurface::build(parse_description(&text)?)
}

/// Writes a surface description to a file in canonical form.
pub fn save_surface(path: impl AsRef<Path>, surface: &TranslationSurface) -> Result<()> {
    fs::write(path, write_description(surface.description()))?;
    Ok(())
}
