//! Command line frontend: build and deform surfaces, scan saddle
//! connections, and export statistics, CSV tables and SVG pictures.

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use flatscan::billiard::{unfold, RationalPolygon};
use flatscan::cylinders::cylinder_decomposition;
use flatscan::format;
use flatscan::geometry::AngleInterval;
use flatscan::render::{render_svg, RenderSpec};
use flatscan::scan::{scan, systole};
use flatscan::stats;
use flatscan::{Error, Mat2, Vec2};

#[derive(Parser)]
#[command(
    name = "flatscan",
    about = "Saddle connection scanner for translation surfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a surface file and rewrite it in canonical form.
    Build {
        input: PathBuf,
        /// Rescale to unit area before writing.
        #[arg(long)]
        normalize: bool,
        /// Output path; prints to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unfold a rational polygonal billiard table.
    Unfold {
        /// Interior angles as fractions of pi ("1/2 1/8 3/8"). Three
        /// angles alone determine a triangle up to scale.
        #[arg(long, num_args = 1.., value_name = "P/Q")]
        angles: Vec<String>,
        /// Vertices "x,y" of the table, counterclockwise. Angles are
        /// recovered from the geometry when not given.
        #[arg(long, num_args = 1.., value_name = "X,Y")]
        vertices: Vec<String>,
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply g_t r_theta to a surface (rotation first).
    Deform {
        input: PathBuf,
        /// Diagonal flow time t.
        #[arg(long, default_value_t = 0.0)]
        gt: f64,
        /// Rotation angle (radians; accepts "pi/8" forms).
        #[arg(long, default_value = "0", value_parser = parse_angle)]
        rot: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Enumerate saddle connections up to a length bound.
    Scan {
        input: PathBuf,
        #[arg(long)]
        radius: f64,
        /// Restrict to directions in [LO, HI) (radians or "pi/8" forms).
        #[arg(long, num_args = 2, value_parser = parse_angle)]
        sector: Option<Vec<f64>>,
        /// CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Length and direction of the shortest saddle connection.
    Systole {
        input: PathBuf,
        #[arg(long)]
        normalize: bool,
    },
    /// Cylinder decomposition in a periodic direction.
    Cylinders {
        input: PathBuf,
        /// Flow direction (radians or "pi/8" forms).
        #[arg(long, value_parser = parse_angle)]
        direction: f64,
    },
    /// Direction histogram, occupation measure and constant checks.
    Measure {
        input: PathBuf,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 36)]
        bins: usize,
        #[arg(long, default_value_t = 4)]
        grid: usize,
        /// Interval for the reciprocal-length sum.
        #[arg(long, num_args = 2, value_parser = parse_angle)]
        interval: Option<Vec<f64>>,
        /// Text report path; prints to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-statistic CSV path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Per-cell CSV path for the occupation measure.
        #[arg(long)]
        cells: Option<PathBuf>,
    },
    /// Draw the saddle connections into an SVG file.
    Plot {
        input: PathBuf,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        out: PathBuf,
        /// Canvas width in pixels.
        #[arg(long, default_value_t = 800.0)]
        canvas: f64,
        /// Stroke width numerator; width = scale / length.
        #[arg(long)]
        width_scale: Option<f64>,
        #[arg(long, default_value = "#23518f")]
        color: String,
        #[arg(long)]
        no_outlines: bool,
    },
    /// Quadrature of systole(g_T r_theta X)^-(1+delta) over an interval.
    CircleIntegral {
        input: PathBuf,
        /// Diagonal flow time T.
        #[arg(long)]
        gt: f64,
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
        #[arg(long, num_args = 2, value_parser = parse_angle)]
        interval: Option<Vec<f64>>,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        /// Per-node CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("FLATSCAN_THREADS") {
        if let Ok(n) = threads.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> flatscan::Result<()> {
    match command {
        Command::Build {
            input,
            normalize,
            out,
        } => {
            let mut surface = format::load_surface(&input)?;
            if normalize {
                surface = surface.normalized();
            }
            emit(out, format::write_description(surface.description()))?;
            eprintln!(
                "ok: {} polygons, {} triangles, genus {}, area {}",
                surface.description().polygons.len(),
                surface.triangle_count(),
                surface.genus(),
                surface.area()
            );
        }
        Command::Unfold {
            angles,
            vertices,
            normalize,
            out,
        } => {
            let polygon = build_polygon(&angles, &vertices)?;
            let mut surface = unfold(&polygon)?;
            if normalize {
                surface = surface.normalized();
            }
            format::save_surface(&out, &surface)?;
            eprintln!(
                "unfolded {} copies; area {}, genus {}, cone angles {:?} (x 2pi)",
                surface.description().polygons.len(),
                surface.area(),
                surface.genus(),
                surface
                    .cone_points()
                    .iter()
                    .map(|c| c.turns)
                    .collect::<Vec<_>>()
            );
        }
        Command::Deform {
            input,
            gt,
            rot,
            out,
        } => {
            let surface = format::load_surface(&input)?;
            let deformed = flatscan::sl2::apply(&surface, Mat2::g(gt) * Mat2::rotation(rot))?;
            format::save_surface(&out, &deformed)?;
        }
        Command::Scan {
            input,
            radius,
            sector,
            out,
        } => {
            let surface = format::load_surface(&input)?;
            let interval = parse_interval(sector)?;
            let result = scan(&surface, radius, interval)?;
            println!("{}", result.count());
            if let Some(path) = out {
                fs::write(path, result.to_csv())?;
            }
        }
        Command::Systole { input, normalize } => {
            let mut surface = format::load_surface(&input)?;
            if normalize {
                surface = surface.normalized();
            }
            let sys = systole(&surface)?;
            println!("{}", sys.length);
            eprintln!(
                "holonomy ({}, {}), angle {}, cones {} -> {}",
                sys.connection.holonomy.x,
                sys.connection.holonomy.y,
                sys.connection.angle(),
                sys.connection.start_cone,
                sys.connection.end_cone
            );
        }
        Command::Cylinders { input, direction } => {
            let surface = format::load_surface(&input)?;
            let d = cylinder_decomposition(&surface, direction)?;
            println!("circumference,height,area");
            for c in &d.cylinders {
                println!("{:?},{:?},{:?}", c.circumference, c.height, c.area());
            }
            eprintln!(
                "{} cylinders; total area {} vs surface {}",
                d.cylinders.len(),
                d.total_area(),
                surface.area()
            );
        }
        Command::Measure {
            input,
            radius,
            bins,
            grid,
            interval,
            out,
            csv,
            cells,
        } => {
            let surface = format::load_surface(&input)?;
            let interval = parse_interval(interval)?
                .unwrap_or_else(|| AngleInterval::new(0.0, PI / 4.0).unwrap());
            let report = stats::measure_report(&surface, radius, bins, grid, interval)?;
            emit(out, report.text())?;
            if let Some(path) = csv {
                fs::write(path, report.stats_csv())?;
            }
            if let Some(path) = cells {
                fs::write(path, report.surface.to_csv())?;
            }
        }
        Command::Plot {
            input,
            radius,
            out,
            canvas,
            width_scale,
            color,
            no_outlines,
        } => {
            let surface = format::load_surface(&input)?;
            let result = scan(&surface, radius, None)?;
            let spec = RenderSpec {
                width_scale,
                color,
                canvas,
                outlines: !no_outlines,
            };
            fs::write(out, render_svg(&surface, &result, &spec)?)?;
            eprintln!("{} connections drawn", result.count());
        }
        Command::CircleIntegral {
            input,
            gt,
            delta,
            interval,
            nodes,
            out,
        } => {
            let surface = format::load_surface(&input)?;
            let interval = parse_interval(interval)?.unwrap_or_else(AngleInterval::full_circle);
            let params = stats::CircleIntegralParams {
                delta,
                flow_time: gt,
                interval,
                nodes,
            };
            let ci = stats::circle_integral(&surface, params)?;
            println!("{}", ci.value);
            if ci.under_resolved {
                eprintln!(
                    "warning: {} nodes under-resolve the integrand; use at least {}",
                    nodes,
                    params.recommended_nodes()
                );
            }
            if let Some(path) = out {
                let mut csv = String::from("theta,systole\n");
                for (theta, l) in &ci.nodes {
                    csv.push_str(&format!("{theta:?},{l:?}\n"));
                }
                fs::write(path, csv)?;
            }
        }
    }
    Ok(())
}

fn emit(path: Option<PathBuf>, content: String) -> flatscan::Result<()> {
    match path {
        Some(p) => fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn build_polygon(angles: &[String], vertices: &[String]) -> flatscan::Result<RationalPolygon> {
    if !vertices.is_empty() {
        let verts = vertices
            .iter()
            .map(|s| parse_vertex(s))
            .collect::<flatscan::Result<Vec<_>>>()?;
        if angles.is_empty() {
            return RationalPolygon::from_vertices(verts);
        }
        let fractions = angles
            .iter()
            .map(|a| parse_fraction(a))
            .collect::<flatscan::Result<Vec<_>>>()?;
        return RationalPolygon::new(verts, fractions);
    }
    if angles.len() == 3 {
        let f: Vec<(u64, u64)> = angles
            .iter()
            .map(|a| parse_fraction(a))
            .collect::<flatscan::Result<Vec<_>>>()?;
        return RationalPolygon::triangle_from_angles(f[0], f[1], f[2]);
    }
    Err(Error::InvalidParameter(
        "give either three --angles (a triangle) or --vertices".into(),
    ))
}

/// "p/q" or "p" as a fraction of pi.
fn parse_fraction(s: &str) -> flatscan::Result<(u64, u64)> {
    let bad = || Error::InvalidParameter(format!("bad angle fraction: {s}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = p.trim().parse().map_err(|_| bad())?;
            let q = q.trim().parse().map_err(|_| bad())?;
            Ok((p, q))
        }
        None => Ok((s.parse().map_err(|_| bad())?, 1)),
    }
}

fn parse_vertex(s: &str) -> flatscan::Result<Vec2> {
    let bad = || Error::InvalidParameter(format!("bad vertex: {s}"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    Ok(Vec2::new(
        x.trim().parse().map_err(|_| bad())?,
        y.trim().parse().map_err(|_| bad())?,
    ))
}

/// Plain radians, or simple multiples of pi: "pi", "pi/8", "3pi/4",
/// "-pi/2", "2pi".
fn parse_angle(s: &str) -> Result<f64, String> {
    let raw = s.trim();
    let (sign, rest) = match raw.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, raw),
    };
    if let Some(idx) = rest.find("pi") {
        let (coef, denom) = (&rest[..idx], &rest[idx + 2..]);
        let c: f64 = if coef.is_empty() {
            1.0
        } else {
            coef.parse().map_err(|_| format!("bad angle: {s}"))?
        };
        let d: f64 = match denom.strip_prefix('/') {
            Some(d) => d.parse().map_err(|_| format!("bad angle: {s}"))?,
            None if denom.is_empty() => 1.0,
            None => return Err(format!("bad angle: {s}")),
        };
        return Ok(sign * c * PI / d);
    }
    rest.parse::<f64>()
        .map(|v| sign * v)
        .map_err(|_| format!("bad angle: {s}"))
}

fn parse_interval(bounds: Option<Vec<f64>>) -> flatscan::Result<Option<AngleInterval>> {
    match bounds {
        None => Ok(None),
        Some(v) => Ok(Some(AngleInterval::new(v[0], v[1])?)),
    }
}
