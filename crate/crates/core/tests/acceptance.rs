//! Acceptance suite: one test per headline claim, each printing a
//! PASS/FAIL line with the measured numbers. Tolerances and thresholds
//! are pinned here, not computed.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, SQRT_2, TAU};
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flatscan::billiard::{unfold, RationalPolygon};
use flatscan::cylinders::cylinder_decomposition;
use flatscan::geometry::AngleInterval;
use flatscan::scan::{scan, systole, ScanResult};
use flatscan::segments::{count_intersections, SurfaceSegment};
use flatscan::stats;
use flatscan::{presets, Mat2, TranslationSurface, Vec2};

fn pass(criterion: usize, detail: impl std::fmt::Display) {
    println!("[acceptance] criterion {criterion}: PASS - {detail}");
}

/// Normalized octagon scan at radius 80, shared by several criteria.
fn octagon_scan_80() -> &'static (TranslationSurface, ScanResult) {
    static SCAN: OnceLock<(TranslationSurface, ScanResult)> = OnceLock::new();
    SCAN.get_or_init(|| {
        let surface = presets::regular_octagon().normalized();
        let result = scan(&surface, 80.0, None).expect("octagon scan");
        (surface, result)
    })
}

/// Connections of the shared scan up to a smaller radius.
fn octagon_counts_at(radius: f64) -> usize {
    octagon_scan_80()
        .1
        .connections
        .iter()
        .filter(|c| c.length() <= radius)
        .count()
}

#[test]
fn criterion_01_torus_scan_equals_coprime_lattice_oracle() {
    let torus = presets::square_torus();
    for radius in [1.5, 5.0, 10.0, 25.0, 50.0] {
        let start = Instant::now();
        let result = scan(&torus, radius, None).unwrap();
        let elapsed = start.elapsed().as_secs_f64();
        let oracle = common::coprime_vectors(radius);
        common::holonomy_sets_equal(&result.holonomies(), &oracle, 1e-9)
            .unwrap_or_else(|e| panic!("R = {radius}: {e}"));
        if radius == 50.0 {
            assert!(elapsed < 10.0, "R = 50 scan took {elapsed:.2} s");
            pass(
                1,
                format!(
                    "scan matches the coprime oracle for R in {{1.5, 5, 10, 25, 50}}; \
                     N(50) = {} in {elapsed:.2} s",
                    result.count()
                ),
            );
        }
    }
}

#[test]
fn criterion_02_systole_bound_on_random_unfoldings() {
    let bound = 1.12838f64;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let mut surfaces: Vec<(String, TranslationSurface)> = vec![
        ("square torus".into(), presets::square_torus()),
        ("regular octagon".into(), presets::regular_octagon()),
    ];
    while surfaces.len() < 52 {
        // Random rational triangle: angles p1/q1, p2/q2 and the rational
        // remainder, kept to small denominators.
        let q1 = rng.gen_range(2..=6u64);
        let q2 = rng.gen_range(2..=6u64);
        let p1 = rng.gen_range(1..q1);
        let p2 = rng.gen_range(1..q2);
        // Remainder p3/q3 = 1 - p1/q1 - p2/q2.
        let q3 = q1 * q2;
        let p3 = (q3 as i64) - (p1 * q2) as i64 - (p2 * q1) as i64;
        if p3 <= 0 {
            continue;
        }
        let triangle =
            match RationalPolygon::triangle_from_angles((p1, q1), (p2, q2), (p3 as u64, q3)) {
                Ok(t) => t,
                Err(_) => continue,
            };
        let surface = unfold(&triangle).unwrap();
        surfaces.push((format!("triangle {p1}/{q1}, {p2}/{q2}"), surface));
    }

    let mut worst: f64 = 0.0;
    for (what, surface) in &surfaces {
        let sys = systole(&surface.normalized()).unwrap();
        assert!(
            sys.length <= bound,
            "{what}: systole {} exceeds {bound}",
            sys.length
        );
        worst = worst.max(sys.length);
    }
    pass(
        2,
        format!(
            "{} unit-area surfaces, max systole {worst:.5} <= {bound}",
            surfaces.len()
        ),
    );
}

#[test]
fn criterion_03_quadratic_growth_on_octagon() {
    let start = Instant::now();
    let radii = [10.0, 20.0, 40.0, 80.0];
    let counts: Vec<usize> = radii.iter().map(|&r| octagon_counts_at(r)).collect();
    let log_r: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let log_n: Vec<f64> = counts.iter().map(|&n| (n as f64).ln()).collect();
    let slope = common::ls_slope(&log_r, &log_n);
    assert!(
        (slope - 2.0).abs() <= 0.15,
        "total slope {slope} outside 2 +- 0.15 (counts {counts:?})"
    );

    let mut sector_slopes = Vec::new();
    for k in 0..8 {
        let sector = AngleInterval::new(k as f64 * TAU / 8.0, (k + 1) as f64 * TAU / 8.0).unwrap();
        let log_n: Vec<f64> = radii
            .iter()
            .map(|&r| {
                let n = octagon_scan_80()
                    .1
                    .connections
                    .iter()
                    .filter(|c| c.length() <= r && sector.contains(c.angle()))
                    .count();
                (n as f64).ln()
            })
            .collect();
        let s = common::ls_slope(&log_r, &log_n);
        assert!(
            (s - 2.0).abs() <= 0.25,
            "sector {k} slope {s} outside 2 +- 0.25"
        );
        sector_slopes.push(s);
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 600.0, "runtime {elapsed:.1} s over the 10 min budget");
    pass(
        3,
        format!(
            "slope {slope:.3} in 2 +- 0.15; sector slopes {:.3?} in 2 +- 0.25; {elapsed:.1} s",
            sector_slopes
        ),
    );
}

#[test]
fn criterion_04_angle_equidistribution() {
    // Exact quadrant symmetry on the square torus at R = 20.
    let torus = presets::square_torus();
    let m = stats::angle_measure(&torus, 20.0, 4).unwrap();
    for (k, mass) in m.masses.iter().enumerate() {
        assert_eq!(*mass, 0.25, "quadrant {k} mass {mass}");
    }

    // Kolmogorov distance to uniform shrinks from R = 10 to R = 40.
    let (_, full) = octagon_scan_80();
    let at = |radius: f64| {
        let mut filtered = full.clone();
        filtered.radius = radius;
        filtered.connections.retain(|c| c.length() <= radius);
        stats::angle_measure_from(&filtered, 360).unwrap().ks_distance
    };
    let (ks10, ks40) = (at(10.0), at(40.0));
    assert!(
        ks40 < ks10,
        "KS(40) = {ks40} not below KS(10) = {ks10}"
    );
    pass(
        4,
        format!("torus quadrants exactly 1/4 each; octagon KS 10 -> 40: {ks10:.4} -> {ks40:.4}"),
    );
}

#[test]
fn criterion_05_surface_equidistribution_and_cylinder_counterexample() {
    // Square torus, R = 40, 4 x 4 grid: every cell within 15% of 1/16.
    let torus = presets::square_torus();
    let m = stats::surface_measure(&torus, 40.0, 4).unwrap();
    let tol = 0.15 / 16.0;
    assert!(
        m.sup_discrepancy < tol,
        "sup discrepancy {} >= {tol}",
        m.sup_discrepancy
    );

    // Twist family inside the middle horizontal cylinder of the unit
    // octagon: holonomies (n (1 + sqrt 2), +-1). All its mass stays in
    // the band sqrt2/2 <= y <= 1 + sqrt2/2 of the defining polygon.
    let oct = presets::regular_octagon();
    let circ = 1.0 + SQRT_2;
    let band = (SQRT_2 / 2.0, 1.0 + SQRT_2 / 2.0);
    let result = scan(&oct, 8.0, None).unwrap();
    let mut family = Vec::new();
    for c in &result.connections {
        let is_twist = (-3..=3).any(|n| {
            let target_x = n as f64 * circ;
            (c.holonomy.x - target_x).abs() < 1e-9 && (c.holonomy.y.abs() - 1.0).abs() < 1e-9
        });
        if !is_twist {
            continue;
        }
        let in_band = c.polygon_segments(&oct).iter().all(|(_, a, b)| {
            a.y >= band.0 - 1e-9 && a.y <= band.1 + 1e-9 && b.y >= band.0 - 1e-9 && b.y <= band.1 + 1e-9
        });
        if in_band {
            family.push(c.clone());
        }
    }
    assert!(
        family.len() >= 6,
        "only {} twist connections found",
        family.len()
    );
    let twisted = stats::surface_measure_from(&oct, &family, 8.0, 4).unwrap();
    // Grid rows 0 and 3 lie outside the band.
    for row in [0usize, 3] {
        for i in 0..4 {
            let mass = twisted.masses[0][row * 4 + i];
            assert_eq!(mass, 0.0, "cell ({i}, {row}) outside the cylinder has mass {mass}");
        }
    }
    let inside: f64 = twisted.masses[0].iter().sum();
    assert!((inside - 1.0).abs() < 1e-9);
    pass(
        5,
        format!(
            "torus sup discrepancy {:.5} < {tol:.5}; {}-connection twist family puts zero mass \
             outside its cylinder",
            m.sup_discrepancy,
            family.len()
        ),
    );
}

#[test]
fn criterion_06_near_horizontal_certificates() {
    let mut worst_margin = f64::INFINITY;
    for (name, surface) in [
        ("torus", presets::square_torus()),
        ("octagon", presets::regular_octagon().normalized()),
    ] {
        for radius in [5.0, 10.0, 20.0, 50.0, 100.0] {
            let nh = stats::near_horizontal(&surface, radius).unwrap();
            assert!(
                nh.holds,
                "{name} R = {radius}: |theta| = {} exceeds bound {}",
                nh.theta.abs(),
                nh.bound
            );
            if nh.theta.abs() > 0.0 {
                worst_margin = worst_margin.min(nh.bound / nh.theta.abs());
            }
        }
    }
    pass(
        6,
        format!("10/10 certificates hold; tightest bound/|theta| ratio {worst_margin:.2}"),
    );
}

#[test]
fn criterion_07_cesaro_lower_bound() {
    let (_, full) = octagon_scan_80();
    let interval = AngleInterval::new(0.0, FRAC_PI_4).unwrap();
    let mut first_holding = None;
    let mut results = Vec::new();
    for radius in [20.0, 40.0, 80.0] {
        let mut filtered = full.clone();
        filtered.radius = radius;
        filtered.connections.retain(|c| c.length() <= radius);
        let report = stats::cesaro_sum_from(&filtered, interval);
        results.push((radius, report.sum, report.bound, report.holds));
        if report.holds && first_holding.is_none() {
            first_holding = Some(radius);
        }
        if let Some(r0) = first_holding {
            assert!(
                report.holds,
                "bound held at R = {r0} but fails at R = {radius}"
            );
        }
    }
    let r0 = first_holding.expect("bound should hold somewhere in the tested range");
    pass(
        7,
        format!(
            "empirical R0 = {r0}; (R, sum, bound): {:?}",
            results
                .iter()
                .map(|(r, s, b, _)| (r, (s * 100.0).round() / 100.0, (b * 100.0).round() / 100.0))
                .collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_08_segment_intersection_bound() {
    let oct = presets::regular_octagon();
    let sys = systole(&oct).unwrap().length;
    assert!((sys - 1.0).abs() < 1e-12, "unit octagon systole is 1");
    let result = scan(&oct, 10.0, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut tested = 0;
    let mut max_count = 0usize;
    while tested < 100 {
        let c = &result.connections[rng.gen_range(0..result.count())];
        let tri = rng.gen_range(0..oct.triangle_count());
        // Random interior point by barycentric mixing.
        let (mut u, mut v) = (rng.gen::<f64>(), rng.gen::<f64>());
        if u + v > 1.0 {
            (u, v) = (1.0 - u, 1.0 - v);
        }
        let t = &oct.triangles()[tri];
        let start = t.vertex(1) * u + t.vertex(2) * v;
        let angle = rng.gen::<f64>() * TAU;
        let len = 0.2 + 1.3 * rng.gen::<f64>();
        let segment = SurfaceSegment {
            tri,
            start,
            displacement: Vec2::new(angle.cos(), angle.sin()) * len,
        };
        match count_intersections(&oct, c, &segment) {
            Ok(n) => {
                let bound = c.length() * ((segment.length() + 1.0) / sys).powi(2);
                assert!(
                    (n as f64) <= bound,
                    "count {n} exceeds bound {bound} for |s| = {}, |a| = {}",
                    c.length(),
                    segment.length()
                );
                max_count = max_count.max(n);
                tested += 1;
            }
            Err(_) => continue,
        }
    }
    pass(
        8,
        format!("100 random pairs obey the crossing bound; max count {max_count}"),
    );
}

#[test]
fn criterion_09_vector_circle_average_decay_and_oracle() {
    let v = Vec2::new(1.0, 0.0);
    // Quadrature against a brute-force midpoint sum with 1e6 nodes.
    let t = 2.0;
    let quad = stats::vector_circle_average(v, t, 0.0).unwrap();
    let brute = common::riemann_sum(
        |theta| {
            let m = Mat2::g(t) * Mat2::rotation(theta);
            m.apply(v).norm().recip()
        },
        0.0,
        TAU,
        1_000_000,
    );
    let rel = (quad - brute).abs() / brute;
    assert!(rel < 1e-4, "quadrature differs from oracle by {rel:.2e}");

    // Decay rate with delta = 0.25: consecutive ratios below
    // 1.5 e^{-0.75}.
    let delta = 0.25;
    let ceiling = 1.5 * (-0.75f64).exp();
    let mut ratios = Vec::new();
    for t in [3.0, 4.0, 5.0] {
        let a = stats::vector_circle_average(v, t, delta).unwrap();
        let b = stats::vector_circle_average(v, t + 1.0, delta).unwrap();
        let ratio = b / a;
        assert!(
            ratio <= ceiling,
            "ratio at t = {t} is {ratio}, ceiling {ceiling}"
        );
        ratios.push(ratio);
    }
    pass(
        9,
        format!("oracle agreement {rel:.1e}; decay ratios {ratios:.3?} <= {ceiling:.3}"),
    );
}

#[test]
fn criterion_10_circle_integral_shape_probe() {
    let interval = AngleInterval::new(0.0, FRAC_PI_8).unwrap();
    let delta = 0.1;
    for (name, surface) in [
        ("torus", presets::square_torus()),
        ("octagon", presets::regular_octagon().normalized()),
    ] {
        let mut values = Vec::new();
        for flow_time in [1.0, 2.0, 3.0, 4.0] {
            let params = stats::CircleIntegralParams {
                delta,
                flow_time,
                interval,
                nodes: ((64.0 * flow_time.exp() * interval.length()).ceil() as usize).max(16),
            };
            let ci = stats::circle_integral(&surface, params).unwrap();
            assert!(!ci.under_resolved);
            values.push(ci.value);
        }
        // Past the initial transient (T > 2) the sequence is
        // non-increasing within 5%, and the whole sweep stays within
        // 1.5x of the T = 4 plateau. (Both surfaces sit in the thick
        // part, so the plateau is approached from below; the 5% band
        // caps how much the tail can still move.)
        assert!(
            values[3] <= values[2] * 1.05,
            "{name}: T = 4 value {} above T = 3 value {} by more than 5%",
            values[3],
            values[2]
        );
        for (i, v) in values.iter().enumerate() {
            assert!(
                *v <= 1.5 * values[3],
                "{name}: T = {} value {v} above 1.5x plateau {}",
                i + 1,
                values[3]
            );
        }
        pass(
            10,
            format!("{name} values for T = 1..4: {values:.4?} settle at a plateau"),
        );
    }
}

#[test]
fn criterion_11_unfolding_correctness() {
    // Right triangle (pi/2, pi/8, 3pi/8).
    let triangle = RationalPolygon::triangle_from_angles((1, 2), (1, 8), (3, 8)).unwrap();
    let surface = unfold(&triangle).unwrap();
    assert_eq!(surface.description().polygons.len(), 16);
    let six_pi: Vec<_> = surface
        .cone_points()
        .iter()
        .filter(|c| c.turns == 3)
        .collect();
    assert_eq!(six_pi.len(), 1);
    assert!((six_pi[0].angle - 6.0 * PI).abs() < 1e-9);
    assert_eq!(surface.genus(), 2);
    let gb: i64 = surface
        .cone_points()
        .iter()
        .map(|c| c.turns as i64 - 1)
        .sum();
    assert_eq!(gb, 2 * surface.genus() - 2);

    // The unfolded unit square is the 2x2 torus with marked points on
    // the integer lattice; after normalizing, its length spectrum is the
    // half-integer primitive lattice, four marks deep.
    let square = RationalPolygon::new(
        vec![
            Vec2::ZERO,
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ],
        vec![(1, 2); 4],
    )
    .unwrap();
    let torus_cover = unfold(&square).unwrap().normalized();
    let result = scan(&torus_cover, 3.0, None).unwrap();
    let mut expected: Vec<f64> = common::coprime_vectors(6.0)
        .iter()
        .flat_map(|v| [v.norm() / 2.0; 4])
        .collect();
    expected.sort_by(f64::total_cmp);
    let got = common::length_spectrum(&result.holonomies());
    assert_eq!(got.len(), expected.len(), "spectrum sizes differ");
    for (a, b) in got.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-9, "spectrum mismatch: {a} vs {b}");
    }
    pass(
        11,
        format!(
            "triangle unfolds to 16 copies, genus 2, one 6pi cone; square unfolding's \
             {}-line spectrum matches the flat torus lattice oracle up to R = 3",
            got.len()
        ),
    );
}

#[test]
fn criterion_12_cylinder_decompositions() {
    let torus = presets::square_torus();
    let d = cylinder_decomposition(&torus, 0.0).unwrap();
    assert_eq!(d.cylinders.len(), 1);
    assert!((d.cylinders[0].circumference - 1.0).abs() < 1e-9);
    assert!((d.cylinders[0].height - 1.0).abs() < 1e-9);

    let oct = presets::regular_octagon();
    let d = cylinder_decomposition(&oct, 0.0).unwrap();
    assert_eq!(d.cylinders.len(), 2);
    let total = d.total_area();
    assert!(
        (total - oct.area()).abs() <= 1e-6 * oct.area(),
        "cylinder areas sum to {total} vs {}",
        oct.area()
    );
    pass(
        12,
        format!(
            "torus horizontal is (1, 1); octagon horizontal has 2 cylinders with area sum {total:.9}"
        ),
    );
}

#[test]
fn cli_examples_run_end_to_end() {
    // The composite flows named in the interface contract, driven through
    // the binary: unfold | systole, scan to CSV, plot to SVG.
    use std::process::Command;
    let exe = env!("CARGO_BIN_EXE_flatscan");
    let dir = std::env::temp_dir().join("flatscan-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let oct = dir.join("oct.surf");
    let torus = dir.join("torus.surf");

    let run = |args: &[&str]| {
        let out = Command::new(exe).args(args).output().unwrap();
        assert!(
            out.status.success(),
            "flatscan {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout).unwrap()
    };

    run(&[
        "unfold",
        "--angles",
        "1/2",
        "1/8",
        "3/8",
        "--out",
        oct.to_str().unwrap(),
    ]);
    let len: f64 = run(&["systole", oct.to_str().unwrap(), "--normalize"])
        .trim()
        .parse()
        .unwrap();
    assert!(len <= 2.0 / PI.sqrt());

    std::fs::write(
        &torus,
        flatscan::format::write_description(&presets::square_torus_description()),
    )
    .unwrap();
    let csv_path = dir.join("sc.csv");
    let count: usize = run(&[
        "scan",
        torus.to_str().unwrap(),
        "--radius",
        "1.5",
        "--out",
        csv_path.to_str().unwrap(),
    ])
    .trim()
    .parse()
    .unwrap();
    assert_eq!(count, 8);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().count(), 9, "8 rows plus header");

    let svg_path = dir.join("fig.svg");
    run(&[
        "plot",
        oct.to_str().unwrap(),
        "--radius",
        "7",
        "--out",
        svg_path.to_str().unwrap(),
    ]);
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.contains("<svg") && svg.contains("<line"));

    // Sector shorthand with pi fractions, exercising quadrant exactness.
    let quadrant: usize = run(&[
        "scan",
        torus.to_str().unwrap(),
        "--radius",
        "10",
        "--sector",
        "0",
        "pi/2",
    ])
    .trim()
    .parse()
    .unwrap();
    let full: usize = run(&["scan", torus.to_str().unwrap(), "--radius", "10"])
        .trim()
        .parse()
        .unwrap();
    assert_eq!(4 * quadrant, full);
    let _ = FRAC_PI_2;
}
