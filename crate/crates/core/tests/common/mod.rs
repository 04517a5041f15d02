//! Independent oracles shared by the integration tests. Everything here
//! is computed by brute force, without touching the library's search or
//! quadrature paths.
//!
//! Each test binary compiles this module separately and uses a subset.
#![allow(dead_code)]

use flatscan::Vec2;

/// Holonomies of the square torus' saddle connections up to `radius`:
/// integer vectors with coprime coordinates, enumerated directly.
pub fn coprime_vectors(radius: f64) -> Vec<Vec2> {
    let r = radius.floor() as i64;
    let mut out = Vec::new();
    for p in -r..=r {
        for q in -r..=r {
            if (p, q) == (0, 0) {
                continue;
            }
            if gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
                continue;
            }
            let v = Vec2::new(p as f64, q as f64);
            if v.norm() <= radius {
                out.push(v);
            }
        }
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Sorted length spectrum of a holonomy set.
pub fn length_spectrum(holonomies: &[Vec2]) -> Vec<f64> {
    let mut lengths: Vec<f64> = holonomies.iter().map(|v| v.norm()).collect();
    lengths.sort_by(f64::total_cmp);
    lengths
}

/// Compares two holonomy sets as sets, within an absolute tolerance per
/// component. Returns a description of the first discrepancy.
pub fn holonomy_sets_equal(a: &[Vec2], b: &[Vec2], tol: f64) -> Result<(), String> {
    if a.len() != b.len() {
        return Err(format!("set sizes differ: {} vs {}", a.len(), b.len()));
    }
    let mut a_sorted = a.to_vec();
    let mut b_sorted = b.to_vec();
    let key = |v: &Vec2| (v.x, v.y);
    a_sorted.sort_by(|u, v| key(u).partial_cmp(&key(v)).unwrap());
    b_sorted.sort_by(|u, v| key(u).partial_cmp(&key(v)).unwrap());
    for (u, v) in a_sorted.iter().zip(&b_sorted) {
        if (u.x - v.x).abs() > tol || (u.y - v.y).abs() > tol {
            return Err(format!("({}, {}) vs ({}, {})", u.x, u.y, v.x, v.y));
        }
    }
    Ok(())
}

/// Brute-force Riemann sum of `f` over `[lo, hi]` with `n` nodes
/// (midpoint rule).
pub fn riemann_sum(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    (0..n).map(|i| f(lo + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
