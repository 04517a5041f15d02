//! Planar vectors and 2x2 matrices.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A vector in the plane, in flat-metric length units.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Signed area of the parallelogram spanned by `self` and `other`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Direction angle in `[0, 2pi)`, measured from the positive x-axis.
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + TAU
        } else if a == TAU {
            0.0
        } else {
            a
        }
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Unsigned angle between two vectors, in `[0, pi]`.
    pub fn angle_between(self, other: Vec2) -> f64 {
        self.cross(other).atan2(self.dot(other)).abs()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        self.scale(s)
    }
}

/// A real 2x2 matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    /// Diagonal matrix `diag(e^-t, e^t)`: contracts the horizontal
    /// direction and expands the vertical one.
    pub fn g(t: f64) -> Mat2 {
        Mat2::new((-t).exp(), 0.0, 0.0, t.exp())
    }

    /// Counterclockwise rotation by `theta`.
    pub fn rotation(theta: f64) -> Mat2 {
        let (s, c) = theta.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Checks `det = 1` within `tol` and returns the matrix unchanged.
    pub fn require_unimodular(self, tol: f64) -> Result<Mat2> {
        let det = self.det();
        if (det - 1.0).abs() > tol {
            return Err(Error::NotUnimodular { det });
        }
        Ok(self)
    }

    pub fn apply(self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    /// Operator norm (largest singular value).
    pub fn op_norm(self) -> f64 {
        // Singular values of a 2x2 matrix from the Frobenius norm and the
        // determinant: s1^2 + s2^2 = |M|_F^2, s1 s2 = |det|.
        let f = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d;
        let det = self.det().abs();
        let disc = (f * f / 4.0 - det * det).max(0.0).sqrt();
        (f / 2.0 + disc).sqrt()
    }

    pub fn inverse(self) -> Mat2 {
        let det = self.det();
        Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        self.apply(v)
    }
}

/// Half-open interval `[lo, hi)` of direction angles on the circle.
///
/// `lo` is normalized to `[0, 2pi)`; `hi - lo` is the interval length in
/// `[0, 2pi]`. `lo == hi` encodes the empty interval, and length `2pi`
/// encodes the full circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleInterval {
    lo: f64,
    len: f64,
}

impl AngleInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || hi < lo || hi - lo > TAU + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "bad angle interval [{lo}, {hi})"
            )));
        }
        let len = (hi - lo).min(TAU);
        let lo = lo.rem_euclid(TAU);
        Ok(AngleInterval { lo, len })
    }

    pub fn full_circle() -> Self {
        AngleInterval { lo: 0.0, len: TAU }
    }

    pub fn empty() -> Self {
        AngleInterval { lo: 0.0, len: 0.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.lo + self.len
    }

    pub fn length(&self) -> f64 {
        self.len
    }

    pub fn is_full(&self) -> bool {
        self.len >= TAU
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0.0
    }

    /// Membership of an angle (any real number; reduced mod 2pi).
    pub fn contains(&self, angle: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let rel = (angle - self.lo).rem_euclid(TAU);
        rel < self.len
    }

    /// Interval with the same center and twice the length, capped at the
    /// full circle.
    pub fn doubled(&self) -> AngleInterval {
        let center = self.lo + self.len / 2.0;
        let len = (2.0 * self.len).min(TAU);
        AngleInterval {
            lo: (center - len / 2.0).rem_euclid(TAU),
            len,
        }
    }

    /// The two halves of the interval, `[lo, mid)` and `[mid, hi)`.
    pub fn halves(&self) -> (AngleInterval, AngleInterval) {
        let half = self.len / 2.0;
        (
            AngleInterval {
                lo: self.lo,
                len: half,
            },
            AngleInterval {
                lo: (self.lo + half).rem_euclid(TAU),
                len: half,
            },
        )
    }
}
