//! The linear `SL(2, R)` action on translation surfaces.
//!
//! A determinant-one matrix acts on a surface by transforming every edge
//! vector; the gluing combinatorics are untouched. Matrices act on the
//! left of column vectors, so `apply(apply(X, M1), M2)` agrees with
//! `apply(X, M2 * M1)`.
//!
//! The action deliberately does not retriangulate: strongly sheared or
//! stretched surfaces keep their original triangulation, which can become
//! needle-like. Scans on such surfaces stay correct but explore more
//! states per unit length.

use crate::error::Result;
use crate::geometry::Mat2;
use crate::surface::TranslationSurface;

/// Determinant tolerance for accepting a matrix as unimodular.
pub const DET_TOL: f64 = 1e-9;

/// Applies a determinant-one matrix to every edge vector of the surface.
pub fn apply(surface: &TranslationSurface, m: Mat2) -> Result<TranslationSurface> {
    let m = m.require_unimodular(DET_TOL)?;
    surface.map_vectors(|v| m.apply(v))
}

/// `g(t) r(theta)` — rotate first, then stretch along the diagonal flow.
pub fn deform(surface: &TranslationSurface, t: f64, theta: f64) -> Result<TranslationSurface> {
    apply(surface, Mat2::g(t) * Mat2::rotation(theta))
}
