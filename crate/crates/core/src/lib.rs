//! Flat surfaces built from glued Euclidean polygons, and the statistics of
//! their saddle connections.
//!
//! The crate provides:
//!
//! - a data model for translation surfaces as triangulated complexes of
//!   planar triangles glued edge-to-edge by translations ([`surface`]),
//! - unfolding of rational polygonal billiards into translation surfaces
//!   ([`billiard`]),
//! - the linear `SL(2,R)` action on a surface, in particular the diagonal
//!   and rotation one-parameter subgroups ([`sl2`]),
//! - enumeration of saddle connections up to a length bound, the systole,
//!   and cylinder decompositions in periodic directions ([`scan`],
//!   [`cylinders`]),
//! - counting functions and empirical measures built from a scan: angle
//!   histograms, segment-occupation measures on the surface, Cesàro sums,
//!   near-horizontal connection construction, and circle averages
//!   ([`stats`]),
//! - a plain-text surface file format and CSV/SVG exports ([`format`],
//!   [`render`]).
//!
//! The command line frontend lives in the `flatscan` binary.

pub mod billiard;
pub mod cylinders;
pub mod error;
pub mod format;
pub mod geometry;
pub mod presets;
pub mod render;
pub mod scan;
pub mod segments;
pub mod sl2;
pub mod stats;
pub mod surface;

pub use error::{Error, Result};
pub use geometry::{Mat2, Vec2};
pub use scan::{SaddleConnection, ScanResult};
pub use surface::{SurfaceDescription, TranslationSurface};
