use thiserror::Error;

/// Errors reported by surface construction, scanning and statistics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polygon {polygon} does not close: edge vectors sum to ({x}, {y})")]
    NonClosedPolygon { polygon: usize, x: f64, y: f64 },

    #[error("gluing mismatch: {0}")]
    GluingMismatch(String),

    #[error("glued complex is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("vertex link does not close to a multiple of 2\u{3c0}: total angle {angle}")]
    BadConeAngle { angle: f64 },

    #[error("polygon could not be triangulated: {0}")]
    TriangulationFailed(String),

    #[error("vertex angle {angle} rad is not within tolerance of p\u{3c0}/q with q <= {q_max}")]
    IrrationalAngle { angle: f64, q_max: u64 },

    #[error("polygon is not simple: sides {0} and {1} intersect")]
    NonSimplePolygon(usize, usize),

    #[error("matrix determinant {det} is not 1 within tolerance")]
    NotUnimodular { det: f64 },

    #[error("scan exceeded the node budget of {budget}; reduce the radius or raise the budget")]
    RadiusTooLarge { budget: u64 },

    #[error("needle triangle {triangle} with area {area:e} encountered; retriangulate the input")]
    DegenerateTriangle { triangle: usize, area: f64 },

    #[error("direction is not periodic: a separatrix exceeded the length budget {budget}")]
    NotPeriodicDirection { budget: f64 },

    #[error("segment is parallel to the saddle connection")]
    ParallelInput,

    #[error("segment passes through a singular point")]
    SegmentHitsSingularity,

    #[error("invalid segment: {0}")]
    InvalidSegment(String),

    #[error("scan returned no saddle connections")]
    EmptyScan,

    #[error("radius {radius} is below the construction threshold {threshold}")]
    ThresholdNotMet { radius: f64, threshold: f64 },

    #[error("shortest connection on the deformed surface is vertical; retry after rotating the surface by ~1e-6 rad")]
    VerticalDegenerate,

    #[error("zero vector")]
    ZeroVector,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
