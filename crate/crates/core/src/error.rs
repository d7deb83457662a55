use thiserror::Error;

use crate::geometry::Group;
use crate::signature::Scheme;

/// Errors raised by mesh, signature and congruence operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("mesh is not ordinary: cusp at index {index}")]
    NotOrdinary { index: usize },

    #[error("linear part violates the {group:?} group invariant: {reason}")]
    InvalidGroupElement { group: Group, reason: String },

    #[error("index {index} has no {needed} neighborhood in an open mesh of {len} points")]
    IndexOutOfRange {
        index: usize,
        len: usize,
        needed: String,
    },

    #[error("zero-length arm at index {index}")]
    DegenerateArm { index: usize },

    #[error("two points of the triple at index {index} coincide")]
    DegenerateTriple { index: usize },

    #[error("angle {0} is outside (0, pi)")]
    OutOfDomain(f64),

    #[error("points are collinear")]
    CollinearPoints,

    #[error("scheme {scheme} does not fit this mesh: {reason}")]
    SchemeSpacingMismatch { scheme: Scheme, reason: String },

    #[error("mesh too short: {needed} points needed, got {got}")]
    MeshTooShort { needed: usize, got: usize },

    #[error("difference quotient at index {index} has a vanishing denominator")]
    DegenerateStencil { index: usize },

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("second conic invariant F vanishes (line pair)")]
    ZeroF,

    #[error("conic is parabolic (AC - B^2 = 0), no center")]
    ParabolicConic,

    #[error("zero denominator in the zero-curvature arc length branch")]
    ZeroDenominator,

    #[error("affine curvature at index {index} has the wrong sign for this predicate")]
    WrongCurvatureSign { index: usize },

    #[error("hyperbola semi-axis is not real at index {index}")]
    NonRealMu { index: usize },

    #[error("meshes have different point counts ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("no non-collinear triple in the mesh")]
    NoNonCollinearTriple,

    #[error("mesh is not convex (three collinear points)")]
    NotConvex,

    #[error("operation requires closed meshes")]
    NotClosed,

    #[error("invalid step {m} for a cycle of {n} points")]
    InvalidStep { n: usize, m: usize },

    #[error("cyclic matching requires closed meshes")]
    CyclicOnOpenMesh,
}

pub type Result<T> = std::result::Result<T, Error>;
