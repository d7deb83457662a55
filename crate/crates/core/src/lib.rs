//! Joint-invariant numerical signatures of planar point meshes.
//!
//! Discrete Euclidean and equiaffine curvatures computed from distances and
//! areas of small point neighborhoods, the signature curves built from them,
//! congruence decisions between meshes, and the step traversal of closed
//! meshes used to connect residue classes.

pub mod affine;
pub mod audit;
pub mod congruence;
pub mod error;
pub mod euclidean;
pub mod geometry;
pub mod host;
pub mod samples;
pub mod signature;

pub use affine::{
    affine_arc_length, affine_curvature, arc_length_set, conic_center, fit_conic,
    has_fine_area, in_fine_position, invariants, is_affine_fine, sa_signature,
    sa_signature_with, sd_affine, AffineDirection, AffineInvariants, AffineSpacing,
    ArcLengthSet, ConicCoeffs,
};
pub use congruence::{
    align, counterexample, decide_affine, decide_dist_angle, decide_eq1, decide_eq2_angle_type,
    decide_eq2_signed, decide_eq3, decide_eq4, AffineVariant, Counterexample, CounterexampleId,
    DecideOptions, EndpointCondition, MatchMode, Verdict, Witness,
};
pub use error::{Error, Result};
pub use euclidean::{chord, euclidean_curvature, se_signature, se_signature_with};
pub use geometry::{
    angle, angle_type, apply_motion, circumcircle, random_motion, random_motion_with,
    signature_direction, signature_sign, signed_angle, signed_angle_type, AngleType, Direction,
    Group, GroupElement, Mesh, NeighborhoodSpec, Point2, SignedAngleType,
};
pub use host::{candidates, decide_host, phi, traverse, valid_steps, Traversal};
pub use signature::{Scheme, Signature, SignaturePoint};

/// Tolerances shared by the decision procedures, with library defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum pointwise deviation of an alignment, relative to mesh diameter.
    pub congruence: f64,
    /// Relative tolerance when comparing signatures, curvatures and lengths.
    pub signature: f64,
    /// Half-width of the right-angle band in radians.
    pub right_angle: f64,
    /// Relative tolerance for Euclidean equal spacing.
    pub spacing: f64,
    /// Relative tolerance for equal consecutive affine arc lengths.
    pub affine_spacing: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            congruence: congruence::CONGRUENCE_TOL,
            signature: signature::SIGNATURE_TOL,
            right_angle: geometry::RIGHT_ANGLE_TOL,
            spacing: geometry::SPACING_TOL,
            affine_spacing: affine::AFFINE_SPACING_TOL,
        }
    }
}
