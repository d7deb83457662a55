//! Congruence between meshes: the alignment oracle, decision procedures that
//! check the hypotheses of each signature-inverse result, and generators of
//! pairs with equal invariants that are not congruent.
//!
//! A decision procedure returns `HypothesesNotMet` when a hypothesis fails
//! and otherwise hands the pair to [`align`]. `NotCongruent` therefore only
//! ever comes from the oracle; when it follows passing hypotheses the verdict
//! is flagged as an oracle disagreement.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::affine::{
    self, affine_curvature, arc_length_set, is_affine_fine, one_neighborhood_area,
    sa_signature_with, sd_affine, AffineSpacing,
};
use crate::error::{Error, Result};
use crate::euclidean::{euclidean_curvature, se_signature_with};
use crate::geometry::{
    angle, angle_type, apply_motion, signature_direction, signature_sign_spec, signed_angle,
    AngleType, Group, GroupElement, Mesh, NeighborhoodSpec, Point2, SignedAngleType,
};
use crate::samples;
use crate::signature::{Scheme, Signature};
use crate::Tolerances;

/// Default maximum alignment deviation relative to the mesh diameter.
pub const CONGRUENCE_TOL: f64 = 1e-6;

/// Triangles with area below this fraction of `diameter^2` are not used as
/// affine anchors.
const ANCHOR_AREA_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MatchMode {
    /// `q[i] = g p[i]`.
    #[default]
    IndexAligned,
    /// `q[(i + s) mod n] = g p[i]` for some shift `s`.
    Cyclic,
    /// Cyclic, also trying the reversed order of the second mesh.
    CyclicWithReversal,
}

/// Motion found by the oracle and the index correspondence it used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub motion: GroupElement,
    /// Second mesh index matched to first mesh index 0.
    pub shift: usize,
    pub reversed: bool,
    /// Largest `|g p[i] - q[i]|` over the mesh.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Congruent(Witness),
    NotCongruent {
        reason: String,
        /// Hypotheses of a decision procedure held but the oracle refuted
        /// congruence.
        oracle_disagreement: bool,
    },
    HypothesesNotMet(String),
}

impl Verdict {
    pub fn is_congruent(&self) -> bool {
        matches!(self, Verdict::Congruent(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Congruent(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_oracle_disagreement(&self) -> bool {
        matches!(
            self,
            Verdict::NotCongruent {
                oracle_disagreement: true,
                ..
            }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Congruent(_) => "Congruent",
            Verdict::NotCongruent { .. } => "NotCongruent",
            Verdict::HypothesesNotMet(_) => "HypothesesNotMet",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Congruent(w) => {
                write!(f, "Congruent: {}", w.motion)?;
                if w.shift != 0 || w.reversed {
                    write!(f, " (shift {}, reversed {})", w.shift, w.reversed)?;
                }
                Ok(())
            }
            Verdict::NotCongruent {
                reason,
                oracle_disagreement,
            } => {
                write!(f, "NotCongruent: {reason}")?;
                if *oracle_disagreement {
                    write!(f, " (hypotheses held; oracle disagrees)")?;
                }
                Ok(())
            }
            Verdict::HypothesesNotMet(reason) => write!(f, "HypothesesNotMet: {reason}"),
        }
    }
}

fn rotation_to(u: Point2, v: Point2) -> f64 {
    v.y.atan2(v.x) - u.y.atan2(u.x)
}

/// Index of the point farthest from `p[0]`.
fn far_index(p: &[Point2]) -> usize {
    (1..p.len())
        .max_by(|&a, &b| p[a].distance(p[0]).total_cmp(&p[b].distance(p[0])))
        .unwrap()
}

fn euclidean_candidates(p: &[Point2], q: &[Point2], group: Group) -> Vec<GroupElement> {
    let j = far_index(p);
    let (u, v) = (p[j] - p[0], q[j] - q[0]);
    let translate = |linear: [[f64; 2]; 2], group| {
        let g = GroupElement {
            linear,
            translation: [0.0, 0.0],
            group,
        };
        let moved = g.apply(p[0]);
        GroupElement {
            translation: [q[0].x - moved.x, q[0].y - moved.y],
            ..g
        }
    };
    let mut out = Vec::new();
    let rot = GroupElement::rotation(rotation_to(u, v), [0.0, 0.0]);
    out.push(translate(rot.linear, group));
    if group.allows_reflection() {
        // R(phi) diag(1, -1) sends direction a to phi - a
        let phi = v.y.atan2(v.x) + u.y.atan2(u.x);
        out.push(translate(GroupElement::reflection(phi, [0.0, 0.0]).linear, group));
    }
    out
}

fn affine_candidates(
    p: &[Point2],
    q: &[Point2],
    group: Group,
    diameter: f64,
) -> Result<Vec<GroupElement>> {
    let j = far_index(p);
    let u = p[j] - p[0];
    let k = (1..p.len())
        .filter(|&k| k != j)
        .max_by(|&a, &b| {
            u.cross(p[a] - p[0])
                .abs()
                .total_cmp(&u.cross(p[b] - p[0]).abs())
        })
        .ok_or(Error::NoNonCollinearTriple)?;
    let w = p[k] - p[0];
    let det_p = u.cross(w);
    if det_p.abs() <= 2.0 * ANCHOR_AREA_TOL * diameter * diameter {
        return Err(Error::NoNonCollinearTriple);
    }
    let (s, t) = (q[j] - q[0], q[k] - q[0]);
    // L [u w] = [s t]
    let inv = [[w.y / det_p, -w.x / det_p], [-u.y / det_p, u.x / det_p]];
    let mut l = [
        [s.x * inv[0][0] + t.x * inv[1][0], s.x * inv[0][1] + t.x * inv[1][1]],
        [s.y * inv[0][0] + t.y * inv[1][0], s.y * inv[0][1] + t.y * inv[1][1]],
    ];
    let det = l[0][0] * l[1][1] - l[0][1] * l[1][0];
    if det == 0.0 || !det.is_finite() || (group == Group::SA && det < 0.0) {
        return Ok(Vec::new());
    }
    let scale = det.abs().sqrt();
    for row in l.iter_mut() {
        for v in row.iter_mut() {
            *v /= scale;
        }
    }
    let g = GroupElement {
        linear: l,
        translation: [0.0, 0.0],
        group,
    };
    let moved = g.apply(p[0]);
    Ok(vec![GroupElement {
        translation: [q[0].x - moved.x, q[0].y - moved.y],
        ..g
    }])
}

fn max_deviation(g: &GroupElement, p: &[Point2], q: &[Point2]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(&a, &b)| g.apply(a).distance(b))
        .fold(0.0, f64::max)
}

/// Exact congruence oracle.
///
/// Euclidean groups pin the motion by the pair `(p[0], p[j])` with `p[j]`
/// farthest from `p[0]`; affine groups by the triple `(p[0], p[j], p[k])`
/// with `p[k]` maximizing the triangle area. The candidate is accepted when
/// every point lands within `tol * diameter` of its partner.
pub fn align(m1: &Mesh, m2: &Mesh, group: Group, mode: MatchMode, tol: f64) -> Result<Verdict> {
    let n = m1.len();
    if n != m2.len() {
        return Err(Error::LengthMismatch(n, m2.len()));
    }
    if mode != MatchMode::IndexAligned && !(m1.is_closed() && m2.is_closed()) {
        return Err(Error::CyclicOnOpenMesh);
    }
    let diameter = m1.diameter().max(m2.diameter());
    let limit = tol * diameter;
    if group.is_euclidean() && (m1.diameter() - m2.diameter()).abs() > limit {
        return Ok(Verdict::NotCongruent {
            reason: format!(
                "diameters differ ({} vs {})",
                m1.diameter(),
                m2.diameter()
            ),
            oracle_disagreement: false,
        });
    }
    let shifts: Vec<usize> = match mode {
        MatchMode::IndexAligned => vec![0],
        _ => (0..n).collect(),
    };
    let orders: &[bool] = match mode {
        MatchMode::CyclicWithReversal => &[false, true],
        _ => &[false],
    };
    let p = m1.points();
    let mut best = f64::INFINITY;
    for &reversed in orders {
        let base: Vec<Point2> = if reversed {
            m2.points().iter().rev().copied().collect()
        } else {
            m2.points().to_vec()
        };
        for &shift in &shifts {
            let q: Vec<Point2> = (0..n).map(|i| base[(i + shift) % n]).collect();
            let candidates = if group.is_euclidean() {
                euclidean_candidates(p, &q, group)
            } else {
                affine_candidates(p, &q, group, diameter)?
            };
            for g in candidates {
                if g.validate().is_err() {
                    continue;
                }
                let dev = max_deviation(&g, p, &q);
                best = best.min(dev);
                if dev <= limit {
                    let shift = if reversed { (n - 1 + n - shift) % n } else { shift };
                    return Ok(Verdict::Congruent(Witness {
                        motion: g,
                        shift,
                        reversed,
                        max_deviation: dev,
                    }));
                }
            }
        }
    }
    Ok(Verdict::NotCongruent {
        reason: if best.is_finite() {
            format!(
                "no {group} motion matches; best deviation {:.3e} x diameter",
                best / diameter
            )
        } else {
            format!("no {group} motion matches the anchor points")
        },
        oracle_disagreement: false,
    })
}

/// Conditions on open mesh ends accepted by [`decide_eq4`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndpointCondition {
    /// `|signed (3,3)-angle| >= pi/2` at index 3 of both meshes.
    ObtuseAt4,
    /// Equal signed (3,3)-angles at indices 3 and `n - 4`.
    EqualEndAngles,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecideOptions {
    pub tol: Tolerances,
    /// Compare signatures only, skipping the side conditions. Pairs with
    /// equal signatures then reach the oracle unconditionally.
    pub signature_only: bool,
    /// `decide_eq2_angle_type`: require fineness instead of equal angle types.
    pub fine: bool,
    /// `decide_eq2_signed`: equal signed angles and curvatures, no signature.
    pub curvature_only: bool,
    /// Required by `decide_eq4` on open meshes.
    pub endpoint: Option<EndpointCondition>,
}

impl Default for DecideOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            signature_only: false,
            fine: false,
            curvature_only: false,
            endpoint: None,
        }
    }
}

type Check = std::result::Result<(), String>;

fn conclude(m1: &Mesh, m2: &Mesh, group: Group, check: Check, opts: &DecideOptions) -> Result<Verdict> {
    if let Err(reason) = check {
        return Ok(Verdict::HypothesesNotMet(reason));
    }
    match align(m1, m2, group, MatchMode::IndexAligned, opts.tol.congruence)? {
        Verdict::NotCongruent { reason, .. } => {
            log::warn!("hypotheses hold but the oracle refutes congruence: {reason}");
            Ok(Verdict::NotCongruent {
                reason,
                oracle_disagreement: true,
            })
        }
        v => Ok(v),
    }
}

fn same_frame(m1: &Mesh, m2: &Mesh) -> Result<Check> {
    if m1.len() != m2.len() {
        return Err(Error::LengthMismatch(m1.len(), m2.len()));
    }
    if m1.is_closed() != m2.is_closed() {
        return Ok(Err("one mesh is closed, the other open".into()));
    }
    for (m, name) in [(m1, "first"), (m2, "second")] {
        if let Err(e) = m.ensure_ordinary() {
            return Ok(Err(format!("{name} mesh: {e}")));
        }
    }
    Ok(Ok(()))
}

fn signatures_match(a: Result<Signature>, b: Result<Signature>, tol: f64) -> Result<Check> {
    let (a, b) = match (a, b) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(Error::SchemeSpacingMismatch { scheme, reason }), _)
        | (_, Err(Error::SchemeSpacingMismatch { scheme, reason })) => {
            return Ok(Err(format!("{scheme} not applicable: {reason}")))
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let err = a.max_relative_error(&b)?;
    if err <= tol {
        Ok(Ok(()))
    } else {
        Ok(Err(format!(
            "{} signatures differ (max relative error {err:.3e})",
            a.scheme
        )))
    }
}

fn lengths_close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(scale)
}

/// Compare a per-index quantity over `indices`; `None` on both sides is equal.
fn per_index<T: PartialEq + fmt::Debug>(
    what: &str,
    indices: &[usize],
    mut f: impl FnMut(&Mesh, usize) -> Result<T>,
    m1: &Mesh,
    m2: &Mesh,
    eq: impl Fn(&T, &T) -> bool,
) -> Result<Check> {
    for &i in indices {
        let (a, b) = (f(m1, i)?, f(m2, i)?);
        if !eq(&a, &b) {
            return Ok(Err(format!("{what} differs at index {i}: {a:?} vs {b:?}")));
        }
    }
    Ok(Ok(()))
}

/// Unsigned angle type, `None` for a straight (collinear) triple.
fn angle_class(m: &Mesh, i: usize, spec: NeighborhoodSpec, tol: f64) -> Result<Option<AngleType>> {
    if signature_sign_spec(m, i, spec)? == 0 {
        return Ok(None);
    }
    Ok(Some(angle_type(angle(m, i, spec)?, tol)?))
}

fn signed_class(
    m: &Mesh,
    i: usize,
    spec: NeighborhoodSpec,
    tol: f64,
) -> Result<Option<SignedAngleType>> {
    let sign = signature_sign_spec(m, i, spec)?;
    Ok(angle_class(m, i, spec, tol)?.map(|kind| SignedAngleType {
        kind,
        positive: sign > 0,
    }))
}

fn spec(m1: usize, m2: usize) -> NeighborhoodSpec {
    NeighborhoodSpec { m1, m2 }
}

fn indices_for(m: &Mesh, spec: NeighborhoodSpec) -> Vec<usize> {
    m.stencil_indices(-(spec.m1 as isize), spec.m2 as isize)
}

macro_rules! check {
    ($e:expr) => {
        if let Err(reason) = $e? {
            return Ok(Err(reason));
        }
    };
}

fn equally_spaced_alike(m1: &Mesh, m2: &Mesh, opts: &DecideOptions) -> Check {
    let t = opts.tol.spacing;
    if !m1.is_equally_spaced(t) || !m2.is_equally_spaced(t) {
        return Err("meshes are not both equally spaced".into());
    }
    let (a, b) = (m1.edge_lengths()[0], m2.edge_lengths()[0]);
    if !lengths_close(a, b, opts.tol.signature, 0.0) {
        return Err(format!("edge lengths differ ({a} vs {b})"));
    }
    Ok(())
}

fn same_direction(m1: &Mesh, m2: &Mesh) -> Result<Check> {
    per_index(
        "signature-direction",
        &m1.interior_indices(),
        signature_direction,
        m1,
        m2,
        |a, b| a == b,
    )
}

/// Equally spaced meshes with the same signature-direction and equal Eq1
/// signatures. Equal edge lengths are checked too, since equal signatures
/// only force them where the curvature varies.
pub fn decide_eq1(m1: &Mesh, m2: &Mesh, opts: &DecideOptions) -> Result<Verdict> {
    let check = (|| -> Result<Check> {
        check!(same_frame(m1, m2));
        if !opts.signature_only {
            check!(Ok::<_, Error>(equally_spaced_alike(m1, m2, opts)));
            check!(same_direction(m1, m2));
        }
        let sig = |m| se_signature_with(m, Scheme::Eq1, NeighborhoodSpec::ONE, opts.tol.spacing);
        signatures_match(sig(m1), sig(m2), opts.tol.signature)
    })()?;
    conclude(m1, m2, Group::SE, check, opts)
}

fn eq2_signatures(m1: &Mesh, m2: &Mesh, opts: &DecideOptions) -> Result<Check> {
    let sig = |m| se_signature_with(m, Scheme::Eq2, NeighborhoodSpec::ONE, opts.tol.spacing);
    signatures_match(sig(m1), sig(m2), opts.tol.signature)
}

/// Equal spacing, same signature-direction, same angle type (or both fine
/// with `opts.fine`), equal Eq2 signatures.
pub fn decide_eq2_angle_type(m1: &Mesh, m2: &Mesh, opts: &DecideOptions) -> Result<Verdict> {
    let check = (|| -> Result<Check> {
        check!(same_frame(m1, m2));
        if !opts.signature_only {
            check!(Ok::<_, Error>(equally_spaced_alike(m1, m2, opts)));
            check!(same_direction(m1, m2));
            if opts.fine {
                let tol = opts.tol.right_angle;
                if !m1.is_fine(tol) || !m2.is_fine(tol) {
                    return Ok(Err("meshes are not both fine".into()));
                }
            } else {
                check!(per_index(
                    "angle type",
                    &m1.interior_indices(),
                    |m, i| angle_class(m, i, NeighborhoodSpec::ONE, opts.tol.right_angle),
                    m1,
                    m2,
                    |a, b| a == b,
                ));
            }
        }
        eq2_signatures(m1, m2, opts)
    })()?;
    conclude(m1, m2, Group::SE, check, opts)
}

/// Equal spacing, same signed angle type, equal Eq2 signatures. With
/// `opts.curvature_only`: equal signed angles with `0 < |angle| < pi` and
/// equal curvatures instead.
pub fn decide_eq2_signed(m1: &Mesh, m2: &Mesh, opts: &DecideOptions) -> Result<Verdict> {
    let check = (|| -> Result<Check> {
        check!(same_frame(m1, m2));
        let interior = m1.interior_indices();
        if opts.curvature_only {
            let t = opts.tol.spacing;
            if !m1.is_equally_spaced(t) || !m2.is_equally_spaced(t) {
                return Ok(Err("meshes are not both equally spaced".into()));
            }
            for &i in &interior {
                let (a, b) = (
                    signed_angle(m1, i, NeighborhoodSpec::ONE)?,
                    signed_angle(m2, i, NeighborhoodSpec::ONE)?,
                );
                if a == 0.0 || (a - b).abs() > opts.tol.signature {
                    return Ok(Err(format!("signed angles differ or vanish at index {i}")));
                }
            }
            return per_index(
                "curvature",
                &interior,
                |m, i| euclidean_curvature(m, i, NeighborhoodSpec::ONE),
                m1,
                m2,
                |a, b| lengths_close(*a, *b, opts.tol.signature, 0.0),
            );
        }
        if !opts.signature_only {
            check!(Ok::<_, Error>(equally_spaced_alike(m1, m2, opts)));
            check!(per_index(
                "signed angle type",
                &interior,
                |m, i| signed_class(m, i, NeighborhoodSpec::ONE, opts.tol.right_angle),
                m1,
                m2,
                |a, b| a == b,
            ));
        }
        eq2_signatures(m1, m2, opts)
    })()?;
    conclude(m1, m2, Group::SE, check, opts)
}

/// Equal `d(i-1, i+1)`, same signed (1,2)-angle type, equal Eq3 signatures
/// over the (1,2)-neighborhood; open meshes also need equal
/// `d(n-4, n-1)`.
pub fn decide_eq3(m1: &Mesh, m2: &Mesh, opts: &DecideOptions) -> Result<Verdict> {
    let s12 = spec(1, 2);
    let check = (|| -> Result<Check> {
        check!(same_frame(m1, m2));
        let scale = m1.diameter().max(m2.diameter());
        let tol = opts.tol.signature;
        if !opts.signature_only {
            check!(per_index(
                "d(i-1, i+1)",
                &m1.interior_indices(),
                |m, i| Ok(m.at(i, -1).unwrap().distance(m.at(i, 1).unwrap())),
                m1,
                m2,
                |a, b| lengths_close(*a, *b, tol, scale),
            ));
            check!(per_index(
                "signed (1,2)-angle type",
                &indices_for(m1, s12),
                |m, i| signed_class(m, i, s12, opts.tol.right_angle),
                m1,
                m2,
                |a, b| a == b,
            ));
            if !m1.is_closed() {
                let n = m1.len();
                let end = |m: &Mesh| m.point(n - 4).distance(m.point(n - 1));
                if n < 4 || !lengths_close(end(m1), end(m2), tol, scale) {
                    return Ok(Err("closing (1,2)-chord differs".into()));
                }
            }
        }
        let sig = |m| se_signature_with(m, Scheme::Eq3, s12, opts.tol.spacing);
        signatures_match(sig(m1), sig(m2), tol)
    })()?;
    conclude(m1, m2, Group::SE, check, opts)
}

fn eq4_core(m1: &Mesh, m2: &Mesh, opts: &DecideOptions) -> Result<Check> {
    let s33 = NeighborhoodSpec::symmetric(3);
    let scale = m1.diameter().max(m2.diameter());
    let tol = opts.tol.signature;
    if !opts.signature_only {
        check!(per_index(
            "signed 3-angle type",
            &indices_for(m1, s33),
            |m, i| signed_class(m, i, s33, opts.tol.right_angle),
            m1,
            m2,
            |a, b| a == b,
        ));
        check!(per_index(
            "d3(1, i)",
            &m1.stencil_indices(-3, 0),
            |m, i| Ok(m.at(i, -3).unwrap().distance(m.point(i))),
            m1,
            m2,
            |a, b| lengths_close(*a, *b, tol, scale),
        ));
    }
    let sig = |m| se_signature_with(m, Scheme::Eq4, s33, opts.tol.spacing);
    signatures_match(sig(m1), sig(m2), tol)
}

/// Equal (3,1)-curvatures and signed (3,1)-angles, same signed 3-angle type,
/// equal `d3(1, i) = |p[i-3] p[i]|`, equal Eq4 signatures over the
/// 3-neighborhood; open meshes also need `opts.endpoint`.
pub fn decide_eq4(m1: &Mesh, m2: &Mesh, opts: &DecideOptions) -> Result<Verdict> {
    let s31 = spec(3, 1);
    let n = m1.len();
    if !m1.is_closed() && n <= 7 {
        return Err(Error::MeshTooShort { needed: 8, got: n });
    }
    if m1.is_closed() && n < 7 {
        return Err(Error::MeshTooShort { needed: 7, got: n });
    }
    let check = (|| -> Result<Check> {
        check!(same_frame(m1, m2));
        if !opts.signature_only {
            let idx = indices_for(m1, s31);
            let tol = opts.tol.signature;
            check!(per_index(
                "(3,1)-curvature",
                &idx,
                |m, i| euclidean_curvature(m, i, s31),
                m1,
                m2,
                |a, b| lengths_close(*a, *b, tol, 0.0),
            ));
            check!(per_index(
                "signed (3,1)-angle",
                &idx,
                |m, i| signed_angle(m, i, s31),
                m1,
                m2,
                |a, b| (a - b).abs() <= tol,
            ));
            if !m1.is_closed() {
                check!(endpoint_check(m1, m2, opts));
            }
        }
        eq4_core(m1, m2, opts)
    })()?;
    conclude(m1, m2, Group::SE, check, opts)
}

fn endpoint_check(m1: &Mesh, m2: &Mesh, opts: &DecideOptions) -> Result<Check> {
    let s33 = NeighborhoodSpec::symmetric(3);
    let n = m1.len();
    Ok(match opts.endpoint {
        None => Err("open meshes need an endpoint condition".into()),
        Some(EndpointCondition::ObtuseAt4) => {
            let ok = |m: &Mesh| -> Result<bool> {
                Ok(signed_angle(m, 3, s33)?.abs() >= FRAC_PI_2 - opts.tol.right_angle)
            };
            if ok(m1)? && ok(m2)? {
                Ok(())
            } else {
                Err("3-angle at index 3 is acute".into())
            }
        }
        Some(EndpointCondition::EqualEndAngles) => {
            let mut res = Ok(());
            for i in [3, n - 4] {
                let (a, b) = (signed_angle(m1, i, s33)?, signed_angle(m2, i, s33)?);
                if (a - b).abs() > opts.tol.signature {
                    res = Err(format!("end 3-angles differ at index {i}"));
                }
            }
            res
        }
    })
}

/// Equal consecutive distances and equal signed angles at every interior
/// point, no signature involved.
pub fn decide_dist_angle(m1: &Mesh, m2: &Mesh, opts: &DecideOptions) -> Result<Verdict> {
    let check = (|| -> Result<Check> {
        check!(same_frame(m1, m2));
        let scale = m1.diameter().max(m2.diameter());
        let tol = opts.tol.signature;
        for (k, (a, b)) in m1.edge_lengths().iter().zip(m2.edge_lengths()).enumerate() {
            if !lengths_close(*a, b, tol, scale) {
                return Ok(Err(format!("edge {k} lengths differ ({a} vs {b})")));
            }
        }
        per_index(
            "signed angle",
            &m1.interior_indices(),
            |m, i| signed_angle(m, i, NeighborhoodSpec::ONE),
            m1,
            m2,
            |a, b| (a - b).abs() <= tol,
        )
    })()?;
    conclude(m1, m2, Group::SE, check, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AffineVariant {
    /// A-fine, never-zero affine curvature.
    Thm57,
    /// A-fine, equal one-neighborhood areas at zero-curvature points.
    Thm58,
    /// As `Thm58` with Euclidean fineness instead of A-fineness.
    Cor59,
}

/// Affine decision: the variant's fineness and curvature conditions, same
/// affine signature-direction, same arc length sets and equal Eq6
/// signatures, refuted or confirmed under SA(2).
pub fn decide_affine(
    m1: &Mesh,
    m2: &Mesh,
    variant: AffineVariant,
    opts: &DecideOptions,
) -> Result<Verdict> {
    if !m1.is_convex() || !m2.is_convex() {
        return Err(Error::NotConvex);
    }
    let check = (|| -> Result<Check> {
        check!(same_frame(m1, m2));
        let two = m1.stencil_indices(-2, 2);
        if !opts.signature_only {
            match variant {
                AffineVariant::Thm57 | AffineVariant::Thm58 => {
                    if !is_affine_fine(m1)? || !is_affine_fine(m2)? {
                        return Ok(Err("meshes are not both A-fine".into()));
                    }
                }
                AffineVariant::Cor59 => {
                    let tol = opts.tol.right_angle;
                    if !m1.is_fine(tol) || !m2.is_fine(tol) {
                        return Ok(Err("meshes are not both fine".into()));
                    }
                }
            }
            for &i in &two {
                let (k1, k2) = (affine_curvature(m1, i)?, affine_curvature(m2, i)?);
                match variant {
                    AffineVariant::Thm57 => {
                        if k1 == 0.0 || k2 == 0.0 {
                            return Ok(Err(format!("zero affine curvature at index {i}")));
                        }
                    }
                    _ => {
                        if k1 == 0.0 && k2 == 0.0 {
                            let (a1, a2) =
                                (one_neighborhood_area(m1, i)?, one_neighborhood_area(m2, i)?);
                            if !lengths_close(a1, a2, opts.tol.signature, 0.0) {
                                return Ok(Err(format!(
                                    "one-neighborhood areas differ at index {i}"
                                )));
                            }
                        }
                    }
                }
            }
            check!(per_index(
                "affine signature-direction",
                &two,
                sd_affine,
                m1,
                m2,
                |a, b| a == b,
            ));
            check!(per_index(
                "arc length set",
                &two,
                arc_length_set,
                m1,
                m2,
                |a, b| a.matches(b, opts.tol.signature),
            ));
        }
        let sig = |m| sa_signature_with(m, Scheme::Eq6, AffineSpacing::Affine(opts.tol.affine_spacing));
        signatures_match(sig(m1), sig(m2), opts.tol.signature)
    })()?;
    conclude(m1, m2, Group::SA, check, opts)
}

/// Closed meshes with `n` not divisible by 3, same signed 3-angle type,
/// equal `d3(1, i)` and equal Eq4 signatures over the 3-neighborhood.
pub(crate) fn decide_closed_eq4(m1: &Mesh, m2: &Mesh, opts: &DecideOptions) -> Result<Verdict> {
    if !m1.is_closed() || !m2.is_closed() {
        return Err(Error::NotClosed);
    }
    if m1.len() != m2.len() {
        return Err(Error::LengthMismatch(m1.len(), m2.len()));
    }
    let n = m1.len();
    if n % 3 == 0 {
        return Ok(Verdict::HypothesesNotMet(format!(
            "n = {n} is divisible by 3; the step-3 traversal misses two residue classes"
        )));
    }
    let check = (|| -> Result<Check> {
        check!(same_frame(m1, m2));
        eq4_core(m1, m2, opts)
    })()?;
    conclude(m1, m2, Group::SE, check, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CounterexampleId {
    /// Two 3-point samplings of the unit circle.
    Ex1,
    /// An equally spaced 3-point circle sample and its mirror image.
    Ex2,
    /// Two 5-point meshes with circumradii (1, 1, 1/2) and equal Eq2 signatures.
    Ex3,
    /// Equal-parameter ellipse samples and their mirror image.
    Affine,
}

impl CounterexampleId {
    pub const ALL: [CounterexampleId; 4] = [
        CounterexampleId::Ex1,
        CounterexampleId::Ex2,
        CounterexampleId::Ex3,
        CounterexampleId::Affine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CounterexampleId::Ex1 => "ex1",
            CounterexampleId::Ex2 => "ex2",
            CounterexampleId::Ex3 => "ex3",
            CounterexampleId::Affine => "affine",
        }
    }
}

impl std::str::FromStr for CounterexampleId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        CounterexampleId::ALL
            .into_iter()
            .find(|id| id.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown counterexample '{s}', expected ex1, ex2, ex3 or affine"))
    }
}

/// A pair with equal designated invariants and the verdicts expected of the
/// oracle under each group.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub id: CounterexampleId,
    pub a: Mesh,
    pub b: Mesh,
    /// What is equal between the meshes.
    pub invariant: &'static str,
    pub expected: Vec<(Group, bool)>,
}

impl Counterexample {
    /// Largest relative difference of the designated invariant.
    pub fn invariant_gap(&self) -> Result<f64> {
        match self.id {
            CounterexampleId::Ex1 | CounterexampleId::Ex2 => {
                let (a, b) = (
                    euclidean_curvature(&self.a, 1, NeighborhoodSpec::ONE)?,
                    euclidean_curvature(&self.b, 1, NeighborhoodSpec::ONE)?,
                );
                Ok((a - b).abs() / a.abs().max(b.abs()))
            }
            CounterexampleId::Ex3 => {
                let s = |m| crate::euclidean::se_signature(m, Scheme::Eq2, NeighborhoodSpec::ONE);
                s(&self.a)?.max_relative_error(&s(&self.b)?)
            }
            CounterexampleId::Affine => {
                let s = |m| affine::sa_signature(m, Scheme::Eq6);
                s(&self.a)?.max_relative_error(&s(&self.b)?)
            }
        }
    }

    /// Human-readable summary of invariants and oracle verdicts.
    pub fn report(&self, tol: f64) -> Result<String> {
        let mut out = format!(
            "counterexample {}\nequal invariant: {}\nmax relative gap: {:.3e}\n",
            self.id.name(),
            self.invariant,
            self.invariant_gap()?
        );
        for &(group, congruent) in &self.expected {
            let v = align(&self.a, &self.b, group, MatchMode::IndexAligned, tol)?;
            out.push_str(&format!(
                "{group}: expected {}, oracle {}\n",
                if congruent { "Congruent" } else { "NotCongruent" },
                v.name()
            ));
        }
        Ok(out)
    }
}

/// Turn of an equally spaced polyline with edge `d` at a vertex whose
/// circumradius is `rho`.
fn turn_for_radius(d: f64, rho: f64) -> f64 {
    2.0 * (d / (2.0 * rho)).asin()
}

pub fn counterexample(id: CounterexampleId) -> Result<Counterexample> {
    let unit = |angles: &[f64]| samples::circle(Point2::ORIGIN, 1.0, angles, false);
    Ok(match id {
        CounterexampleId::Ex1 => Counterexample {
            id,
            a: unit(&[-0.5, 0.0, 0.5])?,
            b: unit(&[-1.0, 0.0, 0.3])?,
            invariant: "curvature at the middle point",
            expected: vec![(Group::SE, false), (Group::E, false)],
        },
        CounterexampleId::Ex2 => {
            let a = unit(&[-0.5, 0.0, 0.5])?;
            let mirror = GroupElement {
                linear: [[-1.0, 0.0], [0.0, 1.0]],
                translation: [6.0, 0.0],
                group: Group::E,
            };
            let b = apply_motion(&mirror, &a)?;
            Counterexample {
                id,
                a,
                b,
                invariant: "curvature at the middle point",
                expected: vec![(Group::SE, false), (Group::E, true)],
            }
        }
        CounterexampleId::Ex3 => {
            let (a, b) = ex3_pair(0.5, 1.0, 0.5)?;
            Counterexample {
                id,
                a,
                b,
                invariant: "Eq2 signature",
                expected: vec![(Group::SE, false), (Group::E, false)],
            }
        }
        CounterexampleId::Affine => {
            let a = samples::ellipse(2.0, 1.0, &samples::linspace(0.0, 0.35, 9), false)?;
            let mirror = GroupElement {
                linear: [[1.0, 0.0], [0.0, -1.0]],
                translation: [0.0, 0.0],
                group: Group::Abar,
            };
            let b = apply_motion(&mirror, &a)?;
            Counterexample {
                id,
                a,
                b,
                invariant: "Eq6 signature and affine arc lengths",
                expected: vec![(Group::SA, false), (Group::Abar, true)],
            }
        }
    })
}

/// Five equally spaced points with edge `d` and circumradii
/// `(big, big, small)` at indices 1..3; the second mesh mirrors the last
/// point across the line through points 2 and 3.
pub fn ex3_pair(d: f64, big: f64, small: f64) -> Result<(Mesh, Mesh)> {
    let tb = turn_for_radius(d, big);
    let ts = turn_for_radius(d, small);
    // p2 = (-d, 0), p3 = (0, 0), heading along +x into p3
    let p2 = Point2::new(-d, 0.0);
    let p3 = Point2::ORIGIN;
    let p1 = p2 - Point2::polar(d, -tb);
    let p0 = p1 - Point2::polar(d, -2.0 * tb);
    let a = vec![p0, p1, p2, p3, Point2::polar(d, ts)];
    let b = vec![p0, p1, p2, p3, Point2::polar(d, -ts)];
    Ok((Mesh::open(a)?, Mesh::open(b)?))
}

/// Equally spaced 3-point meshes with curvature `kappa` and end chord
/// `chord`, one per SE class: the middle point on the minor or major arc,
/// traversed in either direction. A diameter chord leaves two classes.
pub fn classification_meshes(kappa: f64, chord: f64) -> Result<Vec<Mesh>> {
    let r = 1.0 / kappa;
    let half = chord / 2.0;
    if !(half > 0.0 && half <= r * (1.0 + 1e-12)) {
        return Err(Error::DegenerateConfiguration(format!(
            "chord {chord} does not fit a circle of radius {r}"
        )));
    }
    let c = (r * r - half * half).max(0.0).sqrt();
    let diameter = (kappa * chord - 2.0).abs() <= 1e-12;
    let ends = (Point2::new(-half, -c), Point2::new(half, -c));
    let mut mids = vec![Point2::new(0.0, -r)];
    if !diameter {
        mids.push(Point2::new(0.0, r));
    }
    let mut out = Vec::new();
    for mid in mids {
        out.push(Mesh::open(vec![ends.0, mid, ends.1])?);
        out.push(Mesh::open(vec![ends.1, mid, ends.0])?);
    }
    Ok(out)
}
