//! Conic through five points, its equiaffine invariants, the three-point
//! affine curvature and arc length, SA-signatures Eq5..Eq8 and the affine
//! fineness predicates.
//!
//! Every fit is done on points translated to their centroid and whitened to
//! unit covariance. The whitened frame of an affine image differs from the
//! original's by a rotation, so fits are equally well conditioned for a mesh
//! and its images, and curvature-type thresholds applied there are affine
//! invariant.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, SMatrix, SymmetricEigen, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{signed_triangle_area, Mesh, Point2};
use crate::signature::{Scheme, Signature, SignaturePoint};

/// Default relative tolerance for equal consecutive affine arc lengths.
pub const AFFINE_SPACING_TOL: f64 = 1e-6;

/// `|F|` below this (unit-norm coefficients, normalized frame) is a line pair.
pub const ZERO_F_TOL: f64 = 1e-12;

/// `|S| <= PARABOLIC_TOL * (A^2 + 2B^2 + C^2)` in the normalized frame is a parabola.
pub const PARABOLIC_TOL: f64 = 1e-9;

/// Smallest-to-largest singular value ratio below which the five points
/// do not pin down a unique conic.
const RANK_TOL: f64 = 1e-10;
/// Smallest covariance eigenvalue accepted at unit RMS radius.
const WHITEN_TOL: f64 = 1e-20;

/// `A x^2 + 2B xy + C y^2 + 2D x + 2E y + F0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f0: f64,
}

impl ConicCoeffs {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f0: f64) -> Self {
        Self { a, b, c, d, e, f0 }
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f0]
    }

    fn from_array(v: [f64; 6]) -> Self {
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self::from_array(self.as_array().map(|v| v * lambda))
    }

    /// Unit Euclidean norm, first nonzero of `(A, B, C)` positive.
    pub fn normalized(&self) -> Self {
        let v = self.as_array();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let lead = v[..3]
            .iter()
            .chain(&v[3..])
            .copied()
            .find(|x| x.abs() > 1e-14 * norm)
            .unwrap_or(1.0);
        self.scaled(lead.signum() / norm)
    }

    pub fn eval(&self, p: Point2) -> f64 {
        let (x, y) = (p.x, p.y);
        self.a * x * x
            + 2.0 * self.b * x * y
            + self.c * y * y
            + 2.0 * self.d * x
            + 2.0 * self.e * y
            + self.f0
    }

    fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.a, self.b, self.d, self.b, self.c, self.e, self.d, self.e, self.f0,
        )
    }

    fn from_matrix(m: &Matrix3<f64>) -> Self {
        Self::new(m[(0, 0)], m[(0, 1)], m[(1, 1)], m[(0, 2)], m[(1, 2)], m[(2, 2)])
    }

    fn quadratic_scale(&self) -> f64 {
        self.a * self.a + 2.0 * self.b * self.b + self.c * self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineInvariants {
    /// `AC - B^2`; positive for ellipses, zero for parabolas, negative for hyperbolas.
    pub s: f64,
    /// Determinant of the symmetric 3x3 coefficient matrix.
    pub f: f64,
}

impl AffineInvariants {
    /// `S / cbrt(F)^2`, independent of coefficient scaling.
    pub fn curvature(&self) -> Result<f64> {
        if self.f == 0.0 {
            return Err(Error::ZeroF);
        }
        let r = self.f.cbrt();
        Ok(self.s / (r * r))
    }
}

pub fn invariants(c: &ConicCoeffs) -> AffineInvariants {
    AffineInvariants {
        s: c.a * c.c - c.b * c.b,
        f: c.matrix().determinant(),
    }
}

/// A fitted conic kept in both the input frame and the normalized frame
/// `u = W (x - origin)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LocalConic {
    pub coeffs: ConicCoeffs,
    pub local: ConicCoeffs,
    pub origin: Point2,
    pub frame: Matrix2<f64>,
    pub frame_inv: Matrix2<f64>,
}

fn mul2(m: &Matrix2<f64>, p: Point2) -> Point2 {
    let v = m * Vector2::new(p.x, p.y);
    Point2::new(v.x, v.y)
}

impl LocalConic {
    fn to_local(&self, p: Point2) -> Point2 {
        mul2(&self.frame, p - self.origin)
    }

    fn from_local(&self, u: Point2) -> Point2 {
        mul2(&self.frame_inv, u) + self.origin
    }

    /// `det W`: areas in the normalized frame are input areas times this.
    pub fn area_factor(&self) -> f64 {
        self.frame.determinant()
    }

    fn local_invariants(&self) -> AffineInvariants {
        invariants(&self.local)
    }

    pub fn is_parabolic(&self) -> bool {
        let inv = self.local_invariants();
        inv.s.abs() <= PARABOLIC_TOL * self.local.quadratic_scale()
    }

    /// Affine curvature in the input frame; exactly zero on parabolas.
    pub fn curvature(&self) -> Result<f64> {
        let inv = self.local_invariants();
        if inv.f.abs() <= ZERO_F_TOL {
            return Err(Error::ZeroF);
        }
        if self.is_parabolic() {
            return Ok(0.0);
        }
        // W = sqrt(det W) U with U unimodular; kappa_A ~ length^(-4/3)
        Ok(inv.curvature()? * self.area_factor().powf(2.0 / 3.0))
    }

    /// Center of a central conic, in the input frame.
    pub fn center(&self) -> Result<Point2> {
        if self.is_parabolic() {
            return Err(Error::ParabolicConic);
        }
        Ok(self.from_local(center_of(&self.local)))
    }
}

fn center_of(c: &ConicCoeffs) -> Point2 {
    let s = c.a * c.c - c.b * c.b;
    Point2::new((c.b * c.e - c.c * c.d) / s, -(c.a * c.e - c.b * c.d) / s)
}

pub(crate) fn fit_local(pts: [Point2; 5]) -> Result<LocalConic> {
    for i in 0..5 {
        for j in (i + 1)..5 {
            if pts[i] == pts[j] {
                return Err(Error::DegenerateConfiguration(format!(
                    "points {i} and {j} coincide"
                )));
            }
        }
    }
    let origin = pts.iter().fold(Point2::ORIGIN, |acc, &p| acc + p) * 0.2;
    let rms = (pts.iter().map(|&p| (p - origin).dot(p - origin)).sum::<f64>() / 5.0).sqrt();
    let u: Vec<Point2> = pts.iter().map(|&p| (p - origin) * (1.0 / rms)).collect();

    let diam2 = u
        .iter()
        .flat_map(|a| u.iter().map(move |b| (*a - *b).dot(*a - *b)))
        .fold(0.0, f64::max);
    for i in 0..5 {
        for j in (i + 1)..5 {
            for k in (j + 1)..5 {
                if (u[j] - u[i]).cross(u[k] - u[i]).abs() <= 1e-9 * diam2 {
                    return Err(Error::DegenerateConfiguration(format!(
                        "points {i}, {j}, {k} are collinear"
                    )));
                }
            }
        }
    }

    let cov = u.iter().fold(Matrix2::zeros(), |acc, p| {
        acc + Matrix2::new(p.x * p.x, p.x * p.y, p.x * p.y, p.y * p.y)
    }) / 5.0;
    let eig = SymmetricEigen::new(cov);
    if eig.eigenvalues.min() <= WHITEN_TOL {
        return Err(Error::DegenerateConfiguration(
            "five points do not span the plane".into(),
        ));
    }
    let whiten = eig.eigenvectors
        * Matrix2::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()))
        * eig.eigenvectors.transpose();
    let u: Vec<Point2> = u.iter().map(|&p| mul2(&whiten, p)).collect();
    // u = W (x - origin)
    let frame = whiten / rms;
    let frame_inv = frame
        .try_inverse()
        .ok_or_else(|| Error::DegenerateConfiguration("singular frame".into()))?;

    let mut design = SMatrix::<f64, 6, 6>::zeros();
    for (r, p) in u.iter().enumerate() {
        let row = [p.x * p.x, 2.0 * p.x * p.y, p.y * p.y, 2.0 * p.x, 2.0 * p.y, 1.0];
        for (c, v) in row.into_iter().enumerate() {
            design[(r, c)] = v;
        }
    }
    let svd = design.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sv = svd.singular_values;
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| sv[a].total_cmp(&sv[b]));
    if sv[order[1]] <= RANK_TOL * sv[order[5]] {
        return Err(Error::DegenerateConfiguration(
            "five points do not determine a unique conic".into(),
        ));
    }
    let row = v_t.row(order[0]);
    let local = ConicCoeffs::from_array([row[0], row[1], row[2], row[3], row[4], row[5]]).normalized();

    // M_x = T^T M_u T with u = T x
    let shift = -(frame * Vector2::new(origin.x, origin.y));
    let t = Matrix3::new(
        frame[(0, 0)],
        frame[(0, 1)],
        shift.x,
        frame[(1, 0)],
        frame[(1, 1)],
        shift.y,
        0.0,
        0.0,
        1.0,
    );
    let mx = t.transpose() * local.matrix() * t;
    Ok(LocalConic {
        coeffs: ConicCoeffs::from_matrix(&mx).normalized(),
        local,
        origin,
        frame,
        frame_inv,
    })
}

/// Conic through five points: the null vector of the 5x6 design matrix
/// with rows `(x^2, 2xy, y^2, 2x, 2y, 1)`, unit norm.
pub fn fit_conic(p: [Point2; 5]) -> Result<ConicCoeffs> {
    Ok(fit_local(p)?.coeffs)
}

/// Center `((BE - CD)/S, -(AE - BD)/S)` of a central conic.
pub fn conic_center(c: &ConicCoeffs) -> Result<Point2> {
    let s = c.a * c.c - c.b * c.b;
    if s.abs() <= PARABOLIC_TOL * c.quadratic_scale() {
        return Err(Error::ParabolicConic);
    }
    Ok(center_of(c))
}

pub(crate) fn two_neighborhood(m: &Mesh, i: usize) -> Result<[Point2; 5]> {
    let mut out = [Point2::ORIGIN; 5];
    for (k, o) in (-2..=2).enumerate() {
        out[k] = m.at(i, o).ok_or_else(|| Error::IndexOutOfRange {
            index: i,
            len: m.len(),
            needed: "two-".into(),
        })?;
    }
    if i >= m.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: m.len(),
            needed: "two-".into(),
        });
    }
    Ok(out)
}

pub(crate) fn conic_at(m: &Mesh, i: usize) -> Result<LocalConic> {
    fit_local(two_neighborhood(m, i)?)
}

/// `S / F^(2/3)` of the conic through the two-neighborhood of `p[i]`.
pub fn affine_curvature(m: &Mesh, i: usize) -> Result<f64> {
    conic_at(m, i)?.curvature()
}

fn cyclic_distance(m: &Mesh, a: usize, b: usize) -> usize {
    let d = a.abs_diff(b);
    if m.is_closed() {
        d.min(m.len() - d)
    } else {
        d
    }
}

/// Affine length between `p[k]` and `p[l]` from the conic fitted at `at`.
///
/// With nonzero curvature this is `|kappa * [k l O]|`, the curvature times
/// the parallelogram spanned by `p[k] - p[l]` and `p[k] - O`. On a parabola
/// the signed zero-curvature formula is used.
pub fn affine_arc_length(m: &Mesh, at: usize, k: usize, l: usize) -> Result<f64> {
    for idx in [at, k, l] {
        if idx >= m.len() {
            return Err(Error::IndexOutOfRange {
                index: idx,
                len: m.len(),
                needed: "valid".into(),
            });
        }
    }
    if cyclic_distance(m, at, k) > 5 || cyclic_distance(m, at, l) > 5 {
        return Err(Error::IndexOutOfRange {
            index: at,
            len: m.len(),
            needed: "five-".into(),
        });
    }
    let conic = conic_at(m, at)?;
    arc_length_with(&conic, m.point(k), m.point(l))
}

pub(crate) fn arc_length_with(conic: &LocalConic, pk: Point2, pl: Point2) -> Result<f64> {
    let kappa = conic.curvature()?;
    if kappa != 0.0 {
        let o = conic.center()?;
        return Ok((kappa * (pk - pl).cross(pk - o)).abs());
    }
    let c = &conic.coeffs;
    let den = c.a * c.e - c.b * c.d;
    if c.a == 0.0 || den == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok((c.a * c.a / den).cbrt() * ((pk.x - pl.x) + (c.b / c.a) * (pk.y - pl.y)))
}

/// `(L[i-2], L[i-1], L[i], L[i+1])` with `L[k] = L(k, k+1)`, all from the
/// conic at `p[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcLengthSet {
    pub values: [f64; 4],
}

impl ArcLengthSet {
    pub fn matches(&self, other: &ArcLengthSet, tol: f64) -> bool {
        let scale = self
            .values
            .iter()
            .chain(&other.values)
            .map(|v| v.abs())
            .fold(0.0, f64::max);
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| (a - b).abs() <= tol * scale)
    }
}

pub fn arc_length_set(m: &Mesh, i: usize) -> Result<ArcLengthSet> {
    let pts = two_neighborhood(m, i)?;
    let conic = fit_local(pts)?;
    let mut values = [0.0; 4];
    for (k, v) in values.iter_mut().enumerate() {
        *v = arc_length_with(&conic, pts[k], pts[k + 1])?;
    }
    Ok(ArcLengthSet { values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AffineDirection {
    SD,
    NotSD,
}

/// Orientation of the two-neighborhood: all three turns counterclockwise
/// gives `SD`, all clockwise `NotSD`.
pub fn sd_affine(m: &Mesh, i: usize) -> Result<AffineDirection> {
    let p = two_neighborhood(m, i)?;
    let tol = m.collinear_tolerance();
    let turns: Vec<f64> = (1..4)
        .map(|j| (p[j] - p[j - 1]).cross(p[j + 1] - p[j]))
        .collect();
    if turns.iter().all(|&t| t > tol) {
        Ok(AffineDirection::SD)
    } else if turns.iter().all(|&t| t < -tol) {
        Ok(AffineDirection::NotSD)
    } else {
        Err(Error::DegenerateConfiguration(format!(
            "two-neighborhood of {i} changes orientation"
        )))
    }
}

/// Whether the sector of the fitted ellipse swept by the two-neighborhood
/// of `p[i]` is no larger than the ellipse.
pub fn has_fine_area(m: &Mesh, i: usize) -> Result<bool> {
    let pts = two_neighborhood(m, i)?;
    let conic = fit_local(pts)?;
    if conic.curvature()? <= 0.0 {
        return Err(Error::WrongCurvatureSign { index: i });
    }
    let (ellipse, sector) = ellipse_and_sector_area(&conic, &pts)?;
    Ok(ellipse >= sector)
}

/// Areas in the normalized frame (the comparison is affine invariant).
fn ellipse_and_sector_area(conic: &LocalConic, pts: &[Point2; 5]) -> Result<(f64, f64)> {
    let inv = conic.local_invariants();
    let c = &conic.local;
    let o = center_of(c);
    // (u - O)^T Q (u - O) = k
    let k = -inv.f / inv.s;
    if k <= 0.0 {
        return Err(Error::DegenerateConfiguration("imaginary ellipse".into()));
    }
    let ellipse = PI * inv.f.abs() / inv.s.powf(1.5);

    let q = Matrix2::new(c.a, c.b, c.b, c.c);
    let eig = SymmetricEigen::new(q);
    let root = eig.eigenvectors
        * Matrix2::from_diagonal(&eig.eigenvalues.map(|l| l.sqrt()))
        * eig.eigenvectors.transpose();
    let to_circle = |u: Point2| {
        let d = u - o;
        let w = root * Vector2::new(d.x, d.y) / k.sqrt();
        Point2::new(w.x, w.y)
    };
    // circle units -> ellipse units
    let jac = k / inv.s.sqrt();
    let u: Vec<Point2> = pts.iter().map(|&p| conic.to_local(p)).collect();
    let mut polygon = 0.0;
    let mut segments = 0.0;
    for j in 0..4 {
        polygon += signed_triangle_area(o, u[j], u[j + 1]);
        let a = to_circle(u[j]);
        let b = to_circle(u[j + 1]);
        let dphi = a.cross(b).atan2(a.dot(b));
        segments += 0.5 * (dphi - dphi.sin()) * jac;
    }
    Ok((ellipse, (polygon + segments).abs()))
}

/// Twice the transverse semi-axis of the hyperbola through the
/// two-neighborhood of `p[i]`, in the input frame.
pub fn hyperbola_mu(m: &Mesh, i: usize) -> Result<f64> {
    let conic = conic_at(m, i)?;
    if conic.curvature()? >= 0.0 {
        return Err(Error::WrongCurvatureSign { index: i });
    }
    let inv = conic.local_invariants();
    let c = &conic.local;
    // (x - O)^T W^T Q W (x - O) = -F / S
    let q = conic.frame.transpose() * Matrix2::new(c.a, c.b, c.b, c.c) * conic.frame;
    let eig = SymmetricEigen::new(q);
    let radicand = eig
        .eigenvalues
        .iter()
        .map(|&l| -inv.f / (l * inv.s))
        .filter(|r| r.is_finite() && *r > 0.0)
        .fold(f64::NAN, f64::max);
    if radicand.is_nan() {
        return Err(Error::NonRealMu { index: i });
    }
    Ok(2.0 * radicand.sqrt())
}

/// Whether every consecutive gap in the two-neighborhood of `p[i]` is
/// shorter than `mu`, keeping the points on one hyperbola branch.
pub fn in_fine_position(m: &Mesh, i: usize) -> Result<bool> {
    let mu = hyperbola_mu(m, i)?;
    let p = two_neighborhood(m, i)?;
    Ok((0..4).all(|j| p[j].distance(p[j + 1]) < mu))
}

/// Fine area at elliptic points and fine position at hyperbolic points of
/// every index with a two-neighborhood.
pub fn is_affine_fine(m: &Mesh) -> Result<bool> {
    for i in m.stencil_indices(-2, 2) {
        let kappa = affine_curvature(m, i)?;
        let ok = if kappa > 0.0 {
            has_fine_area(m, i)?
        } else if kappa < 0.0 {
            in_fine_position(m, i)?
        } else {
            true
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Spacing rule applied before Eq5 and Eq6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AffineSpacing {
    /// Equal consecutive affine arc lengths within a relative tolerance.
    Affine(f64),
    /// Equal consecutive Euclidean edge lengths within a relative tolerance.
    Euclidean(f64),
}

impl Default for AffineSpacing {
    fn default() -> Self {
        AffineSpacing::Affine(AFFINE_SPACING_TOL)
    }
}

/// Consecutive affine lengths `L(k, k+1)`, each from the conic at `k`.
pub fn consecutive_arc_lengths(m: &Mesh) -> Result<Vec<f64>> {
    m.stencil_indices(-2, 2)
        .into_iter()
        .filter(|&k| m.offset(k, 1).is_some())
        .map(|k| {
            let conic = conic_at(m, k)?;
            arc_length_with(&conic, m.point(k), m.at(k, 1).unwrap()).map(f64::abs)
        })
        .collect()
}

pub fn sa_signature(m: &Mesh, scheme: Scheme) -> Result<Signature> {
    sa_signature_with(m, scheme, AffineSpacing::default())
}

/// SA-signature of a convex ordinary mesh.
pub fn sa_signature_with(m: &Mesh, scheme: Scheme, spacing: AffineSpacing) -> Result<Signature> {
    if scheme.is_euclidean() {
        return Err(Error::SchemeSpacingMismatch {
            scheme,
            reason: "not an affine scheme".into(),
        });
    }
    m.ensure_ordinary()?;
    if !m.is_convex() {
        return Err(Error::NotConvex);
    }
    let (lo, hi) = crate::euclidean::stencil_bounds(scheme, crate::geometry::NeighborhoodSpec::ONE);
    let indices = m.stencil_indices(lo, hi);
    if indices.is_empty() {
        return Err(Error::MeshTooShort {
            needed: (hi - lo + 1) as usize,
            got: m.len(),
        });
    }
    if scheme.needs_equal_spacing() {
        let (lengths, tol) = match spacing {
            AffineSpacing::Affine(tol) => (consecutive_arc_lengths(m)?, tol),
            AffineSpacing::Euclidean(tol) => (m.edge_lengths(), tol),
        };
        let mean = lengths.iter().sum::<f64>() / lengths.len().max(1) as f64;
        let (lo, hi) = lengths
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        if !lengths.is_empty() && hi - lo > tol * mean {
            return Err(Error::SchemeSpacingMismatch {
                scheme,
                reason: format!("consecutive lengths range over [{lo}, {hi}]"),
            });
        }
    }

    let n = m.len();
    let mut conics: Vec<Option<LocalConic>> = vec![None; n];
    let mut conic = |j: usize| -> Result<LocalConic> {
        if let Some(c) = conics[j] {
            return Ok(c);
        }
        let c = conic_at(m, j)?;
        conics[j] = Some(c);
        Ok(c)
    };
    let idx = |i: usize, o: isize| m.offset(i, o).expect("index inside stencil");

    let mut points = Vec::with_capacity(indices.len());
    for i in indices {
        let here = conic(i)?;
        let kappa = here.curvature()?;
        let (num, a, b, weight) = match scheme {
            Scheme::Eq5 => (conic(idx(i, 1))?.curvature()? - kappa, 0, 1, 1.0),
            Scheme::Eq6 => (
                conic(idx(i, 1))?.curvature()? - conic(idx(i, -1))?.curvature()?,
                -1,
                1,
                1.0,
            ),
            Scheme::Eq7 => (conic(idx(i, 1))?.curvature()? - kappa, -2, 3, 5.0),
            Scheme::Eq8 => (
                conic(idx(i, 1))?.curvature()? - conic(idx(i, -1))?.curvature()?,
                -5,
                5,
                5.0,
            ),
            _ => unreachable!(),
        };
        let len = arc_length_with(&here, m.point(idx(i, a)), m.point(idx(i, b)))?;
        if len == 0.0 || !len.is_finite() {
            return Err(Error::DegenerateStencil { index: i });
        }
        points.push(SignaturePoint {
            index: i,
            kappa,
            kappa_s: weight * num / len,
        });
    }
    Ok(Signature {
        points,
        scheme,
        spec: crate::geometry::NeighborhoodSpec::symmetric(2),
        extrapolated: matches!(scheme, Scheme::Eq7 | Scheme::Eq8),
    })
}

/// Unsigned area of the one-neighborhood triangle at `p[i]`.
pub fn one_neighborhood_area(m: &Mesh, i: usize) -> Result<f64> {
    let (a, b, c) = crate::geometry::NeighborhoodSpec::ONE.triple(m, i)?;
    Ok(signed_triangle_area(a, b, c).abs())
}
