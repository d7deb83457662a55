//! Planar primitives: points, meshes, group elements, and the orientation and
//! angle predicates every signature and congruence check is built on.
//!
//! Indices are 0-based. Closed meshes wrap neighbor indices modulo `n`; open
//! meshes only expose indices whose requested neighborhood lies inside the
//! mesh.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative collinearity tolerance: a triple is collinear when
/// `|cross| <= COLLINEAR_TOL * diameter^2`.
pub const COLLINEAR_TOL: f64 = 1e-9;

/// Two points closer than `COINCIDENT_TOL * diameter` are treated as equal.
pub const COINCIDENT_TOL: f64 = 1e-9;

/// Absolute tolerance on orthogonality and determinant checks of group elements.
pub const GROUP_TOL: f64 = 1e-12;

/// Default half-width of the right-angle band, in radians.
pub const RIGHT_ANGLE_TOL: f64 = 1e-7;

/// Default relative tolerance for equal edge lengths.
pub const SPACING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(radius: f64, angle: f64) -> Self {
        Self::new(radius * angle.cos(), radius * angle.sin())
    }

    /// z-component of the 2d cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Signed area of the triangle `(a, b, c)`, positive for counterclockwise order.
pub fn signed_triangle_area(a: Point2, b: Point2, c: Point2) -> f64 {
    0.5 * (b - a).cross(c - a)
}

/// An ordered sequence of planar points, open or closed.
///
/// Construction rejects non-finite coordinates, fewer than three points, and
/// repeated successive points. The no-cusp condition is checked by
/// [`Mesh::is_ordinary`] and enforced by the operations that require it.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    points: Vec<Point2>,
    closed: bool,
    label: String,
    diameter: f64,
}

impl Mesh {
    pub fn new(points: Vec<Point2>, closed: bool) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidMesh(format!(
                "at least 3 points required, got {}",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidMesh(format!(
                "non-finite coordinate at index {i}"
            )));
        }
        let diameter = diameter(&points);
        if diameter == 0.0 {
            return Err(Error::InvalidMesh("all points coincide".into()));
        }
        let n = points.len();
        let edges = if closed { n } else { n - 1 };
        for i in 0..edges {
            let j = (i + 1) % n;
            if points[i].distance(points[j]) <= COINCIDENT_TOL * diameter {
                return Err(Error::InvalidMesh(format!(
                    "successive points {i} and {j} coincide"
                )));
            }
        }
        Ok(Self {
            points,
            closed,
            label: String::new(),
            diameter,
        })
    }

    pub fn open(points: Vec<Point2>) -> Result<Self> {
        Self::new(points, false)
    }

    pub fn closed(points: Vec<Point2>) -> Result<Self> {
        Self::new(points, true)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point2 {
        self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Largest pairwise distance between mesh points.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Absolute cross-product threshold below which a triple counts as collinear.
    pub fn collinear_tolerance(&self) -> f64 {
        COLLINEAR_TOL * self.diameter * self.diameter
    }

    /// Index `i + offset`, wrapped for closed meshes, `None` when it falls
    /// outside an open mesh.
    pub fn offset(&self, i: usize, offset: isize) -> Option<usize> {
        let n = self.points.len() as isize;
        let j = i as isize + offset;
        if self.closed {
            Some(j.rem_euclid(n) as usize)
        } else if (0..n).contains(&j) {
            Some(j as usize)
        } else {
            None
        }
    }

    /// Point at `i + offset`, see [`Mesh::offset`].
    pub fn at(&self, i: usize, offset: isize) -> Option<Point2> {
        self.offset(i, offset).map(|j| self.points[j])
    }

    /// Indices whose stencil `i + lo ..= i + hi` exists.
    pub fn stencil_indices(&self, lo: isize, hi: isize) -> Vec<usize> {
        debug_assert!(lo <= 0 && hi >= 0);
        let n = self.points.len();
        if self.closed {
            return (0..n).collect();
        }
        let first = (-lo) as usize;
        let last = n as isize - 1 - hi;
        if last < first as isize {
            return Vec::new();
        }
        (first..=last as usize).collect()
    }

    /// Indices with a full one-neighborhood.
    pub fn interior_indices(&self) -> Vec<usize> {
        self.stencil_indices(-1, 1)
    }

    /// Fails unless the mesh has no cusp.
    pub fn ensure_ordinary(&self) -> Result<()> {
        match self.first_cusp() {
            Some(index) => Err(Error::NotOrdinary { index }),
            None => Ok(()),
        }
    }

    fn first_cusp(&self) -> Option<usize> {
        let eps = COINCIDENT_TOL * self.diameter;
        self.interior_indices().into_iter().find(|&i| {
            let prev = self.at(i, -1).unwrap();
            let next = self.at(i, 1).unwrap();
            prev.distance(next) <= eps
        })
    }

    /// No cusp: `p[i+1] != p[i-1]` at every interior index.
    pub fn is_ordinary(&self) -> bool {
        self.first_cusp().is_none()
    }

    /// All successive edges have the same length within `tol` (relative to the
    /// mean edge length).
    pub fn is_equally_spaced(&self, tol: f64) -> bool {
        let edges = self.edge_lengths();
        let mean = edges.iter().sum::<f64>() / edges.len() as f64;
        let (lo, hi) = edges
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &d| (lo.min(d), hi.max(d)));
        hi - lo <= tol * mean
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        let n = self.len();
        let edges = if self.closed { n } else { n - 1 };
        (0..edges)
            .map(|i| self.points[i].distance(self.points[(i + 1) % n]))
            .collect()
    }

    /// No three mesh points are collinear. Checks every triple, so the cost is
    /// cubic in the point count.
    pub fn is_convex(&self) -> bool {
        let tol = self.collinear_tolerance();
        let p = &self.points;
        let n = p.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let u = p[j] - p[i];
                for k in (j + 1)..n {
                    if u.cross(p[k] - p[i]).abs() <= tol {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every interior angle is obtuse (the checkable part of fineness).
    pub fn is_fine(&self, right_angle_tol: f64) -> bool {
        self.interior_indices().into_iter().all(|i| {
            matches!(
                angle(self, i, NeighborhoodSpec::ONE)
                    .and_then(|theta| angle_type(theta, right_angle_tol)),
                Ok(AngleType::Obtuse)
            )
        })
    }

    pub fn reversed(&self) -> Mesh {
        let mut points = self.points.clone();
        points.reverse();
        Mesh {
            points,
            closed: self.closed,
            label: self.label.clone(),
            diameter: self.diameter,
        }
    }

    /// Re-indexes a closed mesh so that index 0 becomes old index `shift`.
    pub fn rotated(&self, shift: usize) -> Mesh {
        let mut points = self.points.clone();
        points.rotate_left(shift % self.len());
        Mesh {
            points,
            closed: self.closed,
            label: self.label.clone(),
            diameter: self.diameter,
        }
    }
}

fn diameter(points: &[Point2]) -> f64 {
    let hull = if points.len() > 64 {
        convex_hull(points)
    } else {
        points.to_vec()
    };
    let mut best = 0.0f64;
    for (i, a) in hull.iter().enumerate() {
        for b in &hull[i + 1..] {
            best = best.max(a.distance(*b));
        }
    }
    best
}

/// Andrew's monotone chain; keeps collinear boundary points out.
fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// The four planar transformation groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    /// Rotations and translations.
    SE,
    /// Rotations, reflections and translations.
    E,
    /// Unimodular linear maps and translations.
    SA,
    /// Linear maps with determinant +-1 and translations.
    Abar,
}

impl Group {
    pub fn is_euclidean(self) -> bool {
        matches!(self, Group::SE | Group::E)
    }

    pub fn allows_reflection(self) -> bool {
        matches!(self, Group::E | Group::Abar)
    }

    fn check(self, m: &[[f64; 2]; 2]) -> std::result::Result<(), String> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !m.iter().flatten().all(|v| v.is_finite()) {
            return Err("non-finite entry".into());
        }
        if self.is_euclidean() {
            // M^T M = I
            let a = m[0][0] * m[0][0] + m[1][0] * m[1][0] - 1.0;
            let b = m[0][1] * m[0][1] + m[1][1] * m[1][1] - 1.0;
            let c = m[0][0] * m[0][1] + m[1][0] * m[1][1];
            if a.abs().max(b.abs()).max(c.abs()) > GROUP_TOL {
                return Err("matrix is not orthogonal".into());
            }
        }
        let ok = if self.allows_reflection() {
            (det.abs() - 1.0).abs() <= GROUP_TOL
        } else {
            (det - 1.0).abs() <= GROUP_TOL
        };
        if ok {
            Ok(())
        } else {
            Err(format!("determinant {det} not allowed"))
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Group::SE => "SE(2)",
            Group::E => "E(2)",
            Group::SA => "SA(2)",
            Group::Abar => "Abar(2)",
        };
        f.write_str(s)
    }
}

/// `p -> linear * p + translation`, tagged with the group it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    /// Row-major 2x2 matrix.
    pub linear: [[f64; 2]; 2],
    pub translation: [f64; 2],
    pub group: Group,
}

impl GroupElement {
    pub fn new(linear: [[f64; 2]; 2], translation: [f64; 2], group: Group) -> Result<Self> {
        let g = Self {
            linear,
            translation,
            group,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn identity(group: Group) -> Self {
        Self {
            linear: [[1.0, 0.0], [0.0, 1.0]],
            translation: [0.0, 0.0],
            group,
        }
    }

    pub fn rotation(angle: f64, translation: [f64; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            linear: [[c, -s], [s, c]],
            translation,
            group: Group::SE,
        }
    }

    /// `rotation(angle) * diag(1, -1)`: reflection across the line through the
    /// origin at `angle / 2`, then translation.
    pub fn reflection(angle: f64, translation: [f64; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            linear: [[c, s], [s, -c]],
            translation,
            group: Group::E,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.group
            .check(&self.linear)
            .map_err(|reason| Error::InvalidGroupElement {
                group: self.group,
                reason,
            })
    }

    pub fn det(&self) -> f64 {
        self.linear[0][0] * self.linear[1][1] - self.linear[0][1] * self.linear[1][0]
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        let m = &self.linear;
        Point2::new(
            m[0][0] * p.x + m[0][1] * p.y + self.translation[0],
            m[1][0] * p.x + m[1][1] * p.y + self.translation[1],
        )
    }

    pub fn inverse(&self) -> Self {
        let m = &self.linear;
        let det = self.det();
        let inv = [
            [m[1][1] / det, -m[0][1] / det],
            [-m[1][0] / det, m[0][0] / det],
        ];
        let t = self.translation;
        Self {
            linear: inv,
            translation: [
                -(inv[0][0] * t[0] + inv[0][1] * t[1]),
                -(inv[1][0] * t[0] + inv[1][1] * t[1]),
            ],
            group: self.group,
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GroupElement) -> Self {
        let a = &self.linear;
        let b = &other.linear;
        let mut linear = [[0.0; 2]; 2];
        for (r, row) in linear.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        let t = self.apply(Point2::new(other.translation[0], other.translation[1]));
        Self {
            linear,
            translation: [t.x, t.y],
            group: self.group,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.linear;
        write!(
            f,
            "{} [[{:.12}, {:.12}], [{:.12}, {:.12}]] + ({:.12}, {:.12})",
            self.group, m[0][0], m[0][1], m[1][0], m[1][1], self.translation[0], self.translation[1]
        )
    }
}

/// Pointwise image `g . m`, keeping order, closed flag and label.
pub fn apply_motion(g: &GroupElement, m: &Mesh) -> Result<Mesh> {
    g.validate()?;
    let points = m.points.iter().map(|&p| g.apply(p)).collect();
    Ok(Mesh::new(points, m.closed)?.with_label(m.label.clone()))
}

/// Random element of `group`, deterministic per seed.
pub fn random_motion(group: Group, seed: u64) -> GroupElement {
    random_motion_with(group, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random element drawn from `rng`: uniform rotation angle, fair reflection
/// bit, unimodular part `R(a) diag(s, 1/s) R(b)` with `s` in `[1, 10]`
/// (condition number at most 100), translation in `[-10, 10]^2`.
pub fn random_motion_with<R: Rng + ?Sized>(group: Group, rng: &mut R) -> GroupElement {
    let translation = [rng.gen_range(-10.0..=10.0), rng.gen_range(-10.0..=10.0)];
    let rot = |a: f64| {
        let (s, c) = a.sin_cos();
        [[c, -s], [s, c]]
    };
    let mul = |a: [[f64; 2]; 2], b: [[f64; 2]; 2]| {
        let mut out = [[0.0; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    };
    let flip = |m: [[f64; 2]; 2]| [[m[0][0], -m[0][1]], [m[1][0], -m[1][1]]];
    let angle = rng.gen_range(0.0..TAU);
    let linear = match group {
        Group::SE => rot(angle),
        Group::E => {
            if rng.gen_bool(0.5) {
                flip(rot(angle))
            } else {
                rot(angle)
            }
        }
        Group::SA | Group::Abar => {
            let s: f64 = rng.gen_range(1.0..=10.0);
            let beta = rng.gen_range(0.0..TAU);
            let m = mul(mul(rot(angle), [[s, 0.0], [0.0, 1.0 / s]]), rot(beta));
            if group == Group::Abar && rng.gen_bool(0.5) {
                flip(m)
            } else {
                m
            }
        }
    };
    GroupElement {
        linear,
        translation,
        group,
    }
}

/// `(m1, m2)`-neighborhood: the triple `p[i-m1], p[i], p[i+m2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NeighborhoodSpec {
    pub m1: usize,
    pub m2: usize,
}

impl NeighborhoodSpec {
    pub const ONE: NeighborhoodSpec = NeighborhoodSpec { m1: 1, m2: 1 };

    pub fn new(m1: usize, m2: usize) -> Result<Self> {
        if m1 == 0 || m2 == 0 {
            return Err(Error::InvalidMesh(format!(
                "neighborhood offsets must be positive, got ({m1}, {m2})"
            )));
        }
        Ok(Self { m1, m2 })
    }

    pub const fn symmetric(m: usize) -> Self {
        Self { m1: m, m2: m }
    }

    /// The triple `(p[i-m1], p[i], p[i+m2])` of `mesh`.
    pub fn triple(&self, mesh: &Mesh, i: usize) -> Result<(Point2, Point2, Point2)> {
        match (
            mesh.at(i, -(self.m1 as isize)),
            mesh.at(i, self.m2 as isize),
        ) {
            (Some(prev), Some(next)) if i < mesh.len() => Ok((prev, mesh.point(i), next)),
            _ => Err(Error::IndexOutOfRange {
                index: i,
                len: mesh.len(),
                needed: format!("({}, {})", self.m1, self.m2),
            }),
        }
    }
}

impl fmt::Display for NeighborhoodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m1, self.m2)
    }
}

/// Orientation of the neighborhood at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// Counterclockwise on the circumcircle.
    SD,
    NotSD,
    /// Collinear triple: no circumcircle.
    Undefined,
}

fn sign_with_tol(v: f64, tol: f64) -> i8 {
    if v.abs() <= tol {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// `sgn((p[i+m2] - p[i]) x (p[i-m1] - p[i]))`, zero within the collinearity tolerance.
pub fn signature_sign_spec(m: &Mesh, i: usize, spec: NeighborhoodSpec) -> Result<i8> {
    let (prev, p, next) = spec.triple(m, i)?;
    Ok(sign_with_tol(
        (next - p).cross(prev - p),
        m.collinear_tolerance(),
    ))
}

/// Signature-sign over the one-neighborhood of `i`.
pub fn signature_sign(m: &Mesh, i: usize) -> Result<i8> {
    signature_sign_spec(m, i, NeighborhoodSpec::ONE)
}

pub fn signature_direction(m: &Mesh, i: usize) -> Result<Direction> {
    Ok(match signature_sign(m, i)? {
        1 => Direction::SD,
        -1 => Direction::NotSD,
        _ => Direction::Undefined,
    })
}

/// Unsigned angle at `p[i]` between the arms to `p[i-m1]` and `p[i+m2]`.
pub fn angle(m: &Mesh, i: usize, spec: NeighborhoodSpec) -> Result<f64> {
    let (prev, p, next) = spec.triple(m, i)?;
    let u = prev - p;
    let v = next - p;
    let eps = COINCIDENT_TOL * m.diameter();
    if u.norm() <= eps || v.norm() <= eps {
        return Err(Error::DegenerateArm { index: i });
    }
    Ok(u.cross(v).abs().atan2(u.dot(v)))
}

/// Signature-sign times angle, both over the same `(m1, m2)` triple.
pub fn signed_angle(m: &Mesh, i: usize, spec: NeighborhoodSpec) -> Result<f64> {
    let theta = angle(m, i, spec)?;
    Ok(f64::from(signature_sign_spec(m, i, spec)?) * theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AngleType {
    Acute,
    Right,
    Obtuse,
}

pub fn angle_type(theta: f64, tol: f64) -> Result<AngleType> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::OutOfDomain(theta));
    }
    Ok(if (theta - FRAC_PI_2).abs() <= tol {
        AngleType::Right
    } else if theta < FRAC_PI_2 - tol {
        AngleType::Acute
    } else {
        AngleType::Obtuse
    })
}

/// Angle type of `|signed angle|` with the sign kept alongside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedAngleType {
    pub kind: AngleType,
    pub positive: bool,
}

pub fn signed_angle_type(vartheta: f64, tol: f64) -> Result<SignedAngleType> {
    Ok(SignedAngleType {
        kind: angle_type(vartheta.abs(), tol)?,
        positive: vartheta > 0.0,
    })
}

/// Circle through three non-collinear points, via the intersection of two
/// perpendicular bisectors.
pub fn circumcircle(p: Point2, q: Point2, r: Point2) -> Result<(Point2, f64)> {
    let b = q - p;
    let c = r - p;
    let scale = b.dot(b).max(c.dot(c)).max((r - q).dot(r - q));
    let d = 2.0 * b.cross(c);
    if d.abs() <= 2.0 * COLLINEAR_TOL * scale {
        return Err(Error::CollinearPoints);
    }
    let bb = b.dot(b);
    let cc = c.dot(c);
    let ux = (c.y * bb - b.y * cc) / d;
    let uy = (b.x * cc - c.x * bb) / d;
    let offset = Point2::new(ux, uy);
    Ok((p + offset, offset.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn open(pts: &[(f64, f64)]) -> Mesh {
        Mesh::open(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    fn regular_polygon(n: usize) -> Mesh {
        Mesh::closed(
            (0..n)
                .map(|k| Point2::polar(1.0, TAU * k as f64 / n as f64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_meshes() {
        assert!(Mesh::open(vec![Point2::ORIGIN, Point2::new(1.0, 0.0)]).is_err());
        assert!(Mesh::open(vec![
            Point2::ORIGIN,
            Point2::new(f64::NAN, 0.0),
            Point2::new(1.0, 1.0)
        ])
        .is_err());
        assert!(Mesh::open(vec![
            Point2::ORIGIN,
            Point2::ORIGIN,
            Point2::new(1.0, 1.0)
        ])
        .is_err());
    }

    #[test]
    fn identity_and_quarter_turn() {
        let m = open(&[(1.0, 0.0), (2.0, 0.5), (0.0, 3.0)]);
        let id = GroupElement::identity(Group::SE);
        assert_eq!(apply_motion(&id, &m).unwrap(), m);
        let q = GroupElement::rotation(FRAC_PI_2, [0.0, 0.0]);
        let img = q.apply(Point2::new(1.0, 0.0));
        assert_relative_eq!(img.x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(img.y, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn invalid_group_element() {
        let shear = GroupElement {
            linear: [[1.0, 0.5], [0.0, 1.0]],
            translation: [0.0, 0.0],
            group: Group::SE,
        };
        let m = open(&[(1.0, 0.0), (2.0, 0.5), (0.0, 3.0)]);
        assert!(matches!(
            apply_motion(&shear, &m),
            Err(Error::InvalidGroupElement { .. })
        ));
        assert!(GroupElement::new(shear.linear, [0.0, 0.0], Group::SA).is_ok());
        assert!(GroupElement::new([[2.0, 0.0], [0.0, 1.0]], [0.0, 0.0], Group::Abar).is_err());
    }

    #[test]
    fn mirror_of_triangle_flips_class() {
        let m = open(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)]);
        let mirror = GroupElement::reflection(0.0, [0.0, 0.0]);
        let img = apply_motion(&mirror, &m).unwrap();
        assert_eq!(signature_sign(&m, 1).unwrap(), 1);
        assert_eq!(signature_sign(&img, 1).unwrap(), -1);
    }

    #[test]
    fn random_motion_is_deterministic() {
        assert_eq!(random_motion(Group::SE, 0), random_motion(Group::SE, 0));
        for seed in 0..50 {
            let g = random_motion(Group::SA, seed);
            assert!((g.det() - 1.0).abs() <= 1e-12);
            g.validate().unwrap();
        }
        let signs: Vec<bool> = (0..1000)
            .map(|s| random_motion(Group::E, s).det() > 0.0)
            .collect();
        assert!(signs.iter().any(|&b| b) && signs.iter().any(|&b| !b));
    }

    #[test]
    fn signature_sign_examples() {
        assert_eq!(
            signature_sign(&open(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]), 1).unwrap(),
            0
        );
        assert_eq!(
            signature_sign(&open(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)]), 1).unwrap(),
            1
        );
        assert_eq!(
            signature_sign(&open(&[(1.0, 0.0), (0.0, -1.0), (-1.0, 0.0)]), 1).unwrap(),
            -1
        );
        assert!(matches!(
            signature_sign(&open(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)]), 0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn directions() {
        let ccw = open(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)]);
        assert_eq!(signature_direction(&ccw, 1).unwrap(), Direction::SD);
        assert_eq!(signature_direction(&ccw.reversed(), 1).unwrap(), Direction::NotSD);
        let line = open(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(signature_direction(&line, 1).unwrap(), Direction::Undefined);
    }

    #[test]
    fn angles() {
        let right = open(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        assert_relative_eq!(angle(&right, 1, NeighborhoodSpec::ONE).unwrap(), FRAC_PI_2);
        let straight = open(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_relative_eq!(angle(&straight, 1, NeighborhoodSpec::ONE).unwrap(), PI);
        let h = 3f64.sqrt() / 2.0;
        let tri = open(&[(0.0, 0.0), (0.5, h), (1.0, 0.0)]);
        assert_relative_eq!(
            angle(&tri, 1, NeighborhoodSpec::ONE).unwrap(),
            PI / 3.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn signed_angles() {
        let straight = open(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(signed_angle(&straight, 1, NeighborhoodSpec::ONE).unwrap(), 0.0);
        // (0,0) -> (1,0) -> (1,1) turns left: cross((0,1),(-1,0)) = +1
        let ccw = open(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        assert_relative_eq!(
            signed_angle(&ccw, 1, NeighborhoodSpec::ONE).unwrap(),
            FRAC_PI_2
        );
        let cw = open(&[(0.0, 0.0), (1.0, 0.0), (1.0, -1.0)]);
        assert_relative_eq!(
            signed_angle(&cw, 1, NeighborhoodSpec::ONE).unwrap(),
            -FRAC_PI_2
        );
    }

    #[test]
    fn angle_types() {
        assert_eq!(angle_type(FRAC_PI_2, 1e-7).unwrap(), AngleType::Right);
        assert_eq!(angle_type(PI / 3.0, 1e-7).unwrap(), AngleType::Acute);
        assert_eq!(angle_type(2.0, 1e-7).unwrap(), AngleType::Obtuse);
        assert!(angle_type(0.0, 1e-7).is_err());
        assert!(angle_type(PI, 1e-7).is_err());
        let t = signed_angle_type(-2.0, 1e-7).unwrap();
        assert_eq!(t.kind, AngleType::Obtuse);
        assert!(!t.positive);
    }

    #[test]
    fn mesh_predicates() {
        let poly = regular_polygon(8);
        assert!(poly.is_equally_spaced(1e-9));
        assert!(poly.is_convex());
        assert!(poly.is_fine(RIGHT_ANGLE_TOL));
        assert!(poly.is_ordinary());

        assert!(!open(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]).is_ordinary());
        assert!(!open(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 1.0)]).is_convex());
        // square: right angles are not fine
        assert!(!regular_polygon(4).is_fine(RIGHT_ANGLE_TOL));
    }

    #[test]
    fn circumcircles() {
        let (c, r) = circumcircle(
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(-1.0, 0.0),
        )
        .unwrap();
        assert_relative_eq!(c.x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(c.y, 0.0, epsilon = 1e-15);
        assert_relative_eq!(r, 1.0);
        let (c, r) = circumcircle(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
        )
        .unwrap();
        assert_relative_eq!(c.x, 0.5);
        assert_relative_eq!(c.y, 0.5);
        assert_relative_eq!(r, 2f64.sqrt() / 2.0);
        assert_eq!(
            circumcircle(
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(2.0, 2.0)
            ),
            Err(Error::CollinearPoints)
        );
    }

    #[test]
    fn hull_diameter_matches_brute_force() {
        let pts: Vec<Point2> = (0..200)
            .map(|k| {
                let t = k as f64 * 0.37;
                Point2::new(3.0 * t.cos() + 0.1 * t, t.sin() * (1.0 + 0.01 * t))
            })
            .collect();
        let brute = pts
            .iter()
            .flat_map(|a| pts.iter().map(move |b| a.distance(*b)))
            .fold(0.0, f64::max);
        assert_relative_eq!(diameter(&pts), brute);
    }

    #[test]
    fn wraps_closed_indices() {
        let poly = regular_polygon(5);
        assert_eq!(poly.offset(0, -1), Some(4));
        assert_eq!(poly.offset(4, 3), Some(2));
        let m = open(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 2.0)]);
        assert_eq!(m.offset(0, -1), None);
        assert_eq!(m.stencil_indices(-1, 2), vec![1]);
        assert!(m.stencil_indices(-3, 3).is_empty());
    }

    #[test]
    fn composition_and_inverse() {
        let g = random_motion(Group::SA, 3);
        let h = random_motion(Group::SA, 4);
        let p = Point2::new(0.3, -1.2);
        let gh = g.compose(&h);
        let direct = g.apply(h.apply(p));
        assert_relative_eq!(gh.apply(p).x, direct.x, epsilon = 1e-12);
        assert_relative_eq!(gh.apply(p).y, direct.y, epsilon = 1e-12);
        let back = g.inverse().apply(g.apply(p));
        assert_relative_eq!(back.x, p.x, epsilon = 1e-12);
        assert_relative_eq!(back.y, p.y, epsilon = 1e-12);
    }
}
