//! Two-point Euclidean curvature and the SE-signature schemes Eq1..Eq4.

use crate::error::{Error, Result};
use crate::geometry::{Mesh, NeighborhoodSpec, Point2, COINCIDENT_TOL, SPACING_TOL};
use crate::signature::{Scheme, Signature, SignaturePoint};

/// Curvature `1 / R` of the circle through three points, zero when collinear.
///
/// `4 * area / (a b c)`. The area comes from the cross product at the vertex
/// opposite the longest side rather than from the sides, since rounded side
/// lengths lose the area of needle-shaped triangles.
pub fn triangle_curvature(p: Point2, q: Point2, r: Point2) -> Option<f64> {
    let (a, b, c) = (q.distance(r), r.distance(p), p.distance(q));
    if a.min(b).min(c) == 0.0 {
        return None;
    }
    let cross = if a >= b && a >= c {
        (q - p).cross(r - p)
    } else if b >= c {
        (r - q).cross(p - q)
    } else {
        (p - r).cross(q - r)
    };
    Some(2.0 * cross.abs() / (a * b * c))
}

/// Curvature at `i` over the `(m1, m2)` triple.
pub fn euclidean_curvature(m: &Mesh, i: usize, spec: NeighborhoodSpec) -> Result<f64> {
    let (prev, p, next) = spec.triple(m, i)?;
    let kappa = triangle_curvature(prev, p, next).ok_or(Error::DegenerateTriple { index: i })?;
    let eps = COINCIDENT_TOL * m.diameter();
    if prev.distance(p).min(p.distance(next)).min(prev.distance(next)) <= eps {
        return Err(Error::DegenerateTriple { index: i });
    }
    Ok(kappa)
}

/// `|p[i] - p[j]|`.
pub fn chord(m: &Mesh, i: usize, j: usize) -> Result<f64> {
    let n = m.len();
    for k in [i, j] {
        if k >= n {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: n,
                needed: "valid".into(),
            });
        }
    }
    Ok(m.point(i).distance(m.point(j)))
}

/// Offsets `(lo, hi)` touched by a scheme's stencil at one index.
pub(crate) fn stencil_bounds(scheme: Scheme, spec: NeighborhoodSpec) -> (isize, isize) {
    let (m1, m2) = (spec.m1 as isize, spec.m2 as isize);
    match scheme {
        Scheme::Eq1 => (-m1, 1 + m2),
        Scheme::Eq2 => (-1 - m1, 1 + m2),
        Scheme::Eq3 => ((-m1).min(-1), (1 + m2).max(2)),
        Scheme::Eq4 => ((-1 - m1).min(-3), (1 + m2).max(3)),
        Scheme::Eq5 | Scheme::Eq7 => (-2, 3),
        Scheme::Eq6 => (-3, 3),
        Scheme::Eq8 => (-5, 5),
    }
}

/// SE-signature with the default spacing tolerance.
pub fn se_signature(m: &Mesh, scheme: Scheme, spec: NeighborhoodSpec) -> Result<Signature> {
    se_signature_with(m, scheme, spec, SPACING_TOL)
}

/// SE-signature of `m`. Eq1 and Eq2 demand equal spacing within
/// `spacing_tol`; Eq3 and Eq4 accept any spacing.
pub fn se_signature_with(
    m: &Mesh,
    scheme: Scheme,
    spec: NeighborhoodSpec,
    spacing_tol: f64,
) -> Result<Signature> {
    if !scheme.is_euclidean() {
        return Err(Error::SchemeSpacingMismatch {
            scheme,
            reason: "not a Euclidean scheme".into(),
        });
    }
    m.ensure_ordinary()?;
    if scheme.needs_equal_spacing() && !m.is_equally_spaced(spacing_tol) {
        return Err(Error::SchemeSpacingMismatch {
            scheme,
            reason: "mesh is not equally spaced".into(),
        });
    }
    let (lo, hi) = stencil_bounds(scheme, spec);
    let indices = m.stencil_indices(lo, hi);
    if indices.is_empty() {
        return Err(Error::MeshTooShort {
            needed: (hi - lo + 1) as usize,
            got: m.len(),
        });
    }

    let n = m.len();
    let mut kappa = vec![None; n];
    let mut kappa_at = |j: usize| -> Result<f64> {
        if let Some(k) = kappa[j] {
            return Ok(k);
        }
        let k = euclidean_curvature(m, j, spec)?;
        kappa[j] = Some(k);
        Ok(k)
    };
    let idx = |i: usize, o: isize| m.offset(i, o).expect("index inside stencil");
    let eps = COINCIDENT_TOL * m.diameter();

    let mut points = Vec::with_capacity(indices.len());
    for i in indices {
        let (num, a, b, weight) = match scheme {
            Scheme::Eq1 => (kappa_at(idx(i, 1))? - kappa_at(i)?, 0, 1, 1.0),
            Scheme::Eq2 => (kappa_at(idx(i, 1))? - kappa_at(idx(i, -1))?, -1, 1, 1.0),
            Scheme::Eq3 => (kappa_at(idx(i, 1))? - kappa_at(i)?, -1, 2, 3.0),
            Scheme::Eq4 => (kappa_at(idx(i, 1))? - kappa_at(idx(i, -1))?, -3, 3, 3.0),
            _ => unreachable!(),
        };
        let d = m.point(idx(i, a)).distance(m.point(idx(i, b)));
        if d <= eps {
            return Err(Error::DegenerateStencil { index: i });
        }
        points.push(SignaturePoint {
            index: i,
            kappa: kappa_at(i)?,
            kappa_s: weight * num / d,
        });
    }
    Ok(Signature {
        points,
        scheme,
        spec,
        extrapolated: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::circumcircle;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    fn open(pts: &[(f64, f64)]) -> Mesh {
        Mesh::open(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn unit_circle_curvature() {
        let m = open(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)]);
        assert_relative_eq!(
            euclidean_curvature(&m, 1, NeighborhoodSpec::ONE).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn collinear_is_flat() {
        let m = open(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(euclidean_curvature(&m, 1, NeighborhoodSpec::ONE).unwrap(), 0.0);
    }

    #[test]
    fn right_triangle_matches_circumradius() {
        let m = open(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        let (_, r) = circumcircle(m.point(0), m.point(1), m.point(2)).unwrap();
        let k = euclidean_curvature(&m, 1, NeighborhoodSpec::ONE).unwrap();
        assert_relative_eq!(k, 1.0 / r, max_relative = 1e-12);
        assert_relative_eq!(k, 2f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn endpoint_has_no_neighborhood() {
        let m = open(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        assert!(matches!(
            euclidean_curvature(&m, 0, NeighborhoodSpec::ONE),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn chords() {
        let m = open(&[(0.0, 0.0), (3.0, 4.0), (1.0, 1.0)]);
        assert_eq!(chord(&m, 0, 0).unwrap(), 0.0);
        assert_eq!(chord(&m, 0, 1).unwrap(), 5.0);
        assert!(chord(&m, 0, 3).is_err());
    }

    #[test]
    fn circle_signature_is_flat() {
        let n = 24;
        let m = Mesh::closed(
            (0..n)
                .map(|k| Point2::polar(2.0, TAU * k as f64 / n as f64))
                .collect(),
        )
        .unwrap();
        for scheme in [Scheme::Eq1, Scheme::Eq2, Scheme::Eq3, Scheme::Eq4] {
            let sig = se_signature(&m, scheme, NeighborhoodSpec::ONE).unwrap();
            assert_eq!(sig.len(), n);
            for p in &sig.points {
                assert_relative_eq!(p.kappa, 0.5, max_relative = 1e-12);
                assert!(p.kappa_s.abs() <= 1e-9 * 0.5, "{scheme}: {}", p.kappa_s);
            }
        }
    }

    #[test]
    fn open_ranges_follow_stencils() {
        let m = Mesh::open(
            (0..12)
                .map(|k| Point2::polar(1.0, 0.1 * k as f64 + 0.01 * (k * k) as f64))
                .collect(),
        )
        .unwrap();
        let s3 = se_signature(&m, Scheme::Eq3, NeighborhoodSpec::ONE).unwrap();
        assert_eq!(s3.indices(), (1..=9).collect::<Vec<_>>());
        let s4 = se_signature(&m, Scheme::Eq4, NeighborhoodSpec::ONE).unwrap();
        assert_eq!(s4.indices(), (3..=8).collect::<Vec<_>>());
        let s33 = se_signature(&m, Scheme::Eq4, NeighborhoodSpec::symmetric(3)).unwrap();
        assert_eq!(s33.indices(), (4..=7).collect::<Vec<_>>());
        assert!(matches!(
            se_signature(&m, Scheme::Eq2, NeighborhoodSpec::ONE),
            Err(Error::SchemeSpacingMismatch { .. })
        ));
    }

    #[test]
    fn too_short() {
        let m = open(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 2.0), (-1.0, 2.0)]);
        assert!(matches!(
            se_signature(&m, Scheme::Eq4, NeighborhoodSpec::ONE),
            Err(Error::MeshTooShort { .. })
        ));
    }

    #[test]
    fn non_uniform_quotients() {
        // Eq3 by hand on an open mesh
        let m = open(&[(0.0, 0.0), (1.0, 0.2), (2.0, 0.9), (2.6, 2.0), (2.7, 3.5)]);
        let k = |i| euclidean_curvature(&m, i, NeighborhoodSpec::ONE).unwrap();
        let sig = se_signature(&m, Scheme::Eq3, NeighborhoodSpec::ONE).unwrap();
        let p = sig.get(1).unwrap();
        let want = 3.0 * (k(2) - k(1)) / m.point(0).distance(m.point(3));
        assert_relative_eq!(p.kappa_s, want, max_relative = 1e-14);
    }
}
