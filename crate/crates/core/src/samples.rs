//! Mesh generators: conic samples, polylines from edge and turn sequences,
//! and seeded random meshes for property tests.

use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::error::Result;
use crate::geometry::{Mesh, Point2};

/// Points `center + radius * (cos t, sin t)` for each angle.
pub fn circle(center: Point2, radius: f64, angles: &[f64], closed: bool) -> Result<Mesh> {
    Mesh::new(
        angles
            .iter()
            .map(|&t| center + Point2::polar(radius, t))
            .collect(),
        closed,
    )
}

/// Closed regular `n`-gon inscribed in a circle of `radius` about the origin.
pub fn regular_polygon(n: usize, radius: f64) -> Result<Mesh> {
    let angles: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    circle(Point2::ORIGIN, radius, &angles, true)
}

/// `(a cos t, b sin t)`; equal parameter steps give equal affine arc lengths.
pub fn ellipse(a: f64, b: f64, params: &[f64], closed: bool) -> Result<Mesh> {
    Mesh::new(
        params
            .iter()
            .map(|&t| Point2::new(a * t.cos(), b * t.sin()))
            .collect(),
        closed,
    )
}

/// Right branch `(a cosh t, b sinh t)`.
pub fn hyperbola(a: f64, b: f64, params: &[f64]) -> Result<Mesh> {
    Mesh::open(
        params
            .iter()
            .map(|&t| Point2::new(a * t.cosh(), b * t.sinh()))
            .collect(),
    )
}

/// `(x, c x^2)`.
pub fn parabola(c: f64, xs: &[f64]) -> Result<Mesh> {
    Mesh::open(xs.iter().map(|&x| Point2::new(x, c * x * x)).collect())
}

/// `start, start + step, ...` for `n` values.
pub fn linspace(start: f64, step: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| start + step * k as f64).collect()
}

/// Open polyline from `start` with initial `heading`, edge lengths `edges`
/// and counterclockwise turns at each interior vertex
/// (`turns.len() == edges.len() - 1`).
pub fn from_turns(start: Point2, heading: f64, edges: &[f64], turns: &[f64]) -> Result<Mesh> {
    assert_eq!(turns.len() + 1, edges.len(), "one turn per interior vertex");
    let mut points = Vec::with_capacity(edges.len() + 1);
    let mut p = start;
    let mut h = heading;
    points.push(p);
    for (k, &e) in edges.iter().enumerate() {
        if k > 0 {
            h += turns[k - 1];
        }
        p = p + Point2::polar(e, h);
        points.push(p);
    }
    Mesh::open(points)
}

/// Edge lengths and turns of a polyline, the data [`from_turns`] consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct TurnData {
    pub edges: Vec<f64>,
    pub turns: Vec<f64>,
}

impl TurnData {
    pub fn build(&self, start: Point2, heading: f64) -> Result<Mesh> {
        from_turns(start, heading, &self.edges, &self.turns)
    }
}

fn random_turn<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let t = rng.gen_range(0.2..2.5);
    if rng.gen_bool(0.5) {
        t
    } else {
        -t
    }
}

/// Equally spaced open polyline data with `n` points and turns of magnitude
/// in `[0.2, 2.5)` of random sign.
pub fn random_equally_spaced<R: Rng + ?Sized>(rng: &mut R, n: usize) -> TurnData {
    let d = rng.gen_range(0.5..2.0);
    TurnData {
        edges: vec![d; n - 1],
        turns: (0..n - 2).map(|_| random_turn(rng)).collect(),
    }
}

/// Open polyline data with edges in `[0.3, 2.0)` and random turns.
pub fn random_polyline<R: Rng + ?Sized>(rng: &mut R, n: usize) -> TurnData {
    TurnData {
        edges: (0..n - 1).map(|_| rng.gen_range(0.3..2.0)).collect(),
        turns: (0..n - 2).map(|_| random_turn(rng)).collect(),
    }
}

/// Closed star-shaped polygon: increasing angles, radii in `[1, 3)`.
pub fn random_star<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Mesh> {
    let base = TAU / n as f64;
    let pts = (0..n)
        .map(|k| {
            let t = base * (k as f64 + rng.gen_range(-0.3..0.3));
            Point2::polar(rng.gen_range(1.0..3.0), t)
        })
        .collect();
    Mesh::closed(pts)
}

/// Strictly convex open mesh with random increasing parameters on a random
/// ellipse, a hyperbola branch, or a stretched trefoil-perturbed circle
/// `r = 1 + e cos(3 t)` whose affine curvature is not constant.
pub fn random_convex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Mesh> {
    let a = rng.gen_range(0.5..3.0);
    let b = rng.gen_range(0.5..3.0);
    let mut t = rng.gen_range(-PI..PI);
    let kind = rng.gen_range(0..10);
    if kind < 4 {
        let e = rng.gen_range(0.02..0.1);
        let phase = rng.gen_range(0.0..TAU);
        let mean = rng.gen_range(0.3..0.7) * TAU / n as f64;
        let pts = (0..n)
            .map(|_| {
                let r = 1.0 + e * (3.0 * t + phase).cos();
                let p = Point2::new(a * r * t.cos(), b * r * t.sin());
                t += mean * rng.gen_range(0.6..1.4);
                p
            })
            .collect();
        Mesh::open(pts)
    } else if kind < 8 {
        let mean = rng.gen_range(0.3..0.7) * TAU / n as f64;
        let params: Vec<f64> = (0..n)
            .map(|_| {
                let v = t;
                t += mean * rng.gen_range(0.6..1.4);
                v
            })
            .collect();
        ellipse(a, b, &params, false)
    } else {
        let step = rng.gen_range(0.1..0.3);
        let mut t = -0.5 * step * n as f64 * rng.gen_range(0.5..1.5);
        let params: Vec<f64> = (0..n)
            .map(|_| {
                let v = t;
                t += step * rng.gen_range(0.6..1.4);
                v
            })
            .collect();
        hyperbola(a, b, &params)
    }
}

/// Convex mesh with equal consecutive affine arc lengths: equal parameter
/// steps on a random ellipse (closed or open) or hyperbola branch.
pub fn random_affine_equally_spaced<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Mesh> {
    let a = rng.gen_range(0.5..3.0);
    let b = rng.gen_range(0.5..3.0);
    let phase = rng.gen_range(-PI..PI);
    match rng.gen_range(0..3) {
        0 => {
            let params = linspace(phase, TAU / n as f64, n);
            ellipse(a, b, &params, true)
        }
        1 => {
            let step = rng.gen_range(0.3..0.9) * TAU / n as f64;
            ellipse(a, b, &linspace(phase, step, n), false)
        }
        _ => {
            let step = rng.gen_range(0.1..0.3);
            let start = -step * (n as f64) * rng.gen_range(0.2..0.8);
            hyperbola(a, b, &linspace(start, step, n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn turns_rebuild_square() {
        let m = from_turns(
            Point2::ORIGIN,
            0.0,
            &[1.0, 1.0, 1.0],
            &[PI / 2.0, PI / 2.0],
        )
        .unwrap();
        let last = m.point(3);
        assert_relative_eq!(last.x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(last.y, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn random_generators_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let m = random_equally_spaced(&mut rng, 9)
                .build(Point2::ORIGIN, 0.0)
                .unwrap();
            assert!(m.is_ordinary() && m.is_equally_spaced(1e-9));
            assert!(random_star(&mut rng, 10).unwrap().is_ordinary());
            assert!(random_convex(&mut rng, 12).unwrap().is_convex());
            assert!(random_affine_equally_spaced(&mut rng, 14).unwrap().is_convex());
        }
    }
}
