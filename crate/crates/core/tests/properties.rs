use meshsig_core::samples;
use meshsig_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point() -> impl Strategy<Value = Point2> {
    (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

fn group() -> impl Strategy<Value = Group> {
    prop_oneof![
        Just(Group::SE),
        Just(Group::E),
        Just(Group::SA),
        Just(Group::Abar)
    ]
}

/// Polyline built from a seed so shrinking stays on valid meshes.
fn polyline() -> impl Strategy<Value = Mesh> {
    (any::<u64>(), 3usize..14).prop_map(|(seed, n)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        samples::random_polyline(&mut rng, n)
            .build(Point2::ORIGIN, 0.0)
            .unwrap()
    })
}

proptest! {
    #[test]
    fn motion_round_trip(m in polyline(), g in group(), seed in any::<u64>()) {
        let g = random_motion(g, seed);
        let back = apply_motion(&g.inverse(), &apply_motion(&g, &m).unwrap()).unwrap();
        let scale = m.diameter();
        for (p, q) in m.points().iter().zip(back.points()) {
            prop_assert!(p.distance(*q) <= 1e-9 * scale);
        }
    }

    #[test]
    fn composition_matches_sequential_application(
        p in point(), g in group(), s1 in any::<u64>(), s2 in any::<u64>()
    ) {
        let (a, b) = (random_motion(g, s1), random_motion(g, s2));
        let lhs = a.compose(&b).apply(p);
        let rhs = a.apply(b.apply(p));
        prop_assert!(lhs.distance(rhs) <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn curvature_is_euclidean_invariant(m in polyline(), seed in any::<u64>()) {
        let g = random_motion(Group::E, seed);
        let img = apply_motion(&g, &m).unwrap();
        for i in m.interior_indices() {
            let (a, b) = (
                euclidean_curvature(&m, i, NeighborhoodSpec::ONE).unwrap(),
                euclidean_curvature(&img, i, NeighborhoodSpec::ONE).unwrap(),
            );
            prop_assert!((a - b).abs() <= 1e-9 * a.max(b));
        }
    }

    #[test]
    fn curvature_scales_inversely(m in polyline(), s in 0.1..10.0f64) {
        let scaled = Mesh::open(m.points().iter().map(|&p| p * s).collect()).unwrap();
        for i in m.interior_indices() {
            let a = euclidean_curvature(&m, i, NeighborhoodSpec::ONE).unwrap();
            let b = euclidean_curvature(&scaled, i, NeighborhoodSpec::ONE).unwrap();
            prop_assert!((a / s - b).abs() <= 1e-9 * b);
        }
    }

    #[test]
    fn angles_and_spacing_are_euclidean_invariant(m in polyline(), seed in any::<u64>()) {
        let img = apply_motion(&random_motion(Group::E, seed), &m).unwrap();
        for i in m.interior_indices() {
            let a = angle(&m, i, NeighborhoodSpec::ONE).unwrap();
            let b = angle(&img, i, NeighborhoodSpec::ONE).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
        }
        prop_assert_eq!(m.is_equally_spaced(1e-9), img.is_equally_spaced(1e-9));
    }

    #[test]
    fn circumcenter_is_equidistant(a in point(), b in point(), c in point()) {
        if let Ok((o, r)) = circumcircle(a, b, c) {
            for p in [a, b, c] {
                prop_assert!((o.distance(p) - r).abs() <= 1e-9 * r);
            }
        }
    }

    #[test]
    fn sa_motions_are_unimodular(seed in any::<u64>()) {
        prop_assert!((random_motion(Group::SA, seed).det() - 1.0).abs() <= 1e-12);
        prop_assert!((random_motion(Group::Abar, seed).det().abs() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn traversal_completeness(n in 3usize..400, m in 1usize..400) {
        prop_assume!(m < n);
        let t = traverse(n, m).unwrap();
        let mut seen = t.order.clone();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(t.complete, seen.len() == n);
        prop_assert_eq!(t.steps(), n / gcd(n, m));
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn motions_are_deterministic_and_cover_both_orientations() {
    assert_eq!(random_motion(Group::SE, 0), random_motion(Group::SE, 0));
    let dets: Vec<f64> = (0..1000).map(|s| random_motion(Group::E, s).det()).collect();
    assert!(dets.iter().any(|&d| d > 0.0) && dets.iter().any(|&d| d < 0.0));
}

#[test]
fn audit_suites_are_clean() {
    let report = audit::run(7, 200);
    for s in &report.suites {
        assert_eq!(s.failed, 0, "{s}");
    }
}
