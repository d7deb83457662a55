use std::f64::consts::{FRAC_PI_2, TAU};

use meshsig_core::samples::{self, TurnData};
use meshsig_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn opts() -> DecideOptions {
    DecideOptions::default()
}

fn mirror(m: &Mesh) -> Mesh {
    apply_motion(&GroupElement::reflection(0.3, [1.0, -2.0]), m).unwrap()
}

fn moved(m: &Mesh, seed: u64) -> Mesh {
    apply_motion(&random_motion(Group::SE, seed), m).unwrap()
}

fn not_met(v: &Verdict) -> bool {
    matches!(v, Verdict::HypothesesNotMet(_))
}

fn equally_spaced(seed: u64, n: usize) -> Mesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    samples::random_equally_spaced(&mut rng, n)
        .build(Point2::ORIGIN, 0.0)
        .unwrap()
}

fn polyline(seed: u64, n: usize) -> TurnData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    samples::random_polyline(&mut rng, n)
}

#[test]
fn eq1_image_is_congruent_and_mirror_is_not() {
    let m = equally_spaced(1, 9);
    let v = decide_eq1(&m, &moved(&m, 3), &opts()).unwrap();
    assert!(v.is_congruent(), "{v}");
    let v = decide_eq1(&m, &mirror(&m), &opts()).unwrap();
    assert!(not_met(&v), "{v}");
}

#[test]
fn eq2_angle_type_image_is_congruent() {
    let m = equally_spaced(2, 10);
    let v = decide_eq2_angle_type(&m, &moved(&m, 4), &opts()).unwrap();
    assert!(v.is_congruent(), "{v}");
}

#[test]
fn eq2_equal_signatures_mixed_angle_types() {
    // unit-circle arcs with central steps 0.5 (obtuse vertices) and 2.0
    // (acute vertices): both signatures are (1, 0) everywhere
    let a = samples::circle(Point2::ORIGIN, 1.0, &samples::linspace(0.0, 0.5, 6), false).unwrap();
    let b = samples::circle(Point2::ORIGIN, 1.0, &samples::linspace(0.0, 2.0, 6), false).unwrap();
    let s = |m: &Mesh| se_signature(m, Scheme::Eq2, NeighborhoodSpec::ONE).unwrap();
    assert!(s(&a).max_relative_error(&s(&b)).unwrap() < 1e-9);
    assert_eq!(angle_type(angle(&a, 2, NeighborhoodSpec::ONE).unwrap(), 1e-7).unwrap(), AngleType::Obtuse);
    assert_eq!(angle_type(angle(&b, 2, NeighborhoodSpec::ONE).unwrap(), 1e-7).unwrap(), AngleType::Acute);

    let v = decide_eq2_angle_type(&a, &b, &opts()).unwrap();
    assert!(not_met(&v), "{v}");
    let loose = DecideOptions {
        signature_only: true,
        ..opts()
    };
    let v = decide_eq2_angle_type(&a, &b, &loose).unwrap();
    assert!(v.is_oracle_disagreement(), "{v}");
}

#[test]
fn eq2_fine_meshes() {
    // a regular polygon arc has obtuse vertex angles: fine
    let angles = samples::linspace(0.2, 0.4, 8);
    let a = samples::circle(Point2::new(1.0, 2.0), 3.0, &angles, false).unwrap();
    assert!(a.is_fine(1e-7));
    let fine = DecideOptions { fine: true, ..opts() };
    let v = decide_eq2_angle_type(&a, &moved(&a, 9), &fine).unwrap();
    assert!(v.is_congruent(), "{v}");
}

#[test]
fn eq2_signed() {
    let m = equally_spaced(5, 9);
    let v = decide_eq2_signed(&m, &moved(&m, 6), &opts()).unwrap();
    assert!(v.is_congruent(), "{v}");
    let v = decide_eq2_signed(&m, &mirror(&m), &opts()).unwrap();
    assert!(not_met(&v), "{v}");
}

#[test]
fn eq2_curvatures_and_signed_angles_agree_with_oracle() {
    let curvature_only = DecideOptions {
        curvature_only: true,
        ..opts()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let n = rng.gen_range(4..10);
        let data = samples::random_equally_spaced(&mut rng, n);
        let a = data.build(Point2::ORIGIN, 0.0).unwrap();
        let b = data
            .build(Point2::new(rng.gen_range(-3.0..3.0), 1.0), rng.gen_range(0.0..TAU))
            .unwrap();
        let v = decide_eq2_signed(&a, &b, &curvature_only).unwrap();
        let o = align(&a, &b, Group::SE, MatchMode::IndexAligned, 1e-6).unwrap();
        assert!(v.is_congruent() && o.is_congruent(), "{v}");
    }
}

#[test]
fn eq3_image_is_congruent() {
    let data = polyline(7, 11);
    let a = data.build(Point2::ORIGIN, 0.0).unwrap();
    let b = data.build(Point2::new(4.0, -1.0), 2.0).unwrap();
    let v = decide_eq3(&a, &b, &opts()).unwrap();
    assert!(v.is_congruent(), "{v}");
}

#[test]
fn eq3_equal_signatures_different_chords() {
    // same circle, different unequal spacings: signatures are (1, 0)
    let a = samples::circle(Point2::ORIGIN, 1.0, &[0.0, 0.3, 0.5, 0.9, 1.2, 1.4, 1.9], false).unwrap();
    let b = samples::circle(Point2::ORIGIN, 1.0, &[0.0, 0.2, 0.6, 0.8, 1.3, 1.5, 1.7], false).unwrap();
    let s12 = NeighborhoodSpec::new(1, 2).unwrap();
    let s = |m: &Mesh| se_signature(m, Scheme::Eq3, s12).unwrap();
    assert!(s(&a).max_relative_error(&s(&b)).unwrap() < 1e-9);
    let v = decide_eq3(&a, &b, &opts()).unwrap();
    assert!(not_met(&v), "{v}");
}

#[test]
fn eq3_open_meshes_differing_in_the_last_point() {
    let data = polyline(8, 10);
    let a = data.build(Point2::ORIGIN, 0.0).unwrap();
    let mut pts = a.points().to_vec();
    let n = pts.len();
    let (p, q) = (pts[n - 2], pts[n - 1]);
    pts[n - 1] = p + (q - p) * 1.5;
    let b = Mesh::open(pts).unwrap();
    assert!(
        (a.point(n - 4).distance(a.point(n - 1)) - b.point(n - 4).distance(b.point(n - 1))).abs()
            > 1e-3
    );
    let v = decide_eq3(&a, &b, &opts()).unwrap();
    assert!(not_met(&v), "{v}");
    assert!(!align(&a, &b, Group::SE, MatchMode::IndexAligned, 1e-6)
        .unwrap()
        .is_congruent());
}

#[test]
fn eq4_needs_an_endpoint_condition_on_open_meshes() {
    let data = polyline(9, 12);
    let a = data.build(Point2::ORIGIN, 0.0).unwrap();
    let b = data.build(Point2::new(-2.0, 5.0), 1.0).unwrap();
    let v = decide_eq4(&a, &b, &opts()).unwrap();
    assert!(not_met(&v), "{v}");
    let equal_ends = DecideOptions {
        endpoint: Some(EndpointCondition::EqualEndAngles),
        ..opts()
    };
    let v = decide_eq4(&a, &b, &equal_ends).unwrap();
    assert!(v.is_congruent(), "{v}");
}

#[test]
fn eq4_acute_end_violates_obtuse_condition() {
    let s33 = NeighborhoodSpec::symmetric(3);
    let obtuse = DecideOptions {
        endpoint: Some(EndpointCondition::ObtuseAt4),
        ..opts()
    };
    let mut seen = (false, false);
    for seed in 0..200 {
        let data = polyline(seed, 10);
        let a = data.build(Point2::ORIGIN, 0.0).unwrap();
        let b = data.build(Point2::new(1.0, 1.0), -0.7).unwrap();
        let end = signed_angle(&a, 3, s33).unwrap().abs();
        let v = decide_eq4(&a, &b, &obtuse).unwrap();
        if end < FRAC_PI_2 - 0.01 {
            assert!(not_met(&v), "{v}");
            seen.0 = true;
        } else if end > FRAC_PI_2 + 0.01 {
            assert!(v.is_congruent(), "{v}");
            seen.1 = true;
        }
    }
    assert!(seen.0 && seen.1);
}

#[test]
fn eq4_too_short() {
    let data = polyline(10, 7);
    let a = data.build(Point2::ORIGIN, 0.0).unwrap();
    assert!(matches!(
        decide_eq4(&a, &a, &opts()),
        Err(Error::MeshTooShort { .. })
    ));
}

#[test]
fn closed_meshes_through_step_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ten = samples::random_star(&mut rng, 10).unwrap();
    let v = decide_host(&ten, &moved(&ten, 2), &opts()).unwrap();
    assert!(v.is_congruent(), "{v}");

    for n in [9, 12] {
        let m = samples::random_star(&mut rng, n).unwrap();
        let v = decide_host(&m, &moved(&m, 5), &opts()).unwrap();
        assert!(not_met(&v), "{v}");
    }

    let open = samples::random_polyline(&mut rng, 10)
        .build(Point2::ORIGIN, 0.0)
        .unwrap();
    assert!(matches!(decide_host(&open, &open, &opts()), Err(Error::NotClosed)));
}

#[test]
fn twelve_point_splice_is_rejected() {
    // residue classes mod 3 moved by three different rotations about the
    // origin: every class keeps its own distances and curvatures
    let base = samples::regular_polygon(12, 2.0).unwrap();
    let pts: Vec<Point2> = base
        .points()
        .iter()
        .enumerate()
        .map(|(i, &p)| GroupElement::rotation(0.1 * (i % 3) as f64, [0.0, 0.0]).apply(p))
        .collect();
    let spliced = Mesh::closed(pts).unwrap();
    let v = decide_host(&base, &spliced, &opts()).unwrap();
    assert!(not_met(&v), "{v}");
    assert!(!align(&base, &spliced, Group::SE, MatchMode::IndexAligned, 1e-6)
        .unwrap()
        .is_congruent());
}

#[test]
fn distance_angle_baseline() {
    let data = polyline(11, 8);
    let a = data.build(Point2::ORIGIN, 0.0).unwrap();
    let v = decide_dist_angle(&a, &moved(&a, 1), &opts()).unwrap();
    assert!(v.is_congruent(), "{v}");
    let v = decide_dist_angle(&a, &mirror(&a), &opts()).unwrap();
    assert!(not_met(&v), "{v}");

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let n = rng.gen_range(3..9);
        let data = samples::random_polyline(&mut rng, n);
        let a = data.build(Point2::ORIGIN, 0.0).unwrap();
        let b = if rng.gen_bool(0.5) {
            data.build(Point2::new(2.0, 3.0), rng.gen_range(0.0..TAU)).unwrap()
        } else {
            let mut other = data.clone();
            other.edges[0] *= 1.1;
            other.build(Point2::ORIGIN, 0.0).unwrap()
        };
        let v = decide_dist_angle(&a, &b, &opts()).unwrap();
        let o = align(&a, &b, Group::SE, MatchMode::IndexAligned, 1e-6).unwrap();
        assert_eq!(v.is_congruent(), o.is_congruent());
        assert!(!v.is_oracle_disagreement());
    }
}

fn ellipse_arc(step: f64, n: usize) -> Mesh {
    samples::ellipse(2.0, 1.0, &samples::linspace(0.1, step, n), false).unwrap()
}

fn sa_image(m: &Mesh) -> Mesh {
    let g = GroupElement::new([[2.0, 1.0], [1.0, 1.0]], [3.0, -1.0], Group::SA).unwrap();
    apply_motion(&g, m).unwrap()
}

#[test]
fn affine_image_is_congruent() {
    let m = ellipse_arc(0.3, 10);
    for variant in [AffineVariant::Thm57, AffineVariant::Thm58] {
        let v = decide_affine(&m, &sa_image(&m), variant, &opts()).unwrap();
        assert!(v.is_congruent(), "{variant:?}: {v}");
    }
}

#[test]
fn affine_equal_signatures_different_arc_lengths() {
    let (a, b) = (ellipse_arc(0.3, 10), ellipse_arc(0.25, 10));
    let s = |m: &Mesh| sa_signature(m, Scheme::Eq6).unwrap();
    assert!(s(&a).max_relative_error(&s(&b)).unwrap() < 1e-8);
    let v = decide_affine(&a, &b, AffineVariant::Thm57, &opts()).unwrap();
    assert!(not_met(&v), "{v}");
}

#[test]
fn affine_zero_curvature_fails_never_zero_condition() {
    let p = samples::parabola(0.5, &samples::linspace(-1.0, 0.25, 9)).unwrap();
    let v = decide_affine(&p, &sa_image(&p), AffineVariant::Thm57, &opts()).unwrap();
    assert!(not_met(&v), "{v}");
}

#[test]
fn affine_mirror_is_not_sa_congruent() {
    let c = counterexample(CounterexampleId::Affine).unwrap();
    assert!(c.invariant_gap().unwrap() < 1e-9);
    let v = decide_affine(&c.a, &c.b, AffineVariant::Thm57, &opts()).unwrap();
    assert!(not_met(&v), "{v}");
    let o = align(&c.a, &c.b, Group::Abar, MatchMode::IndexAligned, 1e-6).unwrap();
    assert!(o.is_congruent());
}

#[test]
fn affine_rejects_non_convex() {
    let m = samples::from_turns(Point2::ORIGIN, 0.0, &[1.0; 5], &[0.5, -0.5, 0.5, 0.5]).unwrap();
    assert!(matches!(
        decide_affine(&m, &m, AffineVariant::Thm57, &opts()),
        Err(Error::NotConvex)
    ));
}

#[test]
fn example_three_disagreement_is_surfaced() {
    let c = counterexample(CounterexampleId::Ex3).unwrap();
    let loose = DecideOptions {
        signature_only: true,
        ..opts()
    };
    let v = decide_eq2_angle_type(&c.a, &c.b, &loose).unwrap();
    assert!(v.is_oracle_disagreement(), "{v}");
    let v = decide_eq2_signed(&c.a, &c.b, &opts()).unwrap();
    assert!(not_met(&v), "{v}");
}

#[test]
fn cyclic_and_reversed_matching() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let m = samples::random_star(&mut rng, 9).unwrap();
    let img = moved(&m, 8);
    let shifted = img.rotated(4);
    assert!(!align(&m, &shifted, Group::SE, MatchMode::IndexAligned, 1e-6)
        .unwrap()
        .is_congruent());
    let v = align(&m, &shifted, Group::SE, MatchMode::Cyclic, 1e-6).unwrap();
    assert!(v.is_congruent(), "{v}");
    let v = align(&m, &img.reversed(), Group::SE, MatchMode::CyclicWithReversal, 1e-6).unwrap();
    assert!(v.witness().unwrap().reversed);
}

#[test]
fn different_diameters_are_not_congruent() {
    let a = samples::regular_polygon(6, 1.0).unwrap();
    let b = samples::regular_polygon(6, 1.5).unwrap();
    for group in [Group::SE, Group::E] {
        assert!(!align(&a, &b, group, MatchMode::IndexAligned, 1e-6)
            .unwrap()
            .is_congruent());
    }
    let v = align(&a, &b, Group::SE, MatchMode::IndexAligned, 1e-6).unwrap();
    assert!(!v.is_oracle_disagreement());
}
