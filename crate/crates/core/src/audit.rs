//! Randomized invariance audits: each suite draws seeded random meshes and
//! motions and counts trials where an invariant fails to hold.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affine::sa_signature;
use crate::congruence::{align, decide_dist_angle, DecideOptions, MatchMode, CONGRUENCE_TOL};
use crate::error::Result;
use crate::euclidean::{euclidean_curvature, se_signature};
use crate::geometry::{
    apply_motion, circumcircle, random_motion_with, signature_sign, Group, GroupElement, Mesh,
    NeighborhoodSpec, Point2,
};
use crate::host::traverse;
use crate::samples;
use crate::signature::Scheme;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, trial: usize, outcome: Result<std::result::Result<(), String>>) {
        let failure = match outcome {
            Ok(Ok(())) => None,
            Ok(Err(msg)) => Some(msg),
            Err(e) => Some(e.to_string()),
        };
        match failure {
            None => self.passed += 1,
            Some(msg) => {
                self.failed += 1;
                self.first_failure
                    .get_or_insert_with(|| format!("trial {trial}: {msg}"));
            }
        }
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<28} {:>6} passed {:>4} failed",
            self.name, self.passed, self.failed
        )?;
        if let Some(msg) = &self.first_failure {
            write!(f, "  first: {msg}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub suites: Vec<SuiteResult>,
}

impl AuditReport {
    pub fn failures(&self) -> usize {
        self.suites.iter().map(|s| s.failed).sum()
    }

    pub fn passes(&self) -> usize {
        self.suites.iter().map(|s| s.passed).sum()
    }
}

type Outcome = Result<std::result::Result<(), String>>;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Rotations keep and reflections flip the signature-sign at every interior
/// point, exactly.
pub fn sign_contract(rng: &mut ChaCha8Rng) -> Outcome {
    let n = rng.gen_range(4..12);
    let m = samples::random_polyline(rng, n).build(Point2::ORIGIN, rng.gen_range(0.0..6.0))?;
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    let t = [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)];
    let rot = apply_motion(&GroupElement::rotation(angle, t), &m)?;
    let refl = apply_motion(&GroupElement::reflection(angle, t), &m)?;
    for i in m.interior_indices() {
        let s = signature_sign(&m, i)?;
        if signature_sign(&rot, i)? != s {
            return Ok(Err(format!("rotation changed the sign at {i}")));
        }
        if signature_sign(&refl, i)? != -s {
            return Ok(Err(format!("reflection kept the sign at {i}")));
        }
    }
    Ok(Ok(()))
}

/// Three points on a random circle have curvature `1 / R`, matching the
/// circumcircle construction.
pub fn curvature_oracle(rng: &mut ChaCha8Rng) -> Outcome {
    let r = 10f64.powf(rng.gen_range(-2.0..2.0));
    let c = Point2::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
    let mut angles: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let m = match samples::circle(c, r, &angles, false) {
        Ok(m) => m,
        Err(_) => return Ok(Ok(())),
    };
    let k = euclidean_curvature(&m, 1, NeighborhoodSpec::ONE)?;
    let (_, radius) = circumcircle(m.point(0), m.point(1), m.point(2))?;
    if rel_close(k, 1.0 / radius, 1e-9) {
        Ok(Ok(()))
    } else {
        Ok(Err(format!("kappa {k} vs 1/R {}", 1.0 / radius)))
    }
}

/// SE and E images share all four Euclidean signatures within 1e-9.
pub fn euclidean_invariance(rng: &mut ChaCha8Rng) -> Outcome {
    let group = if rng.gen_bool(0.5) { Group::SE } else { Group::E };
    let g = random_motion_with(group, rng);
    let n = rng.gen_range(9..16);
    let spacing = samples::random_equally_spaced(rng, n);
    let even = spacing.build(Point2::ORIGIN, 0.0)?;
    let n = rng.gen_range(9..16);
    let uneven: Mesh = if rng.gen_bool(0.5) {
        samples::random_polyline(rng, n).build(Point2::ORIGIN, 0.0)?
    } else {
        samples::random_star(rng, n)?
    };
    for (m, schemes) in [
        (&even, &[Scheme::Eq1, Scheme::Eq2][..]),
        (&uneven, &[Scheme::Eq3, Scheme::Eq4][..]),
    ] {
        let img = apply_motion(&g, m)?;
        for &scheme in schemes {
            let a = se_signature(m, scheme, NeighborhoodSpec::ONE)?;
            let b = se_signature(&img, scheme, NeighborhoodSpec::ONE)?;
            let e = a.max_relative_error(&b)?;
            if e > 1e-9 {
                return Ok(Err(format!("{group} {scheme}: relative error {e:.3e}")));
            }
        }
    }
    Ok(Ok(()))
}

/// SA images share all four affine signatures within 1e-8.
pub fn affine_invariance(rng: &mut ChaCha8Rng) -> Outcome {
    let g = random_motion_with(Group::SA, rng);
    let n = rng.gen_range(12..20);
    let even = samples::random_affine_equally_spaced(rng, n)?;
    let uneven = samples::random_convex(rng, n)?;
    for (m, schemes) in [
        (&even, &[Scheme::Eq5, Scheme::Eq6][..]),
        (&uneven, &[Scheme::Eq7, Scheme::Eq8][..]),
    ] {
        let img = apply_motion(&g, m)?;
        for &scheme in schemes {
            let a = sa_signature(m, scheme)?;
            let b = sa_signature(&img, scheme)?;
            let e = a.max_relative_error(&b)?;
            if e > 1e-8 {
                return Ok(Err(format!("{scheme}: relative error {e:.3e}")));
            }
        }
    }
    Ok(Ok(()))
}

/// The oracle recovers a random motion of every group.
pub fn oracle_recovery(rng: &mut ChaCha8Rng) -> Outcome {
    let group = [Group::SE, Group::E, Group::SA, Group::Abar][rng.gen_range(0..4)];
    let g = random_motion_with(group, rng);
    let n = rng.gen_range(4..12);
    let m = samples::random_polyline(rng, n).build(Point2::ORIGIN, 0.0)?;
    let img = apply_motion(&g, &m)?;
    let v = align(&m, &img, group, MatchMode::IndexAligned, CONGRUENCE_TOL)?;
    let Some(w) = v.witness() else {
        return Ok(Err(format!("{group}: {v}")));
    };
    let scale = 1.0 + g.translation[0].abs().max(g.translation[1].abs());
    for i in 0..m.len() {
        let (a, b) = (w.motion.apply(m.point(i)), g.apply(m.point(i)));
        if a.distance(b) > 1e-9 * scale * m.diameter().max(1.0) {
            return Ok(Err(format!("{group}: recovered motion differs at {i}")));
        }
    }
    let back = align(&img, &m, group, MatchMode::IndexAligned, CONGRUENCE_TOL)?;
    if !back.is_congruent() {
        return Ok(Err("oracle is not symmetric".into()));
    }
    Ok(Ok(()))
}

/// The distance-and-signed-angle test agrees with the oracle on congruent
/// pairs and on perturbed pairs.
pub fn baseline_agreement(rng: &mut ChaCha8Rng) -> Outcome {
    let n = rng.gen_range(4..10);
    let data = samples::random_polyline(rng, n);
    let m = data.build(Point2::ORIGIN, 0.0)?;
    let other = if rng.gen_bool(0.5) {
        data.build(
            Point2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)),
            rng.gen_range(0.0..6.0),
        )?
    } else {
        let mut changed = data.clone();
        let k = rng.gen_range(0..changed.turns.len());
        changed.turns[k] += rng.gen_range(0.05..0.3);
        changed.build(Point2::ORIGIN, 0.0)?
    };
    let opts = DecideOptions::default();
    let baseline = decide_dist_angle(&m, &other, &opts)?;
    let oracle = align(&m, &other, Group::SE, MatchMode::IndexAligned, CONGRUENCE_TOL)?;
    if baseline.is_oracle_disagreement() || baseline.is_congruent() != oracle.is_congruent() {
        return Ok(Err(format!("baseline {} vs oracle {}", baseline.name(), oracle.name())));
    }
    Ok(Ok(()))
}

/// A step traversal is complete exactly when the step is coprime to `n`.
pub fn traversal_gcd(rng: &mut ChaCha8Rng) -> Outcome {
    let n = rng.gen_range(3..200);
    let m = rng.gen_range(1..n);
    let t = traverse(n, m)?;
    if t.complete != (num_integer::gcd(n, m) == 1) {
        return Ok(Err(format!("traverse({n}, {m})")));
    }
    Ok(Ok(()))
}

type Suite = (&'static str, fn(&mut ChaCha8Rng) -> Outcome);

pub const SUITES: [Suite; 7] = [
    ("signature-sign contract", sign_contract),
    ("curvature vs circumcircle", curvature_oracle),
    ("euclidean invariance", euclidean_invariance),
    ("affine invariance", affine_invariance),
    ("oracle recovery", oracle_recovery),
    ("baseline vs oracle", baseline_agreement),
    ("traversal coprimality", traversal_gcd),
];

/// Runs every suite for `trials` trials. Each suite has its own stream
/// derived from `seed`, so suites do not perturb one another.
pub fn run(seed: u64, trials: usize) -> AuditReport {
    let suites = SUITES
        .iter()
        .enumerate()
        .map(|(k, (name, suite))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let mut result = SuiteResult::new(name);
            for trial in 0..trials {
                result.record(trial, suite(&mut rng));
            }
            result
        })
        .collect();
    AuditReport { suites }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_audit_is_clean() {
        let report = run(7, 20);
        for s in &report.suites {
            assert_eq!(s.failed, 0, "{s}");
        }
        assert_eq!(report.passes(), 20 * SUITES.len());
    }
}
