//! Signature containers shared by the Euclidean and affine schemes, and the
//! pointwise comparison used by every decision procedure.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::NeighborhoodSpec;

/// Default relative tolerance for signature equality.
pub const SIGNATURE_TOL: f64 = 1e-6;

/// Difference-quotient scheme. `Eq1`..`Eq4` are Euclidean, `Eq5`..`Eq8` affine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Forward difference over one edge, equally spaced meshes.
    Eq1,
    /// Centered difference, equally spaced meshes.
    Eq2,
    /// `3 (k[i+1] - k[i]) / d(i-1, i+2)`.
    Eq3,
    /// `3 (k[i+1] - k[i-1]) / d(i-3, i+3)`.
    Eq4,
    /// Forward difference over one affine arc.
    Eq5,
    /// Centered difference over the affine arc `L(i-1, i+1)`.
    Eq6,
    /// `5 (k[i+1] - k[i]) / L(i-2, i+3)`.
    Eq7,
    /// `5 (k[i+1] - k[i-1]) / L(i-5, i+5)`.
    Eq8,
}

impl Scheme {
    pub const ALL: [Scheme; 8] = [
        Scheme::Eq1,
        Scheme::Eq2,
        Scheme::Eq3,
        Scheme::Eq4,
        Scheme::Eq5,
        Scheme::Eq6,
        Scheme::Eq7,
        Scheme::Eq8,
    ];

    pub fn number(self) -> u8 {
        Scheme::ALL.iter().position(|&s| s == self).unwrap() as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Scheme> {
        Scheme::ALL.get((n as usize).checked_sub(1)?).copied()
    }

    pub fn is_euclidean(self) -> bool {
        self.number() <= 4
    }

    /// Whether the scheme assumes equal spacing (Eq1, Eq2, Eq5, Eq6).
    pub fn needs_equal_spacing(self) -> bool {
        matches!(self, Scheme::Eq1 | Scheme::Eq2 | Scheme::Eq5 | Scheme::Eq6)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "eq{}", self.number())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let digits = s.trim().trim_start_matches("eq");
        digits
            .parse::<u8>()
            .ok()
            .and_then(Scheme::from_number)
            .ok_or_else(|| format!("unknown scheme '{s}', expected 1..8 or eq1..eq8"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignaturePoint {
    pub index: usize,
    pub kappa: f64,
    pub kappa_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Signature {
    pub points: Vec<SignaturePoint>,
    pub scheme: Scheme,
    pub spec: NeighborhoodSpec,
    /// Set when arc lengths were evaluated outside the five-neighborhood of
    /// the fitted conic (Eq7, Eq8).
    pub extrapolated: bool,
}

impl Signature {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.index).collect()
    }

    pub fn get(&self, index: usize) -> Option<&SignaturePoint> {
        self.points.iter().find(|p| p.index == index)
    }

    /// Floor for the `kappa_s` column: `kappa_s` carries the units of
    /// `kappa^2` (Euclidean) or `kappa^(3/2)` (affine), so a difference that
    /// is small against that scale counts as zero.
    fn kappa_s_floor(&self, other: &Signature) -> f64 {
        let k = self
            .points
            .iter()
            .chain(&other.points)
            .map(|p| p.kappa.abs())
            .fold(0.0, f64::max);
        if self.scheme.is_euclidean() {
            k * k
        } else {
            k.powf(1.5)
        }
    }

    /// Largest componentwise relative difference over aligned indices.
    ///
    /// Fails with `LengthMismatch` when the index sets or schemes differ.
    pub fn max_relative_error(&self, other: &Signature) -> Result<f64> {
        if self.scheme != other.scheme
            || self.points.len() != other.points.len()
            || self
                .points
                .iter()
                .zip(&other.points)
                .any(|(a, b)| a.index != b.index)
        {
            return Err(Error::LengthMismatch(self.points.len(), other.points.len()));
        }
        let kappa_floor = self
            .points
            .iter()
            .chain(&other.points)
            .map(|p| p.kappa.abs())
            .fold(0.0, f64::max);
        let ks_floor = self.kappa_s_floor(other);
        let rel = |a: f64, b: f64, floor: f64| {
            let d = (a - b).abs();
            if d == 0.0 {
                0.0
            } else {
                d / a.abs().max(b.abs()).max(floor).max(f64::MIN_POSITIVE)
            }
        };
        Ok(self
            .points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| {
                rel(a.kappa, b.kappa, kappa_floor).max(rel(a.kappa_s, b.kappa_s, ks_floor))
            })
            .fold(0.0, f64::max))
    }

    /// Equal within `tol` under [`Signature::max_relative_error`].
    pub fn matches(&self, other: &Signature, tol: f64) -> bool {
        matches!(self.max_relative_error(other), Ok(e) if e <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(scheme: Scheme, rows: &[(f64, f64)]) -> Signature {
        Signature {
            points: rows
                .iter()
                .enumerate()
                .map(|(index, &(kappa, kappa_s))| SignaturePoint {
                    index,
                    kappa,
                    kappa_s,
                })
                .collect(),
            scheme,
            spec: NeighborhoodSpec::ONE,
            extrapolated: false,
        }
    }

    #[test]
    fn scheme_numbers_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(Scheme::from_number(s.number()), Some(s));
            assert_eq!(s.to_string().parse::<Scheme>().unwrap(), s);
        }
        assert_eq!(Scheme::from_number(0), None);
        assert_eq!(Scheme::from_number(9), None);
        assert_eq!("3".parse::<Scheme>().unwrap(), Scheme::Eq3);
    }

    #[test]
    fn relative_error() {
        let a = sig(Scheme::Eq2, &[(1.0, 0.0), (2.0, 0.5)]);
        let b = sig(Scheme::Eq2, &[(1.0, 1e-18), (2.0 + 2e-9, 0.5)]);
        let e = a.max_relative_error(&b).unwrap();
        assert!(e > 0.9e-9 && e < 1.1e-9, "{e}");
        assert!(a.matches(&b, 1e-6));
        let c = sig(Scheme::Eq2, &[(1.0, 0.0)]);
        assert!(a.max_relative_error(&c).is_err());
        let d = sig(Scheme::Eq3, &[(1.0, 0.0), (2.0, 0.5)]);
        assert!(!a.matches(&d, 1.0));
    }
}
