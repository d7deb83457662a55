//! Step-`m` traversal of a closed `n`-cycle, Euler's totient, and the
//! closed-mesh congruence decision built on the step-3 traversal.

use num_integer::gcd;
use serde::{Deserialize, Serialize};

use crate::congruence::{decide_closed_eq4, DecideOptions, Verdict};
use crate::error::{Error, Result};
use crate::geometry::Mesh;

/// Indices visited from 0 by repeated steps of `m` until 0 comes back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Traversal {
    pub n: usize,
    pub m: usize,
    /// Starts and ends at 0.
    pub order: Vec<usize>,
    /// Every index was visited exactly once before returning.
    pub complete: bool,
}

impl Traversal {
    /// Number of steps taken before returning to 0.
    pub fn steps(&self) -> usize {
        self.order.len() - 1
    }
}

pub fn traverse(n: usize, m: usize) -> Result<Traversal> {
    if n < 3 || m == 0 || m >= n {
        return Err(Error::InvalidStep { n, m });
    }
    let mut order = vec![0];
    let mut i = m % n;
    while i != 0 {
        order.push(i);
        i = (i + m) % n;
    }
    order.push(0);
    let complete = order.len() == n + 1;
    debug_assert_eq!(complete, gcd(m, n) == 1);
    Ok(Traversal {
        n,
        m,
        order,
        complete,
    })
}

/// Steps `m` in `[1, n)` whose traversal is complete: those coprime to `n`.
pub fn valid_steps(n: usize) -> Vec<usize> {
    let primes = prime_factors(n);
    (1..n)
        .filter(|&m| primes.iter().all(|&p| m % p != 0))
        .collect()
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient by trial-division factorization.
pub fn phi(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut rest = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if rest > 1 {
        out -= out / rest;
    }
    out
}

/// Candidate step counts that cover every seat of an `n`-cycle.
pub fn candidates(n: usize, options: &[usize]) -> Vec<usize> {
    options
        .iter()
        .copied()
        .filter(|&m| m >= 1 && m < n && gcd(m, n) == 1)
        .collect()
}

/// Congruence of closed meshes with `n` not divisible by 3 from the signed
/// 3-angle types, the lengths `|p[i-3] p[i]|` and the Eq4 signature over
/// the 3-neighborhood.
pub fn decide_host(m1: &Mesh, m2: &Mesh, opts: &DecideOptions) -> Result<Verdict> {
    decide_closed_eq4(m1, m2, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_points() {
        let t = traverse(10, 3).unwrap();
        assert!(t.complete);
        assert_eq!(t.order, vec![0, 3, 6, 9, 2, 5, 8, 1, 4, 7, 0]);
        let t = traverse(10, 4).unwrap();
        assert!(!t.complete);
        assert_eq!(t.steps(), 5);
        assert!(traverse(10, 1).unwrap().complete);
        assert!(traverse(10, 10).is_err());
        assert!(traverse(2, 1).is_err());
    }

    #[test]
    fn totients() {
        assert_eq!(valid_steps(10), vec![1, 3, 7, 9]);
        assert_eq!(phi(10), 4);
        assert_eq!(phi(13), 12);
        assert_eq!(phi(1), 1);
        assert_eq!(candidates(40, &[2, 3, 5]), vec![3]);
        assert_eq!(candidates(40, &[3, 4, 5]), vec![3]);
    }
}
