//! Lee metric and Lee spheres on `Z^n`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LeeVector(pub Vec<i64>);

impl LeeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LeeVector(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// Lee weight, the distance to the origin.
    pub fn weight(&self) -> u128 {
        self.0.iter().map(|&x| x.unsigned_abs() as u128).sum()
    }

    pub fn neg(&self) -> LeeVector {
        LeeVector(self.0.iter().map(|&x| -x).collect())
    }
}

impl From<Vec<i64>> for LeeVector {
    fn from(v: Vec<i64>) -> Self {
        LeeVector(v)
    }
}

/// `S(n, r)`: all points of `Z^n` at Lee distance at most `r` from the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeeSphereSpec {
    pub n: usize,
    pub r: u64,
}

impl LeeSphereSpec {
    pub fn new(n: usize, r: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSphere);
        }
        Ok(LeeSphereSpec { n, r })
    }
}

/// L1 distance between two points of the same dimension.
pub fn lee_distance(x: &LeeVector, y: &LeeVector) -> Result<u128> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            actual: y.dim(),
        });
    }
    Ok(x.0
        .iter()
        .zip(&y.0)
        .map(|(&a, &b)| (a as i128 - b as i128).unsigned_abs())
        .sum())
}

/// Every point of the sphere, in lexicographic order of coordinates.
pub fn sphere_points(spec: LeeSphereSpec) -> Vec<LeeVector> {
    let mut out = Vec::new();
    let mut current = vec![0i64; spec.n];
    fill(&mut current, 0, spec.r as i64, &mut out);
    out
}

fn fill(current: &mut Vec<i64>, pos: usize, budget: i64, out: &mut Vec<LeeVector>) {
    if pos == current.len() {
        out.push(LeeVector(current.clone()));
        return;
    }
    for x in -budget..=budget {
        current[pos] = x;
        fill(current, pos + 1, budget - x.abs(), out);
    }
    current[pos] = 0;
}

/// `|S(n, r)| = sum_{i=0}^{min(n,r)} 2^i C(n,i) C(r,i)`.
///
/// This is also the abelian Cayley Moore bound for degree `2n` and diameter `r`.
pub fn sphere_size(n: u64, r: u64) -> BigUint {
    let mut total = BigUint::zero();
    let mut binom_n = BigUint::one();
    let mut binom_r = BigUint::one();
    let mut pow2 = BigUint::one();
    for i in 0..=n.min(r) {
        if i > 0 {
            binom_n = binom_n * (n - i + 1) / i;
            binom_r = binom_r * (r - i + 1) / i;
            pow2 <<= 1;
        }
        total += &pow2 * &binom_n * &binom_r;
    }
    total
}

/// Abelian Cayley Moore bound for degree `2n` and diameter `r`.
pub fn moore_bound(n: u64, r: u64) -> BigUint {
    sphere_size(n, r)
}
