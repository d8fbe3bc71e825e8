//! Tiling verifiers.
//!
//! A lattice `L` with `|det L| = |S(n,r)|` tiles `Z^n` by `S(n,r)` exactly
//! when the projection `Z^n -> Z^n / L` is injective on the sphere. For
//! `r = 2` the same question is asked in the group ring of `G = Z^n / L`:
//! the arm set `T = {e} U {+-phi(e_i)}` must have `2n+1` elements, contain
//! `e`, be closed under inversion and satisfy `T^2 = 2G - T^(2) + 2n e`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{quotient_map, AbelianGroup, GroupElement, LatticeBasis};
use crate::lee::{sphere_points, sphere_size, LeeSphereSpec, LeeVector};
use crate::radius_two_order;
use crate::ring::GroupRingElement;

/// A group together with a candidate arm set `T` for dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingCandidate {
    group: AbelianGroup,
    n: u64,
    arms: Vec<GroupElement>,
}

impl TilingCandidate {
    /// Elements must belong to `group` and be pairwise distinct. They are
    /// stored sorted.
    pub fn new(group: AbelianGroup, n: u64, mut arms: Vec<GroupElement>) -> Result<Self> {
        for g in &arms {
            group.check(g)?;
        }
        arms.sort();
        if let Some(w) = arms.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0].0.clone()));
        }
        Ok(TilingCandidate { group, n, arms })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn arms(&self) -> &[GroupElement] {
        &self.arms
    }

    pub fn as_ring_element(&self) -> GroupRingElement {
        GroupRingElement::from_set(&self.group, &self.arms).expect("arms validated at construction")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailedCondition {
    Size,
    IdentityMembership,
    Symmetry,
    QuadraticIdentity,
    Order,
    Determinant,
    Collision,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Coefficient of `T^2` at `element` differs from the required value.
    Coefficient {
        element: GroupElement,
        expected: i64,
        actual: i64,
    },
    MissingInverse {
        element: GroupElement,
        inverse: GroupElement,
    },
    Count {
        expected: String,
        actual: String,
    },
    /// Two sphere points in the same coset of the lattice.
    Collision {
        first: LeeVector,
        second: LeeVector,
        image: GroupElement,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub failed_condition: Option<FailedCondition>,
    pub witness: Option<Witness>,
}

impl VerificationReport {
    pub fn accept() -> Self {
        VerificationReport {
            verdict: Verdict::Accept,
            failed_condition: None,
            witness: None,
        }
    }

    pub fn reject(condition: FailedCondition, witness: Witness) -> Self {
        VerificationReport {
            verdict: Verdict::Reject,
            failed_condition: Some(condition),
            witness: Some(witness),
        }
    }

    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }
}

/// Check the radius-2 group-ring conditions on a candidate.
///
/// Conditions are tested in order (order, size, identity, symmetry,
/// quadratic identity) and the first failure is reported; the quadratic
/// witness is the first offending element in lexicographic order.
pub fn check_conditions(c: &TilingCandidate) -> VerificationReport {
    let group = &c.group;
    let n = c.n;
    let expected_order = radius_two_order(n);
    if expected_order != Some(group.order()) {
        return VerificationReport::reject(
            FailedCondition::Order,
            Witness::Count {
                expected: expected_order.map_or_else(|| "overflow".into(), |o| o.to_string()),
                actual: group.order().to_string(),
            },
        );
    }
    if c.arms.len() as u64 != 2 * n + 1 {
        return VerificationReport::reject(
            FailedCondition::Size,
            Witness::Count {
                expected: (2 * n + 1).to_string(),
                actual: c.arms.len().to_string(),
            },
        );
    }
    let e = group.identity();
    if c.arms.binary_search(&e).is_err() {
        return VerificationReport::reject(
            FailedCondition::IdentityMembership,
            Witness::Coefficient {
                element: e,
                expected: 1,
                actual: 0,
            },
        );
    }
    for t in &c.arms {
        let inv = group.neg_unchecked(t);
        if c.arms.binary_search(&inv).is_err() {
            return VerificationReport::reject(
                FailedCondition::Symmetry,
                Witness::MissingInverse {
                    element: t.clone(),
                    inverse: inv,
                },
            );
        }
    }

    let t = c.as_ring_element();
    let lhs = t.mul(&t).expect("same group");
    let rhs = GroupRingElement::all_ones(group)
        .scale(2)
        .sub(&t.power_map(2))
        .and_then(|x| x.add(&GroupRingElement::one(group).scale(2 * n as i128)))
        .expect("same group");
    for index in 0..group.order() {
        let (actual, expected) = (lhs.coeff_at(index), rhs.coeff_at(index));
        if actual != expected {
            return VerificationReport::reject(
                FailedCondition::QuadraticIdentity,
                Witness::Coefficient {
                    element: group.element_at(index),
                    expected: clamp(expected),
                    actual: clamp(actual),
                },
            );
        }
    }
    VerificationReport::accept()
}

fn clamp(x: i128) -> i64 {
    i64::try_from(x).unwrap_or(if x < 0 { i64::MIN } else { i64::MAX })
}

/// Number of ordered pairs `(t1, t2)` in `T x T` with `t1 + t2 = g`, for
/// `g != e`. On an accepted candidate this is 1 on `T^(2)` and 2 elsewhere.
pub fn pair_multiplicity(c: &TilingCandidate, g: &GroupElement) -> Result<u64> {
    c.group.check(g)?;
    if *g == c.group.identity() {
        return Err(Error::IdentityNotAllowed);
    }
    let count = c
        .arms
        .iter()
        .filter(|t1| {
            let need = c.group.add_unchecked(g, &c.group.neg_unchecked(t1));
            c.arms.binary_search(&need).is_ok()
        })
        .count();
    Ok(count as u64)
}

/// Geometric check that the lattice spanned by `basis` tiles `Z^n` by
/// `S(n, r)`: the determinant must equal the sphere size and no two sphere
/// points may share a coset. The reported collision is the first one met
/// while walking the sphere in lexicographic order.
pub fn verify_lattice(basis: &LatticeBasis, r: u64) -> Result<VerificationReport> {
    let n = basis.dim();
    let det = basis.determinant();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let size = BigInt::from(sphere_size(n as u64, r));
    if det.abs() != size {
        return Ok(VerificationReport::reject(
            FailedCondition::Determinant,
            Witness::Count {
                expected: size.to_string(),
                actual: det.abs().to_string(),
            },
        ));
    }
    let projection = quotient_map(basis)?;
    let mut seen: HashMap<GroupElement, LeeVector> = HashMap::new();
    for p in sphere_points(LeeSphereSpec::new(n, r)?) {
        let image = projection.project(&p)?;
        if let Some(first) = seen.get(&image) {
            return Ok(VerificationReport::reject(
                FailedCondition::Collision,
                Witness::Collision {
                    first: first.clone(),
                    second: p,
                    image,
                },
            ));
        }
        seen.insert(image, p);
    }
    Ok(VerificationReport::accept())
}

/// The group-ring model of a radius-2 lattice candidate: `G = Z^n / L` and
/// `T = {e} U {+-phi(e_i)}`.
pub fn to_group_model(basis: &LatticeBasis) -> Result<TilingCandidate> {
    let n = basis.dim() as u64;
    let expected = radius_two_order(n).ok_or(Error::QuotientTooLarge)?;
    let det = basis.determinant();
    if det.abs() != BigInt::from(expected) {
        return Err(Error::DeterminantMismatch {
            expected: expected.to_string(),
            actual: det.abs().to_string(),
        });
    }
    let projection = quotient_map(basis)?;
    let group = projection.group;
    let mut arms = vec![group.identity()];
    for img in &projection.images {
        arms.push(img.clone());
        arms.push(group.neg_unchecked(img));
    }
    arms.sort();
    arms.dedup();
    if (arms.len() as u64) < 2 * n + 1 {
        return Err(Error::ArmCollision {
            distinct: arms.len(),
            expected: (2 * n + 1) as usize,
        });
    }
    TilingCandidate::new(group, n, arms)
}

/// The radius-2 tilings that do exist: `n = 1` in `Z_5` and `n = 2` in `Z_13`.
pub fn known_tiling(n: u64) -> Option<TilingCandidate> {
    let (m, arms): (u64, &[u64]) = match n {
        1 => (5, &[0, 1, 4]),
        2 => (13, &[0, 1, 12, 5, 8]),
        _ => return None,
    };
    let group = AbelianGroup::cyclic(m).ok()?;
    TilingCandidate::new(
        group,
        n,
        arms.iter().map(|&a| GroupElement(vec![a])).collect(),
    )
    .ok()
}
