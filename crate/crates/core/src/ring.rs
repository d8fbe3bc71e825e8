//! The integer group ring `Z[G]` of a finite abelian group.
//!
//! Elements are sparse: only nonzero coefficients are stored, keyed by the
//! group's mixed-radix element index. Arithmetic is exact over `i128`;
//! congruences modulo 3 or 5 are checked by reducing results at the call
//! site ([`GroupRingElement::congruent_mod`]).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RingRepr", into = "RingRepr")]
pub struct GroupRingElement {
    group: AbelianGroup,
    coeffs: BTreeMap<u64, i128>,
}

#[derive(Serialize, Deserialize)]
struct RingRepr {
    group: AbelianGroup,
    terms: Vec<(GroupElement, i128)>,
}

impl TryFrom<RingRepr> for GroupRingElement {
    type Error = Error;
    fn try_from(r: RingRepr) -> Result<Self> {
        GroupRingElement::from_terms(&r.group, r.terms)
    }
}

impl From<GroupRingElement> for RingRepr {
    fn from(a: GroupRingElement) -> Self {
        RingRepr {
            terms: a.terms().collect(),
            group: a.group,
        }
    }
}

impl GroupRingElement {
    pub fn zero(group: &AbelianGroup) -> Self {
        GroupRingElement {
            group: group.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    /// The identity element `e` with coefficient 1, the unit of the ring.
    pub fn one(group: &AbelianGroup) -> Self {
        GroupRingElement::monomial(group, &group.identity(), 1)
            .expect("identity belongs to the group")
    }

    /// `c * g`.
    pub fn monomial(group: &AbelianGroup, g: &GroupElement, c: i128) -> Result<Self> {
        group.check(g)?;
        let mut out = GroupRingElement::zero(group);
        if c != 0 {
            out.coeffs.insert(group.index_of(g), c);
        }
        Ok(out)
    }

    /// The sum of all group elements, written `G` in group-ring equations.
    pub fn all_ones(group: &AbelianGroup) -> Self {
        GroupRingElement {
            group: group.clone(),
            coeffs: (0..group.order()).map(|i| (i, 1)).collect(),
        }
    }

    /// A subset of `G` as a 0/1 element. Duplicates are an error.
    pub fn from_set(group: &AbelianGroup, elements: &[GroupElement]) -> Result<Self> {
        let mut out = GroupRingElement::zero(group);
        for g in elements {
            group.check(g)?;
            if out.coeffs.insert(group.index_of(g), 1).is_some() {
                return Err(Error::DuplicateElement(g.0.clone()));
            }
        }
        Ok(out)
    }

    /// Sum of `c * g` over the given terms; repeated elements accumulate,
    /// which also covers multisets.
    pub fn from_terms<I>(group: &AbelianGroup, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, i128)>,
    {
        let mut out = GroupRingElement::zero(group);
        for (g, c) in terms {
            group.check(&g)?;
            out.bump(group.index_of(&g), c);
        }
        Ok(out)
    }

    fn bump(&mut self, index: u64, c: i128) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(index).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&index);
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of elements with nonzero coefficient.
    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Elements with nonzero coefficient, in lexicographic order.
    pub fn support(&self) -> Vec<GroupElement> {
        self.coeffs
            .keys()
            .map(|&i| self.group.element_at(i))
            .collect()
    }

    pub fn coefficient(&self, g: &GroupElement) -> Result<i128> {
        self.group.check(g)?;
        Ok(self.coeff_at(self.group.index_of(g)))
    }

    pub(crate) fn coeff_at(&self, index: u64) -> i128 {
        self.coeffs.get(&index).copied().unwrap_or(0)
    }

    /// `(element, coefficient)` pairs with nonzero coefficient, in order.
    pub fn terms(&self) -> impl Iterator<Item = (GroupElement, i128)> + '_ {
        self.coeffs
            .iter()
            .map(|(&i, &c)| (self.group.element_at(i), c))
    }

    pub(crate) fn indexed_terms(&self) -> impl Iterator<Item = (u64, i128)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    /// Image under the augmentation map: the sum of all coefficients.
    pub fn coefficient_sum(&self) -> i128 {
        self.coeffs.values().sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.group.check_same(&other.group)?;
        let mut out = self.clone();
        for (&i, &c) in &other.coeffs {
            out.bump(i, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, lambda: i128) -> Self {
        if lambda == 0 {
            return GroupRingElement::zero(&self.group);
        }
        GroupRingElement {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|(&i, &c)| (i, c * lambda)).collect(),
        }
    }

    /// Convolution product `sum_g (sum_h a_h b_{g-h}) g`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.group.check_same(&other.group)?;
        let (small, large) = if self.coeffs.len() <= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let arith = IndexArith::new(&self.group);
        let large_terms: Vec<(u64, i128)> = large.indexed_terms().collect();
        let mut out = GroupRingElement::zero(&self.group);
        for (i, a) in small.indexed_terms() {
            for &(j, b) in &large_terms {
                out.bump(arith.add(i, j), a * b);
            }
        }
        Ok(out)
    }

    /// `A^(t) = sum_g a_g g^t`; in additive notation `g -> t*g`.
    pub fn power_map(&self, t: i64) -> Self {
        let arith = IndexArith::new(&self.group);
        let mut out = GroupRingElement::zero(&self.group);
        for (i, c) in self.indexed_terms() {
            out.bump(arith.scale(i, t), c);
        }
        out
    }

    /// Coefficientwise congruence modulo `m`.
    pub fn congruent_mod(&self, other: &Self, m: i128) -> Result<bool> {
        let diff = self.sub(other)?;
        Ok(diff.coeffs.values().all(|c| c.rem_euclid(m) == 0))
    }
}

/// Arithmetic directly on mixed-radix element indices.
pub(crate) struct IndexArith<'a> {
    factors: &'a [u64],
    order: u64,
}

impl<'a> IndexArith<'a> {
    pub(crate) fn new(group: &'a AbelianGroup) -> Self {
        IndexArith {
            factors: group.invariant_factors(),
            order: group.order(),
        }
    }

    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        if self.factors.len() <= 1 {
            return if self.order <= 1 {
                0
            } else {
                ((a as u128 + b as u128) % self.order as u128) as u64
            };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for &d in self.factors.iter().rev() {
            let r = (a % d + b % d) % d;
            out += r * place;
            place = place.saturating_mul(d);
            a /= d;
            b /= d;
        }
        out
    }

    pub(crate) fn scale(&self, a: u64, t: i64) -> u64 {
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for &d in self.factors.iter().rev() {
            let r = ((a % d) as i128 * t as i128).rem_euclid(d as i128) as u64;
            out += r * place;
            place = place.saturating_mul(d);
            a /= d;
        }
        out
    }

    pub(crate) fn neg(&self, a: u64) -> u64 {
        self.scale(a, -1)
    }
}
