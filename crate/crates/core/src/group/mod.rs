//! Finite abelian groups in invariant-factor form.
//!
//! A group is `Z_{d_1} x ... x Z_{d_k}` with `d_1 | d_2 | ... | d_k` and every
//! `d_i >= 2`; elements are residue tuples. Groups of a given order are
//! enumerated from the prime factorization ([`factor`]), and quotients
//! `Z^n / L` of integer lattices come from the Smith normal form ([`snf`]).

pub mod factor;
pub mod snf;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use factor::{factorize, FactorBound};
pub use snf::{
    determinant, quotient_map, smith_normal_form, LatticeBasis, Projection, SmithDecomposition,
};

/// `Z_{d_1} x ... x Z_{d_k}` with `d_1 | ... | d_k`, all `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct AbelianGroup {
    factors: Vec<u64>,
    #[serde(skip)]
    order: u64,
}

/// A residue tuple; component `i` lies in `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.0
    }

    /// Parse `"1,2"` (comma-separated components).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::ElementSpec(s.to_string()));
        }
        s.split(',')
            .map(|c| c.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(GroupElement)
            .map_err(|_| Error::ElementSpec(s.to_string()))
    }

    /// Parse `"0,0;1,2;4,4"` (semicolon-separated elements).
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        s.split(';')
            .filter(|part| !part.trim().is_empty())
            .map(GroupElement::parse)
            .collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl AbelianGroup {
    /// Build from invariant factors. Factors equal to 1 are dropped; the rest
    /// must form a divisibility chain.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidGroup {
            factors: factors.clone(),
            reason: reason.to_string(),
        };
        if factors.contains(&0) {
            return Err(invalid("factors must be positive"));
        }
        let kept: Vec<u64> = factors.iter().copied().filter(|&d| d != 1).collect();
        if kept.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(invalid(
                "factors must form a divisibility chain d1 | d2 | ...",
            ));
        }
        let order = kept
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| invalid("order overflows 64 bits"))?;
        Ok(AbelianGroup {
            factors: kept,
            order,
        })
    }

    pub fn cyclic(m: u64) -> Result<Self> {
        AbelianGroup::new(vec![m])
    }

    pub fn trivial() -> Self {
        AbelianGroup {
            factors: Vec::new(),
            order: 1,
        }
    }

    /// Parse `Z13`, `Z5xZ5` or `5,5`. The factors must already be in
    /// invariant-factor form.
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        let bad = || Error::GroupSpec(spec.to_string());
        let factors: Vec<u64> = if s.starts_with(['Z', 'z']) {
            s.split(['x', 'X', '*'])
                .map(|part| {
                    let part = part.trim();
                    part.strip_prefix(['Z', 'z'])
                        .and_then(|d| d.trim().parse::<u64>().ok())
                        .ok_or_else(bad)
                })
                .collect::<Result<_>>()?
        } else {
            s.split(',')
                .map(|d| d.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        if factors.is_empty() {
            return Err(bad());
        }
        AbelianGroup::new(factors)
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    /// Largest element order, `d_k` (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.factors.len()])
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.factors.len() && g.0.iter().zip(&self.factors).all(|(r, d)| r < d)
    }

    /// Validate residues as an element of this group.
    pub fn element(&self, residues: Vec<u64>) -> Result<GroupElement> {
        let g = GroupElement(residues);
        self.check(&g)?;
        Ok(g)
    }

    /// Reduce arbitrary integers componentwise.
    pub fn reduce(&self, values: &[i64]) -> Result<GroupElement> {
        if values.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                actual: values.len(),
            });
        }
        Ok(GroupElement(
            values
                .iter()
                .zip(&self.factors)
                .map(|(&v, &d)| (v as i128).rem_euclid(d as i128) as u64)
                .collect(),
        ))
    }

    pub(crate) fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::ForeignElement {
                element: g.0.clone(),
                factors: self.factors.clone(),
            })
        }
    }

    pub(crate) fn check_same(&self, other: &AbelianGroup) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                left: self.factors.clone(),
                right: other.factors.clone(),
            })
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.neg_unchecked(a))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, &self.neg_unchecked(b)))
    }

    /// `t * g`, the additive form of the power `g^t`; `t` may be negative.
    pub fn scale(&self, a: &GroupElement, t: i64) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.scale_unchecked(a, t))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((&x, &y), &d)| ((x as u128 + y as u128) % d as u128) as u64)
                .collect(),
        )
    }

    pub(crate) fn neg_unchecked(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &d)| if x == 0 { 0 } else { d - x })
                .collect(),
        )
    }

    pub(crate) fn scale_unchecked(&self, a: &GroupElement, t: i64) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &d)| (x as i128 * t as i128).rem_euclid(d as i128) as u64)
                .collect(),
        )
    }

    /// Mixed-radix index; index order is lexicographic order of residues.
    pub fn index_of(&self, g: &GroupElement) -> u64 {
        g.0.iter()
            .zip(&self.factors)
            .fold(0u64, |acc, (&r, &d)| acc * d + r)
    }

    pub fn element_at(&self, mut index: u64) -> GroupElement {
        let mut residues = vec![0; self.factors.len()];
        for (slot, &d) in residues.iter_mut().zip(&self.factors).rev() {
            *slot = index % d;
            index /= d;
        }
        GroupElement(residues)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    /// Additive order of `g`.
    pub fn element_order(&self, g: &GroupElement) -> u64 {
        g.0.iter()
            .zip(&self.factors)
            .map(|(&r, &d)| d / num_integer::gcd(r, d))
            .fold(1, num_integer::lcm)
    }
}

impl TryFrom<Vec<u64>> for AbelianGroup {
    type Error = Error;
    fn try_from(factors: Vec<u64>) -> Result<Self> {
        AbelianGroup::new(factors)
    }
}

impl From<AbelianGroup> for Vec<u64> {
    fn from(g: AbelianGroup) -> Self {
        g.factors
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AbelianGroup::parse(s)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("Z1");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "Z{d}")?;
        }
        Ok(())
    }
}

/// One representative per isomorphism class of abelian groups of `order`,
/// in invariant-factor form. Cyclic first, then by number of factors and
/// lexicographically.
pub fn enumerate_groups(order: u64) -> Result<Vec<AbelianGroup>> {
    enumerate_groups_with_bound(order, FactorBound::default())
}

pub fn enumerate_groups_with_bound(order: u64, bound: FactorBound) -> Result<Vec<AbelianGroup>> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    let primes = factorize(order, bound)?;
    // For each prime, the exponent partitions; invariant factor d_{k-j}
    // collects p^{lambda_{j+1}} over all primes.
    let per_prime: Vec<(u64, Vec<Vec<u32>>)> =
        primes.iter().map(|&(p, e)| (p, partitions(e))).collect();

    let mut groups = Vec::new();
    let mut choice = vec![0usize; per_prime.len()];
    loop {
        let width = per_prime
            .iter()
            .zip(&choice)
            .map(|((_, parts), &c)| parts[c].len())
            .max()
            .unwrap_or(0);
        let mut factors = vec![1u64; width];
        for ((p, parts), &c) in per_prime.iter().zip(&choice) {
            for (j, &exp) in parts[c].iter().enumerate() {
                factors[width - 1 - j] *= p.pow(exp);
            }
        }
        groups.push(AbelianGroup::new(factors)?);

        // odometer over the partition choices
        let mut i = 0;
        loop {
            if i == choice.len() {
                groups.sort_by(|a, b| (a.rank(), &a.factors).cmp(&(b.rank(), &b.factors)));
                return Ok(groups);
            }
            choice[i] += 1;
            if choice[i] < per_prime[i].1.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Partitions of `e` with parts in non-increasing order.
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rem.min(max)).rev() {
            cur.push(part);
            go(rem - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(e, e, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn construction_rules() {
        assert_eq!(g(&[1, 5, 1, 5]).invariant_factors(), &[5, 5]);
        assert!(AbelianGroup::new(vec![5, 3]).is_err());
        assert!(AbelianGroup::new(vec![0]).is_err());
        assert!(AbelianGroup::new(vec![u64::MAX, u64::MAX]).is_err());
        assert_eq!(AbelianGroup::new(vec![1]).unwrap(), AbelianGroup::trivial());
        assert_eq!(AbelianGroup::trivial().order(), 1);
        assert_eq!(g(&[3, 15]).order(), 45);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(AbelianGroup::parse("Z13").unwrap(), g(&[13]));
        assert_eq!(AbelianGroup::parse("Z5xZ5").unwrap(), g(&[5, 5]));
        assert_eq!(AbelianGroup::parse(" 5, 5 ").unwrap(), g(&[5, 5]));
        assert_eq!(g(&[5, 5]).to_string(), "Z5xZ5");
        assert_eq!(AbelianGroup::trivial().to_string(), "Z1");
        assert!(AbelianGroup::parse("Z3xZ5").is_err());
        assert!(AbelianGroup::parse("Zq").is_err());
        assert!(AbelianGroup::parse("").is_err());
    }

    #[test]
    fn element_arithmetic() {
        let z13 = g(&[13]);
        let e = z13.identity();
        for t in [-7, 0, 1, 99] {
            assert_eq!(z13.scale(&e, t).unwrap(), e);
        }
        let five = z13.element(vec![5]).unwrap();
        assert_eq!(z13.scale(&five, 2).unwrap(), GroupElement(vec![10]));
        assert_eq!(z13.scale(&five, -1).unwrap(), z13.neg(&five).unwrap());

        let z55 = g(&[5, 5]);
        let a = z55.element(vec![1, 2]).unwrap();
        let b = z55.element(vec![4, 4]).unwrap();
        assert_eq!(z55.add(&a, &b).unwrap(), GroupElement(vec![0, 1]));
        assert_eq!(z55.sub(&a, &a).unwrap(), z55.identity());
    }

    #[test]
    fn foreign_elements_are_rejected() {
        let z55 = g(&[5, 5]);
        assert!(z55.element(vec![5, 0]).is_err());
        assert!(z55.add(&GroupElement(vec![1]), &z55.identity()).is_err());
        assert!(matches!(
            z55.neg(&GroupElement(vec![1, 2, 3])),
            Err(Error::ForeignElement { .. })
        ));
    }

    #[test]
    fn index_roundtrip_is_lexicographic() {
        let grp = g(&[3, 6]);
        let all: Vec<_> = grp.elements().collect();
        assert_eq!(all.len(), 18);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (i, el) in all.iter().enumerate() {
            assert_eq!(grp.index_of(el), i as u64);
        }
    }

    #[test]
    fn element_orders() {
        let grp = g(&[5, 25]);
        assert_eq!(grp.element_order(&grp.identity()), 1);
        assert_eq!(grp.element_order(&GroupElement(vec![1, 5])), 5);
        assert_eq!(grp.element_order(&GroupElement(vec![0, 1])), 25);
    }

    #[test]
    fn parse_elements() {
        let list = GroupElement::parse_list("0,0;1,2; 4,4").unwrap();
        assert_eq!(
            list,
            vec![
                GroupElement(vec![0, 0]),
                GroupElement(vec![1, 2]),
                GroupElement(vec![4, 4])
            ]
        );
        assert!(GroupElement::parse("1,x").is_err());
        assert_eq!(GroupElement(vec![3, 4]).to_string(), "3,4");
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_groups(13).unwrap(), vec![g(&[13])]);
        assert_eq!(enumerate_groups(25).unwrap(), vec![g(&[25]), g(&[5, 5])]);
        assert_eq!(enumerate_groups(85).unwrap(), vec![g(&[85])]);
        assert_eq!(enumerate_groups(1).unwrap(), vec![AbelianGroup::trivial()]);
        assert_eq!(
            enumerate_groups(72).unwrap(),
            vec![
                g(&[72]),
                g(&[2, 36]),
                g(&[3, 24]),
                g(&[6, 12]),
                g(&[2, 2, 18]),
                g(&[2, 6, 6])
            ]
        );
        assert_eq!(enumerate_groups(0), Err(Error::ZeroOrder));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|e| partitions(e).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn group_counts_up_to_ten_thousand() {
        for order in 1..=10_000u64 {
            let groups = enumerate_groups(order).unwrap();
            let expected: usize = factorize(order, FactorBound::default())
                .unwrap()
                .iter()
                .map(|&(_, e)| partitions(e).len())
                .product();
            assert_eq!(groups.len(), expected);
            for grp in &groups {
                assert_eq!(grp.order(), order);
                assert!(grp.invariant_factors().windows(2).all(|w| w[1] % w[0] == 0));
            }
            let primes = factorize(order, FactorBound::default()).unwrap();
            if primes.iter().all(|&(_, e)| e == 1) {
                assert_eq!(groups.len(), 1, "squarefree {order}");
            }
            if primes.len() == 1 && primes[0].1 == 2 {
                assert_eq!(groups.len(), 2, "prime square {order}");
            }
        }
    }

    #[test]
    fn serde_roundtrip() {
        let grp = g(&[5, 5]);
        let s = serde_json::to_string(&grp).unwrap();
        assert_eq!(s, "[5,5]");
        let back: AbelianGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(back, grp);
        assert_eq!(back.order(), 25);
        assert!(serde_json::from_str::<AbelianGroup>("[5,3]").is_err());
    }
}
