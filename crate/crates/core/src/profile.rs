//! Multiplicity profiles of `T^(k) T` for `k = 2, 4`.
//!
//! Writing `T^(2) T = sum_i i X_i` partitions `G` into classes `X_i` by
//! coefficient; likewise `Y_i` for `T^(4) T`. On a genuine arm set the class
//! sizes obey three counting identities (total size, weighted size, and the
//! inclusion-exclusion count of the translates `a T`), and the `k = 4`
//! profile determines a correction term `Delta` in `[-2n, 0]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::radius_two_order;
use crate::ring::{GroupRingElement, IndexArith};
use crate::tiling::{check_conditions, TilingCandidate};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityProfile {
    /// Power-map exponent, 2 or 4.
    pub k: u8,
    pub n: u64,
    /// Multiplicity `i` to class size; the 0-class is always present.
    pub histogram: BTreeMap<u64, u64>,
    /// Largest multiplicity with a nonempty class.
    pub max_index: u64,
}

impl MultiplicityProfile {
    /// Build from a raw histogram (zero-size classes are dropped, except the
    /// 0-class which is kept explicitly).
    pub fn from_histogram(k: u8, n: u64, histogram: BTreeMap<u64, u64>) -> Self {
        let mut histogram: BTreeMap<u64, u64> =
            histogram.into_iter().filter(|&(_, s)| s > 0).collect();
        histogram.entry(0).or_insert(0);
        let max_index = histogram
            .iter()
            .filter(|&(_, &s)| s > 0)
            .map(|(&i, _)| i)
            .max()
            .unwrap_or(0);
        MultiplicityProfile {
            k,
            n,
            histogram,
            max_index,
        }
    }

    pub fn class_size(&self, i: u64) -> u64 {
        self.histogram.get(&i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.histogram.values().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

/// One identity or inequality with both sides evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: i128,
    pub relation: Relation,
    pub rhs: i128,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(name: &str, lhs: i128, relation: Relation, rhs: i128) -> Self {
        let holds = match relation {
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Le => lhs <= rhs,
        };
        IdentityCheck {
            name: name.to_string(),
            lhs,
            relation,
            rhs,
            holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `delta = delta_raw - 2n`, where `delta_raw` counts the translate pairs
/// of `T^(4) T` that meet in one element rather than two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub delta: i128,
    pub delta_raw: i128,
}

pub const TOTAL_SIZE: &str = "class-sizes-sum-to-order";
pub const WEIGHTED_SIZE: &str = "weighted-sum-is-(2n+1)^2";
pub const INCLUSION_EXCLUSION: &str = "inclusion-exclusion";
pub const DELTA_LOWER: &str = "delta>=-2n";
pub const DELTA_UPPER: &str = "delta<=0";
pub const Y_LOWER_BOUND: &str = "2Y1+3Y2+3Y3+2Y4>=4n^2+6n+2";

/// `T^(k) T` as a group-ring element, for an accepted candidate.
pub fn power_product(c: &TilingCandidate, k: u8) -> Result<GroupRingElement> {
    if k != 2 && k != 4 {
        return Err(Error::UnsupportedExponent(k as i64));
    }
    let report = check_conditions(c);
    if !report.accepted() {
        return Err(Error::Rejected(format!("{:?}", report.failed_condition)));
    }
    let t = c.as_ring_element();
    t.power_map(k as i64).mul(&t)
}

/// Histogram of the coefficients of `T^(k) T` over all of `G`.
pub fn profile(c: &TilingCandidate, k: u8) -> Result<MultiplicityProfile> {
    let product = power_product(c, k)?;
    let mut histogram = BTreeMap::new();
    for (_, coeff) in product.indexed_terms() {
        *histogram.entry(coeff as u64).or_insert(0) += 1;
    }
    let zero_class = c.group().order() - product.support_len() as u64;
    histogram.insert(0, zero_class);
    Ok(MultiplicityProfile::from_histogram(k, c.n(), histogram))
}

/// The classes themselves: multiplicity to the elements with that
/// coefficient, each list in lexicographic order.
pub fn profile_classes(c: &TilingCandidate, k: u8) -> Result<BTreeMap<u64, Vec<GroupElement>>> {
    let product = power_product(c, k)?;
    let mut classes: BTreeMap<u64, Vec<GroupElement>> = BTreeMap::new();
    for g in c.group().elements() {
        let coeff = product.coefficient(&g)? as u64;
        classes.entry(coeff).or_default().push(g);
    }
    Ok(classes)
}

fn sums(p: &MultiplicityProfile) -> (i128, i128, i128, i128) {
    let total: i128 = p.histogram.values().map(|&s| s as i128).sum();
    let weighted: i128 = p
        .histogram
        .iter()
        .map(|(&i, &s)| i as i128 * s as i128)
        .sum();
    let nonzero: i128 = p
        .histogram
        .iter()
        .filter(|(&i, _)| i >= 1)
        .map(|(_, &s)| s as i128)
        .sum();
    let excess: i128 = p
        .histogram
        .iter()
        .filter(|(&i, _)| i >= 3)
        .map(|(&i, &s)| {
            let i = i as i128;
            (i - 1) * (i - 2) / 2 * s as i128
        })
        .sum();
    (total, weighted, nonzero, excess)
}

fn global_checks(p: &MultiplicityProfile) -> Result<(Vec<IdentityCheck>, i128, i128, i128)> {
    let order = radius_two_order(p.n)
        .ok_or_else(|| Error::InvalidArgument(format!("n = {} too large", p.n)))?
        as i128;
    let n = p.n as i128;
    let (total, weighted, nonzero, excess) = sums(p);
    let checks = vec![
        IdentityCheck::new(TOTAL_SIZE, total, Relation::Eq, order),
        IdentityCheck::new(
            WEIGHTED_SIZE,
            weighted,
            Relation::Eq,
            (2 * n + 1) * (2 * n + 1),
        ),
    ];
    Ok((checks, n, nonzero, excess))
}

/// Total size, weighted size and the inclusion-exclusion identity
/// `sum_{i>=1} |X_i| = 4n + 1 + sum_{s>=3} (s-1)(s-2)/2 |X_s|`.
pub fn check_identities_k2(p: &MultiplicityProfile) -> Result<IdentityReport> {
    if p.k != 2 {
        return Err(Error::UnsupportedExponent(p.k as i64));
    }
    let (mut checks, n, nonzero, excess) = global_checks(p)?;
    checks.push(IdentityCheck::new(
        INCLUSION_EXCLUSION,
        nonzero,
        Relation::Eq,
        4 * n + 1 + excess,
    ));
    Ok(IdentityReport { checks })
}

/// Solve `sum_{i>=1} |Y_i| = 4n + 1 + Delta + sum_{s>=3} (s-1)(s-2)/2 |Y_s|`
/// for `Delta`, then check `-2n <= Delta <= 0` and
/// `2|Y_1| + 3|Y_2| + 3|Y_3| + 2|Y_4| >= 4n^2 + 6n + 2`.
pub fn check_identities_k4(p: &MultiplicityProfile) -> Result<(DeltaReport, IdentityReport)> {
    if p.k != 4 {
        return Err(Error::UnsupportedExponent(p.k as i64));
    }
    let (mut checks, n, nonzero, excess) = global_checks(p)?;
    let delta = nonzero - 4 * n - 1 - excess;
    checks.push(IdentityCheck::new(DELTA_LOWER, delta, Relation::Ge, -2 * n));
    checks.push(IdentityCheck::new(DELTA_UPPER, delta, Relation::Le, 0));
    let y = |i: u64| p.class_size(i) as i128;
    let lhs = 2 * y(1) + 3 * y(2) + 3 * y(3) + 2 * y(4);
    checks.push(IdentityCheck::new(
        Y_LOWER_BOUND,
        lhs,
        Relation::Ge,
        4 * n * n + 6 * n + 2,
    ));
    Ok((
        DeltaReport {
            delta,
            delta_raw: delta + 2 * n,
        },
        IdentityReport { checks },
    ))
}

/// Profile plus every identity check that applies to its exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub profile: MultiplicityProfile,
    pub identities: IdentityReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<DeltaReport>,
}

impl ProfileReport {
    pub fn all_hold(&self) -> bool {
        self.identities.all_hold()
    }
}

pub fn profile_report(c: &TilingCandidate, k: u8) -> Result<ProfileReport> {
    let p = profile(c, k)?;
    let (identities, delta) = if k == 2 {
        (check_identities_k2(&p)?, None)
    } else {
        let (d, r) = check_identities_k4(&p)?;
        (r, Some(d))
    };
    Ok(ProfileReport {
        profile: p,
        identities,
        delta,
    })
}

/// `delta_raw` counted directly: unordered pairs `{s, t}` of distinct
/// non-identity arms with `4t - 4s` in `T^(2)`.
pub fn delta_by_pair_count(c: &TilingCandidate) -> u64 {
    let g = c.group();
    let arith = IndexArith::new(g);
    let doubled = c.as_ring_element().power_map(2);
    let quads: Vec<u64> = c
        .arms()
        .iter()
        .filter(|t| **t != g.identity())
        .map(|t| arith.scale(g.index_of(t), 4))
        .collect();
    let mut count = 0;
    for i in 0..quads.len() {
        for j in i + 1..quads.len() {
            let diff = arith.add(quads[j], arith.neg(quads[i]));
            if doubled.coeff_at(diff) != 0 {
                count += 1;
            }
        }
    }
    count
}

/// `|aT ∩ bT|` for every unordered pair of distinct `a, b` in `T^(k)`.
pub fn translate_overlaps(
    c: &TilingCandidate,
    k: u8,
) -> Result<Vec<(GroupElement, GroupElement, u64)>> {
    if k != 2 && k != 4 {
        return Err(Error::UnsupportedExponent(k as i64));
    }
    let g = c.group();
    let arith = IndexArith::new(g);
    let t = c.as_ring_element();
    let shifts: Vec<u64> = t
        .power_map(k as i64)
        .indexed_terms()
        .map(|(i, _)| i)
        .collect();
    let arms: Vec<u64> = t.indexed_terms().map(|(i, _)| i).collect();
    let translate = |a: u64| -> std::collections::BTreeSet<u64> {
        arms.iter().map(|&x| arith.add(a, x)).collect()
    };
    let translates: Vec<_> = shifts.iter().map(|&a| translate(a)).collect();
    let mut out = Vec::new();
    for i in 0..shifts.len() {
        for j in i + 1..shifts.len() {
            let overlap = translates[i].intersection(&translates[j]).count() as u64;
            out.push((g.element_at(shifts[i]), g.element_at(shifts[j]), overlap));
        }
    }
    Ok(out)
}

/// Closed-form profile of `T^(2) T` forced by the residue of `n` mod 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PredictedProfile {
    /// `n ≡ 1, 2 (mod 3)`: every class size is determined.
    Exact {
        n: u64,
        histogram: BTreeMap<u64, u64>,
    },
    /// `n ≡ 0 (mod 3)`: only the class sizes summed by residue of the
    /// multiplicity are determined.
    ResidueSums {
        n: u64,
        mult_0_mod_3: u64,
        mult_1_mod_3: u64,
        mult_2_mod_3: u64,
    },
}

impl PredictedProfile {
    pub fn as_profile(&self) -> Option<MultiplicityProfile> {
        match self {
            PredictedProfile::Exact { n, histogram } => Some(MultiplicityProfile::from_histogram(
                2,
                *n,
                histogram.clone(),
            )),
            PredictedProfile::ResidueSums { .. } => None,
        }
    }
}

fn exact_third(n: u64, what: &'static str, numerator: i128) -> Result<u64> {
    if numerator < 0 || numerator % 3 != 0 {
        return Err(Error::NonIntegral { n, what });
    }
    u64::try_from(numerator / 3).map_err(|_| Error::InvalidArgument(format!("n = {n} too large")))
}

/// The profile an arm set would have to have for this `n`.
///
/// * `n ≡ 1`: `|X_3| = 4n(n-1)/3`, `|X_0| = 2n(n-1)/3`, `|X_2| = 4n`,
///   `|X_1| = 1`, nothing above 3.
/// * `n ≡ 2`: `|X_1| = (4n^2-2n+3)/3`, `|X_2| = |X_3| = 2n`,
///   `|X_4| = (2n^2-4n)/3`, `|X_0| = 0`, nothing above 4.
/// * `n ≡ 0`: classes with multiplicity `≡ 1, 2, 0 (mod 3)` total `2n+1`,
///   `2n^2` and `0` elements.
pub fn predicted_profile_mod3(n: u64) -> Result<PredictedProfile> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if radius_two_order(n).is_none() {
        return Err(Error::InvalidArgument(format!("n = {n} too large")));
    }
    let m = n as i128;
    let histogram: BTreeMap<u64, u64> = match n % 3 {
        0 => {
            return Ok(PredictedProfile::ResidueSums {
                n,
                mult_0_mod_3: 0,
                mult_1_mod_3: 2 * n + 1,
                mult_2_mod_3: 2 * n * n,
            })
        }
        1 => [
            (0, exact_third(n, "|X_0| = 2n(n-1)/3", 2 * m * (m - 1))?),
            (1, 1),
            (2, 4 * n),
            (3, exact_third(n, "|X_3| = 4n(n-1)/3", 4 * m * (m - 1))?),
        ]
        .into(),
        _ => [
            (0, 0),
            (
                1,
                exact_third(n, "|X_1| = (4n^2-2n+3)/3", 4 * m * m - 2 * m + 3)?,
            ),
            (2, 2 * n),
            (3, 2 * n),
            (4, exact_third(n, "|X_4| = (2n^2-4n)/3", 2 * m * m - 4 * m)?),
        ]
        .into(),
    };
    Ok(PredictedProfile::Exact { n, histogram })
}
