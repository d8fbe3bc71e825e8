//! Per-`n` nonexistence certificates.
//!
//! Every `n >= 3` falls in one of ten branches chosen by `(n mod 3, n mod 5)`.
//! Each branch ends in a quadratic `p(n) <= 0` that a tiling would force;
//! above the branch threshold `p(n) > 0`, which is the certificate. At or
//! below the threshold the certificate falls back to the known verdict table
//! for `3 <= n <= 100` or to an exhaustive search.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::enumerate_groups_with_bound;
use crate::radius_two_order;
use crate::search::{search_all, SearchOptions, SearchOutcome, MAX_UNBUDGETED_N};
use crate::tiling::{check_conditions, known_tiling, TilingCandidate};

/// `a n^2 + b n + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl Polynomial {
    pub const fn new(a: i128, b: i128, c: i128) -> Self {
        Polynomial { a, b, c }
    }

    pub fn eval(&self, n: u64) -> Result<i128> {
        let n = n as i128;
        let overflow = || Error::InvalidArgument(format!("n = {n} too large to evaluate"));
        let quad = n
            .checked_mul(n)
            .and_then(|sq| sq.checked_mul(self.a))
            .ok_or_else(overflow)?;
        let lin = n.checked_mul(self.b).ok_or_else(overflow)?;
        quad.checked_add(lin)
            .and_then(|s| s.checked_add(self.c))
            .ok_or_else(overflow)
    }

    /// Largest `n >= 0` with `p(n) <= 0`, for an upward parabola.
    pub fn largest_nonpositive(&self) -> Option<u64> {
        if self.a <= 0 {
            return None;
        }
        let vertex = u64::try_from((-self.b).div_euclid(2 * self.a)).unwrap_or(0);
        let mut lo = [vertex, vertex + 1]
            .into_iter()
            .filter(|&v| self.eval(v).is_ok_and(|p| p <= 0))
            .max()?;
        let mut hi = lo + 1;
        while self.eval(hi).ok()? <= 0 {
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.eval(mid).ok()? <= 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.a {
            1 => write!(f, "n^2")?,
            -1 => write!(f, "-n^2")?,
            a => write!(f, "{a}n^2")?,
        }
        for (coeff, var) in [(self.b, "n"), (self.c, "")] {
            let sign = if coeff < 0 { '-' } else { '+' };
            match coeff.abs() {
                0 => {}
                1 if !var.is_empty() => write!(f, " {sign} {var}")?,
                abs => write!(f, " {sign} {abs}{var}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchId {
    ZeroMod3,
    ZeroMod5,
    OneMod3OneMod5,
    OneMod3TwoMod5,
    OneMod3ThreeMod5,
    OneMod3FourMod5,
    TwoMod3OneMod5,
    TwoMod3TwoMod5,
    TwoMod3ThreeMod5,
    TwoMod3FourMod5,
}

impl BranchId {
    pub const ALL: [BranchId; 10] = [
        BranchId::ZeroMod3,
        BranchId::ZeroMod5,
        BranchId::OneMod3OneMod5,
        BranchId::OneMod3TwoMod5,
        BranchId::OneMod3ThreeMod5,
        BranchId::OneMod3FourMod5,
        BranchId::TwoMod3OneMod5,
        BranchId::TwoMod3TwoMod5,
        BranchId::TwoMod3ThreeMod5,
        BranchId::TwoMod3FourMod5,
    ];

    /// The branch that handles `n`.
    pub fn for_n(n: u64) -> Self {
        use BranchId::*;
        match (n % 3, n % 5) {
            (0, _) => ZeroMod3,
            (_, 0) => ZeroMod5,
            (1, 1) => OneMod3OneMod5,
            (1, 2) => OneMod3TwoMod5,
            (1, 3) => OneMod3ThreeMod5,
            (1, _) => OneMod3FourMod5,
            (_, 1) => TwoMod3OneMod5,
            (_, 2) => TwoMod3TwoMod5,
            (_, 3) => TwoMod3ThreeMod5,
            _ => TwoMod3FourMod5,
        }
    }

    pub fn spec(self) -> &'static BranchSpec {
        &BRANCHES[self as usize]
    }
}

/// Static description of one branch.
#[derive(Debug)]
pub struct BranchSpec {
    pub id: BranchId,
    pub label: &'static str,
    /// The bound a tiling would have to satisfy, in terms of the class
    /// sizes of `T^(2) T` (`X_i`) and `T^(4) T` (`Y_i`).
    pub bound: &'static str,
    /// `bound` rearranged to `p(n) <= 0`.
    pub polynomial: Polynomial,
    /// Largest `n` not ruled out by `p(n) > 0`.
    pub threshold: u64,
    pub notes: &'static [&'static str],
}

static BRANCHES: [BranchSpec; 10] = [
    BranchSpec {
        id: BranchId::ZeroMod3,
        label: "n ≡ 0 (mod 3)",
        bound: "2n^2 - 2n <= (N-1)/2 * sum_{s>=4} (s-2)|X_s| <= (n+1)n",
        polynomial: Polynomial::new(1, -3, 0),
        threshold: 3,
        notes: &[],
    },
    BranchSpec {
        id: BranchId::ZeroMod5,
        label: "n ≢ 0 (mod 3), n ≡ 0 (mod 5)",
        bound: "case |Y_M| >= 2: 2n^2 - 2n - Delta <= (n+1)n with Delta <= 0",
        polynomial: Polynomial::new(1, -3, 0),
        threshold: 3,
        notes: &[
            "case |Y_M| = 1 is structural: Y_M = {e}; M < 2n+1 gives 2n^2 - 2n - Delta <= (2n-9)n, impossible for Delta <= 0; M = 2n+1 forces T = T^(4) and t^3 = e for all t in T, so |T| <= 3",
        ],
    },
    BranchSpec {
        id: BranchId::OneMod3OneMod5,
        label: "n ≡ 1 (mod 3), n ≡ 1 (mod 5)",
        bound: "(2n+1)^2 >= 5 + 2|X_3| + 4|X_0| + |X_2| - 16n = 5 + (16n^2 - 52n)/3",
        polynomial: Polynomial::new(4, -64, 12),
        threshold: 15,
        notes: &[],
    },
    BranchSpec {
        id: BranchId::OneMod3TwoMod5,
        label: "n ≡ 1 (mod 3), n ≡ 2 (mod 5)",
        bound: "4n^2 + 6n + 2 <= 2|Y_1| + 3|Y_2| + 3|Y_3| + 2|Y_4| <= 2|X_3| + 3|X_1| + 2|X_2| + 3(2n+1) = 8n^2/3 + 34n/3 + 6",
        polynomial: Polynomial::new(4, -16, -12),
        threshold: 6,
        notes: &[
            "threshold 6 is conservative (p(n) <= 0 only up to n = 4); no n in this residue class lies in 3..=6, so the branch is decided by the inequality for every n >= 3",
        ],
    },
    BranchSpec {
        id: BranchId::OneMod3ThreeMod5,
        label: "n ≡ 1 (mod 3), n ≡ 3 (mod 5)",
        bound: "4n^2 + 6n + 2 <= 2|Y_1| + 3|Y_2| + 3|Y_3| + 2|Y_4| <= 2|X_0| + 3|X_2| + 3(4n+1) = 4n^2/3 + 68n/3 + 3",
        polynomial: Polynomial::new(8, -50, -3),
        threshold: 13,
        notes: &[
            "threshold 13 is conservative (p(n) <= 0 only up to n = 6); n = 13 is decided by the verdict table",
        ],
    },
    BranchSpec {
        id: BranchId::OneMod3FourMod5,
        label: "n ≡ 1 (mod 3), n ≡ 4 (mod 5)",
        bound: "4n^2 + 6n + 2 <= 2|Y_1| + 3|Y_2| + 3|Y_3| + 2|Y_4| <= 2|X_2| + 3|X_1| + 3|X_0| + 3(4n+1) = 2n^2 + 18n + 6",
        polynomial: Polynomial::new(2, -12, -4),
        threshold: 6,
        notes: &[],
    },
    BranchSpec {
        id: BranchId::TwoMod3OneMod5,
        label: "n ≡ 2 (mod 3), n ≡ 1 (mod 5)",
        bound: "4n^2 + 6n + 2 <= 2|Y_1| + 3|Y_2| + 3|Y_3| + 2|Y_4| <= 2|X_2| + 3|X_3| + 3|X_4| + 3(4n+1) = 2n^2 + 18n + 3",
        polynomial: Polynomial::new(2, -12, -1),
        threshold: 6,
        notes: &[],
    },
    BranchSpec {
        id: BranchId::TwoMod3TwoMod5,
        label: "n ≡ 2 (mod 3), n ≡ 2 (mod 5)",
        bound: "(2n+1)^2 >= 2|X_1| + 3|X_4| - 3(2n+1) = (14n^2 - 34n)/3 - 1",
        polynomial: Polynomial::new(2, -46, -6),
        threshold: 23,
        notes: &[],
    },
    BranchSpec {
        id: BranchId::TwoMod3ThreeMod5,
        label: "n ≡ 2 (mod 3), n ≡ 3 (mod 5)",
        bound: "(2n+1)^2 >= 4|X_1| + 3|X_4| - 4(4n+1) = (22n^2 - 68n)/3",
        polynomial: Polynomial::new(10, -80, -3),
        threshold: 8,
        notes: &[],
    },
    BranchSpec {
        id: BranchId::TwoMod3FourMod5,
        label: "n ≡ 2 (mod 3), n ≡ 4 (mod 5)",
        bound: "(2n+1)^2 >= 2|X_1| + 4|X_4| - 4(4n+1) = (16n^2 - 68n)/3 - 2",
        polynomial: Polynomial::new(4, -80, -9),
        threshold: 20,
        notes: &[],
    },
];

/// Range covered by the known small-`n` verdict table.
pub const TABLE_MIN: u64 = 3;
pub const TABLE_MAX: u64 = 100;
/// Values in the table range left open by the table.
pub const TABLE_EXCEPTIONS: [u64; 8] = [16, 21, 36, 55, 64, 66, 78, 92];

/// Whether the verdict table alone settles nonexistence for `n`.
pub fn table_rules_out(n: u64) -> bool {
    (TABLE_MIN..=TABLE_MAX).contains(&n) && !TABLE_EXCEPTIONS.contains(&n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueTags {
    pub mod3: u8,
    pub mod5: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchRecord {
    pub id: BranchId,
    pub label: String,
    pub bound: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub polynomial: Polynomial,
    /// Human-readable `p(n) <= 0`.
    pub required: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Justification {
    Inequality,
    Table,
    Search,
    Witness,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertVerdict {
    Nonexistent,
    ExistsWithWitness,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonexistenceCertificate {
    pub n: u64,
    pub residue_tags: ResidueTags,
    pub branch: BranchRecord,
    pub inequality: Inequality,
    /// `p(n)`; a contradiction when positive.
    pub evaluated_value: i128,
    pub threshold: u64,
    pub justification: Justification,
    pub verdict: CertVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<Vec<SearchOutcome>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<TilingCandidate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct CertifyOptions {
    /// For `n <= 6` below the threshold, settle by exhaustive search
    /// instead of the table.
    pub search_fallback: bool,
    pub search: SearchOptions,
}

pub fn certify(n: u64) -> Result<NonexistenceCertificate> {
    certify_with(n, &CertifyOptions::default())
}

pub fn certify_with(n: u64, opts: &CertifyOptions) -> Result<NonexistenceCertificate> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let id = BranchId::for_n(n);
    let spec = id.spec();
    let evaluated_value = spec.polynomial.eval(n)?;
    let mut cert = NonexistenceCertificate {
        n,
        residue_tags: ResidueTags {
            mod3: (n % 3) as u8,
            mod5: (n % 5) as u8,
        },
        branch: BranchRecord {
            id,
            label: spec.label.to_string(),
            bound: spec.bound.to_string(),
        },
        inequality: Inequality {
            polynomial: spec.polynomial,
            required: format!("{} <= 0", spec.polynomial),
        },
        evaluated_value,
        threshold: spec.threshold,
        justification: Justification::None,
        verdict: CertVerdict::Unresolved,
        search: None,
        witness: None,
        notes: spec.notes.iter().map(|s| s.to_string()).collect(),
    };

    if let Some(witness) = known_tiling(n) {
        if check_conditions(&witness).accepted() {
            cert.justification = Justification::Witness;
            cert.verdict = CertVerdict::ExistsWithWitness;
            cert.witness = Some(witness);
        }
        return Ok(cert);
    }
    if n > spec.threshold && evaluated_value > 0 {
        cert.justification = Justification::Inequality;
        cert.verdict = CertVerdict::Nonexistent;
    } else if opts.search_fallback && n <= MAX_UNBUDGETED_N {
        let outcomes = search_all(n, &opts.search)?;
        if outcomes
            .iter()
            .all(|o| o.exhausted && o.solutions.is_empty())
        {
            cert.justification = Justification::Search;
            cert.verdict = CertVerdict::Nonexistent;
        }
        cert.search = Some(outcomes);
    } else if table_rules_out(n) {
        cert.justification = Justification::Table;
        cert.verdict = CertVerdict::Nonexistent;
    }
    Ok(cert)
}

impl NonexistenceCertificate {
    /// Re-derive everything the certificate claims. Returns the first
    /// inconsistency found.
    pub fn self_check(&self) -> std::result::Result<(), String> {
        let id = BranchId::for_n(self.n);
        if self.branch.id != id {
            return Err(format!(
                "branch {:?} does not match n = {}",
                self.branch.id, self.n
            ));
        }
        if self.residue_tags.mod3 as u64 != self.n % 3
            || self.residue_tags.mod5 as u64 != self.n % 5
        {
            return Err("residue tags do not match n".into());
        }
        let spec = id.spec();
        if self.inequality.polynomial != spec.polynomial || self.threshold != spec.threshold {
            return Err("polynomial or threshold differs from the branch".into());
        }
        let value = self
            .inequality
            .polynomial
            .eval(self.n)
            .map_err(|e| e.to_string())?;
        if value != self.evaluated_value {
            return Err(format!(
                "p({}) = {value}, certificate says {}",
                self.n, self.evaluated_value
            ));
        }
        match (self.justification, self.verdict) {
            (Justification::Inequality, CertVerdict::Nonexistent) => {
                if self.n <= self.threshold {
                    return Err("inequality used at or below the threshold".into());
                }
                if value <= 0 {
                    return Err(format!("p({}) = {value} is not a contradiction", self.n));
                }
            }
            (Justification::Table, CertVerdict::Nonexistent) => {
                if !table_rules_out(self.n) {
                    return Err(format!("n = {} is not settled by the table", self.n));
                }
            }
            (Justification::Search, CertVerdict::Nonexistent) => {
                let outcomes = self
                    .search
                    .as_ref()
                    .ok_or("search justification without outcomes")?;
                let order = radius_two_order(self.n).ok_or("order overflow")?;
                let groups = enumerate_groups_with_bound(order, Default::default())
                    .map_err(|e| e.to_string())?;
                let searched: Vec<_> = outcomes.iter().map(|o| &o.group).collect();
                if searched != groups.iter().collect::<Vec<_>>() {
                    return Err("search does not cover every group of the order".into());
                }
                if !outcomes
                    .iter()
                    .all(|o| o.n == self.n && o.exhausted && o.solutions.is_empty())
                {
                    return Err("search was not exhaustive and empty".into());
                }
            }
            (Justification::Witness, CertVerdict::ExistsWithWitness) => {
                let w = self
                    .witness
                    .as_ref()
                    .ok_or("witness justification without witness")?;
                if w.n() != self.n || !check_conditions(w).accepted() {
                    return Err("witness does not pass the conditions".into());
                }
            }
            (Justification::None, CertVerdict::Unresolved) => {}
            (j, v) => return Err(format!("justification {j:?} cannot support verdict {v:?}")),
        }
        Ok(())
    }

    pub fn is_settled(&self) -> bool {
        self.verdict != CertVerdict::Unresolved
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeSummary {
    pub lo: u64,
    pub hi: u64,
    pub certificates: Vec<NonexistenceCertificate>,
    pub by_justification: BTreeMap<Justification, u64>,
    /// Values of `n` left unresolved.
    pub gaps: Vec<u64>,
}

pub fn certify_range(lo: u64, hi: u64, opts: &CertifyOptions) -> Result<RangeSummary> {
    if lo == 0 || lo > hi {
        return Err(Error::InvalidArgument(format!("bad range {lo}:{hi}")));
    }
    let mut certificates = Vec::with_capacity((hi - lo + 1) as usize);
    let mut by_justification = BTreeMap::new();
    let mut gaps = Vec::new();
    for n in lo..=hi {
        let cert = certify_with(n, opts)?;
        *by_justification.entry(cert.justification).or_insert(0) += 1;
        if !cert.is_settled() {
            gaps.push(n);
        }
        certificates.push(cert);
    }
    Ok(RangeSummary {
        lo,
        hi,
        certificates,
        by_justification,
        gaps,
    })
}
