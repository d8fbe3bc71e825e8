//! Exhaustive backtracking search for arm sets `T` of order-`2n^2+2n+1`
//! groups.
//!
//! A candidate is `{e}` plus `n` inverse pairs `{g, -g}`, each pair named by
//! its smaller element and chosen in increasing order. A ledger counts the
//! ordered pair sums of the partial set; a branch is cut as soon as a
//! non-identity sum occurs three times, or a doubled member `2t` is hit by
//! anything besides `(t, t)`. When all `n` pairs are placed these caps force
//! `T^2 = 2G - T^(2) + 2n e` exactly, and each hit is re-checked with
//! [`check_conditions`].
//!
//! For cyclic groups the search can keep one set per orbit under
//! multiplication by units: the smallest non-identity element of the kept
//! set divides `|G|`, and the set is the lexicographic minimum of its orbit.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{enumerate_groups_with_bound, AbelianGroup, FactorBound, GroupElement};
use crate::radius_two_order;
use crate::ring::IndexArith;
use crate::tiling::{check_conditions, TilingCandidate};

/// Largest `n` searched without an explicit node budget.
pub const MAX_UNBUDGETED_N: u64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Keep one representative per unit orbit (cyclic groups only).
    pub use_automorphism_reduction: bool,
    pub worker_partitions: usize,
    /// Cap on attempted pair additions, per group.
    pub node_budget: Option<u64>,
    pub factor_bound: FactorBound,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            use_automorphism_reduction: true,
            worker_partitions: 1,
            node_budget: None,
            factor_bound: FactorBound::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub group: AbelianGroup,
    pub n: u64,
    /// Each solution as a sorted arm list, in search order.
    pub solutions: Vec<Vec<GroupElement>>,
    pub nodes_explored: u64,
    /// True when the whole tree was explored within the budget.
    pub exhausted: bool,
    pub reduction_applied: bool,
}

struct Ctx<'a> {
    arith: IndexArith<'a>,
    order: u64,
    n: usize,
    reps: Vec<u64>,
    reduce: bool,
    cap: u64,
}

struct Subtree {
    nodes: u64,
    complete: bool,
    /// `(node count when found, sorted arm indices)`.
    solutions: Vec<(u64, Vec<u64>)>,
}

struct State {
    counts: Vec<u8>,
    doubled: Vec<bool>,
    members: Vec<u64>,
    log: Vec<u64>,
    nodes: u64,
    aborted: bool,
    solutions: Vec<(u64, Vec<u64>)>,
}

impl Ctx<'_> {
    fn try_add(&self, st: &mut State, g: u64) -> bool {
        let ng = self.arith.neg(g);
        let start = st.log.len();
        for x in [g, ng] {
            for i in 0..st.members.len() {
                let h = self.arith.add(st.members[i], x);
                if h != 0 {
                    st.counts[h as usize] += 2;
                    st.log.push(h);
                    st.log.push(h);
                }
            }
        }
        for x in [g, ng] {
            let h = self.arith.add(x, x);
            st.counts[h as usize] += 1;
            st.log.push(h);
            st.doubled[h as usize] = true;
        }
        st.members.push(g);
        st.members.push(ng);
        st.log[start..].iter().all(|&h| {
            let cap = if st.doubled[h as usize] { 1 } else { 2 };
            st.counts[h as usize] <= cap
        })
    }

    fn undo(&self, st: &mut State, start: usize) {
        for h in st.log.drain(start..) {
            st.counts[h as usize] -= 1;
        }
        let ng = st.members.pop().expect("member");
        let g = st.members.pop().expect("member");
        for x in [g, ng] {
            st.doubled[self.arith.add(x, x) as usize] = false;
        }
    }

    /// Count a node, or abort if the cap is reached.
    fn attempt(&self, st: &mut State, g: u64) -> Option<(bool, usize)> {
        if st.nodes == self.cap {
            st.aborted = true;
            return None;
        }
        st.nodes += 1;
        let start = st.log.len();
        Some((self.try_add(st, g), start))
    }

    fn dfs(&self, st: &mut State, from: usize, depth: usize, first: u64) {
        if depth == self.n {
            let mut set = st.members.clone();
            set.sort_unstable();
            if !self.reduce || self.is_orbit_minimum(&set) {
                st.solutions.push((st.nodes, set));
            }
            return;
        }
        for i in from..self.reps.len() {
            if self.reps.len() - i < self.n - depth {
                break;
            }
            let g = self.reps[i];
            if self.reduce && g.gcd(&self.order) < first {
                continue;
            }
            let Some((ok, start)) = self.attempt(st, g) else {
                return;
            };
            if ok {
                self.dfs(st, i + 1, depth + 1, first);
            }
            self.undo(st, start);
            if st.aborted {
                return;
            }
        }
    }

    fn subtree(&self, i: usize) -> Subtree {
        let mut st = State {
            counts: vec![0; self.order as usize],
            doubled: vec![false; self.order as usize],
            members: vec![0],
            log: Vec::new(),
            nodes: 0,
            aborted: false,
            solutions: Vec::new(),
        };
        let g = self.reps[i];
        let viable = self.reps.len() - i >= self.n && (!self.reduce || g.gcd(&self.order) == g);
        if viable {
            if let Some((ok, start)) = self.attempt(&mut st, g) {
                if ok {
                    self.dfs(&mut st, i + 1, 1, g);
                }
                self.undo(&mut st, start);
            }
        }
        Subtree {
            nodes: st.nodes,
            complete: !st.aborted,
            solutions: st.solutions,
        }
    }

    /// Whether the sorted set is lexicographically least among its images
    /// under multiplication by units of `Z_m`.
    fn is_orbit_minimum(&self, set: &[u64]) -> bool {
        let m = self.order;
        let mut image = Vec::with_capacity(set.len());
        for u in 2..m {
            if u.gcd(&m) != 1 {
                continue;
            }
            image.clear();
            image.extend(
                set.iter()
                    .map(|&x| ((x as u128 * u as u128) % m as u128) as u64),
            );
            image.sort_unstable();
            if image.as_slice() < set {
                return false;
            }
        }
        true
    }
}

/// Every arm set of `group` for this `n`, up to the optional unit-orbit
/// reduction.
pub fn search_group(group: &AbelianGroup, n: u64, opts: &SearchOptions) -> Result<SearchOutcome> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if opts.worker_partitions == 0 {
        return Err(Error::InvalidArgument(
            "worker_partitions must be at least 1".into(),
        ));
    }
    let expected =
        radius_two_order(n).ok_or_else(|| Error::InvalidArgument(format!("n = {n} too large")))?;
    if group.order() != expected {
        return Err(Error::OrderMismatch {
            order: group.order(),
            expected,
            n,
        });
    }
    if n > MAX_UNBUDGETED_N && opts.node_budget.is_none() {
        return Err(Error::BudgetRequired { n });
    }
    let order = group.order();
    if usize::try_from(order).is_err() {
        return Err(Error::InvalidArgument(format!(
            "group order {order} too large to search"
        )));
    }
    let arith = IndexArith::new(group);
    let reps: Vec<u64> = (1..order).filter(|&i| i < arith.neg(i)).collect();
    let reduce = opts.use_automorphism_reduction && group.is_cyclic();
    let budget = opts.node_budget.unwrap_or(u64::MAX);
    let ctx = Ctx {
        arith,
        order,
        n: n as usize,
        reps,
        reduce,
        cap: budget,
    };

    let count = ctx.reps.len();
    let workers = opts.worker_partitions.min(count.max(1));
    let mut results: Vec<Option<Subtree>> = (0..count).map(|_| None).collect();
    if workers <= 1 {
        for (i, slot) in results.iter_mut().enumerate() {
            *slot = Some(ctx.subtree(i));
        }
    } else {
        let ctx = &ctx;
        let parts: Vec<Vec<(usize, Subtree)>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    s.spawn(move || {
                        (w..count)
                            .step_by(workers)
                            .map(|i| (i, ctx.subtree(i)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker panicked"))
                .collect()
        });
        for (i, sub) in parts.into_iter().flatten() {
            results[i] = Some(sub);
        }
    }

    let mut nodes = 0u64;
    let mut exhausted = true;
    let mut found: Vec<Vec<u64>> = Vec::new();
    for sub in results
        .into_iter()
        .map(|r| r.expect("every subtree searched"))
    {
        let remaining = budget - nodes;
        if sub.complete && sub.nodes <= remaining {
            nodes += sub.nodes;
            found.extend(sub.solutions.into_iter().map(|(_, s)| s));
        } else {
            nodes += remaining;
            found.extend(
                sub.solutions
                    .into_iter()
                    .filter(|(stamp, _)| *stamp <= remaining)
                    .map(|(_, s)| s),
            );
            exhausted = false;
            break;
        }
    }

    let mut solutions = Vec::with_capacity(found.len());
    for set in found {
        let arms: Vec<GroupElement> = set.iter().map(|&i| group.element_at(i)).collect();
        let candidate = TilingCandidate::new(group.clone(), n, arms.clone())?;
        let report = check_conditions(&candidate);
        if !report.accepted() {
            return Err(Error::Internal(format!(
                "search emitted a rejected set: {report:?}"
            )));
        }
        solutions.push(arms);
    }
    Ok(SearchOutcome {
        group: group.clone(),
        n,
        solutions,
        nodes_explored: nodes,
        exhausted,
        reduction_applied: reduce,
    })
}

/// [`search_group`] over every abelian group of order `2n^2+2n+1`.
pub fn search_all(n: u64, opts: &SearchOptions) -> Result<Vec<SearchOutcome>> {
    let order =
        radius_two_order(n).ok_or_else(|| Error::InvalidArgument(format!("n = {n} too large")))?;
    enumerate_groups_with_bound(order, opts.factor_bound)?
        .iter()
        .map(|g| search_group(g, n, opts))
        .collect()
}
