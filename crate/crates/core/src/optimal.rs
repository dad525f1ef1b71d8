//! Exact optimal-welfare solvers and welfare-ratio bookkeeping.
//!
//! Two deliberately independent routes compute the same quantity:
//!
//! * [`opt_dp`] relies on the structure of the line — some optimal solution
//!   serves sorted agents in contiguous blocks, one block per facility, for
//!   every way of ordering the facilities along the line. It runs a dynamic
//!   program per facility permutation.
//! * [`opt_bruteforce`] enumerates every capacity-feasible assignment with no
//!   structural assumptions and optimizes each facility's location for its
//!   group in closed form.
//!
//! Agreement between the two is one of the strongest checks in the test
//! suite, so neither should be rephrased in terms of the other.

use itertools::Itertools;
use serde::Serialize;

use crate::instance::Instance;
use crate::mechanisms::{MechanismError, MechanismId};
use crate::rational::Rational;
use crate::solution::{welfare, Objective, Solution, SolutionViolation};

/// Search limits for the exact solvers.
pub const MAX_DP_FACILITIES: usize = 5;
pub const MAX_BRUTEFORCE_AGENTS: usize = 8;
pub const MAX_BRUTEFORCE_FACILITIES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OptError {
    #[error("instance too large for exact search: {0}")]
    TooLarge(String),
}

/// Welfare of the best block: for Total the block's cost is minimized by the
/// lower median; for Max by the midpoint of the block's extremes.
fn block_location(inst: &Instance, s: usize, e: usize, obj: Objective) -> Rational {
    match obj {
        Objective::Total => inst.loc(s + (e - s - 1) / 2).clone(),
        Objective::Max => Rational::midpoint(inst.loc(s), inst.loc(e - 1)),
    }
}

fn block_cost(inst: &Instance, prefix: &[Rational], s: usize, e: usize, obj: Objective) -> Rational {
    match obj {
        Objective::Total => {
            let med = s + (e - s - 1) / 2;
            let x = inst.loc(med);
            let left_count = Rational::from_int((med - s) as i64);
            let right_count = Rational::from_int((e - med - 1) as i64);
            let left = x * &left_count - (&prefix[med] - &prefix[s]);
            let right = (&prefix[e] - &prefix[med + 1]) - x * &right_count;
            left + right
        }
        Objective::Max => (inst.loc(e - 1) - inst.loc(s)) / &Rational::from_int(2),
    }
}

fn combine(obj: Objective, block: Rational, rest: &Rational) -> Rational {
    match obj {
        Objective::Total => block + rest,
        Objective::Max => block.max(rest.clone()),
    }
}

/// Exact optimum via dynamic programming over contiguous blocks.
///
/// Every facility permutation is tried; within one permutation, facility
/// `perm[t]` serves the `t`-th (possibly empty) block of sorted agents.
pub fn opt_dp(inst: &Instance, obj: Objective) -> Result<Solution, OptError> {
    let (n, m) = (inst.n(), inst.m());
    if m > MAX_DP_FACILITIES {
        return Err(OptError::TooLarge(format!(
            "{m} facilities exceeds the permutation search limit of {MAX_DP_FACILITIES}"
        )));
    }

    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(Rational::zero());
    for i in 0..n {
        prefix.push(&prefix[i] + inst.loc(i));
    }

    let mut best: Option<(Rational, Vec<usize>, Vec<usize>)> = None;
    for perm in (0..m).permutations(m) {
        // dp[t][s] = best welfare of serving sorted agents s.. with the
        // facilities perm[t..]; None marks infeasible states.
        let mut dp: Vec<Vec<Option<Rational>>> = vec![vec![None; n + 1]; m + 1];
        let mut choice = vec![vec![0usize; n + 1]; m];
        dp[m][n] = Some(Rational::zero());
        for t in (0..m).rev() {
            let cap = inst.capacity(perm[t]);
            for s in 0..=n {
                let mut cur: Option<(Rational, usize)> = None;
                for len in 0..=cap.min(n - s) {
                    let Some(rest) = dp[t + 1][s + len].as_ref() else { continue };
                    let value = if len == 0 {
                        rest.clone()
                    } else {
                        combine(obj, block_cost(inst, &prefix, s, s + len, obj), rest)
                    };
                    if cur.as_ref().is_none_or(|(v, _)| value < *v) {
                        cur = Some((value, len));
                    }
                }
                if let Some((value, len)) = cur {
                    dp[t][s] = Some(value);
                    choice[t][s] = len;
                }
            }
        }
        let Some(value) = dp[0][0].clone() else { continue };
        if best.as_ref().is_none_or(|(v, _, _)| value < *v) {
            let mut lens = Vec::with_capacity(m);
            let mut s = 0;
            for row in choice.iter() {
                let len = row[s];
                lens.push(len);
                s += len;
            }
            best = Some((value, perm, lens));
        }
    }

    // Total capacity covers the agents, so at least the identity permutation
    // admits a feasible plan.
    let (_, perm, lens) = best.expect("a feasible block plan exists");

    let mut block_locs: Vec<Option<Rational>> = vec![None; m];
    let mut assignment = vec![0usize; n];
    let mut s = 0;
    for (t, &len) in lens.iter().enumerate() {
        if len > 0 {
            block_locs[t] = Some(block_location(inst, s, s + len, obj));
            for slot in s..s + len {
                assignment[slot] = perm[t];
            }
            s += len;
        }
    }
    // Idle facilities sit with their nearest serving neighbor in block order,
    // preferring the one on the left.
    let mut carry: Option<Rational> = None;
    for slot in block_locs.iter_mut() {
        match slot {
            Some(loc) => carry = Some(loc.clone()),
            None => *slot = carry.clone(),
        }
    }
    let mut carry: Option<Rational> = None;
    for slot in block_locs.iter_mut().rev() {
        match slot {
            Some(loc) => carry = Some(loc.clone()),
            None => *slot = carry.clone(),
        }
    }

    let mut locations = vec![Rational::zero(); m];
    for (t, slot) in block_locs.into_iter().enumerate() {
        locations[perm[t]] = slot.expect("at least one block is non-empty");
    }
    Ok(Solution::new(locations, assignment))
}

/// Exact optimum by enumerating every capacity-feasible assignment.
pub fn opt_bruteforce(inst: &Instance, obj: Objective) -> Result<Solution, OptError> {
    let (n, m) = (inst.n(), inst.m());
    if n > MAX_BRUTEFORCE_AGENTS {
        return Err(OptError::TooLarge(format!(
            "{n} agents exceeds the assignment enumeration limit of {MAX_BRUTEFORCE_AGENTS}"
        )));
    }
    if m > MAX_BRUTEFORCE_FACILITIES {
        return Err(OptError::TooLarge(format!(
            "{m} facilities exceeds the assignment enumeration limit of {MAX_BRUTEFORCE_FACILITIES}"
        )));
    }

    struct Search<'a> {
        inst: &'a Instance,
        obj: Objective,
        remaining: Vec<usize>,
        assign: Vec<usize>,
        best: Option<(Rational, Vec<usize>)>,
    }

    impl Search<'_> {
        fn group_cost(&self, members: &[usize]) -> Rational {
            let group: Vec<&Rational> = members.iter().map(|&i| self.inst.loc(i)).collect();
            match self.obj {
                Objective::Total => {
                    let med = group[(group.len() - 1) / 2];
                    group.iter().map(|x| crate::rational::distance(x, med)).sum()
                }
                Objective::Max => {
                    (*group.last().unwrap() - group[0]) / &Rational::from_int(2)
                }
            }
        }

        fn evaluate(&mut self) {
            let m = self.inst.m();
            let mut groups: Vec<Vec<usize>> = vec![Vec::new(); m];
            for (i, &j) in self.assign.iter().enumerate() {
                groups[j].push(i);
            }
            let mut value = Rational::zero();
            for members in groups.iter().filter(|g| !g.is_empty()) {
                let cost = self.group_cost(members);
                value = match self.obj {
                    Objective::Total => value + cost,
                    Objective::Max => value.max(cost),
                };
            }
            if self.best.as_ref().is_none_or(|(v, _)| value < *v) {
                self.best = Some((value, self.assign.clone()));
            }
        }

        fn recurse(&mut self, i: usize) {
            if i == self.inst.n() {
                self.evaluate();
                return;
            }
            for j in 0..self.inst.m() {
                if self.remaining[j] > 0 {
                    self.remaining[j] -= 1;
                    self.assign[i] = j;
                    self.recurse(i + 1);
                    self.remaining[j] += 1;
                }
            }
        }
    }

    let mut search = Search {
        inst,
        obj,
        remaining: inst.capacities().to_vec(),
        assign: vec![0; n],
        best: None,
    };
    search.recurse(0);
    let (_, assignment) = search.best.expect("total capacity covers all agents");

    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (i, &j) in assignment.iter().enumerate() {
        groups[j].push(i);
    }
    let mut locations: Vec<Option<Rational>> = vec![None; m];
    for (j, members) in groups.iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        locations[j] = Some(match obj {
            Objective::Total => inst.loc(members[(members.len() - 1) / 2]).clone(),
            Objective::Max => {
                Rational::midpoint(inst.loc(members[0]), inst.loc(*members.last().unwrap()))
            }
        });
    }
    // Idle facilities sit with the nearest serving facility by index,
    // preferring lower indices.
    let placed: Vec<usize> = (0..m).filter(|&j| locations[j].is_some()).collect();
    for j in 0..m {
        if locations[j].is_none() {
            let &host = placed
                .iter()
                .min_by_key(|&&k| (k.abs_diff(j), k))
                .expect("some facility serves agents");
            locations[j] = locations[host].clone();
        }
    }
    let locations = locations.into_iter().map(Option::unwrap).collect();
    Ok(Solution::new(locations, assignment))
}

/// A mechanism's welfare compared against the optimum, as an exact ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ratio {
    Finite(Rational),
    Infinite,
}

impl Ratio {
    /// Ratio of mechanism welfare to optimal welfare. Zero over zero counts
    /// as achieving the optimum exactly.
    pub fn of(mech: &Rational, opt: &Rational) -> Ratio {
        if opt.is_zero() {
            if mech.is_zero() {
                Ratio::Finite(Rational::from_int(1))
            } else {
                Ratio::Infinite
            }
        } else {
            Ratio::Finite(mech / opt)
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Ratio::Infinite)
    }

    /// Canonical rendering: `p/q` for finite values, `inf` otherwise.
    pub fn canonical(&self) -> String {
        match self {
            Ratio::Finite(q) => q.canonical(),
            Ratio::Infinite => "inf".to_string(),
        }
    }

    /// True when the ratio reaches `bound` (an infinite ratio always does).
    pub fn at_least(&self, bound: &Rational) -> bool {
        match self {
            Ratio::Finite(q) => q >= bound,
            Ratio::Infinite => true,
        }
    }

    /// True when the ratio stays within `bound`.
    pub fn at_most(&self, bound: &Rational) -> bool {
        match self {
            Ratio::Finite(q) => q <= bound,
            Ratio::Infinite => false,
        }
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ratio::Finite(q) => write!(f, "{q}"),
            Ratio::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.canonical())
    }
}

/// One measured data point: a mechanism against the optimum on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioRecord {
    pub mechanism: String,
    pub instance: String,
    pub objective: Objective,
    pub mech_welfare: Rational,
    pub opt_welfare: Rational,
    pub ratio: Ratio,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatioError {
    #[error(transparent)]
    Mechanism(#[from] MechanismError),
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error("mechanism produced an invalid solution: {0}")]
    BadSolution(#[from] SolutionViolation),
}

/// Runs the mechanism, solves the optimum and records the welfare ratio.
pub fn opt_welfare_ratio(
    inst: &Instance,
    label: &str,
    mech: &MechanismId,
    obj: Objective,
) -> Result<RatioRecord, RatioError> {
    let sol = mech.run(inst)?;
    let mech_welfare = welfare(inst, &sol, obj)?;
    let opt_sol = opt_dp(inst, obj)?;
    let opt_welfare = welfare(inst, &opt_sol, obj)?;
    let ratio = Ratio::of(&mech_welfare, &opt_welfare);
    Ok(RatioRecord {
        mechanism: mech.to_string(),
        instance: label.to_string(),
        objective: obj,
        mech_welfare,
        opt_welfare,
        ratio,
    })
}
