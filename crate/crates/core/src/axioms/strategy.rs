//! Strategy proofness: no agent (and, in the group variant, no co-located
//! coalition) can cut its own distance by misreporting.
//!
//! Misreports are drawn from a [`DeviationGrid`]. What a deviator achieves
//! depends on the mechanism: an imposing mechanism binds it to its assigned
//! facility, while a non-imposing one lets it walk to whichever facility ends
//! up nearest its true location.

use serde::Serialize;

use crate::instance::Instance;
use crate::mechanisms::MechanismId;
use crate::rational::{distance, Rational};
use crate::solution::Solution;

use super::{AxiomCheck, AxiomError, DeviationGrid};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpWitness {
    /// Deviating agent id, 0-based.
    pub agent: usize,
    pub misreport: Rational,
    pub truthful_distance: Rational,
    pub deviated_distance: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSpWitness {
    /// Deviating coalition, 0-based ids in ascending order.
    pub members: Vec<usize>,
    /// The common misreport.
    pub misreport: Rational,
    /// Per member: (id, truthful distance, deviated distance).
    pub gains: Vec<(usize, Rational, Rational)>,
}

/// Distance the agent with `id` ends up traveling under `sol`, measured from
/// its true location in `truth`.
fn achieved_distance(
    mech: &MechanismId,
    truth: &Instance,
    deviated: &Instance,
    sol: &Solution,
    id: usize,
) -> Rational {
    let true_loc = truth.location_of_id(id).expect("id belongs to the instance");
    if mech.is_imposing() {
        let pos = deviated.sorted_pos_of_id(id).expect("id belongs to the instance");
        distance(true_loc, &sol.locations[sol.assignment[pos]])
    } else {
        sol.locations.iter().map(|y| distance(true_loc, y)).min().expect("at least one facility")
    }
}

/// Searches for a single agent that gains by lying.
///
/// Agents are tried in id order and misreports in grid order, so the first
/// violation found is deterministic.
pub fn find_sp_violation(
    mech: &MechanismId,
    inst: &Instance,
    grid: &DeviationGrid,
) -> Result<AxiomCheck<SpWitness>, AxiomError> {
    let truthful = mech.run(inst)?;
    truthful.validate(inst)?;
    let mut cases = 0;
    for id in 0..inst.n() {
        let true_loc = inst.location_of_id(id).expect("id in range");
        let baseline = achieved_distance(mech, inst, inst, &truthful, id);
        for r in grid.candidates(inst, &truthful, true_loc) {
            if r == *true_loc {
                continue;
            }
            cases += 1;
            let deviated = inst.with_report(id, r.clone())?;
            let sol = mech.run(&deviated)?;
            sol.validate(&deviated)?;
            let achieved = achieved_distance(mech, inst, &deviated, &sol, id);
            if achieved < baseline {
                return Ok(AxiomCheck::failed(
                    false,
                    cases,
                    SpWitness {
                        agent: id,
                        misreport: r,
                        truthful_distance: baseline,
                        deviated_distance: achieved,
                    },
                ));
            }
        }
    }
    Ok(AxiomCheck::passed(false, cases))
}

/// Maximal groups of agents sharing a reported location, each group as
/// ascending ids, groups ordered by location.
fn colocated_groups(inst: &Instance) -> Vec<Vec<usize>> {
    let mut groups: Vec<(Rational, Vec<usize>)> = Vec::new();
    for i in 0..inst.n() {
        let loc = inst.loc(i).clone();
        let id = inst.agents()[i].id;
        match groups.last_mut() {
            Some((l, ids)) if *l == loc => ids.push(id),
            _ => groups.push((loc, vec![id])),
        }
    }
    groups
        .into_iter()
        .map(|(_, mut ids)| {
            ids.sort_unstable();
            ids
        })
        .collect()
}

/// Searches for a co-located coalition whose members all strictly gain by
/// reporting a common location.
///
/// Every nonempty subset of every maximal co-located group of size at least
/// two is tried; a lone agent with a unique location is individual deviation
/// territory, covered by [`find_sp_violation`].
pub fn check_partial_group_sp(
    mech: &MechanismId,
    inst: &Instance,
    grid: &DeviationGrid,
) -> Result<AxiomCheck<GroupSpWitness>, AxiomError> {
    let truthful = mech.run(inst)?;
    truthful.validate(inst)?;
    let mut cases = 0;
    for group in colocated_groups(inst) {
        if group.len() < 2 {
            continue;
        }
        let group_loc = inst.location_of_id(group[0]).expect("id in range").clone();
        let candidates = grid.candidates(inst, &truthful, &group_loc);
        let baselines: Vec<Rational> = group
            .iter()
            .map(|&id| achieved_distance(mech, inst, inst, &truthful, id))
            .collect();
        // Subsets in binary-counting order: {1st}, {2nd}, {1st,2nd}, …
        for mask in 1u32..(1u32 << group.len()) {
            let members: Vec<usize> = (0..group.len())
                .filter(|&b| mask & (1 << b) != 0)
                .map(|b| group[b])
                .collect();
            for r in &candidates {
                if *r == group_loc {
                    continue;
                }
                cases += 1;
                let deviated = inst.with_group_report(&members, r.clone())?;
                let sol = mech.run(&deviated)?;
                sol.validate(&deviated)?;
                let gains: Vec<(usize, Rational, Rational)> = members
                    .iter()
                    .map(|&id| {
                        let idx = group.iter().position(|&g| g == id).unwrap();
                        (
                            id,
                            baselines[idx].clone(),
                            achieved_distance(mech, inst, &deviated, &sol, id),
                        )
                    })
                    .collect();
                if gains.iter().all(|(_, before, after)| after < before) {
                    return Ok(AxiomCheck::failed(
                        false,
                        cases,
                        GroupSpWitness { members, misreport: r.clone(), gains },
                    ));
                }
            }
        }
    }
    Ok(AxiomCheck::passed(false, cases))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn inst(locs: &[&str], caps: &[usize]) -> Instance {
        Instance::new(locs.iter().map(|s| q(s)).collect(), caps.to_vec()).unwrap()
    }

    fn mech(s: &str) -> MechanismId {
        s.parse().unwrap()
    }

    #[test]
    fn median_resists_individual_misreports() {
        let i = inst(&["0", "2/5", "1"], &[3]);
        let check = find_sp_violation(&mech("percentile:1/2"), &i, &DeviationGrid::default()).unwrap();
        assert!(check.holds());
        assert!(!check.exhaustive);
        assert!(check.cases > 0);
    }

    #[test]
    fn innerpoint_resists_individual_misreports_on_a_tight_instance() {
        let i = inst(&["0", "3/4", "1", "1"], &[2, 2]);
        let check = find_sp_violation(&mech("innerpoint"), &i, &DeviationGrid::default()).unwrap();
        assert!(check.holds());
    }

    #[test]
    fn capacitated_endpoint_is_manipulable_by_the_middle_agent() {
        // Truthful: facilities at 0 and 1, blocks of two; the agent at 3/4 is
        // bound to the facility at 0. Reporting beyond 1 flips it into the
        // right block.
        let i = inst(&["0", "3/4", "1", "1"], &[2, 2]);
        let check = find_sp_violation(&mech("jlk:cap:1,1"), &i, &DeviationGrid::default()).unwrap();
        assert!(!check.holds());
        let w = check.witness.unwrap();
        assert_eq!(w.agent, 1);
        assert!(w.deviated_distance < w.truthful_distance);
        assert_eq!(w.truthful_distance, q("3/4"));
        // Replay the witness.
        let deviated = i.with_report(w.agent, w.misreport.clone()).unwrap();
        let sol = mech("jlk:cap:1,1").run(&deviated).unwrap();
        let pos = deviated.sorted_pos_of_id(w.agent).unwrap();
        let achieved = distance(&q("3/4"), &sol.locations[sol.assignment[pos]]);
        assert_eq!(achieved, w.deviated_distance);
    }

    #[test]
    fn non_imposing_deviator_walks_to_the_nearest_facility() {
        // Agent 1 truly at 0 reports 2, moving both facilities to (1, 2).
        let i = inst(&["0", "1"], &[1, 1]);
        let deviated = i.with_report(0, q("2")).unwrap();
        // Without capacities it walks from its true location to the nearer
        // facility at 1; the capacitated variant binds it to its block's
        // facility at 2.
        let free = mech("jlk:1,1");
        let sol = free.run(&deviated).unwrap();
        assert_eq!(achieved_distance(&free, &i, &deviated, &sol, 0), q("1"));
        let bound = mech("jlk:cap:1,1");
        let sol = bound.run(&deviated).unwrap();
        assert_eq!(achieved_distance(&bound, &i, &deviated, &sol, 0), q("2"));
    }

    #[test]
    fn uncapacitated_peak_rules_resist_misreports() {
        // Without binding assignments, the peak rules give no agent a way to
        // pull a facility closer to itself.
        for (locs, m) in [
            (&["0", "2/5", "1"][..], "twoleftpeaks"),
            (&["0", "1/2", "2"][..], "jlk:1,1"),
            (&["0", "1", "1", "1"][..], "tworightpeaks"),
        ] {
            let n = locs.len();
            let i = inst(locs, &[n, n]);
            let check =
                find_sp_violation(&m.parse().unwrap(), &i, &DeviationGrid::default()).unwrap();
            assert!(check.holds(), "{m}");
        }
    }

    #[test]
    fn innerpoint_blocks_the_spec_jump_but_flags_nothing() {
        // Tight capacities mean a deviator that jumps the boundary swaps
        // blocks but lands farther away, not closer.
        let i = inst(&["0", "1/2", "1", "1"], &[2, 2]);
        let check = find_sp_violation(&mech("innerpoint"), &i, &DeviationGrid::default()).unwrap();
        assert!(check.holds());
    }

    #[test]
    fn colocated_pair_manipulates_capacitated_endpoint_via_a_subset() {
        // The pair at 9/10 shares a location. The full pair gains nothing by
        // moving together, but the lone subset member that overshoots to the
        // right drags the right facility toward itself.
        let i = inst(&["0", "9/10", "9/10", "1"], &[2, 2]);
        let check =
            check_partial_group_sp(&mech("jlk:cap:1,1"), &i, &DeviationGrid::default()).unwrap();
        assert!(!check.holds());
        let w = check.witness.unwrap();
        assert!(w.members.len() < 2, "a strict subset should already gain");
        for (_, before, after) in &w.gains {
            assert!(after < before);
        }
    }

    #[test]
    fn group_check_skips_instances_without_colocated_pairs() {
        let i = inst(&["0", "1/3", "1"], &[3]);
        let check =
            check_partial_group_sp(&mech("percentile:1/2"), &i, &DeviationGrid::default()).unwrap();
        assert!(check.holds());
        assert_eq!(check.cases, 0);
    }

    #[test]
    fn innerpoint_resists_colocated_coalitions_here() {
        let i = inst(&["0", "9/10", "9/10", "1"], &[2, 2]);
        let check =
            check_partial_group_sp(&mech("innerpoint"), &i, &DeviationGrid::default()).unwrap();
        assert!(check.holds());
        assert!(check.cases > 0);
    }

    #[test]
    fn colocated_groups_are_maximal_and_sorted() {
        let i = inst(&["1", "0", "1", "0", "1/2"], &[5]);
        let groups = colocated_groups(&i);
        assert_eq!(groups, vec![vec![1, 3], vec![4], vec![0, 2]]);
    }
}
