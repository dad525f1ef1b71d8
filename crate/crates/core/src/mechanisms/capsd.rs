//! Serial dictatorship with capacities.
//!
//! Agents are served in a fixed dictatorship order. While facilities remain
//! unopened, each agent either joins an already-open facility sitting exactly
//! at their reported location (if it has room) or opens the next facility
//! there. Once every facility is open, agents take the nearest facility with
//! remaining capacity — except that an agent facing a tie between two or more
//! nearest facilities is deferred, and all deferred agents are resolved at the
//! end (ties then break toward the lower facility index).

use crate::instance::Instance;
use crate::rational::distance;
use crate::solution::Solution;

use super::{CapSdOrder, MechanismError};

pub fn run_capsd(inst: &Instance, order: &CapSdOrder) -> Result<Solution, MechanismError> {
    let n = inst.n();
    let m = inst.m();
    let order = order.resolve(n)?;

    let mut locations = Vec::with_capacity(m);
    let mut remaining: Vec<usize> = inst.capacities().to_vec();
    let mut assignment = vec![usize::MAX; n];
    let mut deferred: Vec<usize> = Vec::new();

    for &id in &order {
        let pos = inst.sorted_pos_of_id(id).expect("order ids validated against n");
        let x = inst.loc(pos);
        if locations.len() < m {
            // Opening phase: join a same-location open facility or open a new
            // one at the agent's report.
            let joinable = (0..locations.len()).find(|&j| locations[j] == *x && remaining[j] > 0);
            let j = match joinable {
                Some(j) => j,
                None => {
                    locations.push(x.clone());
                    locations.len() - 1
                }
            };
            assignment[pos] = j;
            remaining[j] -= 1;
        } else {
            let open: Vec<usize> = (0..m).filter(|&j| remaining[j] > 0).collect();
            let best = open.iter().map(|&j| distance(x, &locations[j])).min().unwrap();
            let nearest: Vec<usize> =
                open.into_iter().filter(|&j| distance(x, &locations[j]) == best).collect();
            if nearest.len() > 1 {
                deferred.push(id);
            } else {
                let j = nearest[0];
                assignment[pos] = j;
                remaining[j] -= 1;
            }
        }
    }

    // Facilities never opened (more facilities than agents) pile onto the last
    // opened site.
    while locations.len() < m {
        let last = locations.last().expect("at least one agent opens a facility").clone();
        locations.push(last);
    }

    // Deferred agents, still in dictatorship order, now take the nearest
    // facility with room, ties toward the lower index.
    for id in deferred {
        let pos = inst.sorted_pos_of_id(id).expect("order ids validated against n");
        let x = inst.loc(pos);
        let j = (0..m)
            .filter(|&j| remaining[j] > 0)
            .min_by_key(|&j| (distance(x, &locations[j]), j))
            .expect("total capacity covers all agents");
        assignment[pos] = j;
        remaining[j] -= 1;
    }

    Ok(Solution::new(locations, assignment))
}
