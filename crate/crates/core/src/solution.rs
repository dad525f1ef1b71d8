//! Solutions (facility locations + binding assignment) and welfare objectives.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::instance::Instance;
use crate::rational::{distance, Rational};

/// Welfare objective: sum of distances or worst single distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Total,
    Max,
}

impl Objective {
    pub const BOTH: [Objective; 2] = [Objective::Total, Objective::Max];

    pub fn parse(s: &str) -> Option<Objective> {
        match s.to_ascii_lowercase().as_str() {
            "total" => Some(Objective::Total),
            "max" => Some(Objective::Max),
            _ => None,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Total => write!(f, "total"),
            Objective::Max => write!(f, "max"),
        }
    }
}

/// A capacitated solution: one location per facility plus, for each agent in
/// sorted order, the facility that serves it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub locations: Vec<Rational>,
    /// `assignment[i]` = 0-based facility index serving the i-th sorted agent.
    pub assignment: Vec<usize>,
}

/// Why a solution is not feasible for an instance.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolutionViolation {
    #[error("solution has {got} facility locations, instance has {expected} facilities")]
    LocationCount { got: usize, expected: usize },
    #[error("solution assigns {got} agents, instance has {expected}")]
    AssignmentLength { got: usize, expected: usize },
    #[error("agent at sorted position {agent} assigned to nonexistent facility {facility}")]
    FacilityOutOfRange { agent: usize, facility: usize },
    #[error("facility {facility} serves {assigned} agents, over its capacity {capacity}")]
    CapacityExceeded {
        facility: usize,
        assigned: usize,
        capacity: usize,
    },
}

impl Solution {
    pub fn new(locations: Vec<Rational>, assignment: Vec<usize>) -> Self {
        Solution { locations, assignment }
    }

    /// Checks shape and capacity feasibility against an instance.
    pub fn validate(&self, inst: &Instance) -> Result<(), SolutionViolation> {
        if self.locations.len() != inst.m() {
            return Err(SolutionViolation::LocationCount {
                got: self.locations.len(),
                expected: inst.m(),
            });
        }
        if self.assignment.len() != inst.n() {
            return Err(SolutionViolation::AssignmentLength {
                got: self.assignment.len(),
                expected: inst.n(),
            });
        }
        let mut load = vec![0usize; inst.m()];
        for (i, &j) in self.assignment.iter().enumerate() {
            if j >= inst.m() {
                return Err(SolutionViolation::FacilityOutOfRange { agent: i, facility: j });
            }
            load[j] += 1;
        }
        for (j, (&used, &cap)) in load.iter().zip(inst.capacities()).enumerate() {
            if used > cap {
                return Err(SolutionViolation::CapacityExceeded {
                    facility: j,
                    assigned: used,
                    capacity: cap,
                });
            }
        }
        Ok(())
    }

    /// Distance travelled by the i-th sorted agent.
    pub fn distance_of_sorted(&self, inst: &Instance, sorted_idx: usize) -> Rational {
        distance(inst.loc(sorted_idx), &self.locations[self.assignment[sorted_idx]])
    }

    /// Distances for all agents, in sorted-agent order.
    pub fn distances(&self, inst: &Instance) -> Vec<Rational> {
        (0..inst.n()).map(|i| self.distance_of_sorted(inst, i)).collect()
    }

    /// Location the agent with the given id is served at.
    pub fn served_location_of_id(&self, inst: &Instance, id: usize) -> Rational {
        let pos = inst
            .sorted_pos_of_id(id)
            .expect("agent id belongs to the instance");
        self.locations[self.assignment[pos]].clone()
    }

    /// Facility locations as a sorted multiset (for anonymity comparisons).
    pub fn location_multiset(&self) -> Vec<Rational> {
        let mut ms = self.locations.clone();
        ms.sort();
        ms
    }
}

impl Serialize for Solution {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // facility indices are 1-based in serialized form
        let mut s = serializer.serialize_struct("Solution", 2)?;
        s.serialize_field("locations", &self.locations)?;
        let assignment: Vec<usize> = self.assignment.iter().map(|&j| j + 1).collect();
        s.serialize_field("assignment", &assignment)?;
        s.end()
    }
}

/// Validates, then sums all agent distances.
pub fn total_distance(inst: &Instance, sol: &Solution) -> Result<Rational, SolutionViolation> {
    sol.validate(inst)?;
    Ok(sol.distances(inst).into_iter().sum())
}

/// Validates, then takes the largest agent distance.
pub fn max_distance(inst: &Instance, sol: &Solution) -> Result<Rational, SolutionViolation> {
    sol.validate(inst)?;
    Ok(sol
        .distances(inst)
        .into_iter()
        .max()
        .expect("instance has at least one agent"))
}

/// Welfare under the chosen objective.
pub fn welfare(inst: &Instance, sol: &Solution, obj: Objective) -> Result<Rational, SolutionViolation> {
    match obj {
        Objective::Total => total_distance(inst, sol),
        Objective::Max => max_distance(inst, sol),
    }
}

/// `max <= total <= n * max` holds for every feasible solution.
pub fn welfare_sandwich_ok(inst: &Instance, sol: &Solution) -> bool {
    let (Ok(total), Ok(max)) = (total_distance(inst, sol), max_distance(inst, sol)) else {
        return false;
    };
    max <= total && total <= Rational::from_int(inst.n() as i64) * max
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

    #[test]
    fn total_distance_sums_agent_distances() {
        let i = inst(&["0", "1/2", "1"], &[1, 2]);
        let s = Solution::new(vec![q("0"), q("3/4")], vec![0, 1, 1]);
        assert_eq!(total_distance(&i, &s).unwrap(), q("1/2"));
    }

    #[test]
    fn total_distance_on_endpoint_solution() {
        let i = inst(&["0", "0", "0", "1"], &[2, 2]);
        let s = Solution::new(vec![q("-1"), q("1")], vec![0, 0, 1, 1]);
        assert_eq!(total_distance(&i, &s).unwrap(), q("3"));
    }

    #[test]
    fn max_distance_takes_the_worst_agent() {
        let i = inst(&["0", "1/2", "1/2", "1"], &[2, 2]);
        let s = Solution::new(vec![q("1/4"), q("3/4")], vec![0, 0, 1, 1]);
        assert_eq!(max_distance(&i, &s).unwrap(), q("1/4"));

        let i2 = inst(&["0", "0", "0", "1"], &[2, 2]);
        let s2 = Solution::new(vec![q("0"), q("0")], vec![0, 0, 1, 1]);
        assert_eq!(max_distance(&i2, &s2).unwrap(), q("1"));
    }

    #[test]
    fn validate_rejects_capacity_violations() {
        let i = inst(&["0", "1/2", "1"], &[1, 2]);
        let s = Solution::new(vec![q("0"), q("1")], vec![0, 0, 1]);
        assert_eq!(
            s.validate(&i),
            Err(SolutionViolation::CapacityExceeded {
                facility: 0,
                assigned: 2,
                capacity: 1
            })
        );
        assert!(total_distance(&i, &s).is_err());
    }

    #[test]
    fn validate_rejects_shape_mismatches() {
        let i = inst(&["0", "1"], &[2]);
        assert!(matches!(
            Solution::new(vec![q("0"), q("1")], vec![0, 0]).validate(&i),
            Err(SolutionViolation::LocationCount { .. })
        ));
        assert!(matches!(
            Solution::new(vec![q("0")], vec![0]).validate(&i),
            Err(SolutionViolation::AssignmentLength { .. })
        ));
        assert!(matches!(
            Solution::new(vec![q("0")], vec![0, 1]).validate(&i),
            Err(SolutionViolation::FacilityOutOfRange { agent: 1, facility: 1 })
        ));
    }

    #[test]
    fn sandwich_bound_holds_on_a_feasible_solution() {
        let i = inst(&["0", "1/3", "2"], &[2, 1]);
        let s = Solution::new(vec![q("0"), q("2")], vec![0, 0, 1]);
        assert!(welfare_sandwich_ok(&i, &s));
    }

    #[test]
    fn solution_serializes_with_one_based_facilities() {
        let s = Solution::new(vec![q("0"), q("1")], vec![0, 0, 1]);
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["assignment"], serde_json::json!([1, 1, 2]));
        assert_eq!(json["locations"][0], "0/1");
    }
}
