//! Problem instances: agent locations on the line plus facility capacities.
//!
//! Agents are kept sorted by (location, id) internally — every mechanism and
//! solver in this crate works over the sorted order — while ids remember the
//! original reporting positions so that identity-sensitive checks (anonymity,
//! dictatorship orders, misreport replays) stay expressible.

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// One agent: original id (0-based) plus reported location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agent {
    pub id: usize,
    pub location: Rational,
}

/// A capacitated facility-location instance.
///
/// Facility `j` has capacity `capacities[j]`; total capacity always covers all
/// agents. An instance with more total capacity than agents has spare capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    agents: Vec<Agent>,
    capacities: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("instance must have at least one agent")]
    NoAgents,
    #[error("instance must have at least one facility")]
    NoFacilities,
    #[error("facility {facility} has zero capacity")]
    ZeroCapacity { facility: usize },
    #[error("total capacity {total} is less than the number of agents {agents}")]
    InsufficientCapacity { total: usize, agents: usize },
    #[error("agent id {0} out of range")]
    BadAgentId(usize),
    #[error("permutation is not a bijection on agent ids")]
    BadPermutation,
}

impl Instance {
    /// Builds an instance from locations listed in reporting (id) order.
    pub fn new(locations: Vec<Rational>, capacities: Vec<usize>) -> Result<Self, InstanceError> {
        if locations.is_empty() {
            return Err(InstanceError::NoAgents);
        }
        if capacities.is_empty() {
            return Err(InstanceError::NoFacilities);
        }
        if let Some(j) = capacities.iter().position(|&c| c == 0) {
            return Err(InstanceError::ZeroCapacity { facility: j });
        }
        let total: usize = capacities.iter().sum();
        if total < locations.len() {
            return Err(InstanceError::InsufficientCapacity {
                total,
                agents: locations.len(),
            });
        }
        let mut agents: Vec<Agent> = locations
            .into_iter()
            .enumerate()
            .map(|(id, location)| Agent { id, location })
            .collect();
        agents.sort_by(|a, b| a.location.cmp(&b.location).then(a.id.cmp(&b.id)));
        Ok(Instance { agents, capacities })
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn m(&self) -> usize {
        self.capacities.len()
    }

    /// Agents in sorted order: locations non-decreasing, ties by ascending id.
    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    /// Location of the i-th agent in sorted order (0-based).
    pub fn loc(&self, sorted_idx: usize) -> &Rational {
        &self.agents[sorted_idx].location
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    pub fn capacity(&self, facility: usize) -> usize {
        self.capacities[facility]
    }

    pub fn total_capacity(&self) -> usize {
        self.capacities.iter().sum()
    }

    pub fn has_spare_capacity(&self) -> bool {
        self.total_capacity() > self.n()
    }

    pub fn min_loc(&self) -> &Rational {
        self.loc(0)
    }

    pub fn max_loc(&self) -> &Rational {
        self.loc(self.n() - 1)
    }

    /// Sorted position of the agent with the given id.
    pub fn sorted_pos_of_id(&self, id: usize) -> Result<usize, InstanceError> {
        self.agents
            .iter()
            .position(|a| a.id == id)
            .ok_or(InstanceError::BadAgentId(id))
    }

    pub fn location_of_id(&self, id: usize) -> Result<&Rational, InstanceError> {
        Ok(&self.agents[self.sorted_pos_of_id(id)?].location)
    }

    /// Locations in reporting (id) order, reconstructing the original vector.
    pub fn locations_by_id(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.n()];
        for a in &self.agents {
            out[a.id] = a.location.clone();
        }
        out
    }

    /// Distinct locations in ascending order.
    pub fn distinct_locations(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for a in &self.agents {
            if out.last() != Some(&a.location) {
                out.push(a.location.clone());
            }
        }
        out
    }

    /// Same instance with one agent's reported location replaced.
    pub fn with_report(&self, id: usize, report: Rational) -> Result<Instance, InstanceError> {
        self.with_group_report(&[id], report)
    }

    /// Same instance with every listed agent's reported location replaced.
    pub fn with_group_report(&self, ids: &[usize], report: Rational) -> Result<Instance, InstanceError> {
        let mut locations = self.locations_by_id();
        for &id in ids {
            if id >= self.n() {
                return Err(InstanceError::BadAgentId(id));
            }
            locations[id] = report.clone();
        }
        Instance::new(locations, self.capacities.clone())
    }

    /// Instance where agent `i` reports the location agent `perm[i]` had.
    ///
    /// `perm` must be a permutation of `0..n`. Anonymity asks whether running a
    /// mechanism on any such relabelling serves agent `i` exactly where agent
    /// `perm[i]` was served originally.
    pub fn permuted(&self, perm: &[usize]) -> Result<Instance, InstanceError> {
        if perm.len() != self.n() {
            return Err(InstanceError::BadPermutation);
        }
        let mut seen = vec![false; self.n()];
        for &p in perm {
            if p >= self.n() || seen[p] {
                return Err(InstanceError::BadPermutation);
            }
            seen[p] = true;
        }
        let by_id = self.locations_by_id();
        let locations = perm.iter().map(|&p| by_id[p].clone()).collect();
        Instance::new(locations, self.capacities.clone())
    }
}

/// On-disk schema: agent locations in reporting order plus capacities.
#[derive(Serialize, Deserialize)]
struct InstanceFile {
    agents: Vec<Rational>,
    capacities: Vec<usize>,
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        InstanceFile {
            agents: self.locations_by_id(),
            capacities: self.capacities.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = InstanceFile::deserialize(deserializer)?;
        Instance::new(file.agents, file.capacities).map_err(serde::de::Error::custom)
    }
}

/// Parses an instance from its JSON document form.
pub fn parse_instance(text: &str) -> Result<Instance, serde_json::Error> {
    serde_json::from_str(text)
}

/// Serializes an instance to its JSON document form (canonical `p/q` locations).
pub fn serialize_instance(inst: &Instance) -> String {
    serde_json::to_string(inst).expect("instance serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn qs(items: &[&str]) -> Vec<Rational> {
        items.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn sorts_agents_and_breaks_ties_by_id() {
        let inst = Instance::new(qs(&["1", "0", "1", "1/2"]), vec![2, 2]).unwrap();
        let order: Vec<(usize, String)> = inst
            .agents()
            .iter()
            .map(|a| (a.id, a.location.to_string()))
            .collect();
        assert_eq!(
            order,
            vec![
                (1, "0".into()),
                (3, "1/2".into()),
                (0, "1".into()),
                (2, "1".into())
            ]
        );
    }

    #[test]
    fn equal_locations_keep_ascending_ids() {
        let inst = Instance::new(qs(&["1", "1", "1"]), vec![3]).unwrap();
        let ids: Vec<usize> = inst.agents().iter().map(|a| a.id).collect();
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn rejects_undercapacitated_and_degenerate_instances() {
        assert!(matches!(
            Instance::new(qs(&["0", "1", "2"]), vec![1, 1]),
            Err(InstanceError::InsufficientCapacity { total: 2, agents: 3 })
        ));
        assert!(matches!(
            Instance::new(vec![], vec![1]),
            Err(InstanceError::NoAgents)
        ));
        assert!(matches!(
            Instance::new(qs(&["0"]), vec![]),
            Err(InstanceError::NoFacilities)
        ));
        assert!(matches!(
            Instance::new(qs(&["0"]), vec![0, 2]),
            Err(InstanceError::ZeroCapacity { facility: 0 })
        ));
    }

    #[test]
    fn parses_the_documented_schema() {
        let inst = parse_instance(r#"{"agents": ["0", "9/10", "1"], "capacities": [2, 2]}"#).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.m(), 2);
        assert_eq!(inst.loc(1), &q("9/10"));
        assert_eq!(inst.capacities(), &[2, 2]);
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let inst = Instance::new(qs(&["1", "-3/2", "0.25", "1"]), vec![3, 1]).unwrap();
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
        // locations serialize in reporting order, canonical p/q
        assert!(text.contains("\"1/1\""));
        assert!(text.contains("\"-3/2\""));
        assert!(text.contains("\"1/4\""));
    }

    #[test]
    fn permuted_relabels_locations_by_id() {
        let inst = Instance::new(qs(&["0", "1/2", "1", "1"]), vec![2, 2]).unwrap();
        let rev = inst.permuted(&[3, 2, 1, 0]).unwrap();
        assert_eq!(rev.locations_by_id(), qs(&["1", "1", "1/2", "0"]));
        assert!(inst.permuted(&[0, 0, 1, 2]).is_err());
        assert!(inst.permuted(&[0, 1, 2]).is_err());
    }

    #[test]
    fn with_report_replaces_a_single_location() {
        let inst = Instance::new(qs(&["1/5", "2/5", "1"]), vec![1, 2]).unwrap();
        let dev = inst.with_report(1, q("0")).unwrap();
        assert_eq!(dev.locations_by_id(), qs(&["1/5", "0", "1"]));
        // deviator now sorts first
        assert_eq!(dev.agents()[0].id, 1);
    }
}
