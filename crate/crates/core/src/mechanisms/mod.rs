//! The mechanism catalog.
//!
//! Every mechanism consumes sorted reported locations and produces a
//! [`Solution`]. Capacitated ("imposing") mechanisms bind agents to their
//! assigned facility; uncapacitated ones merely place facilities and record
//! the nearest-facility choice each agent would make.

mod capsd;
mod fixtures;
mod inner;
mod percentile;

use std::fmt;

use crate::instance::Instance;
use crate::rational::{distance, Rational};
use crate::solution::Solution;

pub use capsd::run_capsd;
pub use fixtures::{run_fixture_b, run_fixture_c, run_fixture_d};
pub use inner::{run_extended_endpoint, run_innerpoint};
pub use percentile::{run_jleft_kright, run_percentile};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MechanismError {
    #[error("invalid mechanism parameters: {0}")]
    InvalidParameters(String),
    #[error("mechanism does not apply to this instance: {0}")]
    UnsupportedInstance(String),
}

/// Direction in which capacities order the facilities for block allocation.
///
/// The allocation rule hands out sorted agents left to right, facility by
/// facility. Ascending capacity is the default ordering; descending is kept
/// available as an explicit switch because the ordering convention is a
/// genuine degree of freedom in the rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AllocationDirection {
    #[default]
    AscendingCapacity,
    DescendingCapacity,
}

/// The facility permutation used by left-to-right block allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationOrder {
    order: Vec<usize>,
}

impl AllocationOrder {
    /// Facilities sorted by capacity in the chosen direction, ties by index.
    pub fn for_capacities(caps: &[usize], dir: AllocationDirection) -> Self {
        let mut order: Vec<usize> = (0..caps.len()).collect();
        match dir {
            AllocationDirection::AscendingCapacity => order.sort_by_key(|&j| (caps[j], j)),
            AllocationDirection::DescendingCapacity => {
                order.sort_by_key(|&j| (std::cmp::Reverse(caps[j]), j))
            }
        }
        AllocationOrder { order }
    }

    pub fn facilities(&self) -> &[usize] {
        &self.order
    }
}

/// Hands sorted agents out left to right: each facility in `order` takes up to
/// its capacity before the next facility receives anyone.
pub(crate) fn allocate_left_to_right(inst: &Instance, order: &AllocationOrder) -> Vec<usize> {
    let mut assignment = vec![0usize; inst.n()];
    let mut next = 0usize;
    for &j in order.facilities() {
        let take = inst.capacity(j).min(inst.n() - next);
        for slot in next..next + take {
            assignment[slot] = j;
        }
        next += take;
        if next == inst.n() {
            break;
        }
    }
    assignment
}

/// Uncapacitated choice: each agent picks the nearest facility, ties resolved
/// toward the lowest facility index.
pub(crate) fn assign_nearest(inst: &Instance, locations: &[Rational]) -> Vec<usize> {
    (0..inst.n())
        .map(|i| {
            let x = inst.loc(i);
            let mut best = 0usize;
            let mut best_d = distance(x, &locations[0]);
            for (j, y) in locations.iter().enumerate().skip(1) {
                let d = distance(x, y);
                if d < best_d {
                    best = j;
                    best_d = d;
                }
            }
            best
        })
        .collect()
}

/// How CapSD orders the agents it serves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CapSdOrder {
    /// Reporting order: agent 1, agent 2, ….
    Identity,
    /// Explicit permutation of agent ids (stored 0-based).
    Explicit(Vec<usize>),
}

impl CapSdOrder {
    /// Resolves to a 0-based id sequence for an instance of `n` agents.
    pub fn resolve(&self, n: usize) -> Result<Vec<usize>, MechanismError> {
        match self {
            CapSdOrder::Identity => Ok((0..n).collect()),
            CapSdOrder::Explicit(ids) => {
                if ids.len() != n {
                    return Err(MechanismError::UnsupportedInstance(format!(
                        "dictatorship order covers {} agents, instance has {n}",
                        ids.len()
                    )));
                }
                let mut seen = vec![false; n];
                for &id in ids {
                    if id >= n || seen[id] {
                        return Err(MechanismError::InvalidParameters(
                            "dictatorship order is not a permutation".into(),
                        ));
                    }
                    seen[id] = true;
                }
                Ok(ids.clone())
            }
        }
    }
}

/// A mechanism from the catalog, fully parameterized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MechanismId {
    /// Facility j at the `1 + floor(p_j (n-1))`-th sorted report.
    Percentile { p: Vec<Rational>, capacitated: bool },
    /// `j` facilities on the leftmost distinct reports, `k` on the rightmost.
    JLeftKRight { j: usize, k: usize, capacitated: bool },
    /// Two facilities: `x_{c_1}` serving the leftmost `c_1` agents, `x_{c_1+1}`
    /// serving the rest. Needs capacities that exactly cover the agents.
    InnerPoint,
    /// Two facilities anchored at the endpoints, reflected inward when one
    /// half overflows its facility capacity.
    ExtendedEndPoint,
    /// Serial dictatorship with capacities.
    CapSD { order: CapSdOrder },
    /// Three-agent two-facility rule: larger facility on the rightmost agent.
    FixtureB,
    /// Larger facility at `min(x_3, x_2 + threshold)`.
    FixtureC { threshold: Rational },
    /// Larger facility strictly inside `(x_2, x_3)`, calibrated so a span of
    /// `b` maps to offset `a` and a span of `a` maps to offset `c`.
    FixtureD { a: Rational, b: Rational, c: Rational },
}

impl MechanismId {
    /// Runs the mechanism with the default (ascending-capacity) allocation.
    pub fn run(&self, inst: &Instance) -> Result<Solution, MechanismError> {
        self.run_with(inst, AllocationDirection::default())
    }

    /// Runs with an explicit allocation direction for block allocation.
    pub fn run_with(&self, inst: &Instance, dir: AllocationDirection) -> Result<Solution, MechanismError> {
        match self {
            MechanismId::Percentile { p, capacitated } => run_percentile(inst, p, *capacitated, dir),
            MechanismId::JLeftKRight { j, k, capacitated } => {
                run_jleft_kright(inst, *j, *k, *capacitated, dir)
            }
            MechanismId::InnerPoint => run_innerpoint(inst),
            MechanismId::ExtendedEndPoint => run_extended_endpoint(inst),
            MechanismId::CapSD { order } => run_capsd(inst, order),
            MechanismId::FixtureB => run_fixture_b(inst),
            MechanismId::FixtureC { threshold } => run_fixture_c(inst, threshold),
            MechanismId::FixtureD { a, b, c } => run_fixture_d(inst, a, b, c),
        }
    }

    /// Whether the mechanism's assignment binds the agents.
    ///
    /// Non-imposing mechanisms let agents visit whichever facility is nearest
    /// their true location, which is what misreport checks must measure.
    pub fn is_imposing(&self) -> bool {
        match self {
            MechanismId::Percentile { capacitated, .. } => *capacitated,
            MechanismId::JLeftKRight { capacitated, .. } => *capacitated,
            _ => true,
        }
    }

    /// Parses the canonical string form, accepting documented aliases.
    pub fn parse(s: &str) -> Result<MechanismId, MechanismError> {
        parse_mechanism(s)
    }
}

fn parse_rationals(s: &str) -> Result<Vec<Rational>, MechanismError> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<Rational>()
                .map_err(|e| MechanismError::InvalidParameters(e.to_string()))
        })
        .collect()
}

fn parse_usizes(s: &str) -> Result<Vec<usize>, MechanismError> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| MechanismError::InvalidParameters(format!("bad integer {part:?}")))
        })
        .collect()
}

fn percentile(p: Vec<Rational>, capacitated: bool) -> Result<MechanismId, MechanismError> {
    if p.is_empty() {
        return Err(MechanismError::InvalidParameters("percentile vector is empty".into()));
    }
    let zero = Rational::zero();
    let one = Rational::from_int(1);
    for v in &p {
        if *v < zero || *v > one {
            return Err(MechanismError::InvalidParameters(format!(
                "percentile {v} outside [0, 1]"
            )));
        }
    }
    if p.windows(2).any(|w| w[0] > w[1]) {
        return Err(MechanismError::InvalidParameters(
            "percentile vector must be non-decreasing".into(),
        ));
    }
    Ok(MechanismId::Percentile { p, capacitated })
}

fn jlk(j: usize, k: usize, capacitated: bool) -> Result<MechanismId, MechanismError> {
    if j + k == 0 {
        return Err(MechanismError::InvalidParameters("j + k must be at least 1".into()));
    }
    Ok(MechanismId::JLeftKRight { j, k, capacitated })
}

fn fixture_d(a: Rational, b: Rational, c: Rational) -> Result<MechanismId, MechanismError> {
    let zero = Rational::zero();
    if !(zero < c.clone() && c < a && a < b) {
        return Err(MechanismError::InvalidParameters(
            "calibration needs 0 < c < a < b".into(),
        ));
    }
    Ok(MechanismId::FixtureD { a, b, c })
}

fn parse_mechanism(s: &str) -> Result<MechanismId, MechanismError> {
    let s = s.trim();
    let lower = s.to_ascii_lowercase();
    let (head, rest) = match lower.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (lower.as_str(), None),
    };
    let (cap, params) = match rest {
        Some(r) => match r.strip_prefix("cap:") {
            Some(p) => (true, Some(p)),
            None if r == "cap" => (true, None),
            None => (false, Some(r)),
        },
        None => (false, None),
    };
    let err_extra = |name: &str| MechanismError::InvalidParameters(format!("{name} takes no parameters"));
    match head {
        "percentile" => {
            let p = params.ok_or_else(|| {
                MechanismError::InvalidParameters("percentile needs a vector, e.g. percentile:1/4,3/4".into())
            })?;
            percentile(parse_rationals(p)?, cap)
        }
        "jlk" => {
            let p = params
                .ok_or_else(|| MechanismError::InvalidParameters("jlk needs j,k e.g. jlk:1,1".into()))?;
            let v = parse_usizes(p)?;
            if v.len() != 2 {
                return Err(MechanismError::InvalidParameters("jlk takes exactly two counts".into()));
            }
            jlk(v[0], v[1], cap)
        }
        "median" => match params {
            None => percentile(vec![Rational::ratio(1, 2)], cap),
            Some(_) => Err(err_extra("median")),
        },
        "leftmost" => match params {
            None => percentile(vec![Rational::zero()], cap),
            Some(_) => Err(err_extra("leftmost")),
        },
        "rightmost" => match params {
            None => percentile(vec![Rational::from_int(1)], cap),
            Some(_) => Err(err_extra("rightmost")),
        },
        "endpoint" => match params {
            None => jlk(1, 1, cap),
            Some(_) => Err(err_extra("endpoint")),
        },
        "twoleftpeaks" => match params {
            None => jlk(2, 0, cap),
            Some(_) => Err(err_extra("twoleftpeaks")),
        },
        "tworightpeaks" => match params {
            None => jlk(0, 2, cap),
            Some(_) => Err(err_extra("tworightpeaks")),
        },
        "threeleftpeaks" => match params {
            None => jlk(3, 0, cap),
            Some(_) => Err(err_extra("threeleftpeaks")),
        },
        "threerightpeaks" => match params {
            None => jlk(0, 3, cap),
            Some(_) => Err(err_extra("threerightpeaks")),
        },
        "innerpoint" => match (cap, params) {
            (false, None) => Ok(MechanismId::InnerPoint),
            _ => Err(err_extra("innerpoint")),
        },
        "extendedendpoint" | "eep" => match (cap, params) {
            (false, None) => Ok(MechanismId::ExtendedEndPoint),
            _ => Err(err_extra("extendedendpoint")),
        },
        "capsd" => match (cap, params) {
            (false, None) => Ok(MechanismId::CapSD { order: CapSdOrder::Identity }),
            (false, Some(p)) => {
                let ids = parse_usizes(p)?;
                if ids.iter().any(|&id| id == 0) {
                    return Err(MechanismError::InvalidParameters("agent ids are 1-based".into()));
                }
                Ok(MechanismId::CapSD {
                    order: CapSdOrder::Explicit(ids.into_iter().map(|id| id - 1).collect()),
                })
            }
            _ => Err(err_extra("capsd")),
        },
        "fixtureb" => match (cap, params) {
            (false, None) => Ok(MechanismId::FixtureB),
            _ => Err(err_extra("fixtureb")),
        },
        "fixturec" => match (cap, params) {
            (false, None) => Ok(MechanismId::FixtureC { threshold: Rational::ratio(1, 2) }),
            (false, Some(p)) => {
                let v = parse_rationals(p)?;
                if v.len() != 1 {
                    return Err(MechanismError::InvalidParameters("fixturec takes one threshold".into()));
                }
                Ok(MechanismId::FixtureC { threshold: v[0].clone() })
            }
            _ => Err(err_extra("fixturec")),
        },
        "fixtured" => match (cap, params) {
            (false, None) => fixture_d(
                Rational::ratio(1, 2),
                Rational::ratio(3, 4),
                Rational::ratio(1, 4),
            ),
            (false, Some(p)) => {
                let v = parse_rationals(p)?;
                if v.len() != 3 {
                    return Err(MechanismError::InvalidParameters("fixtured takes a,b,c".into()));
                }
                fixture_d(v[0].clone(), v[1].clone(), v[2].clone())
            }
            _ => Err(err_extra("fixtured")),
        },
        other => Err(MechanismError::InvalidParameters(format!("unknown mechanism {other:?}"))),
    }
}

impl fmt::Display for MechanismId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join_q = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            MechanismId::Percentile { p, capacitated } => {
                let cap = if *capacitated { "cap:" } else { "" };
                write!(f, "percentile:{cap}{}", join_q(p))
            }
            MechanismId::JLeftKRight { j, k, capacitated } => {
                let cap = if *capacitated { "cap:" } else { "" };
                write!(f, "jlk:{cap}{j},{k}")
            }
            MechanismId::InnerPoint => write!(f, "innerpoint"),
            MechanismId::ExtendedEndPoint => write!(f, "extendedendpoint"),
            MechanismId::CapSD { order } => match order {
                CapSdOrder::Identity => write!(f, "capsd"),
                CapSdOrder::Explicit(ids) => {
                    let ids: Vec<String> = ids.iter().map(|id| (id + 1).to_string()).collect();
                    write!(f, "capsd:{}", ids.join(","))
                }
            },
            MechanismId::FixtureB => write!(f, "fixtureb"),
            MechanismId::FixtureC { threshold } => write!(f, "fixturec:{threshold}"),
            MechanismId::FixtureD { a, b, c } => write!(f, "fixtured:{a},{b},{c}"),
        }
    }
}

impl std::str::FromStr for MechanismId {
    type Err = MechanismError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_mechanism(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_strings_and_aliases() {
        let m: MechanismId = "percentile:cap:1/4,3/4".parse().unwrap();
        assert_eq!(
            m,
            MechanismId::Percentile {
                p: vec![Rational::ratio(1, 4), Rational::ratio(3, 4)],
                capacitated: true
            }
        );
        assert_eq!(m.to_string(), "percentile:cap:1/4,3/4");

        let m: MechanismId = "median".parse().unwrap();
        assert_eq!(m.to_string(), "percentile:1/2");

        let m: MechanismId = "endpoint:cap".parse().unwrap();
        assert_eq!(m, MechanismId::JLeftKRight { j: 1, k: 1, capacitated: true });
        assert_eq!(m.to_string(), "jlk:cap:1,1");

        let m: MechanismId = "capsd:4,3,2,1".parse().unwrap();
        assert_eq!(m, MechanismId::CapSD { order: CapSdOrder::Explicit(vec![3, 2, 1, 0]) });
        assert_eq!(m.to_string(), "capsd:4,3,2,1");

        let m: MechanismId = "innerpoint".parse().unwrap();
        assert_eq!(m, MechanismId::InnerPoint);

        let m: MechanismId = "fixtured".parse().unwrap();
        assert_eq!(m.to_string(), "fixtured:1/2,3/4,1/4");
    }

    #[test]
    fn display_then_parse_round_trips() {
        for s in [
            "percentile:0,1",
            "percentile:cap:0,1/2,1",
            "jlk:2,0",
            "jlk:cap:0,2",
            "innerpoint",
            "extendedendpoint",
            "capsd",
            "capsd:2,1,3",
            "fixtureb",
            "fixturec:1/2",
            "fixtured:1/2,3/4,1/4",
        ] {
            let m: MechanismId = s.parse().unwrap();
            let again: MechanismId = m.to_string().parse().unwrap();
            assert_eq!(m, again, "{s}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!("percentile:3/2".parse::<MechanismId>().is_err());
        assert!("percentile:1/2,1/4".parse::<MechanismId>().is_err());
        assert!("percentile:".parse::<MechanismId>().is_err());
        assert!("jlk:0,0".parse::<MechanismId>().is_err());
        assert!("jlk:1".parse::<MechanismId>().is_err());
        assert!("capsd:0,1".parse::<MechanismId>().is_err());
        assert!("fixtured:1/2,1/4,3/4".parse::<MechanismId>().is_err());
        assert!("nosuch".parse::<MechanismId>().is_err());
        assert!("innerpoint:cap".parse::<MechanismId>().is_err());
    }

    #[test]
    fn allocation_order_sorts_by_capacity_then_index() {
        let asc = AllocationOrder::for_capacities(&[3, 1, 2, 1], AllocationDirection::AscendingCapacity);
        assert_eq!(asc.facilities(), &[1, 3, 2, 0]);
        let desc = AllocationOrder::for_capacities(&[3, 1, 2, 1], AllocationDirection::DescendingCapacity);
        assert_eq!(desc.facilities(), &[0, 2, 1, 3]);
    }

    #[test]
    fn imposing_flag_tracks_capacitated_variants() {
        assert!(!"percentile:0,1".parse::<MechanismId>().unwrap().is_imposing());
        assert!("percentile:cap:0,1".parse::<MechanismId>().unwrap().is_imposing());
        assert!("innerpoint".parse::<MechanismId>().unwrap().is_imposing());
        assert!("capsd".parse::<MechanismId>().unwrap().is_imposing());
    }
}
