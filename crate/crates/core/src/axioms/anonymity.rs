//! Anonymity: relabeling the agents must not change the outcome.
//!
//! For a permutation π, the relabeled instance gives agent `i` the location
//! that agent `π(i)` reported. An anonymous mechanism must then produce the
//! same facility-location multiset, and serve agent `i` from the same
//! location it originally served agent `π(i)` from.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::instance::Instance;
use crate::mechanisms::MechanismId;
use crate::rational::Rational;

use super::{AxiomCheck, AxiomError};

/// How many agents still allow enumerating every permutation.
pub const MAX_EXHAUSTIVE_AGENTS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnonymityMode {
    /// All `n!` permutations; limited to small instances.
    Exhaustive,
    /// `samples` random permutations drawn from a seeded generator.
    Sampled { seed: u64, samples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnonymityWitness {
    /// The relabeling, as 0-based indices: agent `i` took agent
    /// `permutation[i]`'s location.
    pub permutation: Vec<usize>,
    /// Sorted facility locations of the original run.
    pub original_locations: Vec<Rational>,
    /// Sorted facility locations of the relabeled run.
    pub permuted_locations: Vec<Rational>,
    /// First agent id (0-based) served from a different location than its
    /// counterpart, when the multisets agree.
    pub mismatched_agent: Option<usize>,
}

fn violation(
    mech: &MechanismId,
    inst: &Instance,
    perm: &[usize],
) -> Result<Option<AnonymityWitness>, AxiomError> {
    let original = mech.run(inst)?;
    let relabeled = inst.permuted(perm)?;
    let permuted = mech.run(&relabeled)?;

    let orig_locs = original.location_multiset();
    let perm_locs = permuted.location_multiset();
    if orig_locs != perm_locs {
        return Ok(Some(AnonymityWitness {
            permutation: perm.to_vec(),
            original_locations: orig_locs,
            permuted_locations: perm_locs,
            mismatched_agent: None,
        }));
    }
    for i in 0..inst.n() {
        let now = permuted.served_location_of_id(&relabeled, i);
        let before = original.served_location_of_id(inst, perm[i]);
        if now != before {
            return Ok(Some(AnonymityWitness {
                permutation: perm.to_vec(),
                original_locations: orig_locs,
                permuted_locations: perm_locs,
                mismatched_agent: Some(i),
            }));
        }
    }
    Ok(None)
}

pub fn check_anonymity(
    mech: &MechanismId,
    inst: &Instance,
    mode: AnonymityMode,
) -> Result<AxiomCheck<AnonymityWitness>, AxiomError> {
    let n = inst.n();
    match mode {
        AnonymityMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_AGENTS {
                return Err(AxiomError::TooLarge(format!(
                    "{n} agents exceeds the {MAX_EXHAUSTIVE_AGENTS}-agent limit for exhaustive permutation search"
                )));
            }
            let mut cases = 0;
            for perm in (0..n).permutations(n) {
                cases += 1;
                if let Some(w) = violation(mech, inst, &perm)? {
                    return Ok(AxiomCheck::failed(true, cases, w));
                }
            }
            Ok(AxiomCheck::passed(true, cases))
        }
        AnonymityMode::Sampled { seed, samples } => {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..n).collect();
            for cases in 1..=samples {
                perm.shuffle(&mut rng);
                if let Some(w) = violation(mech, inst, &perm)? {
                    return Ok(AxiomCheck::failed(false, cases, w));
                }
            }
            Ok(AxiomCheck::passed(false, samples))
        }
    }
}
