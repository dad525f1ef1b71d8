//! Axiom audits: anonymity, Pareto optimality, strategy proofness and
//! partial group strategy proofness.
//!
//! Every check reports whether it searched its whole space (permutations and
//! assignments can be enumerated; misreports live on a continuum and are only
//! ever sampled on a grid), how many cases it looked at, and — when the axiom
//! fails — a witness precise enough to replay the violation by hand.

mod anonymity;
mod pareto;
mod strategy;

use serde::Serialize;

use crate::instance::{Instance, InstanceError};
use crate::mechanisms::MechanismError;
use crate::rational::Rational;
use crate::solution::{Solution, SolutionViolation};

pub use anonymity::{check_anonymity, AnonymityMode, AnonymityWitness, MAX_EXHAUSTIVE_AGENTS};
pub use pareto::{is_pareto_optimal, ParetoWitness};
pub use strategy::{check_partial_group_sp, find_sp_violation, GroupSpWitness, SpWitness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AxiomError {
    #[error(transparent)]
    Mechanism(#[from] MechanismError),
    #[error("axiom search too large: {0}")]
    TooLarge(String),
    #[error("invalid check parameter: {0}")]
    InvalidParameter(String),
    #[error("mechanism produced an invalid solution: {0}")]
    BadSolution(#[from] SolutionViolation),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Outcome of one axiom check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// No violation anywhere in the searched space.
    Holds,
    /// A concrete violation was found.
    Counterexample,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds-on-search-space"),
            Verdict::Counterexample => write!(f, "counterexample"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Result of an axiom check, with enough context to judge its strength.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck<W> {
    pub verdict: Verdict,
    /// Whether the searched space was the entire space the axiom quantifies
    /// over. Grid-based misreport searches are never exhaustive.
    pub exhaustive: bool,
    /// Number of cases examined before stopping.
    pub cases: usize,
    pub witness: Option<W>,
}

impl<W> AxiomCheck<W> {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub(crate) fn passed(exhaustive: bool, cases: usize) -> Self {
        AxiomCheck { verdict: Verdict::Holds, exhaustive, cases, witness: None }
    }

    pub(crate) fn failed(exhaustive: bool, cases: usize, witness: W) -> Self {
        AxiomCheck { verdict: Verdict::Counterexample, exhaustive, cases, witness: Some(witness) }
    }
}

/// Candidate misreports for one deviating location.
///
/// The grid mixes structure-aware points (reports, their midpoints, facility
/// reflections around the deviator) with a uniform lattice of the given
/// resolution spanning the reported range padded by one range-width on each
/// side. Refining the resolution only adds lattice points, so violations
/// found at a coarse resolution survive refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationGrid {
    resolution: Rational,
}

impl Default for DeviationGrid {
    fn default() -> Self {
        DeviationGrid { resolution: Rational::ratio(1, 64) }
    }
}

impl DeviationGrid {
    pub fn new(resolution: Rational) -> Result<Self, AxiomError> {
        if resolution.is_zero() || resolution.is_negative() {
            return Err(AxiomError::InvalidParameter(
                "grid resolution must be positive".into(),
            ));
        }
        Ok(DeviationGrid { resolution })
    }

    pub fn resolution(&self) -> &Rational {
        &self.resolution
    }

    /// All candidate misreports for an agent truly located at
    /// `true_location`, sorted ascending without duplicates.
    pub fn candidates(
        &self,
        inst: &Instance,
        truthful: &Solution,
        true_location: &Rational,
    ) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        let n = inst.n();
        for i in 0..n {
            out.push(inst.loc(i).clone());
            for j in i + 1..n {
                out.push(Rational::midpoint(inst.loc(i), inst.loc(j)));
            }
        }
        let two = Rational::from_int(2);
        for y in &truthful.locations {
            out.push(&two * y - true_location);
        }

        let span = inst.max_loc() - inst.min_loc();
        let pad = if span.is_zero() { Rational::from_int(1) } else { span };
        let lo = inst.min_loc() - &pad;
        let hi = inst.max_loc() + &pad;
        // Lattice of integer multiples of the resolution covering [lo, hi].
        let mut k = (&lo / &self.resolution).ceil_int();
        let k_hi = (&hi / &self.resolution).floor_int();
        while k <= k_hi {
            out.push(&Rational::from_bigint(k.clone()) * &self.resolution);
            k += 1u32;
        }

        out.sort();
        out.dedup();
        out
    }
}
