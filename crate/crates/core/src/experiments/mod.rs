//! Reproducible experiment drivers: welfare-ratio sweeps over instance
//! families, the cross-mechanism axiom audit, and a registry of adversarial
//! scenarios runnable by name.

mod report;
mod scenarios;

pub use report::{
    describe_anonymity, describe_group, describe_pareto, describe_sp, emit_report, ReportBody,
    ReportFormat, RATIO_CSV_HEADER,
};
pub use scenarios::{
    run_theorem_audit, scenario, scenarios, Scenario, ScenarioCheck, ScenarioOutcome,
    SCENARIO_NAMES,
};

use serde::Serialize;

use crate::axioms::{
    check_anonymity, check_partial_group_sp, find_sp_violation, is_pareto_optimal, AnonymityMode,
    AnonymityWitness, AxiomCheck, AxiomError, DeviationGrid, GroupSpWitness, ParetoWitness,
    SpWitness, MAX_EXHAUSTIVE_AGENTS,
};
use crate::generate::{gen_instances, FamilySpec, GenError};
use crate::instance::Instance;
use crate::mechanisms::{MechanismError, MechanismId};
use crate::optimal::{opt_welfare_ratio, OptError, RatioError, RatioRecord};
use crate::solution::{Objective, SolutionViolation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExperimentError {
    #[error("unknown scenario `{name}`; known scenarios: {known}")]
    UnknownScenario { name: String, known: String },
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error(transparent)]
    Axiom(#[from] AxiomError),
    #[error(transparent)]
    Ratio(#[from] RatioError),
    #[error(transparent)]
    Mechanism(#[from] MechanismError),
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error("invalid solution: {0}")]
    Solution(#[from] SolutionViolation),
}

/// Measures each mechanism against the exact optimum on every member of the
/// given families. Records come out mechanism-major, then in family and
/// member order, then by objective, so identical inputs yield identical
/// reports.
pub fn run_ratio_sweep(
    mechs: &[MechanismId],
    families: &[FamilySpec],
    objectives: &[Objective],
    seed: u64,
) -> Result<Vec<RatioRecord>, ExperimentError> {
    let mut members = Vec::new();
    for family in families {
        members.extend(gen_instances(family, seed)?);
    }
    let mut records = Vec::new();
    for mech in mechs {
        for member in &members {
            for &obj in objectives {
                records.push(opt_welfare_ratio(&member.instance, &member.label, mech, obj)?);
            }
        }
    }
    Ok(records)
}

/// Axiom audit of one mechanism on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditRow {
    pub mechanism: String,
    pub instance: String,
    pub outcome: AuditOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum AuditOutcome {
    /// The mechanism rejected the instance (wrong facility count or capacity
    /// shape), so no checks ran.
    Unsupported { reason: String },
    Checked {
        anonymity: AxiomCheck<AnonymityWitness>,
        pareto: AxiomCheck<ParetoWitness>,
        strategy: AxiomCheck<SpWitness>,
        group_strategy: AxiomCheck<GroupSpWitness>,
    },
}

impl AuditOutcome {
    /// True when the mechanism ran and every check held.
    pub fn all_hold(&self) -> bool {
        match self {
            AuditOutcome::Unsupported { .. } => false,
            AuditOutcome::Checked { anonymity, pareto, strategy, group_strategy } => {
                anonymity.holds() && pareto.holds() && strategy.holds() && group_strategy.holds()
            }
        }
    }

    /// Names of the checks that found a counterexample.
    pub fn failed_axioms(&self) -> Vec<&'static str> {
        match self {
            AuditOutcome::Unsupported { .. } => Vec::new(),
            AuditOutcome::Checked { anonymity, pareto, strategy, group_strategy } => {
                let mut out = Vec::new();
                if !anonymity.holds() {
                    out.push("anonymity");
                }
                if !pareto.holds() {
                    out.push("pareto-optimality");
                }
                if !strategy.holds() {
                    out.push("strategy-proofness");
                }
                if !group_strategy.holds() {
                    out.push("group-strategy-proofness");
                }
                out
            }
        }
    }
}

/// Permutation search that stays exhaustive while `n!` is affordable and
/// falls back to seeded sampling beyond that.
pub fn anonymity_mode_for(n: usize, seed: u64) -> AnonymityMode {
    if n <= MAX_EXHAUSTIVE_AGENTS {
        AnonymityMode::Exhaustive
    } else {
        AnonymityMode::Sampled { seed, samples: 200 }
    }
}

/// Runs all four axiom checks for one mechanism on one instance, or records
/// why the mechanism does not apply.
pub fn audit_mechanism(
    mech: &MechanismId,
    label: &str,
    inst: &Instance,
    grid: &DeviationGrid,
    mode: AnonymityMode,
) -> Result<AuditRow, ExperimentError> {
    let sol = match mech.run(inst) {
        Ok(sol) => sol,
        Err(MechanismError::UnsupportedInstance(reason)) => {
            return Ok(AuditRow {
                mechanism: mech.to_string(),
                instance: label.to_string(),
                outcome: AuditOutcome::Unsupported { reason },
            });
        }
        Err(e) => return Err(e.into()),
    };
    let anonymity = check_anonymity(mech, inst, mode)?;
    let pareto = is_pareto_optimal(inst, &sol)?;
    let strategy = find_sp_violation(mech, inst, grid)?;
    let group_strategy = check_partial_group_sp(mech, inst, grid)?;
    Ok(AuditRow {
        mechanism: mech.to_string(),
        instance: label.to_string(),
        outcome: AuditOutcome::Checked { anonymity, pareto, strategy, group_strategy },
    })
}
