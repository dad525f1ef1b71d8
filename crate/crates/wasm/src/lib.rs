//! Browser bindings; see `www/index.html` for the demo page.
//!
//! Every entry point takes and returns JSON strings, so the page needs no
//! generated bindings beyond the wasm loader. Failures come back as
//! `{"error": "..."}` documents instead of exceptions, and every rational is
//! shipped both exactly (canonical `p/q` string) and as a float for drawing.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use faciloc::axioms::DeviationGrid;
use faciloc::experiments::{
    anonymity_mode_for, audit_mechanism, describe_anonymity, describe_group, describe_pareto,
    describe_sp, AuditOutcome,
};
use faciloc::instance::{parse_instance, Instance};
use faciloc::mechanisms::MechanismId;
use faciloc::optimal::{opt_dp, Ratio};
use faciloc::rational::{distance, Rational};
use faciloc::solution::{max_distance, total_distance, Objective, Solution};

fn err(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn parse_inputs(instance_json: &str, mech: &str) -> Result<(Instance, MechanismId), String> {
    let inst = parse_instance(instance_json).map_err(|e| format!("instance: {e}"))?;
    let mech = MechanismId::parse(mech).map_err(|e| format!("mechanism: {e}"))?;
    Ok((inst, mech))
}

fn rational_pair(x: &Rational) -> Value {
    json!({ "exact": x.to_string(), "float": x.to_f64() })
}

fn ratio_pair(r: &Ratio) -> Value {
    match r {
        Ratio::Finite(q) => json!({ "exact": q.to_string(), "float": q.to_f64() }),
        Ratio::Infinite => json!({ "exact": "inf", "float": Value::Null }),
    }
}

/// Facility locations, per-agent assignment (in original id order) and both
/// welfare values, ready for drawing.
fn solution_view(inst: &Instance, sol: &Solution) -> Value {
    let locations: Vec<Value> = sol.locations.iter().map(rational_pair).collect();
    let mut agents = Vec::with_capacity(inst.n());
    for id in 0..inst.n() {
        let pos = inst.sorted_pos_of_id(id).expect("id in range");
        let facility = sol.assignment[pos];
        agents.push(json!({
            "id": id,
            "x": rational_pair(inst.loc(pos)),
            "facility": facility,
            "distance": rational_pair(&sol.distance_of_sorted(inst, pos)),
        }));
    }
    let total = total_distance(inst, sol).expect("solution is feasible");
    let max = max_distance(inst, sol).expect("solution is feasible");
    json!({
        "locations": locations,
        "agents": agents,
        "total": rational_pair(&total),
        "max": rational_pair(&max),
    })
}

/// Runs a mechanism on an instance and scores it against the exact optimum
/// under both objectives.
#[wasm_bindgen]
pub fn evaluate(instance_json: &str, mechanism: &str) -> String {
    let (inst, mech) = match parse_inputs(instance_json, mechanism) {
        Ok(v) => v,
        Err(e) => return err(e),
    };
    let sol = match mech.run(&inst) {
        Ok(sol) => sol,
        Err(e) => return err(e),
    };
    if let Err(e) = sol.validate(&inst) {
        return err(e);
    }

    let mut optimal = serde_json::Map::new();
    for obj in [Objective::Total, Objective::Max] {
        let opt_sol = match opt_dp(&inst, obj) {
            Ok(s) => s,
            Err(e) => return err(e),
        };
        let mech_welfare = match obj {
            Objective::Total => total_distance(&inst, &sol),
            Objective::Max => max_distance(&inst, &sol),
        }
        .expect("solution is feasible");
        let opt_welfare = match obj {
            Objective::Total => total_distance(&inst, &opt_sol),
            Objective::Max => max_distance(&inst, &opt_sol),
        }
        .expect("optimum is feasible");
        let mut view = solution_view(&inst, &opt_sol);
        view["ratio"] = ratio_pair(&Ratio::of(&mech_welfare, &opt_welfare));
        optimal.insert(obj.to_string(), view);
    }

    json!({
        "mechanism": mech.to_string(),
        "capacities": inst.capacities(),
        "solution": solution_view(&inst, &sol),
        "optimal": Value::Object(optimal),
    })
    .to_string()
}

/// Distance the chosen agent actually travels when it reports `r` while truly
/// standing at its original location: the core picture behind strategy
/// proofness (a strategy-proof rule has its minimum at the truthful report).
#[wasm_bindgen]
pub fn deviation_curve(instance_json: &str, mechanism: &str, agent_id: u32, samples: u32) -> String {
    let (inst, mech) = match parse_inputs(instance_json, mechanism) {
        Ok(v) => v,
        Err(e) => return err(e),
    };
    let id = agent_id as usize;
    let true_loc = match inst.location_of_id(id) {
        Ok(x) => x.clone(),
        Err(e) => return err(e),
    };
    let samples = samples.clamp(2, 2000) as i64;

    // Sweep one report span past each end of the reported range.
    let span = inst.max_loc() - inst.min_loc();
    let pad = if span.is_zero() { Rational::from_int(1) } else { span.clone() };
    let lo = inst.min_loc() - &pad;
    let width = span + Rational::from_int(2) * pad;

    let experienced = |sol: &Solution, reported: &Instance| -> Rational {
        if mech.is_imposing() {
            distance(&sol.served_location_of_id(reported, id), &true_loc)
        } else {
            sol.locations.iter().map(|y| distance(y, &true_loc)).min().expect("m >= 1")
        }
    };

    let truthful = match mech.run(&inst) {
        Ok(sol) => sol,
        Err(e) => return err(e),
    };
    let truthful_distance = experienced(&truthful, &inst);

    let mut points = Vec::with_capacity(samples as usize + 1);
    for step in 0..=samples {
        let report = &lo + &width * Rational::ratio(step, samples);
        let reported = match inst.with_report(id, report.clone()) {
            Ok(r) => r,
            Err(e) => return err(e),
        };
        let sol = match mech.run(&reported) {
            Ok(s) => s,
            Err(e) => return err(e),
        };
        points.push(json!({
            "report": rational_pair(&report),
            "distance": rational_pair(&experienced(&sol, &reported)),
        }));
    }

    json!({
        "mechanism": mech.to_string(),
        "agent": id,
        "true_location": rational_pair(&true_loc),
        "truthful_distance": rational_pair(&truthful_distance),
        "points": points,
    })
    .to_string()
}

/// Checks anonymity, Pareto optimality, strategy proofness and partial group
/// strategy proofness for one mechanism on one instance.
#[wasm_bindgen]
pub fn audit_axioms(instance_json: &str, mechanism: &str) -> String {
    let (inst, mech) = match parse_inputs(instance_json, mechanism) {
        Ok(v) => v,
        Err(e) => return err(e),
    };
    let grid = DeviationGrid::default();
    let mode = anonymity_mode_for(inst.n(), 0);
    let row = match audit_mechanism(&mech, "custom", &inst, &grid, mode) {
        Ok(row) => row,
        Err(e) => return err(e),
    };
    let checks = match &row.outcome {
        AuditOutcome::Unsupported { reason } => {
            return json!({ "mechanism": row.mechanism, "unsupported": reason }).to_string();
        }
        AuditOutcome::Checked { anonymity, pareto, strategy, group_strategy } => {
            fn flat<W>(
                name: &str,
                check: &faciloc::axioms::AxiomCheck<W>,
                describe: fn(&W) -> String,
            ) -> Value {
                json!({
                    "axiom": name,
                    "holds": check.holds(),
                    "verdict": check.verdict.to_string(),
                    "exhaustive": check.exhaustive,
                    "cases": check.cases,
                    "detail": check.witness.as_ref().map(describe).unwrap_or_default(),
                })
            }
            vec![
                flat("anonymity", anonymity, describe_anonymity),
                flat("pareto-optimality", pareto, describe_pareto),
                flat("strategy-proofness", strategy, describe_sp),
                flat("group-strategy-proofness", group_strategy, describe_group),
            ]
        }
    };
    json!({
        "mechanism": row.mechanism,
        "all_hold": row.outcome.all_hold(),
        "checks": checks,
    })
    .to_string()
}

/// Mechanism identifiers the demo page offers in its dropdown.
#[wasm_bindgen]
pub fn catalog() -> String {
    json!([
        "innerpoint",
        "extendedendpoint",
        "jlk:cap:1,1",
        "jlk:cap:2,0",
        "jlk:cap:0,2",
        "percentile:cap:0,1",
        "percentile:cap:1/4,3/4",
        "capsd",
        "fixtureb",
        "percentile:1/2",
        "percentile:0,1",
        "jlk:1,1",
    ])
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOUR: &str = r#"{"agents":["0","0","0","1"],"capacities":[2,2]}"#;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn evaluate_reports_solution_and_both_optima() {
        let v = parse(evaluate(FOUR, "innerpoint"));
        assert_eq!(v["mechanism"], "innerpoint");
        assert_eq!(v["solution"]["total"]["exact"], "1");
        assert_eq!(v["solution"]["max"]["exact"], "1");
        assert_eq!(v["optimal"]["total"]["total"]["exact"], "1");
        assert_eq!(v["optimal"]["total"]["ratio"]["exact"], "1");
        assert_eq!(v["optimal"]["max"]["max"]["exact"], "1/2");
        assert_eq!(v["optimal"]["max"]["ratio"]["float"], 2.0);
        assert_eq!(v["solution"]["agents"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn evaluate_flags_unbounded_ratios_with_a_null_float() {
        let v = parse(evaluate(
            r#"{"agents":["0","1"],"capacities":[2,2]}"#,
            "percentile:0,0",
        ));
        assert_eq!(v["optimal"]["max"]["ratio"]["exact"], "inf");
        assert!(v["optimal"]["max"]["ratio"]["float"].is_null());
    }

    #[test]
    fn evaluate_surfaces_errors_as_documents() {
        let v = parse(evaluate("{not json", "innerpoint"));
        assert!(v["error"].as_str().unwrap().contains("instance"));
        let v = parse(evaluate(FOUR, "wat"));
        assert!(v["error"].as_str().unwrap().contains("mechanism"));
        let v = parse(evaluate(r#"{"agents":["0"],"capacities":[2,2]}"#, "innerpoint"));
        assert!(v["error"].as_str().unwrap().contains("capacities"));
    }

    #[test]
    fn deviation_curve_of_a_strategy_proof_rule_bottoms_out_at_the_truth() {
        let v = parse(deviation_curve(FOUR, "innerpoint", 3, 64));
        assert_eq!(v["points"].as_array().unwrap().len(), 65);
        let truthful = v["truthful_distance"]["float"].as_f64().unwrap();
        for p in v["points"].as_array().unwrap() {
            let d = p["distance"]["float"].as_f64().unwrap();
            assert!(d >= truthful - 1e-12, "misreport beats the truth: {p}");
        }
    }

    #[test]
    fn deviation_curve_exposes_a_manipulable_rule() {
        // An agent served across the line can cut its distance by lying.
        let v = parse(deviation_curve(
            r#"{"agents":["1/5","2/5","1"],"capacities":[1,2]}"#,
            "fixtureb",
            1,
            200,
        ));
        let truthful = v["truthful_distance"]["float"].as_f64().unwrap();
        let best = v["points"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p["distance"]["float"].as_f64().unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(best < truthful - 1e-9, "expected a profitable misreport");
    }

    #[test]
    fn audit_reports_all_four_axioms() {
        let v = parse(audit_axioms(FOUR, "innerpoint"));
        assert_eq!(v["all_hold"], true);
        let checks = v["checks"].as_array().unwrap();
        assert_eq!(checks.len(), 4);
        assert!(checks.iter().all(|c| c["holds"] == true));

        let v = parse(audit_axioms(FOUR, "jlk:cap:1,1"));
        assert_eq!(v["all_hold"], false);
        let sp = &v["checks"].as_array().unwrap()[2];
        assert_eq!(sp["axiom"], "strategy-proofness");
        assert!(sp["detail"].as_str().unwrap().contains("reports"));
    }

    #[test]
    fn audit_marks_unsupported_instances() {
        let v = parse(audit_axioms(r#"{"agents":["0","1"],"capacities":[2,2]}"#, "innerpoint"));
        assert!(v["unsupported"].as_str().unwrap().contains("capacities"));
    }

    #[test]
    fn catalog_entries_all_parse() {
        let v = parse(catalog());
        for entry in v.as_array().unwrap() {
            MechanismId::parse(entry.as_str().unwrap()).unwrap();
        }
    }
}
