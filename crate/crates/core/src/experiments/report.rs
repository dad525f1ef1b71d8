//! Rendering of ratio records, audit rows and scenario outcomes as aligned
//! text, CSV, or JSON.

use std::fmt::Write as _;

use crate::axioms::{AnonymityWitness, AxiomCheck, GroupSpWitness, ParetoWitness, SpWitness};
use crate::optimal::{Ratio, RatioRecord};
use crate::rational::Rational;

use super::scenarios::ScenarioOutcome;
use super::{AuditOutcome, AuditRow};

/// Column header shared by every CSV ratio report.
pub const RATIO_CSV_HEADER: &str = "mechanism,instance,objective,mech_welfare,opt_welfare,ratio";

/// Output encodings for the reports the library produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Aligned human-readable table or check list.
    Text,
    /// RFC-4180-style comma-separated values.
    Csv,
    /// Pretty-printed JSON.
    Structured,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Option<ReportFormat> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Some(ReportFormat::Text),
            "csv" => Some(ReportFormat::Csv),
            "structured" | "json" => Some(ReportFormat::Structured),
            _ => None,
        }
    }
}

/// Anything the reporting layer can render.
#[derive(Debug, Clone)]
pub enum ReportBody {
    Ratios(Vec<RatioRecord>),
    Audit(Vec<AuditRow>),
    Scenario(ScenarioOutcome),
}

/// Renders a report deterministically: the same body and format always
/// produce the same bytes.
pub fn emit_report(body: &ReportBody, format: ReportFormat) -> String {
    match (body, format) {
        (ReportBody::Ratios(r), ReportFormat::Text) => ratios_text(r),
        (ReportBody::Ratios(r), ReportFormat::Csv) => ratios_csv(r),
        (ReportBody::Ratios(r), ReportFormat::Structured) => to_json(r),
        (ReportBody::Audit(rows), ReportFormat::Text) => audit_text(rows),
        (ReportBody::Audit(rows), ReportFormat::Csv) => audit_csv(rows),
        (ReportBody::Audit(rows), ReportFormat::Structured) => to_json(rows),
        (ReportBody::Scenario(o), ReportFormat::Text) => scenario_text(o),
        (ReportBody::Scenario(o), ReportFormat::Csv) => scenario_csv(o),
        (ReportBody::Scenario(o), ReportFormat::Structured) => to_json(o),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Quotes a field when it contains a delimiter, quote or line break, doubling
/// embedded quotes. Mechanism names like `jlk:cap:1,1` need this.
fn csv_field(raw: &str) -> String {
    if raw.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

fn push_aligned(out: &mut String, cells: &[String], widths: &[usize]) {
    for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
        if i > 0 {
            out.push_str("  ");
        }
        let _ = write!(out, "{cell:<w$}");
    }
    while out.ends_with(' ') {
        out.pop();
    }
    out.push('\n');
}

fn aligned_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let header: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    push_aligned(&mut out, &header, &widths);
    for row in rows {
        push_aligned(&mut out, row, &widths);
    }
    out
}

fn approx_ratio(r: &Ratio) -> String {
    match r {
        Ratio::Finite(q) => format!("{:.4}", q.to_f64()),
        Ratio::Infinite => "inf".into(),
    }
}

fn ratios_text(records: &[RatioRecord]) -> String {
    let header = ["mechanism", "instance", "objective", "mech", "opt", "ratio", "~ratio"];
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.mechanism.clone(),
                r.instance.clone(),
                r.objective.to_string(),
                r.mech_welfare.to_string(),
                r.opt_welfare.to_string(),
                r.ratio.to_string(),
                approx_ratio(&r.ratio),
            ]
        })
        .collect();
    aligned_table(&header, &rows)
}

fn ratios_csv(records: &[RatioRecord]) -> String {
    let mut out = String::from(RATIO_CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            csv_field(&r.mechanism),
            csv_field(&r.instance),
            r.objective,
            r.mech_welfare.canonical(),
            r.opt_welfare.canonical(),
            r.ratio.canonical(),
        );
    }
    out
}

fn push_text_check<W>(
    out: &mut String,
    name: &str,
    check: &AxiomCheck<W>,
    describe: fn(&W) -> String,
) {
    let scope = if check.exhaustive { "exhaustive" } else { "searched" };
    let _ = write!(out, "  {name}: {} ({scope}, {} cases)", check.verdict, check.cases);
    if let Some(w) = &check.witness {
        let _ = write!(out, " -- {}", describe(w));
    }
    out.push('\n');
}

fn audit_text(rows: &[AuditRow]) -> String {
    let mut out = String::new();
    for row in rows {
        let _ = writeln!(out, "{} on {}", row.mechanism, row.instance);
        match &row.outcome {
            AuditOutcome::Unsupported { reason } => {
                let _ = writeln!(out, "  unsupported: {reason}");
            }
            AuditOutcome::Checked { anonymity, pareto, strategy, group_strategy } => {
                push_text_check(&mut out, "anonymity", anonymity, describe_anonymity);
                push_text_check(&mut out, "pareto-optimality", pareto, describe_pareto);
                push_text_check(&mut out, "strategy-proofness", strategy, describe_sp);
                push_text_check(&mut out, "group-strategy-proofness", group_strategy, describe_group);
            }
        }
    }
    out
}

fn push_csv_check<W>(
    out: &mut String,
    row: &AuditRow,
    name: &str,
    check: &AxiomCheck<W>,
    describe: fn(&W) -> String,
) {
    let detail = check.witness.as_ref().map(describe).unwrap_or_default();
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{}",
        csv_field(&row.mechanism),
        csv_field(&row.instance),
        name,
        check.verdict,
        check.exhaustive,
        check.cases,
        csv_field(&detail),
    );
}

fn audit_csv(rows: &[AuditRow]) -> String {
    let mut out = String::from("mechanism,instance,axiom,verdict,exhaustive,cases,detail\n");
    for row in rows {
        match &row.outcome {
            AuditOutcome::Unsupported { reason } => {
                let _ = writeln!(
                    out,
                    "{},{},all,unsupported,false,0,{}",
                    csv_field(&row.mechanism),
                    csv_field(&row.instance),
                    csv_field(reason),
                );
            }
            AuditOutcome::Checked { anonymity, pareto, strategy, group_strategy } => {
                push_csv_check(&mut out, row, "anonymity", anonymity, describe_anonymity);
                push_csv_check(&mut out, row, "pareto-optimality", pareto, describe_pareto);
                push_csv_check(&mut out, row, "strategy-proofness", strategy, describe_sp);
                push_csv_check(
                    &mut out,
                    row,
                    "group-strategy-proofness",
                    group_strategy,
                    describe_group,
                );
            }
        }
    }
    out
}

fn pass_str(p: bool) -> &'static str {
    if p {
        "PASS"
    } else {
        "FAIL"
    }
}

fn scenario_text(outcome: &ScenarioOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {}: {}", outcome.scenario, pass_str(outcome.passed));
    for c in &outcome.checks {
        let _ = write!(out, "  [{}] {}", pass_str(c.passed), c.label);
        if !c.detail.is_empty() {
            let _ = write!(out, " -- {}", c.detail);
        }
        out.push('\n');
    }
    out
}

fn scenario_csv(outcome: &ScenarioOutcome) -> String {
    let mut out = String::from("scenario,check,passed,detail\n");
    for c in &outcome.checks {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_field(&outcome.scenario),
            csv_field(&c.label),
            c.passed,
            csv_field(&c.detail),
        );
    }
    out
}

pub(crate) fn fmt_rationals(rs: &[Rational]) -> String {
    let cells: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
    cells.join(", ")
}

fn fmt_indices(ids: &[usize]) -> String {
    let cells: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
    format!("({})", cells.join(", "))
}

/// One-line human rendering of an anonymity counterexample.
pub fn describe_anonymity(w: &AnonymityWitness) -> String {
    let perm = fmt_indices(&w.permutation);
    match w.mismatched_agent {
        None => format!(
            "relabeling {perm} moves the facilities from ({}) to ({})",
            fmt_rationals(&w.original_locations),
            fmt_rationals(&w.permuted_locations),
        ),
        Some(id) => format!(
            "relabeling {perm} keeps the facility multiset but serves agent {id} from elsewhere"
        ),
    }
}

/// One-line human rendering of a dominating solution.
pub fn describe_pareto(w: &ParetoWitness) -> String {
    format!(
        "placing facilities at ({}) serves everyone at most as far and sorted agent {} strictly closer",
        fmt_rationals(&w.locations),
        w.improved_agent,
    )
}

/// One-line human rendering of a profitable misreport.
pub fn describe_sp(w: &SpWitness) -> String {
    format!(
        "agent {} reports {} and travels {} instead of {}",
        w.agent, w.misreport, w.deviated_distance, w.truthful_distance,
    )
}

/// One-line human rendering of a profitable coalition misreport.
pub fn describe_group(w: &GroupSpWitness) -> String {
    let gains: Vec<String> = w
        .gains
        .iter()
        .map(|(id, before, after)| format!("agent {id} {before} -> {after}"))
        .collect();
    format!(
        "agents {} jointly report {}: {}",
        fmt_indices(&w.members),
        w.misreport,
        gains.join(", "),
    )
}
