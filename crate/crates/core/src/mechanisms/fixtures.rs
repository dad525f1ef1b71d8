//! Hand-built rules for the smallest interesting capacitated setting: three
//! agents, two facilities with capacities (1, 2). The small facility always
//! sits on the leftmost report and serves that agent; the variants differ only
//! in where the large facility goes.

use crate::instance::Instance;
use crate::rational::Rational;
use crate::solution::Solution;

use super::MechanismError;

fn check_shape(inst: &Instance) -> Result<(), MechanismError> {
    if inst.n() != 3 || inst.capacities() != [1, 2] {
        return Err(MechanismError::UnsupportedInstance(format!(
            "rule is defined for 3 agents and capacities (1, 2), got {} agents and {:?}",
            inst.n(),
            inst.capacities()
        )));
    }
    Ok(())
}

fn build(inst: &Instance, large: Rational) -> Solution {
    Solution::new(vec![inst.loc(0).clone(), large], vec![0, 1, 1])
}

/// Large facility on the rightmost report.
pub fn run_fixture_b(inst: &Instance) -> Result<Solution, MechanismError> {
    check_shape(inst)?;
    Ok(build(inst, inst.loc(2).clone()))
}

/// Large facility on the rightmost report, but never more than `threshold`
/// to the right of the middle one.
pub fn run_fixture_c(inst: &Instance, threshold: &Rational) -> Result<Solution, MechanismError> {
    check_shape(inst)?;
    let capped = inst.loc(1) + threshold;
    let large = inst.loc(2).clone().min(capped);
    Ok(build(inst, large))
}

/// Large facility strictly between the middle and rightmost reports.
///
/// The offset from the middle report is a piecewise-linear, strictly
/// increasing function of the span `x_3 - x_2` passing through `(0, 0)`,
/// `(a, c)` and `(b, a)`, then continuing with the second segment's slope.
/// Because `c < a < b`, the offset always stays strictly below the span.
pub fn run_fixture_d(
    inst: &Instance,
    a: &Rational,
    b: &Rational,
    c: &Rational,
) -> Result<Solution, MechanismError> {
    check_shape(inst)?;
    let span = inst.loc(2) - inst.loc(1);
    let offset = if &span <= a {
        &span * c / a
    } else {
        let slope = (a - c) / (b - a);
        if &span <= b {
            c + (&span - a) * &slope
        } else {
            a + (&span - b) * &slope
        }
    };
    Ok(build(inst, inst.loc(1) + &offset))
}
