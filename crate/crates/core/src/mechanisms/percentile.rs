//! Order-statistic mechanisms: percentile placement and the j-left/k-right
//! peak family.

use crate::instance::Instance;
use crate::rational::Rational;
use crate::solution::Solution;

use super::{
    allocate_left_to_right, assign_nearest, AllocationDirection, AllocationOrder, MechanismError,
};

fn finish(
    inst: &Instance,
    locations: Vec<Rational>,
    capacitated: bool,
    dir: AllocationDirection,
) -> Solution {
    let assignment = if capacitated {
        let order = AllocationOrder::for_capacities(inst.capacities(), dir);
        allocate_left_to_right(inst, &order)
    } else {
        assign_nearest(inst, &locations)
    };
    Solution::new(locations, assignment)
}

/// Places facility `j` on the `1 + floor(p_j (n - 1))`-th sorted report.
pub fn run_percentile(
    inst: &Instance,
    p: &[Rational],
    capacitated: bool,
    dir: AllocationDirection,
) -> Result<Solution, MechanismError> {
    if p.len() != inst.m() {
        return Err(MechanismError::UnsupportedInstance(format!(
            "percentile vector has {} entries, instance has {} facilities",
            p.len(),
            inst.m()
        )));
    }
    let n_minus_1 = Rational::from_int(inst.n() as i64 - 1);
    let locations: Vec<Rational> = p
        .iter()
        .map(|pj| {
            let idx = (pj * &n_minus_1)
                .floor_usize()
                .expect("percentile in [0,1] yields index in range");
            inst.loc(idx).clone()
        })
        .collect();
    Ok(finish(inst, locations, capacitated, dir))
}

/// Places `j` facilities on the leftmost distinct reports and `k` on the
/// rightmost, padding with the extreme report when fewer than `j` (or `k`)
/// distinct locations exist.
pub fn run_jleft_kright(
    inst: &Instance,
    j: usize,
    k: usize,
    capacitated: bool,
    dir: AllocationDirection,
) -> Result<Solution, MechanismError> {
    if j + k != inst.m() {
        return Err(MechanismError::UnsupportedInstance(format!(
            "j + k = {} but instance has {} facilities",
            j + k,
            inst.m()
        )));
    }
    let d = inst.distinct_locations();
    let mut locations = Vec::with_capacity(inst.m());
    if d.len() >= j {
        locations.extend(d[..j].iter().cloned());
    } else {
        for _ in 0..j - d.len() {
            locations.push(d[0].clone());
        }
        locations.extend(d.iter().cloned());
    }
    if d.len() >= k {
        locations.extend(d[d.len() - k..].iter().cloned());
    } else {
        locations.extend(d.iter().cloned());
        for _ in 0..k - d.len() {
            locations.push(d[d.len() - 1].clone());
        }
    }
    Ok(finish(inst, locations, capacitated, dir))
}
