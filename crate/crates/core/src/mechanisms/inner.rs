//! Two-facility mechanisms that split the sorted line into a left and a right
//! block: the inner-point rule for exactly-covering capacities, and the
//! extended end-point rule that tolerates spare capacity by reflecting an
//! endpoint facility inward when its half of the line overflows.

use crate::instance::Instance;
use crate::rational::Rational;
use crate::solution::Solution;

use super::MechanismError;

/// Facility 1 at the `c_1`-th sorted report serving the leftmost `c_1` agents,
/// facility 2 at the next report serving the rest. Requires `c_1 + c_2 = n`.
pub fn run_innerpoint(inst: &Instance) -> Result<Solution, MechanismError> {
    if inst.m() != 2 {
        return Err(MechanismError::UnsupportedInstance(format!(
            "inner point needs exactly 2 facilities, instance has {}",
            inst.m()
        )));
    }
    let (c1, n) = (inst.capacity(0), inst.n());
    if inst.total_capacity() != n {
        return Err(MechanismError::UnsupportedInstance(format!(
            "inner point needs capacities that exactly cover the agents ({} seats for {n} agents)",
            inst.total_capacity()
        )));
    }
    let locations = vec![inst.loc(c1 - 1).clone(), inst.loc(c1).clone()];
    let assignment = (0..n).map(|i| usize::from(i >= c1)).collect();
    Ok(Solution::new(locations, assignment))
}

/// Splits agents at the midpoint of the reported span: the left half is
/// closed at the midpoint, the right half open, so the two sets partition the
/// agents. Returns `(left_count, right_count)`.
fn midpoint_split(inst: &Instance) -> (usize, usize) {
    let lo = inst.min_loc();
    let hi = inst.max_loc();
    let two = Rational::from_int(2);
    let mid = (lo + hi) / &two;
    let left = (0..inst.n()).filter(|&i| *inst.loc(i) <= mid).count();
    (left, inst.n() - left)
}

/// End-point rule with overflow handling.
///
/// The facility with the larger capacity (ties to the lower index) anchors the
/// crowded side of the line; the three placement cases keep every block within
/// its facility's capacity by reflecting the overloaded endpoint inward.
pub fn run_extended_endpoint(inst: &Instance) -> Result<Solution, MechanismError> {
    if inst.m() != 2 {
        return Err(MechanismError::UnsupportedInstance(format!(
            "extended end point needs exactly 2 facilities, instance has {}",
            inst.m()
        )));
    }
    let n = inst.n();
    let (n_left, n_right) = midpoint_split(inst);
    let (big, small) = if inst.capacity(0) >= inst.capacity(1) { (0, 1) } else { (1, 0) };
    // The larger facility serves whichever side holds at least half the agents.
    let (left_fac, right_fac) = if n_left >= n_right { (big, small) } else { (small, big) };
    let (c_left, c_right) = (inst.capacity(left_fac), inst.capacity(right_fac));

    let x_first = inst.min_loc().clone();
    let x_last = inst.max_loc().clone();
    let two = Rational::from_int(2);

    // `cut` = number of sorted agents served by the left facility.
    let (y_left, y_right, cut) = if n_left <= c_left && n_right <= c_right {
        (x_first, x_last, n_left)
    } else if n_left > c_left {
        // Left side overflows; mirror the right endpoint across the first
        // agent pushed out, so that agent sits equidistant from both.
        let y = &two * inst.loc(c_left) - &x_last;
        (y, x_last, c_left)
    } else {
        // Right side overflows; symmetric reflection of the left endpoint.
        let y = &two * inst.loc(n - c_right - 1) - &x_first;
        (x_first, y, n - c_right)
    };

    let mut locations = vec![Rational::zero(), Rational::zero()];
    locations[left_fac] = y_left;
    locations[right_fac] = y_right;
    let assignment = (0..n).map(|i| if i < cut { left_fac } else { right_fac }).collect();
    Ok(Solution::new(locations, assignment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::solution::total_distance;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn inst(locs: &[&str], caps: &[usize]) -> Instance {
        Instance::new(locs.iter().map(|s| q(s)).collect(), caps.to_vec()).unwrap()
    }

    #[test]
    fn innerpoint_splits_at_first_capacity() {
        let i = inst(&["0", "1/2", "3/5", "1"], &[2, 2]);
        let s = run_innerpoint(&i).unwrap();
        assert_eq!(s.locations, vec![q("1/2"), q("3/5")]);
        assert_eq!(s.assignment, vec![0, 0, 1, 1]);
    }

    #[test]
    fn innerpoint_with_unequal_capacities() {
        let i = inst(&["0", "1/5", "2/5", "1"], &[1, 3]);
        let s = run_innerpoint(&i).unwrap();
        assert_eq!(s.locations, vec![q("0"), q("1/5")]);
        assert_eq!(s.assignment, vec![0, 1, 1, 1]);
    }

    #[test]
    fn innerpoint_rejects_spare_capacity_and_wrong_m() {
        assert!(matches!(
            run_innerpoint(&inst(&["0", "1"], &[2, 2])),
            Err(MechanismError::UnsupportedInstance(_))
        ));
        assert!(matches!(
            run_innerpoint(&inst(&["0", "1"], &[2])),
            Err(MechanismError::UnsupportedInstance(_))
        ));
    }

    #[test]
    fn eep_balanced_instance_uses_both_endpoints() {
        let i = inst(&["0", "1"], &[1, 1]);
        let s = run_extended_endpoint(&i).unwrap();
        assert_eq!(s.locations, vec![q("0"), q("1")]);
        assert_eq!(s.assignment, vec![0, 1]);
    }

    #[test]
    fn eep_reflects_when_left_half_overflows() {
        // Left side {0,0,0} overflows capacity 2, so the left facility
        // reflects to 2*x_3 - x_4 = -1.
        let i = inst(&["0", "0", "0", "1"], &[2, 2]);
        let s = run_extended_endpoint(&i).unwrap();
        assert_eq!(s.locations, vec![q("-1"), q("1")]);
        assert_eq!(s.assignment, vec![0, 0, 1, 1]);
        assert_eq!(total_distance(&i, &s).unwrap(), q("3"));
    }

    #[test]
    fn eep_reflects_when_right_half_overflows() {
        // Right-heavy: three agents beyond the midpoint, right capacity 1.
        let i = inst(&["0", "1/10", "9/10", "1"], &[3, 1]);
        let s = run_extended_endpoint(&i).unwrap();
        // Sides split 2/2, so the larger facility 0 keeps the left role.
        // Right side {9/10, 1} overflows capacity 1: reflect around x_3.
        assert_eq!(s.locations[0], q("0"));
        assert_eq!(s.locations[1], q("9/5"));
        assert_eq!(s.assignment, vec![0, 0, 0, 1]);
    }

    #[test]
    fn eep_smaller_facility_takes_the_thin_side() {
        // Majority of agents on the right: the big facility swaps to the right.
        let i = inst(&["0", "5/8", "3/4", "7/8", "1"], &[3, 2]);
        let s = run_extended_endpoint(&i).unwrap();
        // Facility 1 (cap 2) anchors the left, facility 0 (cap 3) the right.
        // Right side has 4 agents > 3: reflect, y = 2 * 5/8 - 0 = 5/4.
        assert_eq!(s.locations, vec![q("5/4"), q("0")]);
        assert_eq!(s.assignment, vec![1, 1, 0, 0, 0]);
    }

    #[test]
    fn eep_colocated_agents_all_count_left() {
        let i = inst(&["1/2", "1/2", "1/2"], &[2, 2]);
        let s = run_extended_endpoint(&i).unwrap();
        assert_eq!(s.locations, vec![q("1/2"), q("1/2")]);
        // Left side holds all three, capacity 2 overflows: reflection is again
        // the same point because the span is zero... 2 * x_3 - x_3 = x_3.
        assert_eq!(s.assignment, vec![0, 0, 1]);
    }

    #[test]
    fn eep_zero_cost_when_two_sites_fit_both_facilities() {
        // Whenever an optimal placement has zero cost, so does this rule.
        let i = inst(&["0", "0", "1", "1"], &[2, 2]);
        let s = run_extended_endpoint(&i).unwrap();
        assert_eq!(s.locations, vec![q("0"), q("1")]);
        assert_eq!(total_distance(&i, &s).unwrap(), q("0"));
    }
}
