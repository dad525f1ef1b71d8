//! Release gates for the whole crate, one test per criterion. Each test
//! prints a single `PASS <name>` line with its measured runtime (visible with
//! `--nocapture`) and enforces the runtime budget it states.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use faciloc::axioms::DeviationGrid;
use faciloc::experiments::run_theorem_audit;
use faciloc::generate::{gen_instances, FamilySpec};
use faciloc::instance::Instance;
use faciloc::mechanisms::MechanismId;
use faciloc::optimal::{opt_bruteforce, opt_dp, opt_welfare_ratio, Ratio};
use faciloc::rational::Rational;
use faciloc::solution::{welfare, welfare_sandwich_ok, Objective, Solution};

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

/// Every solution the gates produce funnels through here: it must be feasible
/// and its two welfare values must satisfy max <= total <= n * max.
fn check_solution(inst: &Instance, sol: &Solution) {
    sol.validate(inst).expect("produced solution must be feasible");
    assert!(
        welfare_sandwich_ok(inst, sol),
        "welfare sandwich violated on {inst:?} by {sol:?}"
    );
}

fn finish(name: &str, budget_secs: f64, started: Instant, detail: &str) {
    let elapsed = started.elapsed();
    println!("PASS {name} ({elapsed:.2?}): {detail}");
    assert!(
        elapsed.as_secs_f64() < budget_secs,
        "{name} exceeded its {budget_secs}s budget: {elapsed:?}"
    );
}

/// All non-decreasing location vectors of length `n` over `points`.
fn multisets(points: &[Rational], n: usize) -> Vec<Vec<Rational>> {
    fn rec(
        points: &[Rational],
        n: usize,
        start: usize,
        cur: &mut Vec<Rational>,
        out: &mut Vec<Vec<Rational>>,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..points.len() {
            cur.push(points[i].clone());
            rec(points, n, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(points, n, 0, &mut Vec::new(), &mut out);
    out
}

const CAP_POOL: [&[usize]; 5] = [&[2, 2], &[3, 3], &[2, 3], &[1, 2], &[2, 2, 2]];

/// The two exact solvers take independent routes (contiguous dynamic program
/// vs exhaustive search) and must agree on the optimal value everywhere.
#[test]
fn oracle_equivalence_dp_vs_bruteforce() {
    let started = Instant::now();
    let points: Vec<Rational> = (0..=4).map(|i| Rational::ratio(i, 4)).collect();

    let mut instances = Vec::new();
    for caps in CAP_POOL {
        let cap_total: usize = caps.iter().sum();
        for n in 1..=cap_total.min(6) {
            for locs in multisets(&points, n) {
                instances.push(Instance::new(locs, caps.to_vec()).unwrap());
            }
        }
    }
    let grid_count = instances.len();
    assert_eq!(grid_count, 1353, "exhaustive grid should cover every capacity pattern");

    let mut rng = ChaCha20Rng::seed_from_u64(0xFAC1);
    for _ in 0..500 {
        let caps = CAP_POOL[rng.gen_range(0..CAP_POOL.len())];
        let cap_total: usize = caps.iter().sum();
        let n = rng.gen_range(1..=cap_total.min(6));
        let locs: Vec<Rational> =
            (0..n).map(|_| Rational::ratio(rng.gen_range(-12..=12), 12)).collect();
        instances.push(Instance::new(locs, caps.to_vec()).unwrap());
    }

    for inst in &instances {
        for obj in [Objective::Total, Objective::Max] {
            let dp = opt_dp(inst, obj).unwrap();
            let bf = opt_bruteforce(inst, obj).unwrap();
            check_solution(inst, &dp);
            check_solution(inst, &bf);
            let dp_value = welfare(inst, &dp, obj).unwrap();
            let bf_value = welfare(inst, &bf, obj).unwrap();
            assert_eq!(dp_value, bf_value, "solvers disagree on {inst:?} under {obj}");
        }
    }
    finish(
        "oracle-equivalence",
        60.0,
        started,
        &format!("{grid_count} grid + 500 random instances, both objectives agree exactly"),
    );
}

/// On k-1 agents at 0 against k+1 at 1 with capacities (k, k), the inner-point
/// rule pays exactly k-1 times the optimal total distance.
#[test]
fn innerpoint_total_ratio_is_exactly_k_minus_1() {
    let started = Instant::now();
    for k in 2..=6usize {
        let members = gen_instances(&FamilySpec::RatioTotalK { k }, 0).unwrap();
        assert_eq!(members.len(), 1);
        let inst = &members[0].instance;
        check_solution(inst, &MechanismId::InnerPoint.run(inst).unwrap());
        let rec =
            opt_welfare_ratio(inst, &members[0].label, &MechanismId::InnerPoint, Objective::Total)
                .unwrap();
        let expected = Ratio::Finite(Rational::from_int(k as i64 - 1));
        assert_eq!(rec.ratio, expected, "k = {k}: got {}", rec.ratio);
    }
    finish("innerpoint-total-tightness", 1.0, started, "ratio equals k-1 for k = 2..6");
}

/// The inner-point rule never exceeds twice the optimal maximum distance, and
/// hits exactly twice on (0, 1/2, 1/2, 1) with capacities (2, 2).
#[test]
fn innerpoint_max_ratio_at_most_2_with_equality_witness() {
    let started = Instant::now();
    let two = Rational::from_int(2);
    let mut rng = ChaCha20Rng::seed_from_u64(0xFAC3);
    for i in 0..10_000 {
        let k = rng.gen_range(1..=4usize);
        let locs: Vec<Rational> =
            (0..2 * k).map(|_| Rational::ratio(rng.gen_range(0..=12), 12)).collect();
        let inst = Instance::new(locs, vec![k, k]).unwrap();
        check_solution(&inst, &MechanismId::InnerPoint.run(&inst).unwrap());
        let rec = opt_welfare_ratio(&inst, &format!("rnd-{i}"), &MechanismId::InnerPoint, Objective::Max)
            .unwrap();
        assert!(rec.ratio.at_most(&two), "ratio {} above 2 on {inst:?}", rec.ratio);
    }

    let tight = Instance::new(vec![q("0"), q("1/2"), q("1/2"), q("1")], vec![2, 2]).unwrap();
    let rec = opt_welfare_ratio(&tight, "tight", &MechanismId::InnerPoint, Objective::Max).unwrap();
    assert_eq!(rec.ratio, Ratio::Finite(two), "equality witness should reach exactly 2");
    finish(
        "innerpoint-max-bound",
        30.0,
        started,
        "10000 no-spare instances stay within 2x; witness reaches exactly 2x",
    );
}

/// The extended endpoint rule stays within 3n/2 of the optimal total distance
/// and within 4x the optimal maximum, spare and unequal capacities included.
#[test]
fn extended_endpoint_ratio_bounds() {
    let started = Instant::now();
    let four = Rational::from_int(4);
    let mut rng = ChaCha20Rng::seed_from_u64(0xFAC4);
    let (mut spare_seen, mut unequal_seen) = (0usize, 0usize);
    for i in 0..10_000 {
        let caps = vec![rng.gen_range(1..=4usize), rng.gen_range(1..=4usize)];
        let n = rng.gen_range(1..=caps[0] + caps[1]);
        let locs: Vec<Rational> =
            (0..n).map(|_| Rational::ratio(rng.gen_range(0..=12), 12)).collect();
        let inst = Instance::new(locs, caps.clone()).unwrap();
        spare_seen += usize::from(inst.has_spare_capacity());
        unequal_seen += usize::from(caps[0] != caps[1]);
        check_solution(&inst, &MechanismId::ExtendedEndPoint.run(&inst).unwrap());

        let label = format!("rnd-{i}");
        let total =
            opt_welfare_ratio(&inst, &label, &MechanismId::ExtendedEndPoint, Objective::Total)
                .unwrap();
        let bound = Rational::ratio(3, 2) * Rational::from_int(n as i64);
        assert!(
            total.ratio.at_most(&bound),
            "total ratio {} above 3n/2 = {bound} on {inst:?}",
            total.ratio
        );

        let max =
            opt_welfare_ratio(&inst, &label, &MechanismId::ExtendedEndPoint, Objective::Max)
                .unwrap();
        assert!(max.ratio.at_most(&four), "max ratio {} above 4 on {inst:?}", max.ratio);
    }
    assert!(spare_seen > 0 && unequal_seen > 0, "draw must exercise spare and unequal capacity");
    finish(
        "extended-endpoint-bounds",
        60.0,
        started,
        &format!("10000 instances ({spare_seen} spare, {unequal_seen} unequal) within 3n/2 and 4x"),
    );
}

/// The exhaustive four-agent grid audit: the inner-point rule survives every
/// axiom check on all 70 members while each rival rule produces a
/// counterexample, and the fixture replay reproduces its 3/5 -> 2/5 gain.
#[test]
fn grid_audit_scenario_passes() {
    let started = Instant::now();
    let outcome = run_theorem_audit("thm4-grid", &DeviationGrid::default()).unwrap();
    assert!(outcome.passed, "grid audit failed:\n{outcome:#?}");
    assert_eq!(outcome.checks.len(), 6);
    assert!(outcome.checks[0].detail.contains("70 members"));
    let replay = outcome.checks.last().unwrap();
    assert!(replay.label.contains("3/5") && replay.label.contains("2/5"));
    finish("grid-audit", 120.0, started, "70-member audit + misreport replay all hold");
}

/// With three facilities, every catalog mechanism that applies fails at least
/// one of anonymity, Pareto optimality and strategy proofness.
#[test]
fn three_facility_mechanisms_all_fail_an_axiom() {
    let started = Instant::now();
    let outcome = run_theorem_audit("thm5-3fac", &DeviationGrid::default()).unwrap();
    assert!(outcome.passed, "three-facility audit failed:\n{outcome:#?}");
    assert_eq!(outcome.checks.len(), 6, "all six three-facility rules must be audited");
    for check in &outcome.checks {
        assert!(check.passed, "{} found no failure", check.label);
    }
    finish("three-facility-impossibility", 30.0, started, "all 6 rules fail an axiom check");
}

/// Degenerate percentile vectors place both facilities on top of each other,
/// so their maximum-distance ratio is unbounded (flagged as infinite).
#[test]
fn degenerate_percentiles_have_unbounded_max_ratio() {
    let started = Instant::now();
    let members = gen_instances(&FamilySpec::Thm1Percentile, 0).unwrap();
    assert_eq!(members.len(), 2);

    let both_zero = MechanismId::parse("percentile:0,0").unwrap();
    let rec = opt_welfare_ratio(&members[0].instance, &members[0].label, &both_zero, Objective::Max)
        .unwrap();
    assert_eq!(rec.ratio, Ratio::Infinite, "p = (0, 0) on two split agents");

    let quartiles = MechanismId::parse("percentile:1/4,3/4").unwrap();
    let rec = opt_welfare_ratio(&members[1].instance, &members[1].label, &quartiles, Objective::Max)
        .unwrap();
    assert_eq!(rec.ratio, Ratio::Infinite, "p = (1/4, 3/4) on one-against-five");

    let outcome = run_theorem_audit("thm1-percentile", &DeviationGrid::default()).unwrap();
    assert!(outcome.passed);
    finish("unbounded-ratio-replay", 1.0, started, "both degenerate vectors flag an infinite ratio");
}

/// Cross product of the whole mechanism catalog against a mixed instance pool:
/// everything any rule or solver emits is feasible and welfare-sandwich-clean.
#[test]
fn all_produced_solutions_validate_and_respect_welfare_sandwich() {
    let started = Instant::now();

    let mut pool = Vec::new();
    let mut families = vec![
        FamilySpec::Thm1Percentile,
        FamilySpec::Thm5ThreeFac,
        FamilySpec::Thm4Grid,
        FamilySpec::Thm8Unequal,
        FamilySpec::Thm6Spare { c: 2 },
        FamilySpec::Thm6Spare { c: 3 },
        FamilySpec::Thm7Family { n: 5, k: 1 },
        FamilySpec::Thm7Family { n: 6, k: 2 },
        FamilySpec::Uniform { n: 5, capacities: vec![3, 3], count: 50, denom: 8 },
        FamilySpec::Uniform { n: 3, capacities: vec![1, 2], count: 20, denom: 8 },
        FamilySpec::UniformTwoFacility { max_cap: 4, count: 50, denom: 8 },
    ];
    families.extend((2..=6).map(|k| FamilySpec::RatioTotalK { k }));
    for family in &families {
        pool.extend(gen_instances(family, 0).unwrap().into_iter().map(|g| g.instance));
    }

    let imposing: Vec<MechanismId> = [
        "percentile:cap:0,0",
        "percentile:cap:1/4,3/4",
        "percentile:cap:0,0,0",
        "jlk:cap:1,1",
        "jlk:cap:2,0",
        "jlk:cap:0,2",
        "jlk:cap:2,1",
        "jlk:cap:1,2",
        "innerpoint",
        "eep",
        "capsd",
        "fixtureb",
        "fixturec",
        "fixtured",
    ]
    .iter()
    .map(|s| MechanismId::parse(s).unwrap())
    .collect();

    let mut produced = 0usize;
    for inst in &pool {
        for mech in &imposing {
            if let Ok(sol) = mech.run(inst) {
                check_solution(inst, &sol);
                produced += 1;
            }
        }
        if inst.n() <= 8 {
            for obj in [Objective::Total, Objective::Max] {
                let sol = opt_dp(inst, obj).unwrap();
                check_solution(inst, &sol);
                produced += 1;
            }
        }
    }

    // Non-imposing rules assume capacity never binds; give them room.
    let uncap: Vec<MechanismId> = ["percentile:1/2", "percentile:0,1", "percentile:0,0", "jlk:1,1", "jlk:2,0"]
        .iter()
        .map(|s| MechanismId::parse(s).unwrap())
        .collect();
    for inst in pool.iter().take(120) {
        let n = inst.n();
        let locs: Vec<Rational> = (0..n).map(|i| inst.loc(i).clone()).collect();
        for m in [1usize, 2] {
            let roomy = Instance::new(locs.clone(), vec![n; m]).unwrap();
            for mech in &uncap {
                if let Ok(sol) = mech.run(&roomy) {
                    check_solution(&roomy, &sol);
                    produced += 1;
                }
            }
        }
    }

    assert!(produced > 2000, "sweep produced only {produced} solutions");
    finish(
        "global-solution-invariants",
        60.0,
        started,
        &format!("{produced} solutions validated with exact welfare sandwich"),
    );
}
