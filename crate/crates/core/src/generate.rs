//! Deterministic instance generators: seeded random families plus the named
//! adversarial families used by the audit scenarios.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::instance::{Instance, InstanceError};
use crate::rational::Rational;

/// A generator family. Random families are driven entirely by the seed passed
/// to [`gen_instances`]; named families enumerate a fixed member list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// `count` instances, `n` locations uniform on the `1/denom` grid in [0, 1].
    Uniform {
        n: usize,
        capacities: Vec<usize>,
        count: usize,
        denom: u32,
    },
    /// Like `Uniform`, but locations bunch around a few random cluster centres.
    Clustered {
        n: usize,
        capacities: Vec<usize>,
        count: usize,
        clusters: usize,
        denom: u32,
    },
    /// Two facilities with random capacities in `1..=max_cap` (spare and
    /// unequal capacity both arise), random `n` up to the capacity total.
    UniformTwoFacility { max_cap: usize, count: usize, denom: u32 },
    /// Two equal facilities of capacity `c` with one unit of spare pressure:
    /// block of agents at 0 against a block at 1, in three arrangements.
    Thm6Spare { c: usize },
    /// `k - 1` agents at 0 and `k + 1` at 1 under capacities `(k, k)`.
    RatioTotalK { k: usize },
    /// `k` agents at `-n^2`, `n - k - 1` at 0, one agent sweeping over a short
    /// range, capacities `(n - k, n - k)`.
    Thm7Family { n: usize, k: usize },
    /// The two instances on which degenerate percentile vectors lose every
    /// welfare guarantee.
    Thm1Percentile,
    /// Three-facility audit family: base instance, the moved-agent pivot, and
    /// two crowd members that expose manipulable mixed left/right splits.
    Thm5ThreeFac,
    /// Every size-4 location multiset over {0, 1/4, 1/2, 3/4, 1}, c = (2, 2).
    Thm4Grid,
    /// Every size-5 location multiset over {0, 1/2, 1}, c = (3, 2).
    Thm8Unequal,
}

/// An instance plus the stable label used in reports.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub label: String,
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid family parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

fn cap_label(caps: &[usize]) -> String {
    caps.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(".")
}

fn grid_point(rng: &mut ChaCha20Rng, denom: u32) -> Rational {
    Rational::ratio(rng.gen_range(0..=denom) as i64, denom as i64)
}

/// All non-decreasing tuples of length `n` over `points`, as location vectors.
fn multisets(points: &[Rational], n: usize) -> Vec<Vec<Rational>> {
    fn rec(points: &[Rational], n: usize, start: usize, cur: &mut Vec<Rational>, out: &mut Vec<Vec<Rational>>) {
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

fn block_instance(zeros: usize, ones: usize, caps: Vec<usize>) -> Result<Instance, GenError> {
    let mut locs = vec![Rational::zero(); zeros];
    locs.extend(std::iter::repeat(Rational::from_int(1)).take(ones));
    Ok(Instance::new(locs, caps)?)
}

/// Generates the family deterministically: same spec + seed, same instances.
pub fn gen_instances(spec: &FamilySpec, seed: u64) -> Result<Vec<GeneratedInstance>, GenError> {
    let mut out = Vec::new();
    match spec {
        FamilySpec::Uniform { n, capacities, count, denom } => {
            if *denom == 0 {
                return Err(GenError::BadParams("denominator must be positive".into()));
            }
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            for i in 0..*count {
                let locs = (0..*n).map(|_| grid_point(&mut rng, *denom)).collect();
                out.push(GeneratedInstance {
                    label: format!("uniform-n{}-c{}-{}", n, cap_label(capacities), i),
                    instance: Instance::new(locs, capacities.clone())?,
                });
            }
        }
        FamilySpec::Clustered { n, capacities, count, clusters, denom } => {
            if *clusters == 0 || *denom == 0 {
                return Err(GenError::BadParams("clusters and denominator must be positive".into()));
            }
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let spread = (*denom / 20).max(1) as i64;
            for i in 0..*count {
                let centres: Vec<Rational> = (0..*clusters).map(|_| grid_point(&mut rng, *denom)).collect();
                let locs = (0..*n)
                    .map(|_| {
                        let c = &centres[rng.gen_range(0..*clusters)];
                        let jitter = Rational::ratio(rng.gen_range(-spread..=spread), *denom as i64);
                        c + jitter
                    })
                    .collect();
                out.push(GeneratedInstance {
                    label: format!("clustered-n{}-c{}-{}", n, cap_label(capacities), i),
                    instance: Instance::new(locs, capacities.clone())?,
                });
            }
        }
        FamilySpec::UniformTwoFacility { max_cap, count, denom } => {
            if *max_cap == 0 || *denom == 0 {
                return Err(GenError::BadParams("max_cap and denominator must be positive".into()));
            }
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            for i in 0..*count {
                let caps = vec![rng.gen_range(1..=*max_cap), rng.gen_range(1..=*max_cap)];
                let n = rng.gen_range(1..=caps[0] + caps[1]);
                let locs = (0..n).map(|_| grid_point(&mut rng, *denom)).collect();
                out.push(GeneratedInstance {
                    label: format!("uniform2-n{}-c{}-{}", n, cap_label(&caps), i),
                    instance: Instance::new(locs, caps)?,
                });
            }
        }
        FamilySpec::Thm6Spare { c } => {
            let c = *c;
            if c < 2 {
                return Err(GenError::BadParams("spare family needs capacity >= 2".into()));
            }
            for (zeros, ones) in [(c, c - 1), (c - 1, c), (c + 1, c - 2)] {
                out.push(GeneratedInstance {
                    label: format!("thm6-spare-c{}-z{}o{}", c, zeros, ones),
                    instance: block_instance(zeros, ones, vec![c, c])?,
                });
            }
        }
        FamilySpec::RatioTotalK { k } => {
            let k = *k;
            if k < 2 {
                return Err(GenError::BadParams("ratio family needs k >= 2".into()));
            }
            out.push(GeneratedInstance {
                label: format!("ratio-total-k{}", k),
                instance: block_instance(k - 1, k + 1, vec![k, k])?,
            });
        }
        FamilySpec::Thm7Family { n, k } => {
            let (n, k) = (*n, *k);
            if k == 0 || k + 2 > n {
                return Err(GenError::BadParams("need 1 <= k <= n - 2".into()));
            }
            let far = Rational::from_int(-((n * n) as i64));
            for step in 0..=8i64 {
                let x = Rational::ratio(step, 4);
                let mut locs = vec![far.clone(); k];
                locs.extend(std::iter::repeat(Rational::zero()).take(n - k - 1));
                locs.push(x.clone());
                out.push(GeneratedInstance {
                    label: format!("thm7-n{}-k{}-x{}", n, k, x),
                    instance: Instance::new(locs, vec![n - k, n - k])?,
                });
            }
        }
        FamilySpec::Thm1Percentile => {
            out.push(GeneratedInstance {
                label: "thm1-percentile-2".into(),
                instance: Instance::new(
                    vec![Rational::zero(), Rational::from_int(1)],
                    vec![2, 2],
                )?,
            });
            let mut locs = vec![Rational::zero()];
            locs.extend(std::iter::repeat(Rational::from_int(1)).take(5));
            out.push(GeneratedInstance {
                label: "thm1-percentile-6".into(),
                instance: Instance::new(locs, vec![6, 6])?,
            });
        }
        FamilySpec::Thm5ThreeFac => {
            let base = |xs: [i64; 6]| {
                Instance::new(xs.iter().map(|&v| Rational::from_int(v)).collect(), vec![2, 2, 2])
            };
            out.push(GeneratedInstance {
                label: "thm5-3fac-base".into(),
                instance: base([0, 0, 10, 10, 20, 20])?,
            });
            out.push(GeneratedInstance {
                label: "thm5-3fac-moved".into(),
                instance: base([0, 0, 10, 11, 20, 20])?,
            });
            let crowd = |xs: [(i64, i64); 6]| {
                Instance::new(
                    xs.iter().map(|&(p, q)| Rational::ratio(p, q)).collect(),
                    vec![2, 2, 2],
                )
            };
            out.push(GeneratedInstance {
                label: "thm5-3fac-left-crowd".into(),
                instance: crowd([(0, 1), (3, 4), (1, 1), (1, 1), (1, 1), (1, 1)])?,
            });
            out.push(GeneratedInstance {
                label: "thm5-3fac-right-crowd".into(),
                instance: crowd([(0, 1), (0, 1), (0, 1), (0, 1), (1, 4), (1, 1)])?,
            });
        }
        FamilySpec::Thm4Grid => {
            let points: Vec<Rational> = (0..=4).map(|i| Rational::ratio(i, 4)).collect();
            for (i, locs) in multisets(&points, 4).into_iter().enumerate() {
                out.push(GeneratedInstance {
                    label: format!("thm4-grid-{i}"),
                    instance: Instance::new(locs, vec![2, 2])?,
                });
            }
        }
        FamilySpec::Thm8Unequal => {
            let points: Vec<Rational> = (0..=2).map(|i| Rational::ratio(i, 2)).collect();
            for (i, locs) in multisets(&points, 5).into_iter().enumerate() {
                out.push(GeneratedInstance {
                    label: format!("thm8-unequal-{i}"),
                    instance: Instance::new(locs, vec![3, 2])?,
                });
            }
        }
    }
    Ok(out)
}
