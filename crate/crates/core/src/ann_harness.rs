//! Closest pair through a nearest-neighbour data structure: cut A into parts
//! of size ⌈N^γ⌉ with γ = 1/(2c), build one structure per part, and query
//! every b against every part.

use rand::Rng;
use rayon::prelude::*;

use crate::bits::BitVector;
use crate::cp_reduction::{CPInstance, Metric};
use crate::error::{Error, Result};
use crate::solvers::SolveResult;

/// A preprocessed part.
pub trait AnnIndex: Send + Sync {
    /// Distance evaluations spent building the structure.
    fn preprocessing_cost(&self) -> u64;
    /// (local index, metric value, distance evaluations). `nonce` seeds any
    /// randomness so repeated runs agree.
    fn query(&self, q: &BitVector, nonce: u64) -> (usize, u64, u64);
}

pub trait AnnOracle: Sync {
    fn name(&self) -> &'static str;
    /// Declared approximation slack ε: answers are within (1+ε) of the
    /// nearest distance.
    fn epsilon(&self) -> f64;
    /// Declared (c, δ): preprocessing N^c, queries N^{1−δ}.
    fn exponents(&self) -> (f64, f64);
    fn preprocess(&self, vectors: Vec<BitVector>, metric: Metric) -> Box<dyn AnnIndex>;
}

struct ScanIndex {
    vectors: Vec<BitVector>,
    metric: Metric,
    slack: f64,
    seed: u64,
}

impl AnnIndex for ScanIndex {
    fn preprocessing_cost(&self) -> u64 {
        self.vectors.len() as u64
    }

    fn query(&self, q: &BitVector, nonce: u64) -> (usize, u64, u64) {
        let vals: Vec<u64> = self.vectors.iter().map(|v| self.metric.value(q, v)).collect();
        let cost = vals.len() as u64;
        let (best_i, &best) = vals.iter().enumerate().min_by_key(|&(i, v)| (*v, i)).expect("nonempty part");
        if self.slack == 0.0 {
            return (best_i, best, cost);
        }
        // values are distance^root, so the slack is raised to the same power
        let limit = best as f64 * (1.0 + self.slack).powi(self.metric.root() as i32);
        let cands: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] as f64 <= limit).collect();
        let mut r = crate::seed::rng(crate::seed::sub_seed(self.seed, nonce));
        let pick = cands[r.gen_range(0..cands.len())];
        (pick, vals[pick], cost)
    }
}

/// Brute-force scan behind the interface, ε = 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactOracle;

impl AnnOracle for ExactOracle {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn epsilon(&self) -> f64 {
        0.0
    }

    fn exponents(&self) -> (f64, f64) {
        (1.0, 0.0)
    }

    fn preprocess(&self, vectors: Vec<BitVector>, metric: Metric) -> Box<dyn AnnIndex> {
        Box::new(ScanIndex {
            vectors,
            metric,
            slack: 0.0,
            seed: 0,
        })
    }
}

/// Returns a random vector among those within (1+ε) of the nearest.
#[derive(Clone, Copy, Debug)]
pub struct SamplingOracle {
    pub epsilon: f64,
    pub seed: u64,
}

impl AnnOracle for SamplingOracle {
    fn name(&self) -> &'static str {
        "sampling"
    }

    fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn exponents(&self) -> (f64, f64) {
        (1.0, 0.0)
    }

    fn preprocess(&self, vectors: Vec<BitVector>, metric: Metric) -> Box<dyn AnnIndex> {
        Box::new(ScanIndex {
            vectors,
            metric,
            slack: self.epsilon,
            seed: self.seed,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionPlan {
    pub n: usize,
    pub c: f64,
    pub gamma: f64,
    /// ⌈N^γ⌉.
    pub part_size: usize,
    /// ⌈N / part_size⌉.
    pub parts: usize,
    /// Sizes of consecutive parts, balanced to differ by at most one.
    pub sizes: Vec<usize>,
}

impl PartitionPlan {
    /// Index ranges of the parts within A.
    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.sizes
            .iter()
            .map(|&s| {
                let r = start..start + s;
                start += s;
                r
            })
            .collect()
    }
}

/// Least s with s^{2c} ≥ N.
fn ceil_root(n: usize, c: f64) -> usize {
    let mut s = (n as f64).powf(1.0 / (2.0 * c)).ceil().max(1.0) as usize;
    let covers = |s: usize| -> bool {
        if c.fract() == 0.0 && c <= 32.0 {
            (s as u128).checked_pow(2 * c as u32).is_none_or(|v| v >= n as u128)
        } else {
            (s as f64).powf(2.0 * c) >= n as f64
        }
    };
    while s > 1 && covers(s - 1) {
        s -= 1;
    }
    while !covers(s) {
        s += 1;
    }
    s
}

pub fn make_plan(n: usize, c: f64) -> Result<PartitionPlan> {
    if n == 0 || c.is_nan() || c < 1.0 {
        return Err(Error::pre(format!("plan needs N ≥ 1 and c ≥ 1, got N = {n}, c = {c}")));
    }
    let part_size = ceil_root(n, c);
    let parts = n.div_ceil(part_size);
    let (q, rem) = (n / parts, n % parts);
    let sizes = (0..parts).map(|i| q + usize::from(i < rem)).collect();
    Ok(PartitionPlan {
        n,
        c,
        gamma: 1.0 / (2.0 * c),
        part_size,
        parts,
        sizes,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostLedger {
    pub oracle: &'static str,
    pub parts: usize,
    pub queries: u64,
    pub preprocessing_units: u64,
    pub query_units: u64,
    /// 3/2 − γ, the total preprocessing exponent at c·γ = 1/2.
    pub preprocessing_exponent: f64,
    /// 1 − γ + γ·(1 − δ), total query time per b.
    pub query_exponent: f64,
}

pub fn partitioned_closest_pair(
    cp: &CPInstance,
    oracle: &dyn AnnOracle,
    plan: &PartitionPlan,
) -> Result<(SolveResult, CostLedger)> {
    if plan.n != cp.a.len() {
        return Err(Error::pre(format!("plan for N = {} but |A| = {}", plan.n, cp.a.len())));
    }
    if cp.b.is_empty() {
        return Err(Error::pre("empty query set"));
    }
    let ranges = plan.ranges();
    let indexes: Vec<Box<dyn AnnIndex>> = ranges
        .par_iter()
        .map(|r| oracle.preprocess(cp.a[r.clone()].to_vec(), cp.metric))
        .collect();
    let answers: Vec<Result<(u64, usize, usize, u64)>> = (0..cp.b.len())
        .into_par_iter()
        .flat_map_iter(|j| {
            let indexes = &indexes;
            ranges.iter().enumerate().map(move |(p, r)| {
                let nonce = (j * plan.parts + p) as u64;
                let (local, value, cost) = indexes[p].query(&cp.b[j], nonce);
                if local >= r.len() {
                    return Err(Error::OracleContract(format!("part {p} returned index {local} of {}", r.len())));
                }
                let a = r.start + local;
                let truth = cp.metric.value(&cp.a[a], &cp.b[j]);
                if truth != value {
                    return Err(Error::OracleContract(format!(
                        "query b={j} part {p}: reported {value}, metric gives {truth} for a={a}"
                    )));
                }
                Ok((value, a, j, cost))
            })
        })
        .collect();
    let mut best = (u64::MAX, usize::MAX, usize::MAX);
    let mut query_units = 0;
    for ans in answers {
        let (v, a, b, cost) = ans?;
        query_units += cost;
        best = best.min((v, a, b));
    }
    let (_, delta) = oracle.exponents();
    let ledger = CostLedger {
        oracle: oracle.name(),
        parts: plan.parts,
        queries: (cp.b.len() * plan.parts) as u64,
        preprocessing_units: indexes.iter().map(|i| i.preprocessing_cost()).sum(),
        query_units,
        preprocessing_exponent: 1.5 - plan.gamma,
        query_exponent: 1.0 - plan.gamma + plan.gamma * (1.0 - delta),
    };
    let res = SolveResult {
        value: best.0,
        a: best.1,
        b: best.2,
        metric: cp.metric,
        visited: query_units,
    };
    Ok((res, ledger))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::closest_pair;

    fn random_instance(seed: u64, na: usize, nb: usize, d: usize) -> CPInstance {
        let mut r = crate::seed::rng(seed);
        let mut gen = |k: usize| -> Vec<BitVector> {
            (0..k)
                .map(|_| BitVector::from_bools(&(0..d).map(|_| r.gen_bool(0.5)).collect::<Vec<_>>()))
                .collect()
        };
        let a = gen(na);
        let b = gen(nb);
        CPInstance::new(d, Metric::Hamming, a, b, "random").unwrap()
    }

    #[test]
    fn plan_examples() {
        let p = make_plan(100, 1.0).unwrap();
        assert_eq!((p.gamma, p.part_size, p.parts), (0.5, 10, 10));
        let p = make_plan(100, 2.0).unwrap();
        assert_eq!((p.gamma, p.part_size, p.parts), (0.25, 4, 25));
        let p = make_plan(1, 3.0).unwrap();
        assert_eq!((p.parts, p.sizes.clone()), (1, vec![1]));
        assert!(make_plan(0, 1.0).is_err());
        assert!(make_plan(5, 0.5).is_err());
    }

    #[test]
    fn plan_bookkeeping() {
        for n in 1..=2000 {
            for c in [1.0, 1.5, 2.0, 3.0] {
                let p = make_plan(n, c).unwrap();
                assert_eq!(p.sizes.iter().sum::<usize>(), n);
                assert_eq!(p.sizes.len(), p.parts);
                assert!(p.sizes.iter().all(|&s| s <= p.part_size && s + 1 >= p.part_size), "n={n} c={c}");
                // least s with s^{2c} ≥ n
                assert!((p.part_size as f64).powf(2.0 * c) >= n as f64 - 1e-9);
                assert!(p.part_size == 1 || ((p.part_size - 1) as f64).powf(2.0 * c) < n as f64);
            }
        }
    }

    #[test]
    fn exact_oracle_matches_brute_force() {
        for seed in 0..10 {
            let cp = random_instance(seed, 17, 9, 24);
            let plan = make_plan(17, 1.0).unwrap();
            let (res, ledger) = partitioned_closest_pair(&cp, &ExactOracle, &plan).unwrap();
            let bf = closest_pair(&cp).unwrap();
            assert_eq!((res.value, res.a, res.b), (bf.value, bf.a, bf.b));
            assert_eq!(ledger.queries, 9 * plan.parts as u64);
            assert_eq!(ledger.preprocessing_units, 17);
            assert_eq!(ledger.query_units, 17 * 9);
        }
    }

    #[test]
    fn sampling_oracle_within_slack() {
        for seed in 0..10 {
            let cp = random_instance(100 + seed, 30, 6, 40);
            let plan = make_plan(30, 1.0).unwrap();
            let oracle = SamplingOracle { epsilon: 0.2, seed };
            let (res, _) = partitioned_closest_pair(&cp, &oracle, &plan).unwrap();
            let bf = closest_pair(&cp).unwrap();
            assert!(res.value as f64 <= 1.2 * bf.value as f64);
            assert_eq!(res, partitioned_closest_pair(&cp, &oracle, &plan).unwrap().0);
        }
    }

    struct Liar;

    struct LiarIndex;

    impl AnnIndex for LiarIndex {
        fn preprocessing_cost(&self) -> u64 {
            0
        }
        fn query(&self, _: &BitVector, _: u64) -> (usize, u64, u64) {
            (0, 0, 1)
        }
    }

    impl AnnOracle for Liar {
        fn name(&self) -> &'static str {
            "liar"
        }
        fn epsilon(&self) -> f64 {
            0.0
        }
        fn exponents(&self) -> (f64, f64) {
            (1.0, 0.0)
        }
        fn preprocess(&self, _: Vec<BitVector>, _: Metric) -> Box<dyn AnnIndex> {
            Box::new(LiarIndex)
        }
    }

    #[test]
    fn contract_violation_surfaces() {
        let cp = random_instance(7, 4, 2, 64);
        let plan = make_plan(4, 1.0).unwrap();
        assert!(matches!(
            partitioned_closest_pair(&cp, &Liar, &plan),
            Err(Error::OracleContract(_))
        ));
    }
}
