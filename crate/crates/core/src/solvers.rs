//! Brute-force ground truth.

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::cp_reduction::{CPInstance, Metric, OVInstance};
use crate::error::{Error, Result};

/// Lexicographically first orthogonal pair, if any.
pub fn solve_ov(ov: &OVInstance) -> Option<(usize, usize)> {
    ov.a.par_iter()
        .enumerate()
        .filter_map(|(i, a)| ov.b.iter().position(|b| a.is_orthogonal(b)).map(|j| (i, j)))
        .min()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    /// Hamming, ℓ1 and edit distances as is; ℓ2 squared; ℓp to the p-th power.
    pub value: u64,
    pub a: usize,
    pub b: usize,
    pub metric: Metric,
    /// Pairs evaluated.
    pub visited: u64,
}

/// Exhaustive scan, ties broken by the lowest (a, b).
pub fn closest_pair(cp: &CPInstance) -> Result<SolveResult> {
    if cp.a.is_empty() || cp.b.is_empty() {
        return Err(Error::pre("closest pair needs two nonempty sets"));
    }
    let metric = cp.metric;
    type Rows = Vec<Vec<u8>>;
    let edit_rows: Option<(Rows, Rows)> = (metric == Metric::Edit).then(|| {
        (
            cp.a.iter().map(|v| v.to_bytes01()).collect(),
            cp.b.iter().map(|v| v.to_bytes01()).collect(),
        )
    });
    let (value, a, b, visited) = (0..cp.a.len())
        .into_par_iter()
        .map(|i| {
            let mut best = (u64::MAX, i, 0usize);
            for (j, y) in cp.b.iter().enumerate() {
                let v = match &edit_rows {
                    Some((ea, eb)) => crate::edit_reduction::edit_distance(&ea[i], &eb[j]) as u64,
                    None => cp.a[i].hamming(y) as u64,
                };
                if v < best.0 {
                    best = (v, i, j);
                }
            }
            (best.0, best.1, best.2, cp.b.len() as u64)
        })
        .reduce(
            || (u64::MAX, usize::MAX, usize::MAX, 0),
            |x, y| {
                let m = if (x.0, x.1, x.2) <= (y.0, y.1, y.2) { x } else { y };
                (m.0, m.1, m.2, x.3 + y.3)
            },
        );
    Ok(SolveResult {
        value,
        a,
        b,
        metric,
        visited,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxRatio {
    Finite(Ratio<u64>),
    Infinite,
}

impl fmt::Display for ApproxRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ApproxRatio::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ApproxRatio::Infinite => f.write_str("inf"),
        }
    }
}

/// metric(candidate) / optimum, in the metric's stored value (squared for ℓ2).
pub fn approx_ratio(cp: &CPInstance, candidate: (usize, usize)) -> Result<ApproxRatio> {
    let (i, j) = candidate;
    if i >= cp.a.len() || j >= cp.b.len() {
        return Err(Error::pre(format!("candidate ({i}, {j}) out of range")));
    }
    let opt = closest_pair(cp)?.value;
    let v = cp.metric.value(&cp.a[i], &cp.b[j]);
    Ok(match (opt, v) {
        (0, 0) => ApproxRatio::Finite(Ratio::from_integer(1)),
        (0, _) => ApproxRatio::Infinite,
        _ => ApproxRatio::Finite(Ratio::new(v, opt)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitVector;
    use rand::Rng;

    fn bv(s: &str) -> BitVector {
        BitVector::parse(s).unwrap()
    }

    fn random_vec(r: &mut impl Rng, m: usize) -> BitVector {
        BitVector::from_bools(&(0..m).map(|_| r.gen_bool(0.5)).collect::<Vec<_>>())
    }

    #[test]
    fn ov_examples() {
        let yes = OVInstance::new(4, vec![bv("1100")], vec![bv("0011")]).unwrap();
        assert_eq!(solve_ov(&yes), Some((0, 0)));
        let no = OVInstance::new(4, vec![bv("1111")], vec![bv("1000")]).unwrap();
        assert_eq!(solve_ov(&no), None);
    }

    #[test]
    fn ov_matches_naive_loop() {
        let mut r = crate::seed::rng(1);
        for _ in 0..100 {
            let m = r.gen_range(1..=64);
            let a: Vec<_> = (0..5).map(|_| random_vec(&mut r, m)).collect();
            let b: Vec<_> = (0..5).map(|_| random_vec(&mut r, m)).collect();
            let ov = OVInstance::new(m, a.clone(), b.clone()).unwrap();
            let mut naive = None;
            'o: for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    if (0..m).all(|k| !(x.get(k) && y.get(k))) {
                        naive = Some((i, j));
                        break 'o;
                    }
                }
            }
            assert_eq!(solve_ov(&ov), naive);
        }
    }

    #[test]
    fn closest_pair_basics() {
        let cp = CPInstance::new(4, Metric::Hamming, vec![bv("1100"), bv("0110")], vec![bv("0110"), bv("1111")], "t")
            .unwrap();
        let res = closest_pair(&cp).unwrap();
        assert_eq!((res.value, res.a, res.b, res.visited), (0, 1, 0, 4));
        // ties: (0,1) and (1,1) both at distance 2, lowest index wins
        let tie = CPInstance::new(2, Metric::Hamming, vec![bv("10"), bv("01")], vec![bv("11")], "t").unwrap();
        assert_eq!((closest_pair(&tie).unwrap().a, closest_pair(&tie).unwrap().b), (0, 0));
        assert!(closest_pair(&CPInstance::new(2, Metric::Hamming, vec![], vec![bv("11")], "t").unwrap()).is_err());
    }

    #[test]
    fn hamming_identity_and_metric_transport() {
        let mut r = crate::seed::rng(2);
        let d = 50;
        for _ in 0..100 {
            let (x, y) = (random_vec(&mut r, d), random_vec(&mut r, d));
            let naive = (0..d).filter(|&k| x.get(k) != y.get(k)).count();
            assert_eq!(x.hamming(&y), naive);
            assert_eq!(naive, x.count_ones() + y.count_ones() - 2 * x.inner_product(&y));
            for m in [Metric::L1, Metric::L2, Metric::Lp(3)] {
                assert_eq!(m.value(&x, &y), naive as u64);
            }
        }
    }

    #[test]
    fn hamming_dual_implementation_10k() {
        let mut r = crate::seed::rng(3);
        for _ in 0..10_000 {
            let d = r.gen_range(1..130);
            let (x, y) = (random_vec(&mut r, d), random_vec(&mut r, d));
            assert_eq!(x.hamming(&y), x.iter().zip(y.iter()).filter(|(p, q)| p != q).count());
        }
    }

    #[test]
    fn edit_metric_axioms_sampled() {
        let mut r = crate::seed::rng(4);
        for _ in 0..1000 {
            let s: Vec<Vec<u8>> = (0..3).map(|_| (0..r.gen_range(0..16)).map(|_| r.gen_range(0..2)).collect()).collect();
            let ed = crate::edit_reduction::edit_distance;
            assert_eq!(ed(&s[0], &s[1]), ed(&s[1], &s[0]));
            assert!(ed(&s[0], &s[2]) <= ed(&s[0], &s[1]) + ed(&s[1], &s[2]));
        }
    }

    #[test]
    fn ratios() {
        let cp = CPInstance::new(3, Metric::Hamming, vec![bv("110"), bv("000")], vec![bv("111")], "t").unwrap();
        assert_eq!(approx_ratio(&cp, (0, 0)).unwrap(), ApproxRatio::Finite(Ratio::from_integer(1)));
        assert_eq!(approx_ratio(&cp, (1, 0)).unwrap(), ApproxRatio::Finite(Ratio::from_integer(3)));
        let z = CPInstance::new(3, Metric::Hamming, vec![bv("110"), bv("000")], vec![bv("110")], "t").unwrap();
        assert_eq!(approx_ratio(&z, (0, 0)).unwrap(), ApproxRatio::Finite(Ratio::from_integer(1)));
        assert_eq!(approx_ratio(&z, (1, 0)).unwrap(), ApproxRatio::Infinite);
        assert!(approx_ratio(&z, (2, 0)).is_err());
    }

    #[test]
    fn edit_closest_pair() {
        let cp = CPInstance::new(4, Metric::Edit, vec![bv("0101"), bv("1111")], vec![bv("1010")], "t").unwrap();
        let res = closest_pair(&cp).unwrap();
        assert_eq!((res.value, res.a), (2, 0));
    }
}
