//! Exact acceptance probabilities and exhaustive soundness.

use num_rational::Ratio;
use rand::Rng;

use super::{encode_blocks, honest_merlin, seed_independent_check, ProtocolParams};
use crate::algebra::{linalg, Codeword, FieldElement};
use crate::bits::BitVector;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Acceptance {
    Exact(Ratio<u64>),
    Estimated { accepted: u64, samples: u64 },
}

impl Acceptance {
    pub fn value(&self) -> f64 {
        match self {
            Acceptance::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Acceptance::Estimated { accepted, samples } => *accepted as f64 / *samples as f64,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Acceptance::Exact(_))
    }
}

#[derive(Clone, Debug)]
pub struct MeasureConfig {
    /// Largest seed space enumerated exactly.
    pub exact_cap: u128,
    /// Monte-Carlo samples used above the cap; `None` makes the cap an error.
    pub samples: Option<u64>,
    pub seed: u64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            exact_cap: 10_000_000,
            samples: Some(100_000),
            seed: 0,
        }
    }
}

/// Coordinates where check (b) passes with an honest Bob.
fn consistent_coordinates(
    params: &ProtocolParams,
    alpha: &BitVector,
    beta: &BitVector,
    merlin: &[FieldElement],
) -> Result<Vec<bool>> {
    let f = params.field();
    let ea = encode_blocks(params, alpha)?;
    let eb = encode_blocks(params, beta)?;
    Ok((0..params.n())
        .map(|i| {
            let expect = ea
                .iter()
                .zip(&eb)
                .fold(f.zero(), |acc, (a, b)| f.add(acc, f.mul(a.symbols[i], b.symbols[i])));
            merlin[i] == expect
        })
        .collect())
}

/// Probability over the shared seed that Alice accepts `merlin` when Bob is
/// honest. Enumerates all n^r seeds when that fits under the cap.
pub fn accept_probability(
    params: &ProtocolParams,
    alpha: &BitVector,
    beta: &BitVector,
    merlin: &Codeword,
    cfg: &MeasureConfig,
) -> Result<Acceptance> {
    if merlin.len() != params.n() {
        return Err(Error::Length {
            expected: params.n(),
            got: merlin.len(),
        });
    }
    let space = params.seed_space();
    let exact = space <= cfg.exact_cap;
    if seed_independent_check(params, &merlin.symbols).is_some() {
        return Ok(if exact || cfg.samples.is_none() {
            Acceptance::Exact(Ratio::from_integer(0))
        } else {
            Acceptance::Estimated {
                accepted: 0,
                samples: cfg.samples.unwrap_or(0),
            }
        });
    }
    let ok = consistent_coordinates(params, alpha, beta, &merlin.symbols)?;
    if exact {
        let mut accepted = 0u64;
        for j in 0..space {
            if params.seed_from_index(j).iter().all(|&s| ok[s]) {
                accepted += 1;
            }
        }
        return Ok(Acceptance::Exact(Ratio::new(accepted, space as u64)));
    }
    let Some(samples) = cfg.samples else {
        return Err(Error::cap("seed enumeration", space, cfg.exact_cap));
    };
    let mut rng = crate::seed::rng(cfg.seed);
    let n = params.n();
    let accepted = (0..samples)
        .filter(|_| (0..params.reps()).all(|_| ok[rng.gen_range(0..n)]))
        .count() as u64;
    Ok(Acceptance::Estimated { accepted, samples })
}

/// (agree / n)^r.
pub(crate) fn agreement_power(agree: usize, n: usize, r: usize) -> Ratio<u64> {
    Ratio::new((agree as u64).pow(r as u32), (n as u64).pow(r as u32))
}

/// The C′ codewords that pass checks (a) and (c): the subspace vanishing on
/// the systematic prefix. An optimal dishonest Merlin only ever sends one of
/// these, since anything else is rejected on every seed.
#[derive(Clone, Debug)]
pub struct MerlinSpace {
    basis: Vec<Vec<FieldElement>>,
    words: Vec<Codeword>,
}

impl MerlinSpace {
    pub fn new(params: &ProtocolParams, cap: u128) -> Result<Self> {
        let f = params.field();
        let cp = &params.pair().c_prime;
        let g = cp.generator();
        let restricted: linalg::Matrix = g
            .iter()
            .map(|row| params.prefix_positions().iter().map(|&i| row[i]).collect())
            .collect();
        let kernel = linalg::left_kernel(f, &restricted, g.len());
        let basis: Vec<Vec<FieldElement>> = kernel.iter().map(|x| linalg::combine(f, x, g)).collect();
        let count = (f.order() as u128).saturating_pow(basis.len() as u32);
        if count > cap {
            return Err(Error::cap("pruned Merlin enumeration", count, cap));
        }
        let els: Vec<_> = f.elements().collect();
        let words = crate::algebra::code::counting(els.len(), basis.len())
            .map(|d| {
                let coeffs: Vec<_> = d.iter().map(|&i| els[i]).collect();
                let sym = if basis.is_empty() {
                    vec![f.zero(); params.n()]
                } else {
                    linalg::combine(f, &coeffs, &basis)
                };
                cp.wrap(sym)
            })
            .collect();
        Ok(MerlinSpace { basis, words })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn words(&self) -> &[Codeword] {
        &self.words
    }
}

/// max over Merlin messages of the acceptance probability with an honest
/// Bob, together with a maximizing message.
pub fn soundness_exhaustive(
    params: &ProtocolParams,
    alpha: &BitVector,
    beta: &BitVector,
) -> Result<(Ratio<u64>, Codeword)> {
    let space = MerlinSpace::new(params, 1_000_000)?;
    soundness_exhaustive_with(params, &space, alpha, beta)
}

pub fn soundness_exhaustive_with(
    params: &ProtocolParams,
    space: &MerlinSpace,
    alpha: &BitVector,
    beta: &BitVector,
) -> Result<(Ratio<u64>, Codeword)> {
    let mu = honest_merlin(params, alpha, beta)?;
    let (agree, best) = space
        .words()
        .iter()
        .map(|w| (w.symbols.iter().zip(&mu.symbols).filter(|(a, b)| a == b).count(), w))
        .max_by_key(|&(a, _)| a)
        .expect("the zero word is always present");
    Ok((agreement_power(agree, params.n(), params.reps()), best.clone()))
}

/// Same maximum over the whole of C′ without pruning; for cross-checks on
/// small codes.
pub fn soundness_unpruned(
    params: &ProtocolParams,
    alpha: &BitVector,
    beta: &BitVector,
    cap: u128,
) -> Result<Ratio<u64>> {
    let mut best = Ratio::from_integer(0);
    for w in params.pair().c_prime.all_codewords(cap)? {
        if seed_independent_check(params, &w.symbols).is_some() {
            continue;
        }
        let ok = consistent_coordinates(params, alpha, beta, &w.symbols)?;
        let p = agreement_power(ok.iter().filter(|&&b| b).count(), params.n(), params.reps());
        best = best.max(p);
    }
    Ok(best)
}
