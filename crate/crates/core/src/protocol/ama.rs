//! The AMA variant: Alice and Bob first draw S ⊆ [T] (twice), Merlin answers
//! with μ(S) = Σ_{t∈S} C(αᵗ)·C(βᵗ), and Alice runs the MA checks on it.
//! The restriction to a random subset lets the field have characteristic 3
//! regardless of T.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::Rng;

use super::measure::MerlinSpace;
use super::{
    check_bob_shape, check_seed, encode_blocks, partition_blocks, BobMessage, Check,
    ProtocolParams, Transcript, Variant, Verdict,
};
use crate::algebra::{Codeword, FieldElement};
use crate::bits::BitVector;
use crate::error::{Error, Result};

/// Indicator vector over [T].
pub type Subset = Vec<bool>;

pub const SUBSET_DRAWS: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetSource {
    /// S uniform over all subsets of [T].
    Uniform,
    /// S uniform over a fixed public family.
    Family { seed: u64, members: Vec<Subset> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmaConfig {
    pub source: SubsetSource,
}

impl AmaConfig {
    /// Public coins for the subset draws.
    pub fn subset_bits(&self, blocks: usize) -> u64 {
        let per = match &self.source {
            SubsetSource::Uniform => blocks as u64,
            SubsetSource::Family { members, .. } => super::ceil_log2(members.len() as u64) as u64,
        };
        SUBSET_DRAWS as u64 * per
    }
}

/// `size` uniformly random subsets of [T] (8m when `size` is `None`).
pub fn newman_family(m: usize, blocks: usize, size: Option<usize>, seed: u64) -> Vec<Subset> {
    let size = size.unwrap_or(8 * m).max(1);
    let mut rng = crate::seed::rng(seed);
    (0..size)
        .map(|_| (0..blocks).map(|_| rng.gen_bool(0.5)).collect())
        .collect()
}

fn ama_config(params: &ProtocolParams) -> Result<&AmaConfig> {
    params
        .ama_config()
        .ok_or_else(|| Error::pre("protocol parameters carry no subset family"))
}

fn check_subset(params: &ProtocolParams, s: &Subset) -> Result<()> {
    if s.len() != params.blocks() {
        return Err(Error::Length {
            expected: params.blocks(),
            got: s.len(),
        });
    }
    Ok(())
}

/// μ(S), the honest answer to subset S.
pub fn subset_merlin(params: &ProtocolParams, alpha: &BitVector, beta: &BitVector, s: &Subset) -> Result<Codeword> {
    check_subset(params, s)?;
    let ea = encode_blocks(params, alpha)?;
    let eb = encode_blocks(params, beta)?;
    let f = params.field();
    let pair = params.pair();
    let mut mu = vec![f.zero(); params.n()];
    for t in (0..params.blocks()).filter(|&t| s[t]) {
        let prod = pair.pointwise_product(&ea[t], &eb[t])?;
        for (acc, &x) in mu.iter_mut().zip(&prod.symbols) {
            *acc = f.add(*acc, x);
        }
    }
    pair.c_prime.codeword(mu)
}

/// Whether μ(S) is nonzero somewhere on the systematic prefix, i.e. whether
/// S exposes an intersection.
pub fn step1_nonzero(params: &ProtocolParams, alpha: &BitVector, beta: &BitVector, s: &Subset) -> Result<bool> {
    check_subset(params, s)?;
    let (a, b) = (partition_blocks(alpha, params), partition_blocks(beta, params));
    let p = params.field().characteristic() as usize;
    Ok((0..params.block_size()).any(|j| {
        (0..params.blocks()).filter(|&t| s[t] && a[t][j] && b[t][j]).count() % p != 0
    }))
}

/// First (block, offset) where α and β share an element.
pub fn witness_position(params: &ProtocolParams, alpha: &BitVector, beta: &BitVector) -> Option<(usize, usize)> {
    let (a, b) = (partition_blocks(alpha, params), partition_blocks(beta, params));
    (0..params.blocks())
        .flat_map(|t| (0..params.block_size()).map(move |j| (t, j)))
        .find(|&(t, j)| a[t][j] && b[t][j])
}

/// Distinct subsets with their draw weights.
fn weighted_subsets(params: &ProtocolParams) -> Result<BTreeMap<Subset, u64>> {
    let cfg = ama_config(params)?;
    let mut out = BTreeMap::new();
    match &cfg.source {
        SubsetSource::Uniform => {
            let t = params.blocks();
            if t > 20 {
                return Err(Error::cap("uniform subset enumeration", 1u128 << t, 1 << 20));
            }
            for x in 0u64..(1 << t) {
                out.insert((0..t).map(|i| (x >> i) & 1 == 1).collect(), 1);
            }
        }
        SubsetSource::Family { members, .. } => {
            for s in members {
                *out.entry(s.clone()).or_insert(0) += 1;
            }
        }
    }
    Ok(out)
}

/// Fraction of single draws S for which [`step1_nonzero`] holds.
pub fn step1_fraction(params: &ProtocolParams, alpha: &BitVector, beta: &BitVector) -> Result<Ratio<u64>> {
    let w = weighted_subsets(params)?;
    let total: u64 = w.values().sum();
    let mut hit = 0;
    for (s, c) in &w {
        if step1_nonzero(params, alpha, beta, s)? {
            hit += c;
        }
    }
    Ok(Ratio::new(hit, total))
}

fn draw_subsets(params: &ProtocolParams, rng: &mut impl Rng) -> Result<(Vec<usize>, Vec<Subset>)> {
    let cfg = ama_config(params)?;
    let mut idx = Vec::new();
    let mut subs = Vec::new();
    for _ in 0..SUBSET_DRAWS {
        match &cfg.source {
            SubsetSource::Uniform => {
                idx.push(usize::MAX);
                subs.push((0..params.blocks()).map(|_| rng.gen_bool(0.5)).collect());
            }
            SubsetSource::Family { members, .. } => {
                let j = rng.gen_range(0..members.len());
                idx.push(j);
                subs.push(members[j].clone());
            }
        }
    }
    Ok((idx, subs))
}

/// Alice's decision on one AMA run; checks every subset repetition in turn.
pub fn ama_verdict(
    params: &ProtocolParams,
    alpha: &BitVector,
    subsets: &[Subset],
    merlin: &[Codeword],
    bob: &BobMessage,
    seed: &[usize],
) -> Result<Verdict> {
    if subsets.len() != merlin.len() || subsets.is_empty() {
        return Err(Error::pre("one Merlin message is needed per subset draw"));
    }
    check_seed(params, seed)?;
    check_bob_shape(params, bob)?;
    let ea = encode_blocks(params, alpha)?;
    let f = params.field();
    for (s, w) in subsets.iter().zip(merlin) {
        check_subset(params, s)?;
        if w.len() != params.n() {
            return Err(Error::Length {
                expected: params.n(),
                got: w.len(),
            });
        }
        if !params.pair().c_prime.contains_unchecked(&w.symbols) {
            return Ok(Verdict::Reject(Check::A));
        }
        for (l, &pos) in seed.iter().enumerate() {
            let expect = (0..params.blocks())
                .filter(|&t| s[t])
                .fold(f.zero(), |acc, t| f.add(acc, f.mul(ea[t].symbols[pos], bob[l][t])));
            if w.symbols[pos] != expect {
                return Ok(Verdict::Reject(Check::B));
            }
        }
        if params.prefix_positions().iter().any(|&i| !w.symbols[i].is_zero()) {
            return Ok(Verdict::Reject(Check::C));
        }
    }
    Ok(Verdict::Accept)
}

/// One honest AMA run.
pub fn ama_run(params: &ProtocolParams, alpha: &BitVector, beta: &BitVector, rng_seed: u64) -> Result<Transcript> {
    ama_run_with(params, alpha, beta, rng_seed, |subs| {
        subs.iter().map(|s| subset_merlin(params, alpha, beta, s)).collect()
    })
}

/// One AMA run where Merlin's answers come from `merlin`, given the drawn
/// subsets. Bob stays honest.
pub fn ama_run_with<F>(
    params: &ProtocolParams,
    alpha: &BitVector,
    beta: &BitVector,
    rng_seed: u64,
    merlin: F,
) -> Result<Transcript>
where
    F: FnOnce(&[Subset]) -> Result<Vec<Codeword>>,
{
    if params.variant() != Variant::Ama {
        return Err(Error::pre("AMA run requested on MA parameters"));
    }
    let mut rng = crate::seed::rng(rng_seed);
    let (subset_indices, subsets) = draw_subsets(params, &mut rng)?;
    let words = merlin(&subsets)?;
    let seed: Vec<usize> = (0..params.reps()).map(|_| rng.gen_range(0..params.n())).collect();
    let bob = super::bob_message(params, beta, &seed)?;
    let verdict = ama_verdict(params, alpha, &subsets, &words, &bob, &seed)?;
    Ok(Transcript {
        variant: Variant::Ama,
        subset_indices,
        subsets,
        merlin: words,
        seed,
        bob,
        verdict,
    })
}

fn agreement_mask(truth: &[FieldElement], w: &Codeword) -> BitVector {
    BitVector::from_bools(&truth.iter().zip(&w.symbols).map(|(a, b)| a == b).collect::<Vec<_>>())
}

/// Acceptance probability of the best Merlin, averaged over the subset draws
/// and maximized per draw pair over the pruned C′ words. `cap` bounds the
/// number of word pairs examined.
pub fn ama_soundness_exhaustive(
    params: &ProtocolParams,
    alpha: &BitVector,
    beta: &BitVector,
    cap: u128,
) -> Result<Ratio<u128>> {
    let weights = weighted_subsets(params)?;
    let space = MerlinSpace::new(params, cap)?;
    let words = space.words();
    let pairs = (weights.len() as u128).pow(2) * (words.len() as u128).pow(2);
    if pairs > cap {
        return Err(Error::cap("AMA Merlin pair search", pairs, cap));
    }
    let masks: Vec<(u64, Vec<BitVector>)> = weights
        .iter()
        .map(|(s, &c)| {
            let truth = subset_merlin(params, alpha, beta, s)?;
            Ok((c, words.iter().map(|w| agreement_mask(&truth.symbols, w)).collect()))
        })
        .collect::<Result<_>>()?;
    let (n, r) = (params.n() as u128, params.reps() as u32);
    let total: u128 = masks.iter().map(|(c, _)| *c as u128).sum();
    let mut numer: u128 = 0;
    for (c1, m1) in &masks {
        for (c2, m2) in &masks {
            let best = m1
                .iter()
                .flat_map(|x| m2.iter().map(move |y| x.inner_product(y)))
                .max()
                .unwrap_or(0);
            numer += (*c1 as u128) * (*c2 as u128) * (best as u128).pow(r);
        }
    }
    Ok(Ratio::new(numer, total * total * n.pow(r)))
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;
    use crate::algebra::FieldSpec;

    fn bv(s: &str) -> BitVector {
        BitVector::parse(s).unwrap()
    }

    fn gf5_uniform(m: usize, t: usize) -> ProtocolParams {
        let f = FieldSpec::new(5, 1).unwrap();
        ProtocolParams::ama(m, t, &CodeChoice::ReedSolomon(FieldPolicy::Exact(f)), None, SubsetSource::Uniform)
            .unwrap()
    }

    #[test]
    fn characteristic_three_suffices_for_large_t() {
        let f = FieldSpec::new(3, 2).unwrap();
        let code = CodeChoice::ReedSolomon(FieldPolicy::Exact(f.clone()));
        assert!(ProtocolParams::ama(8, 8, &code, None, SubsetSource::Uniform).is_ok());
        assert!(ProtocolParams::ma(8, 8, &code, None).is_err());
        let f2 = FieldSpec::new(2, 2).unwrap();
        let code2 = CodeChoice::ReedSolomon(FieldPolicy::Exact(f2));
        assert!(ProtocolParams::ama(2, 2, &code2, None, SubsetSource::Uniform).is_err());
    }

    #[test]
    fn newman_family_is_seeded() {
        let a = newman_family(4, 3, None, 7);
        assert_eq!(a.len(), 32);
        assert!(a.iter().all(|s| s.len() == 3));
        assert_eq!(a, newman_family(4, 3, None, 7));
        assert_ne!(a, newman_family(4, 3, None, 8));
    }

    #[test]
    fn full_subset_equals_ma_merlin() {
        let p = gf5_uniform(4, 2);
        let (a, b) = (bv("1101"), bv("0111"));
        let full = subset_merlin(&p, &a, &b, &vec![true, true]).unwrap();
        assert_eq!(full, honest_merlin(&p, &a, &b).unwrap());
        let empty = subset_merlin(&p, &a, &b, &vec![false, false]).unwrap();
        assert_eq!(empty.weight(), 0);
    }

    #[test]
    fn honest_disjoint_always_accepts() {
        let p = gf5_uniform(4, 2);
        let (a, b) = (bv("1001"), bv("0110"));
        for seed in 0..50 {
            let tr = ama_run(&p, &a, &b, seed).unwrap();
            assert!(tr.verdict.accepted());
            assert_eq!(tr.recheck(&p, &a).unwrap(), Verdict::Accept);
        }
        assert_eq!(ama_soundness_exhaustive(&p, &a, &b, 1 << 20).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn step1_detects_at_least_half() {
        let p = gf5_uniform(4, 4);
        for (a, b) in [("1000", "1000"), ("1111", "1111"), ("0110", "0011")] {
            let (a, b) = (bv(a), bv(b));
            assert!(witness_position(&p, &a, &b).is_some());
            assert!(step1_fraction(&p, &a, &b).unwrap() >= Ratio::new(1, 2));
        }
        assert_eq!(witness_position(&p, &bv("1010"), &bv("0101")), None);
    }

    #[test]
    fn intersecting_soundness_at_most_half() {
        let p = gf5_uniform(4, 2);
        for x in 1u32..16 {
            let bits: Vec<bool> = (0..4).map(|i| (x >> i) & 1 == 1).collect();
            let a = BitVector::from_bools(&bits);
            let s = ama_soundness_exhaustive(&p, &a, &a, 1 << 20).unwrap();
            assert!(s <= Ratio::new(1, 2), "{a}: {s}");
        }
    }

    #[test]
    fn ma_params_have_no_family() {
        let p = ProtocolParams::ma(4, 2, &CodeChoice::ReedSolomon(FieldPolicy::Smallest), None).unwrap();
        let x = bv("1000");
        assert!(ama_run(&p, &x, &x, 0).is_err());
        assert!(step1_fraction(&p, &x, &x).is_err());
    }

    #[test]
    fn dishonest_zero_merlin() {
        let p = gf5_uniform(4, 2);
        let x = bv("1000");
        let tr = ama_run_with(&p, &x, &x, 3, |subs| {
            Ok(subs.iter().map(|_| p.pair().c_prime.zero_codeword()).collect())
        })
        .unwrap();
        assert_eq!(tr.recheck(&p, &x).unwrap(), tr.verdict);
    }
}
