//! MA and AMA communication protocols for Set Disjointness.
//!
//! Alice holds α ⊆ [m], Bob holds β ⊆ [m]. The universe is cut into `T`
//! blocks of `m_B = ⌈m/T⌉` positions, each block is encoded with the code C,
//! and Merlin's message is a C′ codeword that allegedly equals
//! μ = Σₜ C(αᵗ)·C(βᵗ). Alice checks it at a few shared random coordinates
//! against Bob's symbols and requires it to vanish on the systematic prefix.

mod ama;
mod measure;

use std::sync::Arc;

use num_rational::Ratio;

use crate::algebra::{
    hermitian, is_prime, rs_code_pair, Backend, CodePair, Codeword, FieldElement, FieldSpec,
};
use crate::bits::BitVector;
use crate::error::{Error, Result};

pub use ama::{
    ama_run, ama_run_with, ama_soundness_exhaustive, ama_verdict, newman_family, step1_nonzero,
    step1_fraction, subset_merlin, witness_position, AmaConfig, Subset, SubsetSource, SUBSET_DRAWS,
};
pub use measure::{
    accept_probability, soundness_exhaustive, soundness_exhaustive_with, soundness_unpruned,
    Acceptance, MeasureConfig, MerlinSpace,
};

/// r × T field elements: `bob[l][t] = [C(βᵗ)]_{seed[l]}`.
pub type BobMessage = Vec<Vec<FieldElement>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Ma,
    Ama,
}

impl Variant {
    pub fn tag(&self) -> &'static str {
        match self {
            Variant::Ma => "ma",
            Variant::Ama => "ama",
        }
    }
}

/// How the Reed–Solomon backend picks its field for a required dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldPolicy {
    /// Smallest GF(p) or GF(p²) with p above the characteristic floor and
    /// order ≥ 2k.
    Smallest,
    /// GF(p) if it is large enough, else GF(p²).
    Characteristic(u32),
    Exact(FieldSpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeChoice {
    ReedSolomon(FieldPolicy),
    /// Hermitian code over GF(q²); pole order chosen as the smallest one that
    /// carries a block.
    Hermitian { q: u32 },
}

/// Accepting or the first failed check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject(Check),
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Alice's three checks: (a) membership in C′, (b) consistency with Bob's
/// symbols at the shared coordinate, (c) vanishing on the systematic prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    A,
    B,
    C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub variant: Variant,
    /// AMA only: family indices (or `usize::MAX` for uniform draws) and the
    /// drawn subsets.
    pub subset_indices: Vec<usize>,
    pub subsets: Vec<Subset>,
    /// One message for MA, one per subset repetition for AMA.
    pub merlin: Vec<Codeword>,
    pub seed: Vec<usize>,
    pub bob: BobMessage,
    pub verdict: Verdict,
}

impl Transcript {
    /// Re-evaluates Alice's checks on the recorded messages.
    pub fn recheck(&self, params: &ProtocolParams, alpha: &BitVector) -> Result<Verdict> {
        match self.variant {
            Variant::Ma => alice_verdict(params, alpha, &self.merlin[0], &self.bob, &self.seed),
            Variant::Ama => ama_verdict(params, alpha, &self.subsets, &self.merlin, &self.bob, &self.seed),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProtocolParams {
    m: usize,
    blocks: usize,
    block_size: usize,
    pair: Arc<CodePair>,
    reps: usize,
    variant: Variant,
    ama: Option<AmaConfig>,
    prefix: Vec<usize>,
}

fn smallest_field(min_char: u32, min_order: u64) -> Result<FieldSpec> {
    // Candidates GF(p) and GF(p²); the smallest order wins.
    let mut best: Option<(u64, u32, u32)> = None;
    let mut p = min_char.max(2);
    loop {
        if is_prime(p as u64) {
            let o1 = p as u64;
            let o2 = o1 * o1;
            for (o, e) in [(o1, 1), (o2, 2)] {
                if o >= min_order && best.is_none_or(|(bo, _, _)| o < bo) {
                    best = Some((o, p, e));
                }
            }
            if o1 >= min_order {
                break;
            }
        }
        p += 1;
    }
    let (_, p, e) = best.expect("loop ends with a candidate");
    FieldSpec::new(p, e)
}

impl ProtocolParams {
    /// MA protocol over universe [m] with `blocks` = T blocks.
    pub fn ma(m: usize, blocks: usize, code: &CodeChoice, reps: Option<usize>) -> Result<Self> {
        Self::build(m, blocks, code, reps, Variant::Ma, None)
    }

    /// AMA protocol; `source` decides how the random subsets S ⊆ [T] are drawn.
    pub fn ama(
        m: usize,
        blocks: usize,
        code: &CodeChoice,
        reps: Option<usize>,
        source: SubsetSource,
    ) -> Result<Self> {
        if let SubsetSource::Family { members, .. } = &source {
            if members.iter().any(|s| s.len() != blocks) {
                return Err(Error::pre("family subsets must be indicator vectors over [T]"));
            }
            if members.is_empty() {
                return Err(Error::pre("empty subset family"));
            }
        }
        Self::build(m, blocks, code, reps, Variant::Ama, Some(AmaConfig { source }))
    }

    fn build(
        m: usize,
        blocks: usize,
        code: &CodeChoice,
        reps: Option<usize>,
        variant: Variant,
        ama: Option<AmaConfig>,
    ) -> Result<Self> {
        if m == 0 || blocks == 0 {
            return Err(Error::pre("m and T must be positive"));
        }
        let block_size = m.div_ceil(blocks);
        // MA needs Σ of T values in {0,1} to vanish only when all do: p > T.
        // AMA sums over subsets and only needs p > 2.
        let min_char = match variant {
            Variant::Ma => blocks as u32 + 1,
            Variant::Ama => 3,
        };
        let pair = match code {
            CodeChoice::ReedSolomon(policy) => {
                let field = match policy {
                    FieldPolicy::Smallest => smallest_field(min_char, 2 * block_size as u64)?,
                    FieldPolicy::Characteristic(p) => {
                        let f1 = FieldSpec::new(*p, 1)?;
                        if f1.order() >= 2 * block_size as u64 {
                            f1
                        } else {
                            FieldSpec::new(*p, 2)?
                        }
                    }
                    FieldPolicy::Exact(f) => f.clone(),
                };
                rs_code_pair(&field, block_size)?
            }
            CodeChoice::Hermitian { q } => {
                let m_deg = hermitian::pole_order_for_dimension(*q, block_size)?;
                hermitian::hermitian_code_pair(*q, m_deg)?
            }
        };
        let p = pair.field().characteristic();
        if p < min_char {
            return Err(Error::pre(format!(
                "characteristic {p} too small: {} protocol with T = {blocks} needs p ≥ {min_char}",
                variant.tag()
            )));
        }
        if pair.c.k() < block_size {
            return Err(Error::pre(format!(
                "code dimension {} below block size {block_size}",
                pair.c.k()
            )));
        }
        let target = match variant {
            Variant::Ma => Ratio::new(1, 2),
            Variant::Ama => Ratio::new(1, 3),
        };
        let reps = match reps {
            Some(0) => return Err(Error::pre("repetition count must be positive")),
            Some(r) => r,
            None => default_reps(pair.c_prime.delta(), target),
        };
        let prefix = pair.c.systematic_positions()[..block_size].to_vec();
        Ok(ProtocolParams {
            m,
            blocks,
            block_size,
            pair: Arc::new(pair),
            reps,
            variant,
            ama,
            prefix,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// T.
    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// m_B = ⌈m / T⌉.
    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn pair(&self) -> &CodePair {
        &self.pair
    }

    pub fn field(&self) -> &FieldSpec {
        self.pair.field()
    }

    pub fn n(&self) -> usize {
        self.pair.n()
    }

    pub fn reps(&self) -> usize {
        self.reps
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn ama_config(&self) -> Option<&AmaConfig> {
        self.ama.as_ref()
    }

    /// The first m_B systematic positions of C.
    pub fn prefix_positions(&self) -> &[usize] {
        &self.prefix
    }

    pub fn backend(&self) -> Backend {
        self.pair.c.backend()
    }

    /// Merlin's message length in bits.
    pub fn merlin_bits(&self) -> u64 {
        let copies = match self.variant {
            Variant::Ma => 1,
            Variant::Ama => 2,
        };
        copies * self.n() as u64 * self.field().element_bits() as u64
    }

    /// Bob's message length in bits.
    pub fn bob_bits(&self) -> u64 {
        (self.reps * self.blocks) as u64 * self.field().element_bits() as u64
    }

    /// Public coins for choosing the shared coordinates.
    pub fn seed_bits(&self) -> u64 {
        self.reps as u64 * ceil_log2(self.n() as u64) as u64
    }

    /// Number of seeds, n^r.
    pub fn seed_space(&self) -> u128 {
        (self.n() as u128).saturating_pow(self.reps as u32)
    }

    /// Number of distinct Bob messages, |F|^(rT).
    pub fn bob_message_count(&self) -> u128 {
        (self.field().order() as u128).saturating_pow((self.reps * self.blocks) as u32)
    }

    fn check_input(&self, x: &BitVector) -> Result<()> {
        if x.len() != self.m {
            return Err(Error::Length {
                expected: self.m,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Decodes seed index `j ∈ [n^r]` into r coordinates (first most
    /// significant).
    pub fn seed_from_index(&self, mut j: u128) -> Vec<usize> {
        let n = self.n() as u128;
        let mut s = vec![0; self.reps];
        for slot in s.iter_mut().rev() {
            *slot = (j % n) as usize;
            j /= n;
        }
        s
    }

    pub fn seed_index(&self, seed: &[usize]) -> u128 {
        seed.iter().fold(0u128, |acc, &s| acc * self.n() as u128 + s as u128)
    }
}

pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Least r with (1 − δ)^r ≤ target.
pub fn default_reps(delta: Ratio<u64>, target: Ratio<u64>) -> usize {
    let miss = Ratio::from_integer(1) - delta;
    let mut acc = miss;
    let mut r = 1;
    while acc > target {
        acc *= miss;
        r += 1;
    }
    r
}

/// Splits x ∈ {0,1}^m into T blocks of m_B bits, zero-padding the tail.
pub fn partition_blocks(x: &BitVector, params: &ProtocolParams) -> Vec<Vec<bool>> {
    let b = params.block_size;
    (0..params.blocks)
        .map(|t| {
            (0..b)
                .map(|i| {
                    let pos = t * b + i;
                    pos < x.len() && x.get(pos)
                })
                .collect()
        })
        .collect()
}

/// C-encodings of the T blocks of x.
pub fn encode_blocks(params: &ProtocolParams, x: &BitVector) -> Result<Vec<Codeword>> {
    params.check_input(x)?;
    partition_blocks(x, params)
        .iter()
        .map(|blk| params.pair.c.encode_bits(blk))
        .collect()
}

/// μ = Σₜ C(αᵗ)·C(βᵗ), a C′ codeword.
pub fn honest_merlin(params: &ProtocolParams, alpha: &BitVector, beta: &BitVector) -> Result<Codeword> {
    let ea = encode_blocks(params, alpha)?;
    let eb = encode_blocks(params, beta)?;
    let f = params.field();
    let pair = params.pair();
    let mut mu = vec![f.zero(); params.n()];
    for (wa, wb) in ea.iter().zip(&eb) {
        let prod = pair.pointwise_product(wa, wb)?;
        for (acc, &x) in mu.iter_mut().zip(&prod.symbols) {
            *acc = f.add(*acc, x);
        }
    }
    pair.c_prime.codeword(mu)
}

pub fn bob_message(params: &ProtocolParams, beta: &BitVector, seed: &[usize]) -> Result<BobMessage> {
    check_seed(params, seed)?;
    let eb = encode_blocks(params, beta)?;
    Ok(seed
        .iter()
        .map(|&s| eb.iter().map(|w| w.symbols[s]).collect())
        .collect())
}

fn check_seed(params: &ProtocolParams, seed: &[usize]) -> Result<()> {
    if seed.len() != params.reps {
        return Err(Error::Length {
            expected: params.reps,
            got: seed.len(),
        });
    }
    if let Some(&bad) = seed.iter().find(|&&s| s >= params.n()) {
        return Err(Error::pre(format!("seed coordinate {bad} outside [n_C] = [{}]", params.n())));
    }
    Ok(())
}

fn check_bob_shape(params: &ProtocolParams, bob: &BobMessage) -> Result<()> {
    if bob.len() != params.reps {
        return Err(Error::Length {
            expected: params.reps,
            got: bob.len(),
        });
    }
    if let Some(row) = bob.iter().find(|row| row.len() != params.blocks) {
        return Err(Error::Length {
            expected: params.blocks,
            got: row.len(),
        });
    }
    Ok(())
}

/// Checks (a) and (c), which do not depend on the shared randomness.
pub(crate) fn seed_independent_check(params: &ProtocolParams, merlin: &[FieldElement]) -> Option<Check> {
    if !params.pair.c_prime.contains_unchecked(merlin) {
        return Some(Check::A);
    }
    if params.prefix.iter().any(|&i| !merlin[i].is_zero()) {
        return Some(Check::C);
    }
    None
}

/// Alice's decision on one run of the MA protocol.
pub fn alice_verdict(
    params: &ProtocolParams,
    alpha: &BitVector,
    merlin: &Codeword,
    bob: &BobMessage,
    seed: &[usize],
) -> Result<Verdict> {
    if merlin.len() != params.n() {
        return Err(Error::Length {
            expected: params.n(),
            got: merlin.len(),
        });
    }
    check_seed(params, seed)?;
    check_bob_shape(params, bob)?;
    let ea = encode_blocks(params, alpha)?;
    if !params.pair.c_prime.contains_unchecked(&merlin.symbols) {
        return Ok(Verdict::Reject(Check::A));
    }
    let f = params.field();
    for (l, &s) in seed.iter().enumerate() {
        let expect = ea
            .iter()
            .zip(&bob[l])
            .fold(f.zero(), |acc, (w, &b)| f.add(acc, f.mul(w.symbols[s], b)));
        if merlin.symbols[s] != expect {
            return Ok(Verdict::Reject(Check::B));
        }
    }
    if params.prefix.iter().any(|&i| !merlin.symbols[i].is_zero()) {
        return Ok(Verdict::Reject(Check::C));
    }
    Ok(Verdict::Accept)
}

/// One honest MA run with seed coordinates drawn from `rng_seed`.
pub fn ma_run(params: &ProtocolParams, alpha: &BitVector, beta: &BitVector, rng_seed: u64) -> Result<Transcript> {
    use rand::Rng;
    let mut rng = crate::seed::rng(rng_seed);
    let merlin = honest_merlin(params, alpha, beta)?;
    let seed: Vec<usize> = (0..params.reps).map(|_| rng.gen_range(0..params.n())).collect();
    let bob = bob_message(params, beta, &seed)?;
    let verdict = alice_verdict(params, alpha, &merlin, &bob, &seed)?;
    Ok(Transcript {
        variant: Variant::Ma,
        subset_indices: Vec::new(),
        subsets: Vec::new(),
        merlin: vec![merlin],
        seed,
        bob,
        verdict,
    })
}
