//! From an MA protocol to a closest-pair instance with an exact distance gap.
//!
//! Rows are indexed by Bob's message i ∈ [T′] (lexicographic over the r×T
//! field tuples) and columns by the seed j ∈ [R], R = n^r. Coordinate
//! (i, j, plane) sits at bit `(i·R + j)·2 + plane`.

mod instance;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::algebra::{Codeword, FieldElement};
use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::protocol::{encode_blocks, CodeChoice, FieldPolicy, MerlinSpace, ProtocolParams};

pub use instance::{CPInstance, Metric, OVInstance};

/// Enumeration limits. Exceeding one is an error carrying the required size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// M, pruned Merlin messages.
    pub merlin: u128,
    /// R = n^r.
    pub seeds: u128,
    /// T′.
    pub bob: u128,
    /// Total bits across A′ and B′.
    pub bits: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            merlin: 100_000,
            seeds: 10_000,
            bob: 1_000_000,
            bits: 4_000_000_000,
        }
    }
}

/// Smallest T ≥ 2 whose Bob-message count T′ satisfies 1/(T′−1) ≤ ε.
pub fn choose_t(epsilon: f64, m: usize, code: &CodeChoice, caps: &Caps) -> Result<(usize, u128, ProtocolParams)> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::pre(format!("ε = {epsilon} outside (0, 1]")));
    }
    let mut last_err = None;
    for t in 2..=64 {
        let params = match ProtocolParams::ma(m, t, code, None) {
            Ok(p) => p,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let tp = params.bob_message_count();
        if tp > caps.bob {
            return Err(Error::cap("Bob message enumeration T′", tp, caps.bob));
        }
        if tp >= 2 && 1.0 / (tp - 1) as f64 <= epsilon {
            return Ok((t, tp, params));
        }
    }
    Err(last_err.unwrap_or_else(|| Error::pre("no admissible T")))
}

struct Layout<'a> {
    params: &'a ProtocolParams,
    /// |F|^T, messages per repetition.
    per_rep: usize,
    t_prime: usize,
    seeds: usize,
    seed_coords: Vec<Vec<usize>>,
}

impl<'a> Layout<'a> {
    fn new(params: &'a ProtocolParams, caps: &Caps) -> Result<Self> {
        let tp = params.bob_message_count();
        if tp > caps.bob {
            return Err(Error::cap("Bob message enumeration T′", tp, caps.bob));
        }
        let r = params.seed_space();
        if r > caps.seeds {
            return Err(Error::cap("seed space R", r, caps.seeds));
        }
        let per_rep = (params.field().order() as usize).pow(params.blocks() as u32);
        let seed_coords = (0..r).map(|j| params.seed_from_index(j)).collect();
        Ok(Layout {
            params,
            per_rep,
            t_prime: tp as usize,
            seeds: r as usize,
            seed_coords,
        })
    }

    fn bits(&self) -> usize {
        self.t_prime * self.seeds
    }

    fn b_tilde(&self, beta: &BitVector) -> Result<BitVector> {
        let f = self.params.field();
        let eb = encode_blocks(self.params, beta)?;
        let mut v = BitVector::zeros(self.bits());
        for (j, coords) in self.seed_coords.iter().enumerate() {
            let i = coords.iter().fold(0usize, |acc, &s| {
                let row = eb.iter().fold(0usize, |r, w| r * f.order() as usize + f.index(w.symbols[s]) as usize);
                acc * self.per_rep + row
            });
            v.set(i * self.seeds + j, true);
        }
        Ok(v)
    }

    /// Raw acceptance table; all-zero when μ̂ fails a seed-independent check.
    fn a_tilde(&self, merlin: &[FieldElement], alpha: &BitVector) -> Result<BitVector> {
        let params = self.params;
        let f = params.field();
        let mut v = BitVector::zeros(self.bits());
        if crate::protocol::seed_independent_check(params, merlin).is_some() {
            return Ok(v);
        }
        let ea = encode_blocks(params, alpha)?;
        let q = f.order();
        let blocks = params.blocks();
        // ok[s][x]: check (b) holds at coordinate s when Bob's row is tuple x.
        let ok: Vec<Vec<bool>> = (0..params.n())
            .map(|s| {
                (0..self.per_rep)
                    .map(|mut x| {
                        let mut acc = f.zero();
                        for t in (0..blocks).rev() {
                            let bt = f.from_index((x as u64) % q);
                            x /= q as usize;
                            acc = f.add(acc, f.mul(ea[t].symbols[s], bt));
                        }
                        acc == merlin[s]
                    })
                    .collect()
            })
            .collect();
        let reps = params.reps();
        let mut digits = vec![0usize; reps];
        for i in 0..self.t_prime {
            let mut x = i;
            for d in digits.iter_mut().rev() {
                *d = x % self.per_rep;
                x /= self.per_rep;
            }
            for (j, coords) in self.seed_coords.iter().enumerate() {
                if coords.iter().zip(&digits).all(|(&s, &x)| ok[s][x]) {
                    v.set(i * self.seeds + j, true);
                }
            }
        }
        Ok(v)
    }
}

/// b̃: entry (i, j) is 1 iff Bob sends message i on seed j.
pub fn build_b_vector(params: &ProtocolParams, beta: &BitVector) -> Result<BitVector> {
    Layout::new(params, &Caps::default())?.b_tilde(beta)
}

/// ã without the pruning precondition: rows for a μ̂ failing (a) or (c) are
/// all zero.
pub fn acceptance_table(params: &ProtocolParams, merlin: &Codeword, alpha: &BitVector) -> Result<BitVector> {
    if merlin.len() != params.n() {
        return Err(Error::Length {
            expected: params.n(),
            got: merlin.len(),
        });
    }
    Layout::new(params, &Caps::default())?.a_tilde(&merlin.symbols, alpha)
}

/// ã: entry (i, j) is 1 iff Alice accepts (α, μ̂, message i, seed j).
pub fn build_a_vector(params: &ProtocolParams, merlin: &Codeword, alpha: &BitVector) -> Result<BitVector> {
    if merlin.len() != params.n() {
        return Err(Error::Length {
            expected: params.n(),
            got: merlin.len(),
        });
    }
    if crate::protocol::seed_independent_check(params, &merlin.symbols).is_some() {
        return Err(Error::pre("Merlin message fails a seed-independent check"));
    }
    acceptance_table(params, merlin, alpha)
}

/// (i,j,0) = ã, (i,j,1) = 1 − ã.
pub fn balance_a(a_tilde: &BitVector) -> BitVector {
    let mut v = BitVector::zeros(2 * a_tilde.len());
    for (k, bit) in a_tilde.iter().enumerate() {
        v.set(2 * k + usize::from(!bit), true);
    }
    v
}

/// (i,j,0) = b̃, (i,j,1) = 0.
pub fn balance_b(b_tilde: &BitVector) -> BitVector {
    let mut v = BitVector::zeros(2 * b_tilde.len());
    for (k, bit) in b_tilde.iter().enumerate() {
        if bit {
            v.set(2 * k, true);
        }
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCert {
    pub t: usize,
    pub t_prime: u128,
    /// R = n^r.
    pub seeds: u128,
    pub reps: usize,
    /// M.
    pub merlin: u128,
    pub d_yes: u128,
    pub d_no: u128,
    /// D_no / D_yes for Hamming and ℓ1.
    pub gap: Ratio<u128>,
    pub dimension: u128,
    pub backend: String,
    pub p: u32,
    pub e: u32,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub block_size: usize,
    pub n_a: usize,
    pub n_b: usize,
    pub bob_order: String,
    pub seed: u64,
}

impl ReductionCert {
    fn new(params: &ProtocolParams, merlin: u128, n_a: usize, n_b: usize, seed: u64) -> Self {
        let tp = params.bob_message_count();
        let r = params.seed_space();
        ReductionCert {
            t: params.blocks(),
            t_prime: tp,
            seeds: r,
            reps: params.reps(),
            merlin,
            d_yes: r * (tp - 1),
            d_no: r * tp,
            gap: Ratio::new(tp, tp - 1),
            dimension: 2 * tp * r,
            backend: params.backend().tag().to_string(),
            p: params.field().characteristic(),
            e: params.field().degree(),
            n: params.n(),
            k: params.pair().c.k(),
            m: params.m(),
            block_size: params.block_size(),
            n_a,
            n_b,
            bob_order: "lex-rxT".into(),
            seed,
        }
    }

    /// Gap in ℓp distance, (D_no/D_yes)^{1/p}.
    pub fn lp_gap(&self, p: u32) -> f64 {
        (*self.gap.numer() as f64 / *self.gap.denom() as f64).powf(1.0 / p as f64)
    }

    /// Which side of the gap a Hamming closest-pair value falls on.
    pub fn classify(&self, value: u128) -> Option<bool> {
        if value == self.d_yes {
            Some(true)
        } else if value >= self.d_no {
            Some(false)
        } else {
            None
        }
    }
}

/// Builds A′ = {balance(ã^{μ̂,α})} (α-major, μ̂-minor) and B′ = {balance(b̃^β)}.
pub fn reduce_with(ov: &OVInstance, params: &ProtocolParams, caps: &Caps, seed: u64) -> Result<(CPInstance, ReductionCert)> {
    if ov.m != params.m() {
        return Err(Error::pre(format!("OV dimension {} but protocol built for m = {}", ov.m, params.m())));
    }
    let layout = Layout::new(params, caps)?;
    let space = MerlinSpace::new(params, caps.merlin)?;
    let words = space.words();
    let mm = words.len();
    let d = 2 * layout.bits();
    let total = ((mm * ov.a.len() + ov.b.len()) as u128) * d as u128;
    if total > caps.bits {
        return Err(Error::cap("reduced instance bits", total, caps.bits));
    }
    let a: Vec<BitVector> = (0..ov.a.len() * mm)
        .into_par_iter()
        .map(|idx| {
            let (ai, wi) = (idx / mm, idx % mm);
            layout.a_tilde(&words[wi].symbols, &ov.a[ai]).map(|t| balance_a(&t))
        })
        .collect::<Result<_>>()?;
    let b: Vec<BitVector> = ov
        .b
        .par_iter()
        .map(|beta| layout.b_tilde(beta).map(|t| balance_b(&t)))
        .collect::<Result<_>>()?;
    let cert = ReductionCert::new(params, mm as u128, ov.a.len(), ov.b.len(), seed);
    let tp = layout.t_prime;
    let r = layout.seeds;
    for v in &a {
        if v.count_ones() != tp * r {
            return Err(Error::Internal("unbalanced a-vector".into()));
        }
    }
    for v in &b {
        if v.count_ones() != r {
            return Err(Error::Internal("b-vector without one message per seed".into()));
        }
    }
    let cp = CPInstance::new(d, Metric::Hamming, a, b, "ov-to-cp")?;
    Ok((cp, cert))
}

/// `choose_t` followed by `reduce_with`, Reed–Solomon over the smallest
/// admissible field.
pub fn reduce(ov: &OVInstance, epsilon: f64, caps: &Caps, seed: u64) -> Result<(CPInstance, ReductionCert)> {
    let (_, _, params) = choose_t(epsilon, ov.m, &CodeChoice::ReedSolomon(FieldPolicy::Smallest), caps)?;
    reduce_with(ov, &params, caps, seed)
}

/// Size accounting for the reduction. With N_OV source vectors and
/// N = M·N_A + N_B output vectors, N_OV^{2−δ_OV} = N^{2−δ} holds for
/// δ = `delta_const` + `delta_ov_coeff`·δ_OV; δ_OV stays symbolic.
#[derive(Clone, Debug, PartialEq)]
pub struct HardnessReport {
    pub blowup: u128,
    pub n_ov: usize,
    pub n_cp: u128,
    pub delta_const: f64,
    pub delta_ov_coeff: f64,
    pub gap: Ratio<u128>,
    pub dimension: u128,
}

pub fn hardness_report(cert: &ReductionCert, n_ov: usize) -> HardnessReport {
    let n_cp = cert.merlin * cert.n_a as u128 + cert.n_b as u128;
    let (ln_ov, ln_cp) = ((n_ov.max(1) as f64).ln(), (n_cp.max(1) as f64).ln());
    let (dc, dov) = if ln_cp > 0.0 {
        (2.0 * (cert.merlin as f64).ln() / ln_cp, ln_ov / ln_cp)
    } else {
        (0.0, 1.0)
    };
    HardnessReport {
        blowup: cert.merlin,
        n_ov,
        n_cp,
        delta_const: dc,
        delta_ov_coeff: dov,
        gap: cert.gap,
        dimension: cert.dimension,
    }
}
