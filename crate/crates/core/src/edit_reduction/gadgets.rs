use rand::{Rng, RngCore};

use super::gf2::Gf2w;
use crate::bits::BitVector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetMode {
    Uniform,
    /// Bits are the low bit of a random degree-(k−1) polynomial evaluated at
    /// distinct points of GF(2^w).
    KWise(usize),
}

impl GadgetMode {
    pub fn tag(&self) -> String {
        match self {
            GadgetMode::Uniform => "uniform".into(),
            GadgetMode::KWise(k) => format!("kwise({k})"),
        }
    }
}

/// Strings s⁰ᵢ and s¹ᵢ for every source coordinate i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetDict {
    pub d_h: usize,
    pub d_prime: usize,
    pub mode: GadgetMode,
    pub seed: u64,
    /// `strings[c][i]` is s^c_i as 0/1 bytes.
    pub strings: [Vec<Vec<u8>>; 2],
}

impl GadgetDict {
    pub fn gadget(&self, i: usize, c: bool) -> &[u8] {
        &self.strings[usize::from(c)][i]
    }
}

pub fn gen_gadgets(d_h: usize, d_prime: usize, mode: GadgetMode, seed: u64) -> Result<GadgetDict> {
    if d_prime < 8 {
        return Err(Error::pre(format!("gadget length {d_prime} below 8")));
    }
    if d_h == 0 {
        return Err(Error::pre("source dimension must be positive"));
    }
    let mut rng = crate::seed::rng(seed);
    let total = 2 * d_h * d_prime;
    let bits: Vec<u8> = match mode {
        GadgetMode::Uniform => {
            let mut out = Vec::with_capacity(total);
            while out.len() < total {
                let w = rng.next_u64();
                out.extend((0..64).map(|b| ((w >> b) & 1) as u8).take(total - out.len()));
            }
            out
        }
        GadgetMode::KWise(k) => {
            if k < 2 {
                return Err(Error::pre("k-wise mode needs k ≥ 2"));
            }
            let field = Gf2w::at_least(total as u64)?;
            let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..field.order())).collect();
            (0..total as u64).map(|x| (field.eval(&coeffs, x) & 1) as u8).collect()
        }
    };
    let mut chunks = bits.chunks(d_prime).map(<[u8]>::to_vec);
    let zero: Vec<Vec<u8>> = chunks.by_ref().take(d_h).collect();
    let one: Vec<Vec<u8>> = chunks.collect();
    Ok(GadgetDict {
        d_h,
        d_prime,
        mode,
        seed,
        strings: [zero, one],
    })
}

/// s^1_{u_1} ∘ s^2_{u_2} ∘ … ∘ s^{d_H}_{u_{d_H}}.
pub fn embed(u: &BitVector, dict: &GadgetDict) -> Result<BitVector> {
    if u.len() != dict.d_h {
        return Err(Error::Length {
            expected: dict.d_h,
            got: u.len(),
        });
    }
    let bytes: Vec<u8> = (0..dict.d_h).flat_map(|i| dict.gadget(i, u.get(i)).iter().copied()).collect();
    Ok(BitVector::from_bytes01(&bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_shaped() {
        for mode in [GadgetMode::Uniform, GadgetMode::KWise(4)] {
            let a = gen_gadgets(5, 16, mode, 3).unwrap();
            assert_eq!(a, gen_gadgets(5, 16, mode, 3).unwrap());
            assert_ne!(a, gen_gadgets(5, 16, mode, 4).unwrap());
            assert!(a.strings.iter().all(|s| s.len() == 5 && s.iter().all(|g| g.len() == 16)));
        }
        assert!(gen_gadgets(5, 4, GadgetMode::Uniform, 0).is_err());
        assert!(gen_gadgets(5, 16, GadgetMode::KWise(1), 0).is_err());
    }

    #[test]
    fn embedding_concatenates() {
        let dict = gen_gadgets(3, 8, GadgetMode::Uniform, 1).unwrap();
        let u = BitVector::parse("101").unwrap();
        let e = embed(&u, &dict).unwrap();
        let expect: Vec<u8> = [dict.gadget(0, true), dict.gadget(1, false), dict.gadget(2, true)].concat();
        assert_eq!(e.to_bytes01(), expect);
        assert!(embed(&BitVector::parse("10").unwrap(), &dict).is_err());
    }

    #[test]
    fn pairwise_correlation_is_small() {
        // mean |corr| over position pairs within one string, across seeds
        let d = 64;
        let seeds = 10_000u64;
        let mut ones = vec![0f64; d];
        let mut both = vec![vec![0f64; d]; d];
        for seed in 0..seeds {
            let dict = gen_gadgets(1, d, GadgetMode::KWise(2), seed).unwrap();
            let g = dict.gadget(0, false);
            for i in 0..d {
                ones[i] += g[i] as f64;
                for j in i + 1..d {
                    both[i][j] += (g[i] & g[j]) as f64;
                }
            }
        }
        let n = seeds as f64;
        let mut sum = 0.0;
        let mut count = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                let (pi, pj, pij) = (ones[i] / n, ones[j] / n, both[i][j] / n);
                let cov = pij - pi * pj;
                let corr = cov / (pi * (1.0 - pi) * pj * (1.0 - pj)).sqrt();
                sum += corr.abs();
                count += 1.0;
            }
        }
        assert!(sum / count <= 0.1, "mean |corr| = {}", sum / count);
    }

    #[test]
    fn kwise_balance_and_lambda_agree_with_uniform() {
        let (d_h, d) = (300, 64);
        let dict = gen_gadgets(d_h, d, GadgetMode::KWise(4), 5).unwrap();
        let ones: usize = dict.strings.iter().flatten().flatten().map(|&b| b as usize).sum();
        let frac = ones as f64 / (2 * d_h * d) as f64;
        assert!((frac - 0.5).abs() < 0.01, "bit balance {frac}");
        let ed: usize = (0..d_h)
            .map(|i| super::super::edit_distance(dict.gadget(i, false), dict.gadget(i, true)))
            .sum();
        let kwise = ed as f64 / (d_h * d) as f64;
        let uniform = super::super::measure_lambda(d, 300, 6).unwrap().mean / d as f64;
        assert!((kwise - uniform).abs() < 0.02, "k-wise {kwise} vs uniform {uniform}");
    }
}
