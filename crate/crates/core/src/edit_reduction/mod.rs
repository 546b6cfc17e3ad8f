//! Hamming closest pair to edit-distance closest pair by gadget substitution.
//!
//! Bit i of a source vector is replaced by one of two strings s⁰ᵢ, s¹ᵢ of
//! length d′. For gadgets drawn at random, ED(u, v) concentrates around
//! λ·Δ_H(u_H, v_H) where λ is the mean edit distance of two random length-d′
//! strings; λ is measured, not assumed.

mod distance;
mod gadgets;
mod gf2;
mod stats;

use rayon::prelude::*;

use crate::cp_reduction::{CPInstance, Metric};
use crate::error::{Error, Result};
use crate::seed::sub_seed;

pub use distance::{edit_distance, lcs};
pub use gadgets::{embed, gen_gadgets, GadgetDict, GadgetMode};
pub use gf2::Gf2w;
pub use stats::{
    concentration_report, measure_lambda, measure_lcs_fraction, random_string, ConcentrationReport, Estimate,
    TailRow,
};

/// ⌈log₂ x⌉ with ⌈log₂ 1⌉ = 0.
fn clog2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// 16·⌈log₂ d_H⌉, at least 32.
pub fn default_d_prime(d_h: usize) -> usize {
    (16 * clog2(d_h)).max(32)
}

/// ⌈log₂ log₂ N⌉, at least 4.
pub fn default_k(n: usize) -> usize {
    let l = (n.max(2) as f64).log2().log2().ceil();
    (l as usize).max(4)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbedConfig {
    /// Defaults to [`default_d_prime`].
    pub d_prime: Option<usize>,
    pub mode: GadgetMode,
    pub seed: u64,
    pub tau: f64,
    pub lambda_samples: usize,
    /// Minimum ratio d′ / ⌈log₂ d_H⌉.
    pub log_factor: usize,
    /// All pairs are tabulated up to this count; beyond it a seeded sample.
    pub pair_cap: usize,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        EmbedConfig {
            d_prime: None,
            mode: GadgetMode::Uniform,
            seed: 0,
            tau: 0.15,
            lambda_samples: 200,
            log_factor: 8,
            pair_cap: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRow {
    pub a: usize,
    pub b: usize,
    pub hamming: usize,
    pub edit: usize,
}

/// Whether the edit argmin pair agrees with the Hamming argmin when the
/// Hamming runner-up margin exceeds 2τ·d/λ̂.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderingCheck {
    pub tau: f64,
    pub threshold: f64,
    pub qualifies: bool,
    /// `None` when the margin condition fails.
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingReport {
    pub d_h: usize,
    pub d_prime: usize,
    pub d: usize,
    pub mode: GadgetMode,
    pub seed: u64,
    pub lambda_hat: f64,
    pub lambda_stderr: f64,
    pub lambda_samples: usize,
    pub tau: f64,
    pub pairs: Vec<PairRow>,
    /// max |ED − λ̂·Δ_H| / d over the table.
    pub tau_hat: f64,
    pub mean_deviation: f64,
    pub violations: Vec<(usize, usize)>,
    /// ED(u,v) ≤ Σ_{i: differ} ED(s⁰ᵢ, s¹ᵢ) on every row.
    pub upper_bound_ok: bool,
    pub hamming_argmin: (usize, usize),
    pub edit_argmin: (usize, usize),
    pub runner_up_margin: Option<usize>,
    pub ordering: OrderingCheck,
    /// The same check at the observed τ̂ instead of τ.
    pub ordering_observed: OrderingCheck,
}

impl EmbeddingReport {
    pub fn flagged(&self) -> bool {
        !self.violations.is_empty()
    }

    pub fn deviation(&self, row: &PairRow) -> f64 {
        (row.edit as f64 - self.lambda_hat * row.hamming as f64).abs()
    }
}

fn argmin(rows: &[PairRow], key: impl Fn(&PairRow) -> usize) -> (usize, usize) {
    rows.iter()
        .min_by_key(|r| (key(r), r.a, r.b))
        .map(|r| (r.a, r.b))
        .unwrap_or((0, 0))
}

fn ordering_check(rows: &[PairRow], tau: f64, d: usize, lambda: f64, margin: Option<usize>) -> OrderingCheck {
    let threshold = if lambda > 0.0 { 2.0 * tau * d as f64 / lambda } else { f64::INFINITY };
    let qualifies = margin.is_some_and(|m| m as f64 > threshold);
    let holds = qualifies.then(|| argmin(rows, |r| r.edit) == argmin(rows, |r| r.hamming));
    OrderingCheck {
        tau,
        threshold,
        qualifies,
        holds,
    }
}

pub fn reduce_hamming_to_edit(cp: &CPInstance, cfg: &EmbedConfig) -> Result<(CPInstance, EmbeddingReport)> {
    if !matches!(cp.metric, Metric::Hamming | Metric::L1) {
        return Err(Error::UnsupportedMetric(format!("edit embedding expects hamming input, got {}", cp.metric)));
    }
    let d_h = cp.d;
    let d_prime = cfg.d_prime.unwrap_or_else(|| default_d_prime(d_h));
    let need = cfg.log_factor * clog2(d_h);
    if d_prime < need {
        return Err(Error::pre(format!(
            "d′ = {d_prime} below {}·⌈log₂ {d_h}⌉ = {need}",
            cfg.log_factor
        )));
    }
    let dict = gen_gadgets(d_h, d_prime, cfg.mode, sub_seed(cfg.seed, 0))?;
    let a: Vec<_> = cp.a.par_iter().map(|u| embed(u, &dict)).collect::<Result<_>>()?;
    let b: Vec<_> = cp.b.par_iter().map(|u| embed(u, &dict)).collect::<Result<_>>()?;
    let lam = measure_lambda(d_prime, cfg.lambda_samples, sub_seed(cfg.seed, 1))?;
    let d = d_h * d_prime;

    let total = cp.a.len() * cp.b.len();
    let chosen: Vec<(usize, usize)> = if total <= cfg.pair_cap {
        (0..cp.a.len()).flat_map(|i| (0..cp.b.len()).map(move |j| (i, j))).collect()
    } else {
        use rand::Rng;
        let mut r = crate::seed::rng(sub_seed(cfg.seed, 2));
        (0..cfg.pair_cap)
            .map(|_| (r.gen_range(0..cp.a.len()), r.gen_range(0..cp.b.len())))
            .collect()
    };
    let a_bytes: Vec<Vec<u8>> = a.iter().map(|v| v.to_bytes01()).collect();
    let b_bytes: Vec<Vec<u8>> = b.iter().map(|v| v.to_bytes01()).collect();
    let gadget_ed: Vec<usize> = (0..d_h)
        .map(|i| edit_distance(dict.gadget(i, false), dict.gadget(i, true)))
        .collect();
    let pairs: Vec<PairRow> = chosen
        .par_iter()
        .map(|&(i, j)| PairRow {
            a: i,
            b: j,
            hamming: cp.a[i].hamming(&cp.b[j]),
            edit: edit_distance(&a_bytes[i], &b_bytes[j]),
        })
        .collect();
    let upper_bound_ok = pairs.iter().all(|r| {
        let bound: usize = (0..d_h).filter(|&k| cp.a[r.a].get(k) != cp.b[r.b].get(k)).map(|k| gadget_ed[k]).sum();
        r.edit <= bound
    });
    let devs: Vec<f64> = pairs.iter().map(|r| (r.edit as f64 - lam.mean * r.hamming as f64).abs()).collect();
    let tau_hat = devs.iter().cloned().fold(0.0, f64::max) / d as f64;
    let mean_deviation = devs.iter().sum::<f64>() / devs.len().max(1) as f64;
    let violations = pairs
        .iter()
        .zip(&devs)
        .filter(|(_, &dv)| dv > cfg.tau * d as f64)
        .map(|(r, _)| (r.a, r.b))
        .collect();
    let ham_arg = argmin(&pairs, |r| r.hamming);
    let best = pairs.iter().map(|r| r.hamming).min();
    let runner_up = pairs
        .iter()
        .filter(|r| (r.a, r.b) != ham_arg)
        .map(|r| r.hamming)
        .min();
    let margin = best.zip(runner_up).map(|(x, y)| y - x);
    let report = EmbeddingReport {
        d_h,
        d_prime,
        d,
        mode: cfg.mode,
        seed: cfg.seed,
        lambda_hat: lam.mean,
        lambda_stderr: lam.stderr,
        lambda_samples: lam.samples,
        tau: cfg.tau,
        tau_hat,
        mean_deviation,
        violations,
        upper_bound_ok,
        hamming_argmin: ham_arg,
        edit_argmin: argmin(&pairs, |r| r.edit),
        runner_up_margin: margin,
        ordering: ordering_check(&pairs, cfg.tau, d, lam.mean, margin),
        ordering_observed: ordering_check(&pairs, tau_hat, d, lam.mean, margin),
        pairs,
    };
    let out = CPInstance::new(d, Metric::Edit, a, b, "hamming-to-edit")?;
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitVector;

    fn inst(d: usize, a: &[&str], b: &[&str]) -> CPInstance {
        let p = |v: &[&str]| v.iter().map(|s| BitVector::parse(s).unwrap()).collect();
        CPInstance::new(d, Metric::Hamming, p(a), p(b), "test").unwrap()
    }

    #[test]
    fn defaults() {
        assert_eq!(default_d_prime(16), 64);
        assert_eq!(default_d_prime(2), 32);
        assert_eq!(default_d_prime(1000), 160);
        assert_eq!(default_k(16), 4);
        assert_eq!(default_k(1 << 20), 5);
    }

    #[test]
    fn all_equal_instance_has_zero_distances() {
        let cp = inst(4, &["1010", "1010"], &["1010"]);
        let (out, rep) = reduce_hamming_to_edit(&cp, &EmbedConfig::default()).unwrap();
        assert!(rep.pairs.iter().all(|r| r.edit == 0 && r.hamming == 0));
        assert_eq!(out.metric, Metric::Edit);
        assert_eq!(out.d, 4 * 32);
        assert!(!rep.flagged());
    }

    #[test]
    fn single_coordinate_is_one_gadget() {
        let cp = inst(1, &["0"], &["1"]);
        let cfg = EmbedConfig::default();
        let (_, rep) = reduce_hamming_to_edit(&cp, &cfg).unwrap();
        let dict = gen_gadgets(1, 32, GadgetMode::Uniform, sub_seed(cfg.seed, 0)).unwrap();
        assert_eq!(rep.pairs[0].edit, edit_distance(dict.gadget(0, false), dict.gadget(0, true)));
    }

    #[test]
    fn deterministic_and_upper_bounded() {
        let cp = inst(8, &["10110010", "01100001", "11111111"], &["00000000", "10110011"]);
        for mode in [GadgetMode::Uniform, GadgetMode::KWise(4)] {
            let cfg = EmbedConfig {
                d_prime: Some(32),
                mode,
                seed: 11,
                ..EmbedConfig::default()
            };
            let x = reduce_hamming_to_edit(&cp, &cfg).unwrap();
            assert_eq!(x, reduce_hamming_to_edit(&cp, &cfg).unwrap());
            assert!(x.1.upper_bound_ok);
            assert_eq!(x.1.pairs.len(), 6);
        }
    }

    #[test]
    fn short_gadgets_rejected() {
        let cp = inst(16, &["0000000000000000"], &["1111111111111111"]);
        let cfg = EmbedConfig {
            d_prime: Some(16),
            ..EmbedConfig::default()
        };
        assert!(matches!(reduce_hamming_to_edit(&cp, &cfg), Err(Error::Precondition(_))));
        let edit = cp.with_metric(Metric::Edit);
        assert!(reduce_hamming_to_edit(&edit, &EmbedConfig::default()).is_err());
    }
}
