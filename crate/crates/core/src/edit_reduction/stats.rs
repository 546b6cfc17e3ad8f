//! Sampling estimates for random binary strings.

use rand::RngCore;
use rayon::prelude::*;

use super::distance::{edit_distance, lcs};
use crate::error::{Error, Result};
use crate::seed::{rng, sub_seed};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

fn estimate(xs: &[f64]) -> Estimate {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Estimate {
        mean,
        stderr: (var / n).sqrt(),
        samples: xs.len(),
    }
}

pub fn random_string(len: usize, seed: u64) -> Vec<u8> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let w = r.next_u64();
        out.extend((0..64).map(|b| ((w >> b) & 1) as u8).take(len - out.len()));
    }
    out
}

/// Mean edit distance between independent uniform strings of length d′;
/// sample i uses sub-seeds 2i and 2i+1.
pub fn measure_lambda(d_prime: usize, samples: usize, seed: u64) -> Result<Estimate> {
    if samples < 100 {
        return Err(Error::pre(format!("{samples} samples, at least 100 needed")));
    }
    let xs: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let x = random_string(d_prime, sub_seed(seed, 2 * i));
            let y = random_string(d_prime, sub_seed(seed, 2 * i + 1));
            edit_distance(&x, &y) as f64
        })
        .collect();
    Ok(estimate(&xs))
}

/// Mean LCS(x, y)/n for independent uniform strings of length n.
pub fn measure_lcs_fraction(n: usize, samples: usize, seed: u64) -> Result<Estimate> {
    if samples < 2 || n == 0 {
        return Err(Error::pre("need n ≥ 1 and at least 2 samples"));
    }
    let xs: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let x = random_string(n, sub_seed(seed, 2 * i));
            let y = random_string(n, sub_seed(seed, 2 * i + 1));
            lcs(&x, &y) as f64 / n as f64
        })
        .collect();
    Ok(estimate(&xs))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailRow {
    pub t: f64,
    pub empirical: f64,
    pub bound: f64,
    /// Binomial standard error of the empirical tail.
    pub sigma: f64,
}

impl TailRow {
    pub fn dominated(&self) -> bool {
        self.empirical <= self.bound + 3.0 * self.sigma
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationReport {
    pub d_prime: usize,
    pub samples: usize,
    pub mean: f64,
    pub rows: Vec<TailRow>,
}

impl ConcentrationReport {
    pub fn all_dominated(&self) -> bool {
        self.rows.iter().all(TailRow::dominated)
    }
}

/// Tails of ED(z, x) around its mean for uniform x of length d′, against
/// 2·exp(−2t²/d′). `z` defaults to a uniform string drawn from the seed.
pub fn concentration_report(
    d_prime: usize,
    z: Option<&[u8]>,
    samples: usize,
    t_grid: &[f64],
    seed: u64,
) -> Result<ConcentrationReport> {
    if samples < 1000 {
        return Err(Error::pre(format!("{samples} samples, at least 1000 needed")));
    }
    let z = match z {
        Some(z) if z.len() != d_prime => {
            return Err(Error::Length {
                expected: d_prime,
                got: z.len(),
            })
        }
        Some(z) => z.to_vec(),
        None => random_string(d_prime, sub_seed(seed, u64::MAX - 1)),
    };
    let xs: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| edit_distance(&z, &random_string(d_prime, sub_seed(seed, i))) as f64)
        .collect();
    let mean = xs.iter().sum::<f64>() / samples as f64;
    let n = samples as f64;
    let rows = t_grid
        .iter()
        .map(|&t| {
            let p = xs.iter().filter(|&&x| (x - mean).abs() > t).count() as f64 / n;
            TailRow {
                t,
                empirical: p,
                bound: 2.0 * (-2.0 * t * t / d_prime as f64).exp(),
                sigma: (p * (1.0 - p) / n).sqrt(),
            }
        })
        .collect();
    Ok(ConcentrationReport {
        d_prime,
        samples,
        mean,
        rows,
    })
}
