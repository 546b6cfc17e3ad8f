//! Seeded Orthogonal Vectors instances.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::bits::BitVector;
use crate::cp_reduction::OVInstance;
use crate::error::{Error, Result};
use crate::solvers::solve_ov;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Force {
    Yes,
    No,
    Any,
}

impl fmt::Display for Force {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Force::Yes => "yes",
            Force::No => "no",
            Force::Any => "any",
        })
    }
}

impl FromStr for Force {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "yes" => Ok(Force::Yes),
            "no" => Ok(Force::No),
            "any" => Ok(Force::Any),
            _ => Err(Error::pre(format!("force must be yes, no or any, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OvGenConfig {
    pub m: usize,
    pub n_a: usize,
    pub n_b: usize,
    /// Probability of each bit being 1.
    pub density: f64,
    pub force: Force,
    pub seed: u64,
    /// Vector resamples allowed for `Force::No`.
    pub budget: usize,
}

impl OvGenConfig {
    pub fn new(m: usize, n_a: usize, n_b: usize, force: Force, seed: u64) -> Self {
        OvGenConfig {
            m,
            n_a,
            n_b,
            density: 0.5,
            force,
            seed,
            budget: 100_000,
        }
    }
}

fn draw(r: &mut impl Rng, m: usize, density: f64) -> BitVector {
    BitVector::from_bools(&(0..m).map(|_| r.gen_bool(density)).collect::<Vec<_>>())
}

pub fn gen_ov(cfg: &OvGenConfig) -> Result<OVInstance> {
    if !(0.0..=1.0).contains(&cfg.density) {
        return Err(Error::pre(format!("density {} outside [0, 1]", cfg.density)));
    }
    if cfg.m == 0 || cfg.n_a == 0 || cfg.n_b == 0 {
        return Err(Error::pre("m, nA and nB must be positive"));
    }
    let mut r = crate::seed::rng(cfg.seed);
    let mut a: Vec<BitVector> = (0..cfg.n_a).map(|_| draw(&mut r, cfg.m, cfg.density)).collect();
    let mut b: Vec<BitVector> = (0..cfg.n_b).map(|_| draw(&mut r, cfg.m, cfg.density)).collect();
    match cfg.force {
        Force::Any => {}
        Force::Yes => {
            let (i, j) = (r.gen_range(0..cfg.n_a), r.gen_range(0..cfg.n_b));
            for k in 0..cfg.m {
                if a[i].get(k) && b[j].get(k) {
                    b[j].set(k, false);
                }
            }
        }
        Force::No => {
            let mut spent = 0;
            let mut resample = |v: &mut BitVector, ok: &dyn Fn(&BitVector) -> bool| -> Result<()> {
                while !ok(v) {
                    spent += 1;
                    if spent > cfg.budget {
                        return Err(Error::BudgetExhausted(cfg.budget));
                    }
                    *v = draw(&mut r, cfg.m, cfg.density);
                }
                Ok(())
            };
            for v in a.iter_mut() {
                resample(v, &|v| v.count_ones() > 0)?;
            }
            for v in b.iter_mut() {
                resample(v, &|v| a.iter().all(|x| !x.is_orthogonal(v)))?;
            }
        }
    }
    let ov = OVInstance::new(cfg.m, a, b)?;
    let found = solve_ov(&ov).is_some();
    match cfg.force {
        Force::Yes if !found => Err(Error::Internal("planted orthogonal pair not found".into())),
        Force::No if found => Err(Error::Internal("orthogonal pair survived resampling".into())),
        _ => Ok(ov),
    }
}
