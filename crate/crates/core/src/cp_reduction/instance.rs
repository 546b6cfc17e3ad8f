use std::fmt;
use std::str::FromStr;

use crate::bits::BitVector;
use crate::error::{Error, Result};

/// An Orthogonal Vectors instance over {0,1}^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OVInstance {
    pub m: usize,
    pub a: Vec<BitVector>,
    pub b: Vec<BitVector>,
}

impl OVInstance {
    pub fn new(m: usize, a: Vec<BitVector>, b: Vec<BitVector>) -> Result<Self> {
        if let Some(v) = a.iter().chain(&b).find(|v| v.len() != m) {
            return Err(Error::Length {
                expected: m,
                got: v.len(),
            });
        }
        Ok(OVInstance { m, a, b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    Hamming,
    L1,
    /// Values are squared distances.
    L2,
    /// Values are p-th powers.
    Lp(u32),
    Edit,
}

impl Metric {
    pub fn tag(&self) -> String {
        match self {
            Metric::Hamming => "hamming".into(),
            Metric::L1 => "l1".into(),
            Metric::L2 => "l2".into(),
            Metric::Lp(p) => format!("lp({p})"),
            Metric::Edit => "edit".into(),
        }
    }

    /// Exponent relating the stored value to the distance itself.
    pub fn root(&self) -> u32 {
        match self {
            Metric::L2 => 2,
            Metric::Lp(p) => *p,
            _ => 1,
        }
    }

    /// Distance value on {0,1} vectors: Hamming for the ℓp family (the
    /// p-th power of the ℓp distance), Levenshtein for `Edit`.
    pub fn value(&self, x: &BitVector, y: &BitVector) -> u64 {
        match self {
            Metric::Edit => crate::edit_reduction::edit_distance(&x.to_bytes01(), &y.to_bytes01()) as u64,
            _ => x.hamming(y) as u64,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hamming" => Ok(Metric::Hamming),
            "l1" => Ok(Metric::L1),
            "l2" => Ok(Metric::L2),
            "edit" => Ok(Metric::Edit),
            _ => {
                let p = s
                    .strip_prefix("lp(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|p| p.parse::<u32>().ok())
                    .filter(|&p| p >= 1)
                    .ok_or_else(|| Error::UnsupportedMetric(s.to_string()))?;
                Ok(match p {
                    1 => Metric::L1,
                    2 => Metric::L2,
                    p => Metric::Lp(p),
                })
            }
        }
    }
}

/// A bichromatic closest-pair instance over {0,1}^d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPInstance {
    pub d: usize,
    pub metric: Metric,
    pub a: Vec<BitVector>,
    pub b: Vec<BitVector>,
    /// Free-form single-token origin note.
    pub provenance: String,
}

impl CPInstance {
    pub fn new(d: usize, metric: Metric, a: Vec<BitVector>, b: Vec<BitVector>, provenance: &str) -> Result<Self> {
        if let Some(v) = a.iter().chain(&b).find(|v| v.len() != d) {
            return Err(Error::Length {
                expected: d,
                got: v.len(),
            });
        }
        if provenance.chars().any(char::is_whitespace) {
            return Err(Error::pre("provenance note must be a single token"));
        }
        Ok(CPInstance {
            d,
            metric,
            a,
            b,
            provenance: provenance.to_string(),
        })
    }

    pub fn with_metric(&self, metric: Metric) -> Self {
        CPInstance {
            metric,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_tags_round_trip() {
        for m in [Metric::Hamming, Metric::L1, Metric::L2, Metric::Lp(3), Metric::Edit] {
            assert_eq!(m.tag().parse::<Metric>().unwrap(), m);
        }
        assert_eq!("lp(2)".parse::<Metric>().unwrap(), Metric::L2);
        assert!(matches!("cosine".parse::<Metric>(), Err(Error::UnsupportedMetric(_))));
        assert!("lp(0)".parse::<Metric>().is_err());
    }

    #[test]
    fn lengths_are_checked() {
        let v = BitVector::zeros(3);
        assert!(OVInstance::new(4, vec![v.clone()], vec![]).is_err());
        assert!(CPInstance::new(3, Metric::Hamming, vec![v], vec![], "two words").is_err());
    }
}
