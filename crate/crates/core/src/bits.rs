//! Packed binary vectors.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        let mut v = Self::zeros(s.len());
        for (i, ch) in s.bytes().enumerate() {
            match ch {
                b'0' => {}
                b'1' => v.set(i, true),
                other => {
                    return Err(Error::pre(format!(
                        "invalid bit character {:?} at column {}",
                        other as char,
                        i + 1
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Popcount of the XOR. Panics on length mismatch.
    pub fn hamming(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len, "hamming on vectors of unequal length");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Popcount of the AND.
    pub fn inner_product(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len, "inner product on vectors of unequal length");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_orthogonal(&self, other: &BitVector) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }

    /// Bits as bytes 0/1, the alphabet the string metrics run on.
    pub fn to_bytes01(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    pub fn from_bytes01(bytes: &[u8]) -> Self {
        let mut v = Self::zeros(bytes.len());
        for (i, &b) in bytes.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display() {
        let v = BitVector::parse("10110").unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.to_string(), "10110");
        assert!(BitVector::parse("10a").is_err());
    }

    proptest! {
        #[test]
        fn hamming_matches_coordinate_loop(a in proptest::collection::vec(any::<bool>(), 0..200usize), seed in any::<u64>()) {
            let b: Vec<bool> = a.iter().enumerate().map(|(i, &x)| x ^ ((seed >> (i % 64)) & 1 == 1)).collect();
            let (va, vb) = (BitVector::from_bools(&a), BitVector::from_bools(&b));
            let naive = a.iter().zip(&b).filter(|(x, y)| x != y).count();
            prop_assert_eq!(va.hamming(&vb), naive);
            let ip = a.iter().zip(&b).filter(|(x, y)| **x && **y).count();
            prop_assert_eq!(va.inner_product(&vb), ip);
            prop_assert_eq!(va.is_orthogonal(&vb), ip == 0);
            prop_assert_eq!(BitVector::parse(&va.to_string()).unwrap(), va);
        }
    }
}
