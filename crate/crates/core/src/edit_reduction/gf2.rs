//! GF(2^w) for w ≤ 32, elements as bit patterns of polynomials over GF(2).

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gf2w {
    w: u32,
    /// Reduction polynomial including the x^w term.
    modulus: u64,
}

fn clmul(a: u64, b: u64) -> u64 {
    let mut out = 0;
    let mut b = b;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            out ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    out
}

fn poly_mod(mut a: u64, m: u64) -> u64 {
    let dm = 63 - m.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= dm {
        a ^= m << (63 - a.leading_zeros() - dm);
    }
    a
}

/// Irreducible iff no factor of degree ≤ w/2 divides it.
fn is_irreducible(poly: u64, w: u32) -> bool {
    (2u64..(1 << (w / 2 + 1))).all(|f| poly_mod(poly, f) != 0)
}

impl Gf2w {
    /// Uses the numerically smallest irreducible polynomial of degree w.
    pub fn new(w: u32) -> Result<Self> {
        if w == 0 || w > 32 {
            return Err(Error::InvalidField(format!("GF(2^{w}) outside 1 ≤ w ≤ 32")));
        }
        let modulus = ((1u64 << w)..(1u64 << (w + 1)))
            .find(|&p| is_irreducible(p, w))
            .expect("irreducible polynomials exist in every degree");
        Ok(Gf2w { w, modulus })
    }

    /// Smallest field with at least `size` elements.
    pub fn at_least(size: u64) -> Result<Self> {
        let w = (64 - size.saturating_sub(1).leading_zeros()).max(1);
        if w > 32 {
            return Err(Error::pre(format!("index space {size} exceeds GF(2^32)")));
        }
        Self::new(w)
    }

    pub fn width(&self) -> u32 {
        self.w
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1 << self.w
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        poly_mod(clmul(a, b), self.modulus)
    }

    /// Horner evaluation of Σ coeffs[i]·x^i.
    pub fn eval(&self, coeffs: &[u64], x: u64) -> u64 {
        coeffs.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_moduli() {
        assert_eq!(Gf2w::new(8).unwrap().modulus(), 0x11B);
        assert_eq!(Gf2w::new(2).unwrap().modulus(), 0b111);
        assert_eq!(Gf2w::new(3).unwrap().modulus(), 0b1011);
        assert_eq!(Gf2w::new(4).unwrap().modulus(), 0b10011);
        assert!(Gf2w::new(33).is_err());
    }

    #[test]
    fn multiplicative_group_is_complete() {
        // every nonzero element has an inverse
        for w in 1..=8 {
            let f = Gf2w::new(w).unwrap();
            for a in 1..f.order() {
                assert!((1..f.order()).any(|b| f.mul(a, b) == 1), "w={w} a={a}");
            }
        }
    }

    #[test]
    fn aes_example_product() {
        let f = Gf2w::new(8).unwrap();
        assert_eq!(f.mul(0x57, 0x83), 0xC1);
        assert_eq!(f.mul(0x57, 0x13), 0xFE);
    }

    #[test]
    fn field_sizes() {
        assert_eq!(Gf2w::at_least(1024).unwrap().width(), 10);
        assert_eq!(Gf2w::at_least(1025).unwrap().width(), 11);
        assert_eq!(Gf2w::at_least(1).unwrap().width(), 1);
    }
}
