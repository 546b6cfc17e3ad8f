//! Prime fields GF(p) and their quadratic extensions GF(p²).
//!
//! Elements are plain coordinate pairs `(c0, c1)` standing for `c0 + c1·X`
//! modulo a monic irreducible `X² + a1·X + a0`. The field context carries the
//! modulus; elements carry nothing, so they are `Copy` and cheap to store in
//! codewords and generator matrices.

use std::fmt;

use crate::error::{Error, Result};

/// An element of GF(p^e), stored as reduced coordinates over GF(p).
///
/// For prime fields the second coordinate is always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement {
    c: [u32; 2],
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement { c: [0, 0] };

    pub fn coords(&self) -> [u32; 2] {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c == [0, 0]
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c[1] == 0 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{}+{}X", self.c[0], self.c[1])
        }
    }
}

/// A finite field GF(p^e) with e ∈ {1, 2}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    /// `(a0, a1)` of the reduction polynomial `X² + a1·X + a0`; unused for e = 1.
    modulus: (u32, u32),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^e). For e = 2 the reduction polynomial is the first monic
    /// irreducible `X² + a1·X + a0` in lexicographic order of `(a1, a0)`.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("characteristic {p} too large")));
        }
        match e {
            1 => Ok(FieldSpec { p, e, modulus: (0, 0) }),
            2 => {
                for a1 in 0..p {
                    for a0 in 0..p {
                        if !has_root(p, a1, a0) {
                            return Ok(FieldSpec { p, e, modulus: (a0, a1) });
                        }
                    }
                }
                Err(Error::Internal(format!("no irreducible quadratic over GF({p})")))
            }
            other => Err(Error::InvalidField(format!(
                "extension degree {other} not in {{1, 2}}"
            ))),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    /// Coefficients `[1, a1, a0]` of the reduction polynomial (highest first);
    /// `None` for a prime field.
    pub fn reduction_polynomial(&self) -> Option<[u32; 3]> {
        (self.e == 2).then_some([1, self.modulus.1, self.modulus.0])
    }

    /// Bits needed to write one element: ⌈log₂ |F|⌉.
    pub fn element_bits(&self) -> u32 {
        let order = self.order();
        64 - (order - 1).leading_zeros()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { c: [1 % self.p, 0] }
    }

    /// The image of an integer under Z → GF(p) ⊆ GF(p^e).
    pub fn from_int(&self, v: u64) -> FieldElement {
        FieldElement {
            c: [(v % self.p as u64) as u32, 0],
        }
    }

    pub fn from_coords(&self, c0: u32, c1: u32) -> Result<FieldElement> {
        if c0 >= self.p || c1 >= self.p || (self.e == 1 && c1 != 0) {
            return Err(Error::InvalidField(format!(
                "coordinates ({c0}, {c1}) out of range for GF({}^{})",
                self.p, self.e
            )));
        }
        Ok(FieldElement { c: [c0, c1] })
    }

    /// Canonical integer label `c0 + p·c1`; ordering by this label is the
    /// canonical element order.
    pub fn index(&self, a: FieldElement) -> u64 {
        a.c[0] as u64 + self.p as u64 * a.c[1] as u64
    }

    pub fn from_index(&self, idx: u64) -> FieldElement {
        debug_assert!(idx < self.order());
        let p = self.p as u64;
        FieldElement {
            c: [(idx % p) as u32, (idx / p) as u32],
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            c: [addm(a.c[0], b.c[0], p), addm(a.c[1], b.c[1], p)],
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            c: [(p - a.c[0]) % p, (p - a.c[1]) % p],
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p as u64;
        if self.e == 1 {
            return FieldElement {
                c: [((a.c[0] as u64 * b.c[0] as u64) % p) as u32, 0],
            };
        }
        let (a0, a1) = (a.c[0] as u64, a.c[1] as u64);
        let (b0, b1) = (b.c[0] as u64, b.c[1] as u64);
        let (m0, m1) = (self.modulus.0 as u64, self.modulus.1 as u64);
        // X² = −a1·X − a0
        let hi = (a1 * b1) % p;
        let c0 = (a0 * b0 % p + (p - hi * m0 % p)) % p;
        let c1 = ((a0 * b1 + a1 * b0) % p + (p - hi * m1 % p)) % p;
        FieldElement {
            c: [c0 as u32, c1 as u32],
        }
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Σ aᵢ·bᵢ.
    pub fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        a.iter()
            .zip(b)
            .fold(self.zero(), |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

#[inline]
fn addm(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (if s >= p as u64 { s - p as u64 } else { s }) as u32
}

fn has_root(p: u32, a1: u32, a0: u32) -> bool {
    let p = p as u64;
    (0..p).any(|x| (x * x + a1 as u64 * x + a0 as u64).is_multiple_of(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Irreducibility oracle: a monic quadratic without roots, found by
    /// scanning every (a1, a0) and every candidate root.
    fn brute_force_first_irreducible(p: u32) -> [u32; 3] {
        for a1 in 0..p {
            for a0 in 0..p {
                let mut rooted = false;
                for x in 0..p {
                    if (x * x + a1 * x + a0) % p == 0 {
                        rooted = true;
                    }
                }
                if !rooted {
                    return [1, a1, a0];
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn prime_field_construction() {
        let f = FieldSpec::new(5, 1).unwrap();
        assert_eq!(f.order(), 5);
        assert_eq!(f.reduction_polynomial(), None);
    }

    #[test]
    fn gf9_uses_x2_plus_1() {
        let f = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f.reduction_polynomial(), Some([1, 0, 1]));
        assert_eq!(brute_force_first_irreducible(3), [1, 0, 1]);
        assert_eq!(f.order(), 9);
    }

    #[test]
    fn reduction_polynomial_matches_scan() {
        for p in [2, 3, 5, 7, 11, 13] {
            let f = FieldSpec::new(p, 2).unwrap();
            assert_eq!(f.reduction_polynomial().unwrap(), brute_force_first_irreducible(p));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FieldSpec::new(4, 1), Err(Error::InvalidField(_))));
        assert!(matches!(FieldSpec::new(1, 1), Err(Error::InvalidField(_))));
        assert!(matches!(FieldSpec::new(5, 3), Err(Error::InvalidField(_))));
        assert!(matches!(FieldSpec::new(5, 0), Err(Error::InvalidField(_))));
    }

    #[test]
    fn element_bits() {
        assert_eq!(FieldSpec::new(5, 1).unwrap().element_bits(), 3);
        assert_eq!(FieldSpec::new(2, 2).unwrap().element_bits(), 2);
        assert_eq!(FieldSpec::new(5, 2).unwrap().element_bits(), 5);
        assert_eq!(FieldSpec::new(2, 1).unwrap().element_bits(), 1);
    }

    #[test]
    fn field_axioms_exhaustive_up_to_49() {
        for (p, e) in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (5, 2), (7, 2)] {
            let f = FieldSpec::new(p, e).unwrap();
            let els: Vec<_> = f.elements().collect();
            let (zero, one) = (f.zero(), f.one());
            for &a in &els {
                assert_eq!(f.add(a, zero), a);
                assert_eq!(f.mul(a, one), a);
                assert_eq!(f.add(a, f.neg(a)), zero);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), one, "GF({p}^{e}) inverse of {a:?}");
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    if !a.is_zero() && !b.is_zero() {
                        assert!(!f.mul(a, b).is_zero(), "zero divisor in GF({p}^{e})");
                    }
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn index_round_trip_and_order() {
        let f = FieldSpec::new(5, 2).unwrap();
        for i in 0..f.order() {
            assert_eq!(f.index(f.from_index(i)), i);
        }
        assert_eq!(f.elements().count(), 25);
        assert!(f.inv(f.zero()).is_none());
    }

    #[test]
    fn frobenius_is_additive_in_gf25() {
        let f = FieldSpec::new(5, 2).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.pow(f.add(a, b), 5), f.add(f.pow(a, 5), f.pow(b, 5)));
            }
        }
    }
}
