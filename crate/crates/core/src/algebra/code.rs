//! Systematic linear evaluation codes and product-closed code pairs.

use std::fmt::Write as _;

use num_rational::Ratio;

use super::field::{FieldElement, FieldSpec};
use super::linalg::{self, Matrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    ReedSolomon,
    Hermitian,
}

impl Backend {
    pub fn tag(&self) -> &'static str {
        match self {
            Backend::ReedSolomon => "reed-solomon",
            Backend::Hermitian => "hermitian",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "reed-solomon" | "rs" => Some(Backend::ReedSolomon),
            "hermitian" => Some(Backend::Hermitian),
            _ => None,
        }
    }
}

/// Where a code coordinate is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvalPoint {
    Line(FieldElement),
    Curve(FieldElement, FieldElement),
}

/// A linear `[n, k]` code over a small field, held in systematic form.
///
/// `generator` is the reduced row-echelon generator: its columns at
/// `systematic` form the identity, so a message is copied verbatim onto
/// those coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    backend: Backend,
    field: FieldSpec,
    points: Vec<EvalPoint>,
    systematic: Vec<usize>,
    delta: Ratio<u64>,
    generator: Matrix,
    fingerprint: u64,
}

/// A word tagged with the fingerprint of the code it was produced for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Codeword {
    pub symbols: Vec<FieldElement>,
    code: u64,
}

impl Codeword {
    pub fn code_fingerprint(&self) -> u64 {
        self.code
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|x| !x.is_zero()).count()
    }
}

impl CodeSpec {
    /// Builds a code from any (possibly non-systematic) spanning matrix.
    /// Fails if the rows are linearly dependent.
    pub fn from_generator(
        backend: Backend,
        field: FieldSpec,
        points: Vec<EvalPoint>,
        rows: Matrix,
        delta: Ratio<u64>,
    ) -> Result<Self> {
        let n = points.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Length {
                expected: n,
                got: bad.len(),
            });
        }
        if delta <= Ratio::from_integer(0) {
            return Err(Error::pre("designed distance must be positive"));
        }
        let k = rows.len();
        let mut generator = rows;
        let systematic = linalg::rref(&field, &mut generator);
        if systematic.len() != k {
            return Err(Error::Internal(format!(
                "generator has rank {} < {k}",
                systematic.len()
            )));
        }
        let mut code = CodeSpec {
            backend,
            field,
            points,
            systematic,
            delta,
            generator,
            fingerprint: 0,
        };
        code.fingerprint = fnv1a(code.to_descriptor().as_bytes());
        Ok(code)
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn points(&self) -> &[EvalPoint] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.generator.len()
    }

    pub fn systematic_positions(&self) -> &[usize] {
        &self.systematic
    }

    /// Designed relative distance.
    pub fn delta(&self) -> Ratio<u64> {
        self.delta
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.k() as u64, self.n() as u64)
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn codeword_count(&self) -> u128 {
        (self.field.order() as u128).saturating_pow(self.k() as u32)
    }

    /// Systematic encoding: the result restricted to the systematic positions
    /// equals `message`.
    pub fn encode(&self, message: &[FieldElement]) -> Result<Codeword> {
        if message.len() != self.k() {
            return Err(Error::Length {
                expected: self.k(),
                got: message.len(),
            });
        }
        Ok(self.wrap(linalg::combine(&self.field, message, &self.generator)))
    }

    /// Encodes a 0/1 message, zero-padded to length k.
    pub fn encode_bits(&self, bits: &[bool]) -> Result<Codeword> {
        if bits.len() > self.k() {
            return Err(Error::Length {
                expected: self.k(),
                got: bits.len(),
            });
        }
        let mut msg = vec![self.field.zero(); self.k()];
        for (m, &b) in msg.iter_mut().zip(bits) {
            if b {
                *m = self.field.one();
            }
        }
        self.encode(&msg)
    }

    /// Row-space membership. The coefficients of a codeword are its entries at
    /// the systematic positions, so membership is one re-encoding and compare.
    pub fn is_codeword(&self, word: &[FieldElement]) -> Result<bool> {
        if word.len() != self.n() {
            return Err(Error::Length {
                expected: self.n(),
                got: word.len(),
            });
        }
        Ok(self.contains_unchecked(word))
    }

    pub(crate) fn contains_unchecked(&self, word: &[FieldElement]) -> bool {
        let coeffs: Vec<_> = self.systematic.iter().map(|&i| word[i]).collect();
        linalg::combine(&self.field, &coeffs, &self.generator) == word
    }

    /// Tags a raw word with this code's fingerprint after checking membership.
    pub fn codeword(&self, word: Vec<FieldElement>) -> Result<Codeword> {
        if self.is_codeword(&word)? {
            Ok(self.wrap(word))
        } else {
            Err(Error::NotACodeword(self.label()))
        }
    }

    pub(crate) fn wrap(&self, symbols: Vec<FieldElement>) -> Codeword {
        Codeword {
            symbols,
            code: self.fingerprint,
        }
    }

    pub fn zero_codeword(&self) -> Codeword {
        self.wrap(vec![self.field.zero(); self.n()])
    }

    /// Every codeword, messages in base-|F| counting order (first message
    /// symbol most significant).
    pub fn all_codewords(&self, cap: u128) -> Result<Vec<Codeword>> {
        let count = self.codeword_count();
        if count > cap {
            return Err(Error::cap(format!("enumerate {}", self.label()), count, cap));
        }
        let els: Vec<_> = self.field.elements().collect();
        Ok(counting(els.len(), self.k())
            .map(|digits| {
                let msg: Vec<_> = digits.iter().map(|&d| els[d]).collect();
                self.wrap(linalg::combine(&self.field, &msg, &self.generator))
            })
            .collect())
    }

    /// Exhaustively measured minimum nonzero weight.
    pub fn min_weight_exhaustive(&self, cap: u128) -> Result<usize> {
        Ok(self
            .all_codewords(cap)?
            .iter()
            .map(Codeword::weight)
            .filter(|&w| w > 0)
            .min()
            .unwrap_or(self.n()))
    }

    pub fn label(&self) -> String {
        format!(
            "{}[n={},k={}] over GF({}^{})",
            self.backend.tag(),
            self.n(),
            self.k(),
            self.field.characteristic(),
            self.field.degree()
        )
    }

    /// Text descriptor: header, systematic positions, generator rows.
    pub fn to_descriptor(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "code {} p={} e={} n={} k={} delta={}/{}",
            self.backend.tag(),
            self.field.characteristic(),
            self.field.degree(),
            self.n(),
            self.k(),
            self.delta.numer(),
            self.delta.denom()
        );
        let sys: Vec<String> = self.systematic.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(s, "systematic {}", sys.join(" "));
        let e = self.field.degree() as usize;
        for row in &self.generator {
            let coords: Vec<String> = row
                .iter()
                .flat_map(|x| x.coords().into_iter().take(e))
                .map(|c| c.to_string())
                .collect();
            let _ = writeln!(s, "{}", coords.join(" "));
        }
        s
    }

    /// Parses a descriptor. Evaluation points are rebuilt from the backend's
    /// canonical point order, and the generator must be in systematic form.
    pub fn from_descriptor(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty descriptor"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 7 || toks[0] != "code" {
            return Err(Error::parse(ln + 1, "expected `code <backend> p= e= n= k= delta=`"));
        }
        let backend = Backend::from_tag(toks[1])
            .ok_or_else(|| Error::parse(ln + 1, format!("unknown backend {}", toks[1])))?;
        let kv = |i: usize, key: &str| -> Result<&str> {
            toks[i]
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| Error::parse(ln + 1, format!("expected {key}=")))
        };
        let num = |s: &str| -> Result<u64> {
            s.parse::<u64>()
                .map_err(|_| Error::parse(ln + 1, format!("bad integer {s:?}")))
        };
        let p = num(kv(2, "p")?)? as u32;
        let e = num(kv(3, "e")?)? as u32;
        let n = num(kv(4, "n")?)? as usize;
        let k = num(kv(5, "k")?)? as usize;
        let (dn, dd) = kv(6, "delta")?
            .split_once('/')
            .ok_or_else(|| Error::parse(ln + 1, "delta must be num/den"))?;
        let (dn, dd) = (num(dn)?, num(dd)?);
        if dd == 0 {
            return Err(Error::parse(ln + 1, "zero denominator"));
        }
        let field = FieldSpec::new(p, e).map_err(|err| Error::parse(ln + 1, err.to_string()))?;

        let (ln2, sys_line) = lines
            .next()
            .ok_or_else(|| Error::parse(ln + 2, "missing systematic line"))?;
        let sys_toks: Vec<&str> = sys_line.split_whitespace().collect();
        if sys_toks.first() != Some(&"systematic") {
            return Err(Error::parse(ln2 + 1, "expected `systematic ...`"));
        }
        let systematic: Vec<usize> = sys_toks[1..]
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| Error::parse(ln2 + 1, "bad position")))
            .collect::<Result<_>>()?;

        let mut rows = Vec::with_capacity(k);
        for _ in 0..k {
            let (lr, line) = lines
                .next()
                .ok_or_else(|| Error::parse(ln2 + 2, "missing generator row"))?;
            let coords: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| Error::parse(lr + 1, "bad coordinate")))
                .collect::<Result<_>>()?;
            if coords.len() != n * e as usize {
                return Err(Error::parse(lr + 1, "generator row has wrong length"));
            }
            let row = coords
                .chunks(e as usize)
                .map(|c| field.from_coords(c[0], if e == 2 { c[1] } else { 0 }))
                .collect::<Result<Vec<_>>>()
                .map_err(|err| Error::parse(lr + 1, err.to_string()))?;
            rows.push(row);
        }
        if let Some((lx, _)) = lines.next() {
            return Err(Error::parse(lx + 1, "trailing content"));
        }
        let points = match backend {
            Backend::ReedSolomon => super::rs::line_points(&field),
            Backend::Hermitian => super::hermitian::affine_points(&field)?,
        };
        if points.len() != n {
            return Err(Error::parse(ln + 1, format!("n={n} but backend has {} points", points.len())));
        }
        let code = CodeSpec::from_generator(backend, field, points, rows.clone(), Ratio::new(dn, dd))
            .map_err(|err| Error::parse(ln + 1, err.to_string()))?;
        if code.generator != rows || code.systematic != systematic {
            return Err(Error::parse(ln2 + 1, "generator is not in systematic form"));
        }
        Ok(code)
    }
}

/// The pair (C, C′) with C·C ⊆ C′ coordinate-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodePair {
    pub c: CodeSpec,
    pub c_prime: CodeSpec,
}

impl CodePair {
    pub fn new(c: CodeSpec, c_prime: CodeSpec) -> Result<Self> {
        if c.field != c_prime.field || c.points != c_prime.points {
            return Err(Error::pre("C and C′ must share field and evaluation points"));
        }
        if c_prime.k() < c.k() {
            return Err(Error::pre("dim(C′) < dim(C)"));
        }
        Ok(CodePair { c, c_prime })
    }

    pub fn field(&self) -> &FieldSpec {
        self.c.field()
    }

    pub fn n(&self) -> usize {
        self.c.n()
    }

    /// Coordinate-wise product of two C-codewords, checked to land in C′.
    pub fn pointwise_product(&self, w1: &Codeword, w2: &Codeword) -> Result<Codeword> {
        for w in [w1, w2] {
            if w.code != self.c.fingerprint || !self.c.is_codeword(&w.symbols)? {
                return Err(Error::NotACodeword(self.c.label()));
            }
        }
        let f = self.field();
        let prod: Vec<_> = w1
            .symbols
            .iter()
            .zip(&w2.symbols)
            .map(|(&a, &b)| f.mul(a, b))
            .collect();
        if !self.c_prime.contains_unchecked(&prod) {
            return Err(Error::Internal(format!(
                "product left {}",
                self.c_prime.label()
            )));
        }
        Ok(self.c_prime.wrap(prod))
    }
}

/// All `len`-digit base-`radix` strings, most significant digit first.
pub(crate) fn counting(radix: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (radix as u128).pow(len as u32);
    (0..total).map(move |mut i| {
        let mut d = vec![0; len];
        for slot in d.iter_mut().rev() {
            *slot = (i % radix as u128) as usize;
            i /= radix as u128;
        }
        d
    })
}

pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
