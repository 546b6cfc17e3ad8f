//! One-point codes on the Hermitian curve y^q + y = x^{q+1} over GF(q²).
//!
//! The code of pole order `m` is spanned by the evaluations of `x^a y^b` with
//! `b < q` and `a·q + b·(q+1) ≤ m` at the q³ affine points. Products of two
//! such functions have pole order ≤ 2m, which is where the product code lives.

use num_rational::Ratio;

use super::code::{Backend, CodePair, CodeSpec, EvalPoint};
use super::field::FieldSpec;
use crate::error::{Error, Result};

/// Genus q(q−1)/2.
pub fn genus(q: u32) -> u32 {
    q * (q - 1) / 2
}

/// Affine points of the curve over `field` = GF(q²), lexicographic in (x, y).
pub fn affine_points(field: &FieldSpec) -> Result<Vec<EvalPoint>> {
    if field.degree() != 2 {
        return Err(Error::InvalidField("Hermitian codes live over GF(q²)".into()));
    }
    let q = field.characteristic() as u64;
    let mut pts = Vec::new();
    for x in field.elements() {
        let rhs = field.pow(x, q + 1);
        for y in field.elements() {
            if field.add(field.pow(y, q), y) == rhs {
                pts.push(EvalPoint::Curve(x, y));
            }
        }
    }
    if pts.len() as u64 != q * q * q {
        return Err(Error::Internal(format!(
            "Hermitian curve has {} affine points, expected {}",
            pts.len(),
            q * q * q
        )));
    }
    Ok(pts)
}

/// Exponents `(a, b)` of the basis monomials up to pole order `m`, ordered by
/// pole order.
pub fn monomials(q: u32, m: u32) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = (0..q)
        .flat_map(|b| {
            let used = b * (q + 1);
            let amax = if used > m { None } else { Some((m - used) / q) };
            amax.into_iter().flat_map(move |amax| (0..=amax).map(move |a| (a, b)))
        })
        .collect();
    out.sort_by_key(|&(a, b)| a * q + b * (q + 1));
    out
}

fn one_point_code(field: &FieldSpec, points: &[EvalPoint], q: u32, m: u32) -> Result<CodeSpec> {
    let n = points.len() as u64;
    let rows = monomials(q, m)
        .into_iter()
        .map(|(a, b)| {
            points
                .iter()
                .map(|pt| match pt {
                    EvalPoint::Curve(x, y) => {
                        field.mul(field.pow(*x, a as u64), field.pow(*y, b as u64))
                    }
                    EvalPoint::Line(_) => unreachable!(),
                })
                .collect()
        })
        .collect();
    let code = CodeSpec::from_generator(
        Backend::Hermitian,
        field.clone(),
        points.to_vec(),
        rows,
        Ratio::new(n - m as u64, n),
    )?;
    let expected = (m + 1 - genus(q)) as usize;
    if code.k() != expected {
        return Err(Error::Internal(format!(
            "pole order {m}: dimension {} but Riemann–Roch gives {expected}",
            code.k()
        )));
    }
    Ok(code)
}

/// C at pole order `m_deg`, C′ at `2·m_deg`. Requires `2·m_deg < q³` and
/// `m_deg ≥ 2g − 1`.
pub fn hermitian_code_pair(q: u32, m_deg: u32) -> Result<CodePair> {
    let field = FieldSpec::new(q, 2)?;
    let n = q * q * q;
    let g = genus(q);
    if 2 * m_deg >= n {
        return Err(Error::pre(format!(
            "C′ pole order {} must be below q³ = {n}",
            2 * m_deg
        )));
    }
    if m_deg + 1 < 2 * g {
        return Err(Error::pre(format!("pole order {m_deg} below 2g − 1 = {}", 2 * g - 1)));
    }
    let points = affine_points(&field)?;
    let c = one_point_code(&field, &points, q, m_deg)?;
    let c_prime = one_point_code(&field, &points, q, 2 * m_deg)?;
    CodePair::new(c, c_prime)
}

/// Smallest admissible pole order giving dimension ≥ `k`.
pub fn pole_order_for_dimension(q: u32, k: usize) -> Result<u32> {
    let g = genus(q);
    let m = (k as u32 + g).saturating_sub(1).max((2 * g).saturating_sub(1));
    if 2 * m >= q * q * q {
        return Err(Error::pre(format!(
            "Hermitian q={q} cannot carry dimension {k} with a positive-distance product code"
        )));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_curve_has_eight_points() {
        let f = FieldSpec::new(2, 2).unwrap();
        // brute force over all 16 pairs
        let mut count = 0;
        for x in f.elements() {
            for y in f.elements() {
                if f.add(f.mul(y, y), y) == f.pow(x, 3) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 8);
        assert_eq!(affine_points(&f).unwrap().len(), 8);
    }

    #[test]
    fn q2_pole3_has_dimension_3() {
        assert_eq!(monomials(2, 3), vec![(0, 0), (1, 0), (0, 1)]);
        let pair = hermitian_code_pair(2, 3).unwrap();
        assert_eq!(pair.c.k(), 3);
        assert_eq!(pair.c_prime.k(), 6);
        assert_eq!(pair.c.delta(), Ratio::new(5, 8));
        assert_eq!(pair.c_prime.delta(), Ratio::new(1, 4));
        assert_eq!(pair.n(), 8);
    }

    #[test]
    fn q2_pole4_is_rejected() {
        assert!(matches!(hermitian_code_pair(2, 4), Err(Error::Precondition(_))));
        assert!(matches!(hermitian_code_pair(3, 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn q3_dimensions_follow_riemann_roch() {
        for m in 5..=13 {
            let pair = hermitian_code_pair(3, m).unwrap();
            assert_eq!(pair.c.k() as u32, m - 2);
            assert_eq!(pair.n(), 27);
        }
    }

    #[test]
    fn every_point_is_on_curve() {
        let f = FieldSpec::new(3, 2).unwrap();
        for pt in affine_points(&f).unwrap() {
            let EvalPoint::Curve(x, y) = pt else { panic!() };
            assert_eq!(f.add(f.pow(y, 3), y), f.pow(x, 4));
        }
    }

    #[test]
    fn exhaustive_distance_meets_design() {
        for (q, m) in [(2, 1), (2, 2), (2, 3), (3, 5)] {
            let pair = hermitian_code_pair(q, m).unwrap();
            for code in [&pair.c, &pair.c_prime] {
                if code.codeword_count() > 10_000 {
                    continue;
                }
                let w = code.min_weight_exhaustive(10_000).unwrap() as u64;
                let d = code.delta();
                assert!(
                    Ratio::from_integer(w) >= d * Ratio::from_integer(code.n() as u64),
                    "{} weight {w}",
                    code.label()
                );
            }
        }
    }

    #[test]
    fn pole_order_helper() {
        assert_eq!(pole_order_for_dimension(3, 3).unwrap(), 5);
        assert_eq!(pole_order_for_dimension(3, 1).unwrap(), 5);
        assert_eq!(pole_order_for_dimension(3, 8).unwrap(), 10);
        assert!(pole_order_for_dimension(2, 4).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let pair = hermitian_code_pair(3, 5).unwrap();
        let text = pair.c_prime.to_descriptor();
        assert_eq!(CodeSpec::from_descriptor(&text).unwrap(), pair.c_prime);
    }
}
