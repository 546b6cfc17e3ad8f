//! Reed–Solomon pair: C = evaluations of degree < k polynomials at every field
//! element, C′ = degree < 2k − 1.

use num_rational::Ratio;

use super::code::{Backend, CodePair, CodeSpec, EvalPoint};
use super::field::FieldSpec;
use crate::error::{Error, Result};

/// Field elements in canonical order.
pub fn line_points(field: &FieldSpec) -> Vec<EvalPoint> {
    field.elements().map(EvalPoint::Line).collect()
}

fn evaluation_code(field: &FieldSpec, dim: usize, delta: Ratio<u64>) -> Result<CodeSpec> {
    let points = line_points(field);
    let rows = (0..dim as u64)
        .map(|deg| {
            points
                .iter()
                .map(|pt| match pt {
                    EvalPoint::Line(x) => field.pow(*x, deg),
                    EvalPoint::Curve(..) => unreachable!(),
                })
                .collect()
        })
        .collect();
    CodeSpec::from_generator(Backend::ReedSolomon, field.clone(), points, rows, delta)
}

/// Requires |F| ≥ 2k so that C′ keeps positive distance.
pub fn rs_code_pair(field: &FieldSpec, k: usize) -> Result<CodePair> {
    let n = field.order() as usize;
    if k == 0 {
        return Err(Error::pre("dimension must be at least 1"));
    }
    if n < 2 * k {
        return Err(Error::pre(format!("field size {n} < 2k = {}", 2 * k)));
    }
    let c = evaluation_code(field, k, Ratio::new((n - k + 1) as u64, n as u64))?;
    let c_prime = evaluation_code(field, 2 * k - 1, Ratio::new((n + 2 - 2 * k) as u64, n as u64))?;
    CodePair::new(c, c_prime)
}
