//! Dense Gaussian elimination over a [`FieldSpec`].

use super::field::{FieldElement, FieldSpec};

pub type Matrix = Vec<Vec<FieldElement>>;

/// Reduces `rows` in place to reduced row-echelon form and drops zero rows.
///
/// Pivot columns are taken left to right, so the returned pivot list is the
/// lexicographically smallest information set of the row space.
pub fn rref(field: &FieldSpec, rows: &mut Matrix) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = field.inv(rows[r][col]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(factor, pv));
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &FieldSpec, rows: &Matrix) -> usize {
    let mut m = rows.clone();
    rref(field, &mut m).len()
}

/// Basis of `{ x : x · M = 0 }` for a `k × c` matrix `M` (the left kernel).
pub fn left_kernel(field: &FieldSpec, m: &Matrix, k: usize) -> Matrix {
    let c = m.first().map_or(0, |r| r.len());
    // Transpose: solve Mᵀ xᵀ = 0.
    let mut t: Matrix = (0..c).map(|j| (0..k).map(|i| m[i][j]).collect()).collect();
    let pivots = rref(field, &mut t);
    let free: Vec<usize> = (0..k).filter(|j| !pivots.contains(j)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); k];
            v[f] = field.one();
            for (row, &pc) in t.iter().zip(&pivots) {
                v[pc] = field.neg(row[f]);
            }
            v
        })
        .collect()
}

/// `coeffs · rows`, a linear combination of equal-length rows.
pub fn combine(field: &FieldSpec, coeffs: &[FieldElement], rows: &Matrix) -> Vec<FieldElement> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut out = vec![field.zero(); n];
    for (&c, row) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            *o = field.add(*o, field.mul(c, x));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldSpec {
        FieldSpec::new(5, 1).unwrap()
    }

    fn row(f: &FieldSpec, v: &[u64]) -> Vec<FieldElement> {
        v.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn rref_picks_leftmost_pivots() {
        let f = f5();
        let mut m = vec![row(&f, &[0, 2, 4, 1]), row(&f, &[0, 1, 2, 4])];
        let piv = rref(&f, &mut m);
        assert_eq!(piv, vec![1, 3]);
        assert_eq!(m[0][1], f.one());
        assert!(m[1][1].is_zero());
    }

    #[test]
    fn dependent_rows_are_dropped() {
        let f = f5();
        let mut m = vec![row(&f, &[1, 2, 3]), row(&f, &[2, 4, 1])];
        assert_eq!(rref(&f, &mut m).len(), 1);
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn left_kernel_annihilates() {
        let f = f5();
        let m = vec![row(&f, &[1, 0]), row(&f, &[2, 1]), row(&f, &[3, 3])];
        let ker = left_kernel(&f, &m, 3);
        assert_eq!(ker.len(), 1);
        let prod = combine(&f, &ker[0], &m);
        assert!(prod.iter().all(|x| x.is_zero()));
    }
}
