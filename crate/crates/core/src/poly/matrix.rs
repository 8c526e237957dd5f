//! Exact determinants of polynomial matrices via fraction-free (Bareiss)
//! elimination. Every division in the sweep is exact over `ℤ[z]`, so
//! coefficient growth stays polynomial instead of exponential.

use super::{IntPoly, PolyError};

/// Determinant of a square matrix of polynomials. The empty matrix has
/// determinant 1.
pub fn det_poly_matrix(m: &[Vec<IntPoly>]) -> Result<IntPoly, PolyError> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(PolyError::NonSquareMatrix {
                rows: n,
                row: i,
                cols: row.len(),
            });
        }
    }
    if n == 0 {
        return Ok(IntPoly::one());
    }
    let mut w: Vec<Vec<IntPoly>> = m.to_vec();
    let mut negate = false;
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        if w[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !w[r][k].is_zero()) else {
                return Ok(IntPoly::zero());
            };
            w.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = w[k][k].mul(&w[i][j]).sub(&w[i][k].mul(&w[k][j]));
                // exact by the Bareiss identity (entries are minors)
                w[i][j] = num.exact_div(&prev)?;
            }
            w[i][k] = IntPoly::zero();
        }
        prev = w[k][k].clone();
    }
    let det = w[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}
