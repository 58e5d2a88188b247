use itertools::Itertools;

use crate::dvr::Valuation;
use crate::error::{Error, Result};

use super::determinant::determinant;
use super::matrix::DvrMatrix;

/// `min ν(det M')` over all `k × k` submatrices `M'`, i.e. the valuation of
/// the ideal `I_k(M) ⊆ O`. `∞` exactly when every `k`-minor vanishes.
///
/// Exhaustive. Zero rows and columns are skipped since any minor through
/// them vanishes.
pub fn minor_ideal_valuation(m: &DvrMatrix, k: usize) -> Result<Valuation> {
    if k == 0 || k > m.rows().min(m.cols()) {
        return Err(Error::BadMinorSize {
            k,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let rows = m.nonzero_rows();
    let cols = m.nonzero_cols();
    if rows.len() < k || cols.len() < k {
        return Ok(Valuation::Infinite);
    }
    let col_sets: Vec<Vec<usize>> = cols.iter().copied().combinations(k).collect();
    let mut best = Valuation::Infinite;
    for rs in rows.iter().copied().combinations(k) {
        for cs in &col_sets {
            let v = determinant(&m.submatrix(&rs, cs))?.valuation();
            if v < best {
                best = v;
                if best == Valuation::ZERO {
                    return Ok(best);
                }
            }
        }
    }
    Ok(best)
}
