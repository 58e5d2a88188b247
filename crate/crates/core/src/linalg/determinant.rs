use crate::dvr::DvrScalar;
use crate::error::{Error, Result};

use super::matrix::DvrMatrix;

/// Determinant by Bareiss fraction-free elimination.
///
/// Each intermediate quotient is a minor of the input, so every division is
/// exact in `O`. Rows are pivoted on minimal valuation.
pub fn determinant(m: &DvrMatrix) -> Result<DvrScalar> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let backend = m.backend();
    match n {
        1 => return Ok(m.get(0, 0).clone()),
        2 => return Ok(&(m.get(0, 0) * m.get(1, 1)) - &(m.get(0, 1) * m.get(1, 0))),
        _ => {}
    }

    let mut a: Vec<Vec<DvrScalar>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut negate = false;
    let mut prev = DvrScalar::one(backend);
    for k in 0..n - 1 {
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k].valuation());
        let Some(p) = pivot else {
            return Ok(DvrScalar::zero(backend));
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let num = if lead.is_zero() {
                    &row[j] * &pivot_row[k]
                } else {
                    &(&row[j] * &pivot_row[k]) - &(&lead * &pivot_row[j])
                };
                row[j] = num
                    .checked_div(&prev)
                    .expect("Bareiss quotients are minors, hence integral");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -&det } else { det })
}

/// The `(i, j)` cofactor `(-1)^{i+j} det(M without row i, column j)`,
/// 0-based. This is `∂det/∂Y_{ij}` evaluated at `M`.
pub fn cofactor(m: &DvrMatrix, i: usize, j: usize) -> Result<DvrScalar> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if i >= n || j >= n {
        return Err(Error::DimensionMismatch(format!(
            "cofactor ({i}, {j}) of a {n}x{n} matrix"
        )));
    }
    if n == 1 {
        return Ok(DvrScalar::one(m.backend()));
    }
    let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
    let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
    let minor = determinant(&m.submatrix(&rows, &cols))?;
    Ok(if (i + j) % 2 == 1 { -&minor } else { minor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvr::{Backend, Valuation};

    #[test]
    fn small_examples() {
        let b = Backend::int_local(5).unwrap();
        assert!(determinant(&DvrMatrix::identity(b, 4).unwrap()).unwrap().is_one());
        let w = |k| DvrScalar::uniformizer_power(b, k);
        let d = DvrMatrix::diagonal(b, 2, 2, &[w(1), w(2)]).unwrap();
        assert_eq!(determinant(&d).unwrap(), w(3));
        let z = DvrMatrix::from_i64_rows(b, &[[0, 1, 2], [0, 3, 4], [0, 5, 6]]).unwrap();
        assert!(determinant(&z).unwrap().is_zero());
        // needs a row swap: leading entry zero
        let s = DvrMatrix::from_i64_rows(b, &[[0, 1, 0], [1, 0, 0], [0, 0, 1]]).unwrap();
        assert_eq!(determinant(&s).unwrap(), DvrScalar::from_i64(b, -1));
        let v = DvrMatrix::from_i64_rows(b, &[[2, -1, 0, 3], [1, 4, 5, -2], [0, 7, 1, 1], [3, 0, -4, 2]])
            .unwrap();
        // reference value from an independent CAS evaluation
        assert_eq!(determinant(&v).unwrap(), DvrScalar::from_i64(b, 410));
        assert!(matches!(
            determinant(&DvrMatrix::zeros(b, 2, 3).unwrap()),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn bareiss_with_fractions_and_valuations() {
        let b = Backend::int_local(3).unwrap();
        let x = |s: &str| DvrScalar::parse(b, s).unwrap();
        let m = DvrMatrix::from_rows(
            b,
            vec![
                vec![x("3"), x("1/2"), x("9")],
                vec![x("6/5"), x("3"), x("1")],
                vec![x("0"), x("27"), x("2/7")],
            ],
        )
        .unwrap();
        // cofactor expansion along the first row gives 213 = 3 · 71
        let det = determinant(&m).unwrap();
        assert_eq!(det, x("213"));
        assert_eq!(det.valuation(), Valuation::Finite(1));
    }

    #[test]
    fn cofactors() {
        let b = Backend::int_local(7).unwrap();
        let m = DvrMatrix::from_i64_rows(b, &[[1, 2], [3, 4]]).unwrap();
        assert_eq!(cofactor(&m, 0, 0).unwrap(), DvrScalar::from_i64(b, 4));
        assert_eq!(cofactor(&m, 0, 1).unwrap(), DvrScalar::from_i64(b, -3));
        assert_eq!(cofactor(&m, 1, 0).unwrap(), DvrScalar::from_i64(b, -2));
        let one = DvrMatrix::from_i64_rows(b, &[[5]]).unwrap();
        assert!(cofactor(&one, 0, 0).unwrap().is_one());
    }
}
