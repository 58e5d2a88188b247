use std::collections::HashSet;

use itertools::Itertools;
use serde::Serialize;

use crate::dvr::{Backend, DvrScalar, Valuation};
use crate::error::{Error, Result};
use crate::linalg::{determinant, minor_ideal_valuation};

use super::jacobian::{jacobian_windows_at_point, variable_row};
use super::{normalized_point, NormalizedPointSpec, ProblemShape};

const MAX_PERMUTATION_SIZE: usize = 6;

/// Lex-largest monomial of `det X[:, cols]` inside a generic matrix with
/// `n` columns, where variables are ordered row-major with earlier ones
/// larger. Returns its support (sorted variable rows) and how many
/// permutation terms attain it.
///
/// All terms are squarefree of equal degree, so comparing monomials
/// reduces to comparing sorted supports: the first variable where two
/// supports differ decides, and the support containing it is larger.
pub fn lex_initial_monomial(n: usize, cols: &[usize]) -> Result<(Vec<usize>, usize)> {
    let size = cols.len();
    if size > MAX_PERMUTATION_SIZE {
        return Err(Error::SizeTooLarge(size));
    }
    let mut best: Option<Vec<usize>> = None;
    let mut ties = 0;
    for sigma in (0..size).permutations(size) {
        let mut support: Vec<usize> = sigma
            .iter()
            .enumerate()
            .map(|(r, &c)| r * n + cols[c])
            .collect();
        support.sort_unstable();
        match &best {
            Some(b) if support > *b => {}
            Some(b) if support == *b => ties += 1,
            _ => {
                best = Some(support);
                ties = 1;
            }
        }
    }
    Ok((best.unwrap_or_default(), ties))
}

/// Whether the main diagonal is the unique lex-initial monomial of the
/// generic `size × size` determinant, for `size ∈ [2, 6]`.
pub fn initial_monomial_check(size: usize) -> Result<bool> {
    if size > MAX_PERMUTATION_SIZE {
        return Err(Error::SizeTooLarge(size));
    }
    if size < 2 {
        return Err(Error::InvalidShape(format!("determinant size {size} < 2")));
    }
    let cols: Vec<usize> = (0..size).collect();
    let (support, ties) = lex_initial_monomial(size, &cols)?;
    let diagonal: Vec<usize> = (0..size).map(|i| i * size + i).collect();
    Ok(ties == 1 && support == diagonal)
}

/// Computes the lex-initial monomial of every window minor `f_1, …, f_{n-t}`
/// by enumeration and checks their supports are pairwise disjoint.
pub fn window_initial_supports_disjoint(shape: ProblemShape) -> Result<bool> {
    let mut seen = HashSet::new();
    for k in 0..shape.window_count() {
        let cols: Vec<usize> = (k..k + shape.m()).collect();
        let (support, ties) = lex_initial_monomial(shape.n(), &cols)?;
        if ties != 1 {
            return Ok(false);
        }
        for var in support {
            if !seen.insert(var) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn is_plus_minus(x: &DvrScalar, delta: &DvrScalar) -> bool {
    x == delta || *x == -delta
}

/// At the normalized point, each window column of `λ_P(J)` is nonzero
/// exactly on `X_{m,k}` and `X_{m,k+t}`, with values `±Δ`.
pub fn derivative_pattern_check(spec: &NormalizedPointSpec, backend: Backend) -> Result<bool> {
    let shape = spec.shape();
    let a = normalized_point(spec, backend);
    let jac = jacobian_windows_at_point(&a)?;
    let delta = spec.delta(backend);
    let last = shape.m() - 1;
    for k in 0..shape.window_count() {
        let corners = [variable_row(shape, last, k), variable_row(shape, last, k + shape.t())];
        for r in 0..jac.rows() {
            let x = jac.get(r, k);
            let ok = if corners.contains(&r) {
                is_plus_minus(x, &delta)
            } else {
                x.is_zero()
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangularCheck {
    pub passed: bool,
    /// `det` of the rows of `λ_P(J)` for `X_{m,1}, …, X_{m,n-t}`.
    pub determinant: DvrScalar,
    /// `ν` of the `(n-t)`-minor ideal of `λ_P(J)`, by full enumeration.
    pub minor_valuation: Valuation,
    pub expected_valuation: Valuation,
}

/// The square block of `λ_P(J)` on the variables `X_{m,1}, …, X_{m,n-t}` is
/// lower triangular with `±Δ` on the diagonal, so its determinant is
/// `±Δ^{n-t}`, and this realizes the `(n-t)`-minor ideal `Δ^{n-t}O`.
pub fn triangular_submatrix_check(spec: &NormalizedPointSpec, backend: Backend) -> Result<TriangularCheck> {
    let shape = spec.shape();
    let a = normalized_point(spec, backend);
    let jac = jacobian_windows_at_point(&a)?;
    let delta = spec.delta(backend);
    let size = shape.window_count();
    let rows: Vec<usize> = (0..size).map(|j| variable_row(shape, shape.m() - 1, j)).collect();
    let cols: Vec<usize> = (0..size).collect();
    let block = jac.submatrix(&rows, &cols);

    let mut shape_ok = true;
    for i in 0..size {
        for k in 0..size {
            let x = block.get(i, k);
            let ok = match i.cmp(&k) {
                std::cmp::Ordering::Equal => is_plus_minus(x, &delta),
                std::cmp::Ordering::Less => x.is_zero(),
                std::cmp::Ordering::Greater => true,
            };
            shape_ok &= ok;
        }
    }
    let det = determinant(&block)?;
    let delta_power = delta.pow(size as u64);
    let det_ok = is_plus_minus(&det, &delta_power);
    let minor_valuation = minor_ideal_valuation(&jac, size)?;
    let expected_valuation = Valuation::Finite(spec.delta_valuation() * size as u64);
    Ok(TriangularCheck {
        passed: shape_ok && det_ok && minor_valuation == expected_valuation,
        determinant: det,
        minor_valuation,
        expected_valuation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: usize, n: usize, e: &[u64]) -> NormalizedPointSpec {
        NormalizedPointSpec::new(ProblemShape::new(m, n).unwrap(), e.to_vec()).unwrap()
    }

    #[test]
    fn initial_monomials() {
        for size in 2..=6 {
            assert!(initial_monomial_check(size).unwrap(), "size {size}");
        }
        assert!(matches!(initial_monomial_check(7), Err(Error::SizeTooLarge(7))));
        assert!(initial_monomial_check(1).is_err());
    }

    #[test]
    fn anti_diagonal_is_not_initial() {
        // reversed column order puts the anti-diagonal of X first
        let (support, ties) = lex_initial_monomial(2, &[1, 0]).unwrap();
        assert_eq!(ties, 1);
        assert_eq!(support, vec![0, 3]);
    }

    #[test]
    fn window_supports() {
        for m in 2..=5 {
            for n in m..=9 {
                let shape = ProblemShape::new(m, n).unwrap();
                assert!(window_initial_supports_disjoint(shape).unwrap(), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn derivative_patterns() {
        assert!(derivative_pattern_check(&spec(2, 5, &[2]), Backend::int_local(5).unwrap()).unwrap());
        assert!(derivative_pattern_check(&spec(3, 6, &[0, 0]), Backend::int_local(2).unwrap()).unwrap());
        assert!(derivative_pattern_check(&spec(4, 7, &[1, 1, 2]), Backend::poly_local(3).unwrap()).unwrap());
    }

    #[test]
    fn triangular_blocks() {
        let b = Backend::int_local(5).unwrap();
        let c = triangular_submatrix_check(&spec(2, 4, &[2]), b).unwrap();
        assert!(c.passed);
        assert_eq!(c.determinant.valuation(), Valuation::Finite(6));

        let c = triangular_submatrix_check(&spec(3, 6, &[0, 0]), b).unwrap();
        assert!(c.passed);
        assert!(c.determinant.is_unit());

        let c = triangular_submatrix_check(&spec(3, 5, &[1, 3]), Backend::poly_local(7).unwrap()).unwrap();
        assert!(c.passed);
        assert_eq!(c.determinant.valuation(), Valuation::Finite(12));
        assert_eq!(c.minor_valuation, Valuation::Finite(12));
    }
}
