use itertools::Itertools;

use crate::dvr::DvrScalar;
use crate::error::Result;
use crate::linalg::{cofactor, DvrMatrix};

use super::ProblemShape;

/// Row of `X_{ij}` (0-based `i`, `j`) in an evaluated Jacobian.
pub fn variable_row(shape: ProblemShape, i: usize, j: usize) -> usize {
    i * shape.n() + j
}

/// The `m`-subsets of columns in lexicographic order; column order of
/// [`jacobian_all_minors_at_point`].
pub fn maximal_minor_subsets(shape: ProblemShape) -> Vec<Vec<usize>> {
    (0..shape.n()).combinations(shape.m()).collect()
}

/// Fills one Jacobian column with `∂det(a[:, cols])/∂X_{ij}` evaluated at
/// `a`, i.e. the cofactors of the evaluated `m × m` submatrix.
fn fill_minor_gradient(a: &DvrMatrix, shape: ProblemShape, cols: &[usize], column: usize, out: &mut [Vec<DvrScalar>]) -> Result<()> {
    let rows: Vec<usize> = (0..shape.m()).collect();
    let block = a.submatrix(&rows, cols);
    for i in 0..shape.m() {
        for (l, &j) in cols.iter().enumerate() {
            out[variable_row(shape, i, j)][column] = cofactor(&block, i, l)?;
        }
    }
    Ok(())
}

/// `λ_P(J)`: the `(mn) × (n - t)` Jacobian of the window minors
/// `f_1, …, f_{n-t}` evaluated at `a`.
pub fn jacobian_windows_at_point(a: &DvrMatrix) -> Result<DvrMatrix> {
    let shape = ProblemShape::of(a)?;
    let backend = a.backend();
    let cols = shape.window_count();
    let mut out = vec![vec![DvrScalar::zero(backend); cols]; shape.variable_count()];
    for k in 0..cols {
        let window: Vec<usize> = (k..k + shape.m()).collect();
        fill_minor_gradient(a, shape, &window, k, &mut out)?;
    }
    DvrMatrix::from_rows(backend, out)
}

/// `λ_P(J_A)`: the `(mn) × C(n, m)` Jacobian of all maximal minors,
/// one column per `m`-subset of columns in lexicographic order.
pub fn jacobian_all_minors_at_point(a: &DvrMatrix) -> Result<DvrMatrix> {
    let shape = ProblemShape::of(a)?;
    let backend = a.backend();
    let subsets = maximal_minor_subsets(shape);
    let mut out = vec![vec![DvrScalar::zero(backend); subsets.len()]; shape.variable_count()];
    for (c, cols) in subsets.iter().enumerate() {
        fill_minor_gradient(a, shape, cols, c, &mut out)?;
    }
    DvrMatrix::from_rows(backend, out)
}
