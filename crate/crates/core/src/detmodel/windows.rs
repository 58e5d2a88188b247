use crate::dvr::{DvrScalar, Valuation};
use crate::error::{Error, Result};
use crate::linalg::{determinant, minor_ideal_valuation, DvrMatrix};

use super::ProblemShape;

fn check_window(index: usize, max: usize) -> Result<()> {
    if index == 0 || index > max {
        Err(Error::BadWindow { index, max })
    } else {
        Ok(())
    }
}

/// `f_i(a) = det a[:, i ..= i+t]`, 1-based `i ∈ [1, n - t]`.
pub fn window_minor_value(a: &DvrMatrix, i: usize) -> Result<DvrScalar> {
    let shape = ProblemShape::of(a)?;
    check_window(i, shape.window_count())?;
    determinant(&a.column_block(i - 1, shape.m()))
}

/// `ν(λ(Q_i))`: the `t`-minor ideal valuation of columns `i ..= i+t-1`,
/// 1-based `i ∈ [1, n - t + 1]`.
pub fn window_ideal_valuation(a: &DvrMatrix, i: usize) -> Result<Valuation> {
    let shape = ProblemShape::of(a)?;
    check_window(i, shape.window_ideal_count())?;
    minor_ideal_valuation(&a.column_block(i - 1, shape.t()), shape.t())
}

/// `length_O(O / λ(Q_2 ⋯ Q_{n-t}))`, the sum of the window ideal valuations
/// over `2 ≤ i ≤ n - t`; zero for the empty product when `n = m`.
pub fn conductor_colength(a: &DvrMatrix) -> Result<Valuation> {
    let shape = ProblemShape::of(a)?;
    (2..=shape.window_count())
        .map(|i| window_ideal_valuation(a, i))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detmodel::{normalized_point, NormalizedPointSpec};
    use crate::dvr::Backend;

    fn point(m: usize, n: usize, e: &[u64], b: Backend) -> DvrMatrix {
        normalized_point(
            &NormalizedPointSpec::new(ProblemShape::new(m, n).unwrap(), e.to_vec()).unwrap(),
            b,
        )
    }

    #[test]
    fn window_minors() {
        let b = Backend::int_local(5).unwrap();
        let a = point(2, 3, &[1], b);
        assert!(window_minor_value(&a, 1).unwrap().is_zero());
        assert!(window_minor_value(&a, 2).unwrap().is_zero());
        assert!(matches!(window_minor_value(&a, 3), Err(Error::BadWindow { index: 3, max: 2 })));
        assert!(matches!(window_minor_value(&a, 0), Err(Error::BadWindow { .. })));

        // full-rank 3x3 block in columns 2..4 of a 3x5 matrix
        let c = DvrMatrix::from_i64_rows(b, &[[0, 2, 1, 0, 0], [0, 1, 3, 1, 0], [0, 0, 1, 4, 0]]).unwrap();
        assert_eq!(window_minor_value(&c, 2).unwrap(), DvrScalar::from_i64(b, 18));
    }

    #[test]
    fn window_ideals() {
        let b = Backend::int_local(3).unwrap();
        let a = point(3, 4, &[1, 2], b);
        for i in 1..=3 {
            assert_eq!(window_ideal_valuation(&a, i).unwrap(), Valuation::Finite(3));
        }
        assert!(matches!(window_ideal_valuation(&a, 4), Err(Error::BadWindow { index: 4, max: 3 })));

        let low = DvrMatrix::from_i64_rows(b, &[[1, 2, 3, 1], [2, 4, 6, 2], [0, 0, 0, 0]]).unwrap();
        assert_eq!(window_ideal_valuation(&low, 1).unwrap(), Valuation::Infinite);
    }

    #[test]
    fn conductor() {
        let b = Backend::poly_local(2).unwrap();
        assert_eq!(conductor_colength(&point(3, 4, &[1, 2], b)).unwrap(), Valuation::Finite(3));
        assert_eq!(conductor_colength(&point(3, 3, &[1, 2], b)).unwrap(), Valuation::ZERO);
        assert_eq!(conductor_colength(&point(2, 6, &[2], b)).unwrap(), Valuation::Finite(8));
    }
}
