//! Smith normal form over a discrete valuation ring.
//!
//! Over a DVR every nonzero entry of minimal valuation divides every other
//! entry of the trailing block, so a single elimination round per pivot
//! suffices and no Euclidean gcd chains are needed. The Schur complement of
//! a minimal-valuation pivot has all valuations at least the pivot's, which
//! makes the exponents come out nondecreasing.

use crate::dvr::{DvrScalar, Valuation};

use super::matrix::DvrMatrix;

/// `left · M · right = diag(ϖ^{e_1}, …, ϖ^{e_r})` padded with zeros.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SmithDecomposition {
    pub exponents: Vec<u64>,
    pub rank: usize,
    pub left: DvrMatrix,
    pub right: DvrMatrix,
}

impl SmithDecomposition {
    /// The diagonal grid `left · M · right` should equal.
    pub fn diagonal(&self, rows: usize, cols: usize) -> DvrMatrix {
        let backend = self.left.backend();
        let diag: Vec<DvrScalar> = self
            .exponents
            .iter()
            .map(|&e| DvrScalar::uniformizer_power(backend, e))
            .collect();
        DvrMatrix::diagonal(backend, rows, cols, &diag).expect("rank fits the shape")
    }

    /// Recomputes `left · M · right` and compares it with the diagonal grid.
    pub fn verify(&self, m: &DvrMatrix) -> bool {
        let Ok(lm) = self.left.mul(m) else {
            return false;
        };
        let Ok(lmr) = lm.mul(&self.right) else {
            return false;
        };
        lmr == self.diagonal(m.rows(), m.cols())
    }

    pub fn torsion_length(&self) -> u64 {
        self.exponents.iter().sum()
    }
}

struct Workspace {
    cols: usize,
    a: Vec<DvrScalar>,
    left: Option<Vec<Vec<DvrScalar>>>,
    right: Option<Vec<Vec<DvrScalar>>>,
}

impl Workspace {
    fn at(&self, i: usize, j: usize) -> &DvrScalar {
        &self.a[i * self.cols + j]
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.cols {
            self.a.swap(i * self.cols + j, k * self.cols + j);
        }
        if let Some(l) = self.left.as_mut() {
            l.swap(i, k);
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        let rows = self.a.len() / self.cols;
        for i in 0..rows {
            self.a.swap(i * self.cols + j, i * self.cols + k);
        }
        if let Some(r) = self.right.as_mut() {
            for row in r.iter_mut() {
                row.swap(j, k);
            }
        }
    }
}

/// Runs the elimination; returns the exponents and, when requested, the
/// accumulated transforms.
fn eliminate(m: &DvrMatrix, track: bool) -> (Vec<u64>, Option<(DvrMatrix, DvrMatrix)>) {
    let backend = m.backend();
    let (rows, cols) = (m.rows(), m.cols());
    let identity = |n: usize| -> Vec<Vec<DvrScalar>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| DvrScalar::from_i64(backend, i64::from(i == j)))
                    .collect()
            })
            .collect()
    };
    let mut ws = Workspace {
        cols,
        a: m.entries().to_vec(),
        left: track.then(|| identity(rows)),
        right: track.then(|| identity(cols)),
    };
    let mut exponents = Vec::new();

    for k in 0..rows.min(cols) {
        // minimal valuation in the trailing block, ties broken row-major
        let mut best: Option<(Valuation, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = ws.at(i, j).valuation();
                if v.is_finite() && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else {
            break;
        };
        ws.swap_rows(k, pi);
        ws.swap_cols(k, pj);
        let pivot = ws.at(k, k).clone();

        // clear column k below the pivot with row operations
        for i in k + 1..rows {
            let x = ws.at(i, k);
            if x.is_zero() {
                continue;
            }
            let f = x.checked_div(&pivot).expect("minimal-valuation pivot divides");
            for j in k + 1..cols {
                let pk = ws.at(k, j);
                if pk.is_zero() {
                    continue;
                }
                let updated = ws.at(i, j) - &(&f * pk);
                ws.a[i * cols + j] = updated;
            }
            ws.a[i * cols + k] = DvrScalar::zero(backend);
            if let Some(l) = ws.left.as_mut() {
                let (top, bottom) = l.split_at_mut(i);
                for (dst, src) in bottom[0].iter_mut().zip(top[k].iter()) {
                    if !src.is_zero() {
                        *dst = &*dst - &(&f * src);
                    }
                }
            }
        }

        // clear row k right of the pivot with column operations; only the
        // pivot row changes in the working matrix since column k is now clear
        for j in k + 1..cols {
            let x = ws.at(k, j).clone();
            if x.is_zero() {
                continue;
            }
            ws.a[k * cols + j] = DvrScalar::zero(backend);
            if let Some(r) = ws.right.as_mut() {
                let f = x.checked_div(&pivot).expect("minimal-valuation pivot divides");
                for row in r.iter_mut() {
                    if !row[k].is_zero() {
                        row[j] = &row[j] - &(&f * &row[k]);
                    }
                }
            }
        }

        let (e, unit) = pivot.split_uniformizer().expect("pivot is nonzero");
        ws.a[k * cols + k] = DvrScalar::uniformizer_power(backend, e);
        if let Some(l) = ws.left.as_mut() {
            let inv = unit.unit_inverse().expect("unit part is a unit");
            for x in l[k].iter_mut() {
                *x = &*x * &inv;
            }
        }
        exponents.push(e);
    }
    debug_assert!(exponents.windows(2).all(|w| w[0] <= w[1]));

    let transforms = track.then(|| {
        let to_matrix = |g: Vec<Vec<DvrScalar>>| {
            DvrMatrix::from_rows(backend, g).expect("square transform")
        };
        (
            to_matrix(ws.left.take().expect("tracked")),
            to_matrix(ws.right.take().expect("tracked")),
        )
    });
    (exponents, transforms)
}

/// Smith normal form with unimodular transforms.
pub fn smith_form(m: &DvrMatrix) -> SmithDecomposition {
    let (exponents, transforms) = eliminate(m, true);
    let (left, right) = transforms.expect("tracked");
    SmithDecomposition {
        rank: exponents.len(),
        exponents,
        left,
        right,
    }
}

/// Invariant-factor exponents only (no transforms).
pub fn smith_exponents(m: &DvrMatrix) -> Vec<u64> {
    eliminate(m, false).0
}

/// Rank over the fraction field `K`.
pub fn rank(m: &DvrMatrix) -> usize {
    smith_exponents(m).len()
}

/// Length of the torsion submodule of `O^{rows} / (column space of M)`.
pub fn cokernel_torsion_length(m: &DvrMatrix) -> Valuation {
    Valuation::Finite(smith_exponents(m).iter().sum())
}
