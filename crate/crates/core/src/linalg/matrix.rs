use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dvr::{Backend, DvrScalar};
use crate::error::{Error, Result};

/// A dense, row-major, nonempty matrix over `O`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixWire", into = "MatrixWire")]
pub struct DvrMatrix {
    backend: Backend,
    rows: usize,
    cols: usize,
    entries: Vec<DvrScalar>,
}

impl DvrMatrix {
    pub fn new(backend: Backend, rows: usize, cols: usize, entries: Vec<DvrScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrices must be nonempty, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            backend.ensure_same(&e.backend())?;
        }
        Ok(Self {
            backend,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(backend: Backend, rows: Vec<Vec<DvrScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(backend, r, c, rows.into_iter().flatten().collect())
    }

    /// Integer entries, mapped into `O`.
    pub fn from_i64_rows<R: AsRef<[i64]>>(backend: Backend, rows: &[R]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| {
                row.as_ref()
                    .iter()
                    .map(|&x| DvrScalar::from_i64(backend, x))
                    .collect()
            })
            .collect();
        Self::from_rows(backend, rows)
    }

    pub fn from_fn(
        backend: Backend,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> DvrScalar,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(backend, rows, cols, entries)
    }

    pub fn zeros(backend: Backend, rows: usize, cols: usize) -> Result<Self> {
        Self::new(backend, rows, cols, vec![DvrScalar::zero(backend); rows * cols])
    }

    pub fn identity(backend: Backend, size: usize) -> Result<Self> {
        Self::from_fn(backend, size, size, |i, j| {
            DvrScalar::from_i64(backend, i64::from(i == j))
        })
    }

    /// `rows × cols` grid with `diagonal[i]` at `(i, i)`.
    pub fn diagonal(backend: Backend, rows: usize, cols: usize, diagonal: &[DvrScalar]) -> Result<Self> {
        if diagonal.len() > rows.min(cols) {
            return Err(Error::DimensionMismatch(format!(
                "{} diagonal entries do not fit in {rows}x{cols}",
                diagonal.len()
            )));
        }
        Self::from_fn(backend, rows, cols, |i, j| {
            if i == j && i < diagonal.len() {
                diagonal[i].clone()
            } else {
                DvrScalar::zero(backend)
            }
        })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &DvrScalar {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[DvrScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[DvrScalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(DvrScalar::is_zero)
    }

    pub fn transpose(&self) -> DvrMatrix {
        Self::from_fn(self.backend, self.cols, self.rows, |i, j| self.get(j, i).clone())
            .expect("transpose of a nonempty matrix")
    }

    pub fn mul(&self, rhs: &DvrMatrix) -> Result<DvrMatrix> {
        self.backend.ensure_same(&rhs.backend)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let zero = DvrScalar::zero(self.backend);
        Self::from_fn(self.backend, self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(zero.clone(), |acc, k| {
                let (a, b) = (self.get(i, k), rhs.get(k, j));
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    &acc + &(a * b)
                }
            })
        })
    }

    /// Submatrix on the given (0-based) row and column indices.
    ///
    /// Panics on an empty selection or an index out of range.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> DvrMatrix {
        Self::from_fn(self.backend, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
        .expect("nonempty submatrix selection")
    }

    /// Columns `start .. start + len` (0-based).
    pub fn column_block(&self, start: usize, len: usize) -> DvrMatrix {
        let cols: Vec<usize> = (start..start + len).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, &cols)
    }

    /// Indices of rows with at least one nonzero entry.
    pub fn nonzero_rows(&self) -> Vec<usize> {
        (0..self.rows)
            .filter(|&i| self.row(i).iter().any(|x| !x.is_zero()))
            .collect()
    }

    pub fn nonzero_cols(&self) -> Vec<usize> {
        (0..self.cols)
            .filter(|&j| (0..self.rows).any(|i| !self.get(i, j).is_zero()))
            .collect()
    }
}

impl fmt::Display for DvrMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(DvrScalar::to_text).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixWire {
    backend: Backend,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Value>>,
}

impl TryFrom<MatrixWire> for DvrMatrix {
    type Error = Error;

    fn try_from(wire: MatrixWire) -> Result<Self> {
        if wire.entries.len() != wire.rows {
            return Err(Error::DimensionMismatch(format!(
                "declared {} rows, found {}",
                wire.rows,
                wire.entries.len()
            )));
        }
        let mut entries = Vec::with_capacity(wire.rows * wire.cols);
        for (i, row) in wire.entries.iter().enumerate() {
            if row.len() != wire.cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, declared {} columns",
                    i + 1,
                    row.len(),
                    wire.cols
                )));
            }
            for v in row {
                entries.push(DvrScalar::from_json(wire.backend, v)?);
            }
        }
        DvrMatrix::new(wire.backend, wire.rows, wire.cols, entries)
    }
}

impl From<DvrMatrix> for MatrixWire {
    fn from(m: DvrMatrix) -> Self {
        let entries = (0..m.rows)
            .map(|i| m.row(i).iter().map(DvrScalar::to_json).collect())
            .collect();
        MatrixWire {
            backend: m.backend,
            rows: m.rows,
            cols: m.cols,
            entries,
        }
    }
}
