//! Constructions over the generic `m × n` matrix `X`, evaluated at points.
//!
//! `t = m - 1` throughout. Window minors are `f_i = det X[i ..= i+t]`
//! (1-based columns, `1 ≤ i ≤ n - t`), and window ideals are
//! `Q_i = I_t(X[i ..= i+t-1])` for `1 ≤ i ≤ n - t + 1`.
//!
//! Jacobian rows are indexed by the variables `X_{ij}` in row-major order;
//! `X_{ij}` (1-based) sits on row `(i-1)·n + (j-1)`.

mod checks;
mod jacobian;
mod sample;
mod windows;

use serde::{Deserialize, Serialize};

use crate::dvr::{Backend, DvrScalar};
use crate::error::{Error, Result};
use crate::linalg::DvrMatrix;

pub use checks::{
    derivative_pattern_check, initial_monomial_check, lex_initial_monomial, triangular_submatrix_check,
    window_initial_supports_disjoint, TriangularCheck,
};
pub use jacobian::{jacobian_all_minors_at_point, jacobian_windows_at_point, maximal_minor_subsets, variable_row};
pub use sample::{sample_batch, sample_variety_point};
pub use windows::{conductor_colength, window_ideal_valuation, window_minor_value};

/// `2 ≤ m ≤ n`, with `t = m - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ShapeWire", into = "ShapeWire")]
pub struct ProblemShape {
    m: usize,
    n: usize,
}

impl ProblemShape {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < m {
            return Err(Error::InvalidShape(format!(
                "need 2 <= m <= n, got m = {m}, n = {n}"
            )));
        }
        Ok(Self { m, n })
    }

    /// The shape of a point matrix.
    pub fn of(a: &DvrMatrix) -> Result<Self> {
        Self::new(a.rows(), a.cols())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.m - 1
    }

    /// Number of window minors `f_1, …, f_{n-t}`; also the height of `I_m(X)`.
    pub fn window_count(&self) -> usize {
        self.n - self.t()
    }

    /// Number of window ideals `Q_1, …, Q_{n-t+1}`.
    pub fn window_ideal_count(&self) -> usize {
        self.n - self.t() + 1
    }

    pub fn variable_count(&self) -> usize {
        self.m * self.n
    }
}

#[derive(Serialize, Deserialize)]
struct ShapeWire {
    m: usize,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<usize>,
}

impl TryFrom<ShapeWire> for ProblemShape {
    type Error = Error;

    fn try_from(w: ShapeWire) -> Result<Self> {
        let shape = ProblemShape::new(w.m, w.n)?;
        match w.t {
            Some(t) if t != shape.t() => Err(Error::InvalidShape(format!("t = {t} but m - 1 = {}", shape.t()))),
            _ => Ok(shape),
        }
    }
}

impl From<ProblemShape> for ShapeWire {
    fn from(s: ProblemShape) -> Self {
        ShapeWire {
            m: s.m,
            n: s.n,
            t: Some(s.t()),
        }
    }
}

/// A shape plus nondecreasing exponents `a_1 ≤ … ≤ a_t` of
/// `D = diag(ϖ^{a_1}, …, ϖ^{a_t})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpecWire", into = "SpecWire")]
pub struct NormalizedPointSpec {
    shape: ProblemShape,
    exponents: Vec<u64>,
}

impl NormalizedPointSpec {
    pub fn new(shape: ProblemShape, exponents: Vec<u64>) -> Result<Self> {
        if exponents.len() != shape.t() {
            return Err(Error::InvalidExponents(format!(
                "expected {} exponents for m = {}, got {}",
                shape.t(),
                shape.m(),
                exponents.len()
            )));
        }
        if exponents.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidExponents(format!(
                "exponents {exponents:?} are not nondecreasing"
            )));
        }
        Ok(Self { shape, exponents })
    }

    pub fn shape(&self) -> ProblemShape {
        self.shape
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// `ν(Δ) = ν(det D) = a_1 + … + a_t`.
    pub fn delta_valuation(&self) -> u64 {
        self.exponents.iter().sum()
    }

    pub fn delta(&self, backend: Backend) -> DvrScalar {
        DvrScalar::uniformizer_power(backend, self.delta_valuation())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecWire {
    m: usize,
    n: usize,
    exponents: Vec<u64>,
}

impl TryFrom<SpecWire> for NormalizedPointSpec {
    type Error = Error;

    fn try_from(w: SpecWire) -> Result<Self> {
        NormalizedPointSpec::new(ProblemShape::new(w.m, w.n)?, w.exponents)
    }
}

impl From<NormalizedPointSpec> for SpecWire {
    fn from(s: NormalizedPointSpec) -> Self {
        SpecWire {
            m: s.shape.m(),
            n: s.shape.n(),
            exponents: s.exponents,
        }
    }
}

/// The point `[D D ⋯ D D_{[1, n mod t]}; 0 ⋯ 0]`: zero last row, and the
/// first `t` rows repeat `D` cyclically, so `(i, j)` holds `ϖ^{a_i}` exactly
/// when `j ≡ i (mod t)`.
pub fn normalized_point(spec: &NormalizedPointSpec, backend: Backend) -> DvrMatrix {
    let shape = spec.shape();
    let t = shape.t();
    DvrMatrix::from_fn(backend, shape.m(), shape.n(), |i, j| {
        if i < t && j % t == i {
            DvrScalar::uniformizer_power(backend, spec.exponents()[i])
        } else {
            DvrScalar::zero(backend)
        }
    })
    .expect("shape is nonempty")
}
