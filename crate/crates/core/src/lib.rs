//! Congruence modules, cotangent torsion, conductor colengths and Wiles
//! defects of determinantal rings of maximal minors `O[X_{m×n}]/I_m(X)` at
//! `O`-points over a discrete valuation ring `O`.
//!
//! Everything is exact. Lengths of torsion `O`-modules are computed through
//! Smith normal forms and minor enumeration, and the closed formulas are
//! cross-checked against those length pipelines.

pub mod congruence;
pub mod detmodel;
pub mod dvr;
pub mod error;
pub mod linalg;
pub mod verify;

pub use congruence::{analyze_point, crosscheck_ikm, invariance_probe, DefectReport, Finding};
pub use dvr::{ArithOp, Backend, BackendKind, DvrScalar, Valuation};
pub use error::{Error, Result};
pub use linalg::{DvrMatrix, SmithDecomposition};
