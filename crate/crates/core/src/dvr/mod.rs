//! Exact arithmetic in a discrete valuation ring `O` with uniformizer `ϖ`.
//!
//! Two backends are provided: `Z_(p)` (rationals whose denominator is prime
//! to `p`) and `F_q[t]_(t)` (rational functions whose denominator does not
//! vanish at `t = 0`).

mod backend;
pub mod poly;
mod scalar;
mod valuation;

pub use backend::{is_prime, Backend, BackendKind};
pub use scalar::{ArithOp, DvrScalar};
pub use valuation::Valuation;
