//! Exact matrix algebra over `O`.

mod determinant;
mod matrix;
mod minors;
mod smith;
mod unimodular;

pub use determinant::{cofactor, determinant};
pub use matrix::DvrMatrix;
pub use minors::minor_ideal_valuation;
pub use smith::{cokernel_torsion_length, rank, smith_exponents, smith_form, SmithDecomposition};
pub use unimodular::{gl_act, random_small_element, random_unimodular, random_unit};
pub(crate) use unimodular::{random_unimodular_with, rng_from_seed};
