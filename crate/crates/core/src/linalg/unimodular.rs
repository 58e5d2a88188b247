use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dvr::poly::FpPoly;
use crate::dvr::{Backend, BackendKind, DvrScalar};
use crate::error::{Error, Result};

use super::determinant::determinant;
use super::matrix::DvrMatrix;

/// Bound on random transvection multipliers: integers in `[-9, 9]`, or
/// polynomials of degree at most 2.
const MAX_HEIGHT: i64 = 9;
const MAX_DEGREE: usize = 2;

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random ring element of bounded height (may be zero).
pub fn random_small_element<R: Rng + ?Sized>(backend: Backend, rng: &mut R) -> DvrScalar {
    match backend.kind() {
        BackendKind::IntLocal { .. } => {
            DvrScalar::from_i64(backend, rng.random_range(-MAX_HEIGHT..=MAX_HEIGHT))
        }
        BackendKind::PolyLocal { q } => {
            let coeffs = (0..=MAX_DEGREE).map(|_| rng.random_range(0..q)).collect();
            DvrScalar::from_fp_poly(backend, FpPoly::from_residues(q, coeffs))
        }
    }
}

/// A random unit of bounded height.
pub fn random_unit<R: Rng + ?Sized>(backend: Backend, rng: &mut R) -> DvrScalar {
    match backend.kind() {
        BackendKind::IntLocal { p } => {
            let candidates: Vec<i64> = (1..=MAX_HEIGHT).filter(|&c| c % p as i64 != 0).collect();
            let c = candidates[rng.random_range(0..candidates.len())];
            let sign = if rng.random_bool(0.5) { -1 } else { 1 };
            DvrScalar::from_i64(backend, sign * c)
        }
        BackendKind::PolyLocal { q } => {
            let mut coeffs: Vec<u64> = (0..=MAX_DEGREE).map(|_| rng.random_range(0..q)).collect();
            coeffs[0] = rng.random_range(1..q);
            DvrScalar::from_fp_poly(backend, FpPoly::from_residues(q, coeffs))
        }
    }
}

/// A product of `steps` random elementary matrices (unit row scalings,
/// transvections, row swaps); deterministic in `seed`.
pub fn random_unimodular(backend: Backend, size: usize, seed: u64, steps: usize) -> Result<DvrMatrix> {
    let mut rng = rng_from_seed(seed);
    random_unimodular_with(backend, size, steps, &mut rng)
}

pub(crate) fn random_unimodular_with<R: Rng + ?Sized>(
    backend: Backend,
    size: usize,
    steps: usize,
    rng: &mut R,
) -> Result<DvrMatrix> {
    let mut rows: Vec<Vec<DvrScalar>> = DvrMatrix::identity(backend, size)?
        .entries()
        .chunks(size)
        .map(<[DvrScalar]>::to_vec)
        .collect();
    for _ in 0..steps {
        let kind = if size == 1 { 0 } else { rng.random_range(0..4) };
        match kind {
            0 => {
                let i = rng.random_range(0..size);
                let u = random_unit(backend, rng);
                for x in rows[i].iter_mut() {
                    *x = &*x * &u;
                }
            }
            1 => {
                let i = rng.random_range(0..size);
                let j = (i + rng.random_range(1..size)) % size;
                rows.swap(i, j);
            }
            _ => {
                let i = rng.random_range(0..size);
                let j = (i + rng.random_range(1..size)) % size;
                let c = random_small_element(backend, rng);
                if c.is_zero() {
                    continue;
                }
                let src = rows[j].clone();
                for (dst, s) in rows[i].iter_mut().zip(&src) {
                    *dst = &*dst + &(&c * s);
                }
            }
        }
    }
    DvrMatrix::from_rows(backend, rows)
}

fn ensure_unimodular(m: &DvrMatrix, name: &str) -> Result<()> {
    let det = determinant(m)?;
    if det.is_unit() {
        Ok(())
    } else {
        Err(Error::NotUnimodular(format!(
            "{name} has determinant {det} of valuation {}",
            det.valuation()
        )))
    }
}

/// `U · a · V` for `U ∈ GL_rows(O)` and `V ∈ GL_cols(O)`.
pub fn gl_act(a: &DvrMatrix, u: &DvrMatrix, v: &DvrMatrix) -> Result<DvrMatrix> {
    if !u.is_square() || u.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "left factor is {}x{}, point has {} rows",
            u.rows(),
            u.cols(),
            a.rows()
        )));
    }
    if !v.is_square() || v.rows() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "right factor is {}x{}, point has {} columns",
            v.rows(),
            v.cols(),
            a.cols()
        )));
    }
    ensure_unimodular(u, "left factor")?;
    ensure_unimodular(v, "right factor")?;
    u.mul(a)?.mul(v)
}
