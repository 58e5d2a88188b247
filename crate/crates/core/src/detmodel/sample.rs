use rand::Rng;
use rayon::prelude::*;

use crate::dvr::Backend;
use crate::error::{Error, Result};
use crate::linalg::{random_small_element, random_unimodular_with, rank, rng_from_seed, DvrMatrix};

use super::{normalized_point, NormalizedPointSpec, ProblemShape};

const MAX_ATTEMPTS: usize = 64;

/// A point on the variety `I_m(a) = 0`, deterministic in `seed`.
///
/// Without a profile this is a random product `B · C` of `m × t` and
/// `t × n` factors, resampled until it has rank `t`. With a profile
/// `a_1 ≤ … ≤ a_t` it is `U · a_norm · V` for random unimodular `U`, `V`,
/// so its `t`-minor ideal has valuation `a_1 + … + a_t`.
pub fn sample_variety_point(
    shape: ProblemShape,
    backend: Backend,
    profile: Option<&[u64]>,
    seed: u64,
) -> Result<DvrMatrix> {
    let mut rng = rng_from_seed(seed);
    let (m, n, t) = (shape.m(), shape.n(), shape.t());
    if let Some(profile) = profile {
        let spec = NormalizedPointSpec::new(shape, profile.to_vec())?;
        let a = normalized_point(&spec, backend);
        let u = random_unimodular_with(backend, m, 3 * m, &mut rng)?;
        let v = random_unimodular_with(backend, n, 3 * n, &mut rng)?;
        return u.mul(&a)?.mul(&v);
    }
    for _ in 0..MAX_ATTEMPTS {
        let left = DvrMatrix::from_fn(backend, m, t, |_, _| random_small_element(backend, &mut rng))?;
        let right = DvrMatrix::from_fn(backend, t, n, |_, _| random_small_element(backend, &mut rng))?;
        let a = left.mul(&right)?;
        if rank(&a) == t {
            return Ok(a);
        }
    }
    Err(Error::SamplingExhausted(MAX_ATTEMPTS))
}

/// `count` points as by [`sample_variety_point`], with per-point seeds drawn
/// from one stream seeded by `seed`. Sampled in parallel; order is by index.
pub fn sample_batch(
    shape: ProblemShape,
    backend: Backend,
    profile: Option<&[u64]>,
    count: usize,
    seed: u64,
) -> Result<Vec<DvrMatrix>> {
    let mut rng = rng_from_seed(seed);
    let seeds: Vec<u64> = (0..count).map(|_| rng.random()).collect();
    seeds
        .into_par_iter()
        .map(|s| sample_variety_point(shape, backend, profile, s))
        .collect()
}
