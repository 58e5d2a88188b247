//! The fixed verification suite: every checkable lemma over a grid of
//! normalized points plus random GL-translates, with per-lemma counts.

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::congruence::{analyze_point, crosscheck_ikm, invariance_probe};
use crate::detmodel::{
    derivative_pattern_check, initial_monomial_check, normalized_point, sample_variety_point,
    triangular_submatrix_check, window_initial_supports_disjoint, NormalizedPointSpec, ProblemShape,
};
use crate::dvr::Backend;
use crate::error::{Error, Result};
use crate::linalg::rng_from_seed;

/// Window supports are cheap enough to check on this grid in every run.
const SUPPORT_MAX_M: usize = 5;
const SUPPORT_MAX_N: usize = 9;

/// Suite bounds. Shapes range over `2 ≤ m ≤ max_m`, `m ≤ n ≤ max_n`, and
/// profiles over nondecreasing exponents in `0..=max_exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub backends: Vec<Backend>,
    pub max_m: usize,
    pub max_n: usize,
    pub max_exponent: u64,
    /// Random translates per backend.
    pub samples: usize,
    /// GL trials per sampled point in the invariance probe.
    pub trials: usize,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn full(backends: Vec<Backend>, seed: u64) -> Self {
        SuiteConfig {
            backends,
            max_m: 4,
            max_n: 7,
            max_exponent: 6,
            samples: 40,
            trials: 10,
            seed,
        }
    }

    pub fn quick(backends: Vec<Backend>, seed: u64) -> Self {
        SuiteConfig {
            max_m: 3,
            max_n: 5,
            samples: 12,
            trials: 5,
            ..Self::full(backends, seed)
        }
    }

    pub fn shapes(&self) -> Vec<ProblemShape> {
        (2..=self.max_m)
            .flat_map(|m| (m..=self.max_n).filter_map(move |n| ProblemShape::new(m, n).ok()))
            .collect()
    }

    /// Every normalized point spec in the grid, shape-major.
    pub fn grid(&self) -> Vec<NormalizedPointSpec> {
        self.shapes()
            .into_iter()
            .flat_map(|shape| {
                (0..=self.max_exponent)
                    .combinations_with_replacement(shape.t())
                    .map(move |e| NormalizedPointSpec::new(shape, e).expect("sorted profile"))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaOutcome {
    pub lemma: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Cases whose precondition does not hold (IKM at translates where `C`
    /// is not regular).
    pub skipped: usize,
    pub witnesses: Vec<String>,
}

impl LemmaOutcome {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn collect(lemma: &'static str, results: Vec<Outcome>) -> Self {
        let mut out = LemmaOutcome {
            lemma,
            passed: 0,
            failed: 0,
            skipped: 0,
            witnesses: Vec::new(),
        };
        for r in results {
            match r {
                Outcome::Pass => out.passed += 1,
                Outcome::Skip => out.skipped += 1,
                Outcome::Fail(w) => {
                    out.failed += 1;
                    out.witnesses.push(w);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub lemmas: Vec<LemmaOutcome>,
}

impl SuiteSummary {
    pub fn all_pass(&self) -> bool {
        self.lemmas.iter().all(LemmaOutcome::ok)
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

impl Outcome {
    fn from_check(ok: Result<bool>, label: impl FnOnce() -> String) -> Self {
        match ok {
            Ok(true) => Outcome::Pass,
            Ok(false) => Outcome::Fail(label()),
            Err(e) => Outcome::Fail(format!("{}: {e}", label())),
        }
    }
}

fn spec_label(spec: &NormalizedPointSpec, backend: Backend) -> String {
    let s = spec.shape();
    format!("{backend} m={} n={} exponents={:?}", s.m(), s.n(), spec.exponents())
}

struct Sample {
    backend: Backend,
    spec: NormalizedPointSpec,
    seed: u64,
}

impl Sample {
    fn label(&self) -> String {
        format!("{} seed={}", spec_label(&self.spec, self.backend), self.seed)
    }
}

fn draw_samples(cfg: &SuiteConfig) -> Vec<Sample> {
    let shapes = cfg.shapes();
    let mut rng = rng_from_seed(cfg.seed);
    let mut out = Vec::new();
    for &backend in &cfg.backends {
        for _ in 0..cfg.samples {
            let shape = shapes[rng.random_range(0..shapes.len())];
            let mut e: Vec<u64> = (0..shape.t()).map(|_| rng.random_range(0..=cfg.max_exponent)).collect();
            e.sort_unstable();
            out.push(Sample {
                backend,
                spec: NormalizedPointSpec::new(shape, e).expect("sorted profile"),
                seed: rng.random(),
            });
        }
    }
    out
}

/// Runs the suite. Point analyses fan out over the rayon pool; results are
/// merged in input order, so the summary is deterministic in `cfg`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteSummary> {
    if cfg.max_m < 2 || cfg.max_n < cfg.max_m {
        return Err(Error::InvalidShape(format!(
            "suite needs 2 <= max_m <= max_n, got {} and {}",
            cfg.max_m, cfg.max_n
        )));
    }
    let mut lemmas = Vec::new();

    let sizes: Vec<Outcome> = (2..=6)
        .map(|size| Outcome::from_check(initial_monomial_check(size), || format!("size {size}")))
        .collect();
    lemmas.push(LemmaOutcome::collect("initial_monomial", sizes));

    let supports: Vec<Outcome> = (2..=SUPPORT_MAX_M)
        .flat_map(|m| (m..=SUPPORT_MAX_N).map(move |n| (m, n)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(m, n)| {
            Outcome::from_check(
                ProblemShape::new(m, n).and_then(window_initial_supports_disjoint),
                || format!("m={m} n={n}"),
            )
        })
        .collect();
    lemmas.push(LemmaOutcome::collect("window_supports_disjoint", supports));

    let grid: Vec<(NormalizedPointSpec, Backend)> = cfg
        .backends
        .iter()
        .flat_map(|&b| cfg.grid().into_iter().map(move |s| (s, b)))
        .collect();

    let derivative = grid
        .par_iter()
        .map(|(s, b)| Outcome::from_check(derivative_pattern_check(s, *b), || spec_label(s, *b)))
        .collect();
    lemmas.push(LemmaOutcome::collect("derivative_pattern", derivative));

    let triangular = grid
        .par_iter()
        .map(|(s, b)| Outcome::from_check(triangular_submatrix_check(s, *b).map(|c| c.passed), || spec_label(s, *b)))
        .collect();
    lemmas.push(LemmaOutcome::collect("triangular_submatrix", triangular));

    let ikm_grid = grid
        .par_iter()
        .map(|(s, b)| {
            let a = normalized_point(s, *b);
            Outcome::from_check(crosscheck_ikm(&a).map(|c| c.passed), || spec_label(s, *b))
        })
        .collect();
    lemmas.push(LemmaOutcome::collect("ikm_identity_normalized", ikm_grid));

    let samples = draw_samples(cfg);
    let points: Vec<_> = samples
        .par_iter()
        .map(|s| sample_variety_point(s.spec.shape(), s.backend, Some(s.spec.exponents()), s.seed))
        .collect();

    let reports = samples
        .par_iter()
        .zip(&points)
        .map(|(s, a)| {
            let ok = a.as_ref().map_err(Clone::clone).and_then(analyze_point).map(|r| r.all_checks_pass());
            Outcome::from_check(ok, || s.label())
        })
        .collect();
    lemmas.push(LemmaOutcome::collect("report_checks", reports));

    let ikm_translates = samples
        .par_iter()
        .zip(&points)
        .map(|(s, a)| match a.as_ref().map_err(Clone::clone).and_then(crosscheck_ikm) {
            Ok(c) if c.passed => Outcome::Pass,
            Ok(c) => Outcome::Fail(format!(
                "{}: phi_C {} - colength {} != psi {}",
                s.label(),
                c.phi_c_length,
                c.conductor_colength,
                c.psi_length
            )),
            Err(Error::PreconditionViolated(_)) => Outcome::Skip,
            Err(e) => Outcome::Fail(format!("{}: {e}", s.label())),
        })
        .collect();
    lemmas.push(LemmaOutcome::collect("ikm_identity_translates", ikm_translates));

    let invariance = samples
        .par_iter()
        .zip(&points)
        .map(|(s, a)| {
            let ok = a
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|a| invariance_probe(a, cfg.trials, s.seed))
                .map(|p| p.passed);
            Outcome::from_check(ok, || s.label())
        })
        .collect();
    lemmas.push(LemmaOutcome::collect("gl_invariance", invariance));

    Ok(SuiteSummary { lemmas })
}
