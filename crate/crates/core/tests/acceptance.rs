//! Acceptance gate. Every criterion is exact; each prints one PASS/FAIL line
//! and the process exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use defectus_core::congruence::{analyze_point, crosscheck_ikm, invariance_probe};
use defectus_core::detmodel::{
    derivative_pattern_check, initial_monomial_check, jacobian_windows_at_point, lex_initial_monomial,
    normalized_point, sample_variety_point, triangular_submatrix_check, window_initial_supports_disjoint,
    NormalizedPointSpec, ProblemShape,
};
use defectus_core::linalg::{determinant, minor_ideal_valuation, random_small_element, random_unit, smith_form};
use defectus_core::{Backend, DvrMatrix, DvrScalar, Valuation};

const SHAPES: [(usize, usize); 6] = [(2, 3), (2, 5), (3, 4), (3, 6), (4, 5), (4, 7)];
const MAX_GRID_EXPONENT: u64 = 4;

type Check = Result<String, String>;

fn backends() -> [Backend; 3] {
    [
        Backend::int_local(2).unwrap(),
        Backend::int_local(5).unwrap(),
        Backend::poly_local(3).unwrap(),
    ]
}

fn grid() -> Vec<(NormalizedPointSpec, Backend)> {
    let mut out = Vec::new();
    for b in backends() {
        for (m, n) in SHAPES {
            let shape = ProblemShape::new(m, n).unwrap();
            for e in (0..=MAX_GRID_EXPONENT).combinations_with_replacement(m - 1) {
                out.push((NormalizedPointSpec::new(shape, e).unwrap(), b));
            }
        }
    }
    out
}

fn label(s: &NormalizedPointSpec, b: Backend) -> String {
    format!("{b} m={} n={} exponents={:?}", s.shape().m(), s.shape().n(), s.exponents())
}

/// Profile-sampled points cycling through shapes and backends, with their
/// profile sums.
fn sampled_points(count: usize, seed: u64) -> Vec<(DvrMatrix, u64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let (m, n) = SHAPES[i % SHAPES.len()];
            let b = backends()[(i / SHAPES.len()) % 3];
            let mut e: Vec<u64> = (0..m - 1).map(|_| rng.random_range(0..=MAX_GRID_EXPONENT)).collect();
            e.sort_unstable();
            let point_seed = rng.random();
            let a = sample_variety_point(ProblemShape::new(m, n).unwrap(), b, Some(&e), point_seed).unwrap();
            (a, e.iter().sum(), format!("{b} m={m} n={n} exponents={e:?} seed={point_seed}"))
        })
        .collect()
}

fn fail_with(witnesses: Vec<String>) -> Check {
    Err(format!("{} mismatches; first: {}", witnesses.len(), witnesses[0]))
}

fn criterion_1() -> Check {
    let grid = grid();
    let mut bad = Vec::new();
    for (s, b) in &grid {
        let total = s.delta_valuation();
        let (m, n) = (s.shape().m() as u64, s.shape().n() as u64);
        let r = analyze_point(&normalized_point(s, *b)).map_err(|e| format!("{}: {e}", label(s, *b)))?;
        if r.psi_length != Valuation::Finite(total) || r.delta != Some(((n - m) * total) as i64) {
            bad.push(format!("{}: psi={} delta={:?}", label(s, *b), r.psi_length, r.delta));
        }
    }
    if bad.is_empty() {
        Ok(format!("{} normalized points", grid.len()))
    } else {
        fail_with(bad)
    }
}

fn criteria_2_and_3() -> (Check, Check) {
    let points = sampled_points(500, 0x5eed);
    let (mut bad_w, mut bad_phi) = (Vec::new(), Vec::new());
    for (a, total, what) in &points {
        let r = match analyze_point(a) {
            Ok(r) => r,
            Err(e) => {
                bad_w.push(format!("{what}: {e}"));
                continue;
            }
        };
        if r.w != r.w_alt || r.w != Valuation::Finite(*total) {
            bad_w.push(format!("{what}: w={} w_alt={} profile sum={total}", r.w, r.w_alt));
        }
        let heights = (r.shape.n() - r.shape.t()) as u64;
        if r.phi_a_length != r.w.times(heights) {
            bad_phi.push(format!("{what}: phi_A={} (n-t)w={}\n{a}", r.phi_a_length, r.w.times(heights)));
        }
    }
    let outcome = |bad: Vec<String>| {
        if bad.is_empty() {
            Ok(format!("{} sampled points", points.len()))
        } else {
            fail_with(bad)
        }
    };
    (outcome(bad_w), outcome(bad_phi))
}

fn criterion_4() -> Check {
    let grid = grid();
    let mut bad = Vec::new();
    for (s, b) in &grid {
        let a = normalized_point(s, *b);
        let r = analyze_point(&a).map_err(|e| e.to_string())?;
        let ikm = crosscheck_ikm(&a).map_err(|e| format!("{}: {e}", label(s, *b)))?;
        let expected_colength = Valuation::Finite((s.shape().n() - s.shape().m()) as u64 * s.delta_valuation());
        let ok = r.regular_c
            && ikm.passed
            && ikm.conductor_colength.is_finite()
            && r.phi_c_length == Some(ikm.phi_c_length)
            && r.conductor_colength == expected_colength
            && r.checks.get("ikm_identity") == Some(&true);
        if !ok {
            bad.push(format!(
                "{}: phi_C={} colength={} psi={}",
                label(s, *b),
                ikm.phi_c_length,
                ikm.conductor_colength,
                ikm.psi_length
            ));
        }
    }
    if bad.is_empty() {
        Ok(format!("{} normalized points", grid.len()))
    } else {
        fail_with(bad)
    }
}

fn criterion_5() -> Check {
    let points = sampled_points(20, 0xc0ffee);
    let mut bad = Vec::new();
    for (i, (a, _, what)) in points.iter().enumerate() {
        let p = invariance_probe(a, 50, 1000 + i as u64).map_err(|e| format!("{what}: {e}"))?;
        if !p.passed || p.trials != 50 {
            bad.push(format!("{what}: trials {:?} changed (w, psi, delta)", p.mismatches));
        }
    }
    if bad.is_empty() {
        Ok(format!("{} points x 50 translates", points.len()))
    } else {
        fail_with(bad)
    }
}

fn criterion_6() -> Check {
    let grid = grid();
    let mut bad = Vec::new();
    for (s, b) in &grid {
        let derivative = derivative_pattern_check(s, *b).map_err(|e| e.to_string())?;
        let tri = triangular_submatrix_check(s, *b).map_err(|e| e.to_string())?;
        let heights = s.shape().window_count();
        let jac = jacobian_windows_at_point(&normalized_point(s, *b)).map_err(|e| e.to_string())?;
        let enumerated = minor_ideal_valuation(&jac, heights).map_err(|e| e.to_string())?;
        let expected = Valuation::Finite(heights as u64 * s.delta_valuation());
        if !(derivative && tri.passed && enumerated == expected && tri.determinant.valuation() == expected) {
            bad.push(format!(
                "{}: derivative={derivative} triangular={} minors={enumerated}",
                label(s, *b),
                tri.passed
            ));
        }
    }
    if bad.is_empty() {
        Ok(format!("{} normalized points", grid.len()))
    } else {
        fail_with(bad)
    }
}

/// Sign of a permutation by counting inversions.
fn sign(perm: &[usize]) -> bool {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    inversions % 2 == 0
}

fn leibniz_determinant(m: &DvrMatrix) -> DvrScalar {
    let n = m.rows();
    let mut acc = DvrScalar::zero(m.backend());
    for perm in (0..n).permutations(n) {
        let mut term = DvrScalar::one(m.backend());
        for (i, &j) in perm.iter().enumerate() {
            term = &term * m.get(i, j);
        }
        acc = if sign(&perm) { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Entries with denominators and uniformizer factors mixed in.
fn random_entry(b: Backend, rng: &mut ChaCha8Rng) -> DvrScalar {
    let mut x = random_small_element(b, rng);
    if rng.random_bool(0.3) {
        x = x.checked_div(&random_unit(b, rng)).unwrap();
    }
    if rng.random_bool(0.3) {
        x = &x * &DvrScalar::uniformizer_power(b, rng.random_range(1..=3));
    }
    x
}

fn random_matrix(b: Backend, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DvrMatrix {
    if rows > 1 && cols > 1 && rng.random_bool(0.3) {
        let inner = rng.random_range(1..rows.min(cols));
        let l = DvrMatrix::from_fn(b, rows, inner, |_, _| random_entry(b, rng)).unwrap();
        let r = DvrMatrix::from_fn(b, inner, cols, |_, _| random_entry(b, rng)).unwrap();
        return l.mul(&r).unwrap();
    }
    DvrMatrix::from_fn(b, rows, cols, |_, _| random_entry(b, rng)).unwrap()
}

/// `d` is `diag(ϖ^{e_1}, …)` padded with zeros.
fn is_smith_diagonal(d: &DvrMatrix, exponents: &[u64]) -> bool {
    (0..d.rows()).all(|i| {
        (0..d.cols()).all(|j| match exponents.get(i) {
            Some(&e) if i == j => *d.get(i, j) == DvrScalar::uniformizer_power(d.backend(), e),
            _ => d.get(i, j).is_zero(),
        })
    }) && exponents.windows(2).all(|w| w[0] <= w[1])
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let kernels = [Backend::int_local(3).unwrap(), Backend::poly_local(2).unwrap()];
    let mut bad = Vec::new();
    for i in 0..200 {
        let b = kernels[i % 2];
        let n = rng.random_range(1..=5);
        let m = random_matrix(b, n, n, &mut rng);
        let det = determinant(&m).map_err(|e| e.to_string())?;
        if det != leibniz_determinant(&m) {
            bad.push(format!("det mismatch on {b}\n{m}"));
        }
    }
    for i in 0..200 {
        let b = kernels[i % 2];
        let (rows, cols) = (rng.random_range(1..=6), rng.random_range(1..=8));
        let m = random_matrix(b, rows, cols, &mut rng);
        let s = smith_form(&m);
        let d = s.left.mul(&m).and_then(|lm| lm.mul(&s.right)).map_err(|e| e.to_string())?;
        let unimodular = determinant(&s.left).map(|x| x.is_unit()).unwrap_or(false)
            && determinant(&s.right).map(|x| x.is_unit()).unwrap_or(false);
        if !(unimodular && is_smith_diagonal(&d, &s.exponents)) {
            bad.push(format!("Smith reconstruction on {b}\n{m}"));
        }
        for k in 1..=rows.min(cols) {
            let expected = if k <= s.rank {
                Valuation::Finite(s.exponents[..k].iter().sum())
            } else {
                Valuation::Infinite
            };
            if minor_ideal_valuation(&m, k).map_err(|e| e.to_string())? != expected {
                bad.push(format!("I_{k} valuation vs exponents {:?} on {b}\n{m}", s.exponents));
            }
        }
    }
    if bad.is_empty() {
        Ok("200 determinants, 200 Smith forms".into())
    } else {
        fail_with(bad)
    }
}

fn criterion_8() -> Check {
    for size in 2..=6 {
        if !initial_monomial_check(size).map_err(|e| e.to_string())? {
            return Err(format!("size {size}: diagonal is not the unique initial monomial"));
        }
    }
    let mut shapes = 0;
    for m in 2..=5 {
        for n in m..=9 {
            let shape = ProblemShape::new(m, n).unwrap();
            if !window_initial_supports_disjoint(shape).map_err(|e| e.to_string())? {
                return Err(format!("m={m} n={n}: window supports overlap"));
            }
            // the initial term of f_k is the diagonal of columns k..k+t
            for k in 0..shape.window_count() {
                let cols: Vec<usize> = (k..k + m).collect();
                let (support, _) = lex_initial_monomial(n, &cols).map_err(|e| e.to_string())?;
                let diagonal: Vec<usize> = (0..m).map(|i| i * n + k + i).collect();
                if support != diagonal {
                    return Err(format!("m={m} n={n} window {}: support {support:?}", k + 1));
                }
            }
            shapes += 1;
        }
    }
    Ok(format!("sizes 2..=6, {shapes} window shapes"))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: &str, name: &str, started: Instant, outcome: Check| {
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{id}] {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{id}] {name}: {detail} ({secs:.1}s)");
            }
        }
    };

    let t = Instant::now();
    report("1", "psi and delta formulas on the normalized grid", t, criterion_1());
    let t = Instant::now();
    let (c2, c3) = criteria_2_and_3();
    report("2", "w by minors equals w by cokernel torsion", t, c2);
    report("3", "phi_A length equals (n-t)w", t, c3);
    let t = Instant::now();
    report("4", "IKM identity and conductor colength", t, criterion_4());
    let t = Instant::now();
    report("5", "GL invariance of (w, psi, delta)", t, criterion_5());
    let t = Instant::now();
    report("6", "derivative pattern and triangular block", t, criterion_6());
    let t = Instant::now();
    report("7", "determinant and Smith form oracles", t, criterion_7());
    let t = Instant::now();
    report("8", "initial monomials and window supports", t, criterion_8());

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
