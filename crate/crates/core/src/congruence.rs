//! Analysis of a single `O`-point `a` of `A = O[X]/I_m(X)`.
//!
//! For a regular point, the congruence module is `Ψ ≅ O/I_t(a)`, so its
//! length is `w = ν(I_t(a))`. The cotangent torsion `Φ_A` is read off the
//! Smith form of the evaluated Jacobian of all maximal minors, and
//! `δ = length Φ_A − length Ψ`. The window complete intersection
//! `C = O[X]/(f_1, …, f_{n-t})` gives an independent route to `length Ψ`:
//! `length Φ_C − length O/λ_C(c)` with conductor `c = Q_2 ⋯ Q_{n-t}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::detmodel::{
    conductor_colength, jacobian_all_minors_at_point, jacobian_windows_at_point, ProblemShape,
};
use crate::dvr::{Backend, Valuation};
use crate::error::{Error, Result};
use crate::linalg::{
    cokernel_torsion_length, gl_act, minor_ideal_valuation, random_unimodular_with, rank, rng_from_seed,
    smith_exponents, DvrMatrix,
};

pub mod check {
    pub const REGULARITY: &str = "regularity_consistent";
    pub const W_ALT: &str = "w_alt_equals_w";
    pub const JACOBIAN_RANK_A: &str = "jacobian_rank_A";
    pub const PHI_A: &str = "phi_A_equals_(n-t)w";
    pub const DELTA: &str = "delta_equals_(n-m)w";
    pub const CONDUCTOR_FINITE: &str = "conductor_finite";
    pub const IKM: &str = "ikm_identity";
}

/// A failed internal check, with the point that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub check: String,
    pub detail: String,
    pub lengths: BTreeMap<String, Valuation>,
    pub witness: DvrMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectReport {
    pub backend: Backend,
    pub shape: ProblemShape,
    pub on_variety: bool,
    pub rank: usize,
    #[serde(rename = "regular_A")]
    pub regular_a: bool,
    #[serde(rename = "regular_C")]
    pub regular_c: bool,
    pub w: Valuation,
    pub w_alt: Valuation,
    pub psi_length: Valuation,
    #[serde(rename = "phi_A_length")]
    pub phi_a_length: Valuation,
    #[serde(rename = "phi_C_length")]
    pub phi_c_length: Option<Valuation>,
    pub conductor_colength: Valuation,
    pub delta: Option<i64>,
    pub checks: BTreeMap<String, bool>,
    pub findings: Vec<Finding>,
}

impl DefectReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }

    pub fn checks_passed(&self) -> usize {
        self.checks.values().filter(|&&ok| ok).count()
    }
}

fn signed_difference(a: Valuation, b: Valuation) -> Option<i64> {
    Some(a.finite()? as i64 - b.finite()? as i64)
}

struct CheckLog<'a> {
    point: &'a DvrMatrix,
    checks: BTreeMap<String, bool>,
    findings: Vec<Finding>,
}

impl CheckLog<'_> {
    fn record(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String, lengths: &[(&str, Valuation)]) {
        self.checks.insert(name.to_string(), ok);
        if !ok {
            self.findings.push(Finding {
                check: name.to_string(),
                detail: detail(),
                lengths: lengths.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
                witness: self.point.clone(),
            });
        }
    }
}

/// Full analysis of the point `a ∈ O^{m×n}`.
///
/// Errors with [`Error::PointNotOnVariety`] when some maximal minor of `a`
/// is nonzero. Points of rank `< t` are reported with `regular_A = false`
/// and infinite lengths.
pub fn analyze_point(a: &DvrMatrix) -> Result<DefectReport> {
    let shape = ProblemShape::of(a)?;
    let (m, n, t) = (shape.m(), shape.n(), shape.t());
    if minor_ideal_valuation(a, m)? != Valuation::Infinite {
        return Err(Error::PointNotOnVariety);
    }
    let rank_a = rank(a);
    let regular_a = rank_a == t;
    let w = minor_ideal_valuation(a, t)?;
    let mut log = CheckLog {
        point: a,
        checks: BTreeMap::new(),
        findings: Vec::new(),
    };
    log.record(
        check::REGULARITY,
        regular_a == w.is_finite(),
        || format!("rank {rank_a} vs t = {t}, but w = {w}"),
        &[("w", w)],
    );

    if !regular_a {
        return Ok(DefectReport {
            backend: a.backend(),
            shape,
            on_variety: true,
            rank: rank_a,
            regular_a,
            regular_c: false,
            w: Valuation::Infinite,
            w_alt: Valuation::Infinite,
            psi_length: Valuation::Infinite,
            phi_a_length: Valuation::Infinite,
            phi_c_length: None,
            conductor_colength: Valuation::Infinite,
            delta: None,
            checks: log.checks,
            findings: log.findings,
        });
    }

    let w_alt = cokernel_torsion_length(a);
    log.record(
        check::W_ALT,
        w_alt == w,
        || "t-minor valuation and cokernel torsion length disagree".into(),
        &[("w", w), ("w_alt", w_alt)],
    );
    let psi_length = w;

    let heights = shape.window_count() as u64;
    let jac_a = smith_exponents(&jacobian_all_minors_at_point(a)?);
    let phi_a_length = Valuation::Finite(jac_a.iter().sum());
    log.record(
        check::JACOBIAN_RANK_A,
        jac_a.len() == shape.window_count(),
        || format!("Jacobian of maximal minors has rank {}, expected n - t = {}", jac_a.len(), heights),
        &[],
    );
    log.record(
        check::PHI_A,
        phi_a_length == w.times(heights),
        || format!("length Phi_A = {phi_a_length}, (n - t) w = {}", w.times(heights)),
        &[("phi_A_length", phi_a_length), ("w", w)],
    );
    let delta = signed_difference(phi_a_length, psi_length);
    let expected_delta = w.times((n - m) as u64);
    log.record(
        check::DELTA,
        delta.is_some() && delta.map(|d| d as u64) == expected_delta.finite() && delta >= Some(0),
        || format!("delta = {delta:?}, (n - m) w = {expected_delta}"),
        &[("phi_A_length", phi_a_length), ("psi_length", psi_length)],
    );

    let jac_c = smith_exponents(&jacobian_windows_at_point(a)?);
    let regular_c = jac_c.len() == shape.window_count();
    let colength = conductor_colength(a)?;
    let phi_c_length = regular_c.then(|| Valuation::Finite(jac_c.iter().sum()));
    if let Some(phi_c) = phi_c_length {
        log.record(
            check::CONDUCTOR_FINITE,
            colength.is_finite(),
            || "C is regular at the point but the conductor vanishes there".into(),
            &[("conductor_colength", colength)],
        );
        let lhs = signed_difference(phi_c, colength);
        log.record(
            check::IKM,
            lhs == psi_length.finite().map(|p| p as i64),
            || format!("length Phi_C - colength = {lhs:?}, length Psi = {psi_length}"),
            &[
                ("phi_C_length", phi_c),
                ("conductor_colength", colength),
                ("psi_length", psi_length),
            ],
        );
    }

    Ok(DefectReport {
        backend: a.backend(),
        shape,
        on_variety: true,
        rank: rank_a,
        regular_a,
        regular_c,
        w,
        w_alt,
        psi_length,
        phi_a_length,
        phi_c_length,
        conductor_colength: colength,
        delta,
        checks: log.checks,
        findings: log.findings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IkmCrosscheck {
    pub passed: bool,
    pub psi_length: Valuation,
    pub phi_c_length: Valuation,
    pub conductor_colength: Valuation,
}

/// Recomputes `length Ψ = length Φ_C − length O/λ_C(c)` from three
/// independent pieces: `w` by minor enumeration, `Φ_C` by the Smith form of
/// `λ(J)`, and the colength by window minors.
pub fn crosscheck_ikm(a: &DvrMatrix) -> Result<IkmCrosscheck> {
    let shape = ProblemShape::of(a)?;
    if minor_ideal_valuation(a, shape.m())? != Valuation::Infinite {
        return Err(Error::PointNotOnVariety);
    }
    if rank(a) != shape.t() {
        return Err(Error::PreconditionViolated("A is not regular at the point".into()));
    }
    let jac_c = smith_exponents(&jacobian_windows_at_point(a)?);
    if jac_c.len() != shape.window_count() {
        return Err(Error::PreconditionViolated("C is not regular at the point".into()));
    }
    let psi_length = minor_ideal_valuation(a, shape.t())?;
    let phi_c_length = Valuation::Finite(jac_c.iter().sum());
    let conductor_colength = conductor_colength(a)?;
    let passed = conductor_colength.is_finite()
        && signed_difference(phi_c_length, conductor_colength) == psi_length.finite().map(|p| p as i64);
    Ok(IkmCrosscheck {
        passed,
        psi_length,
        phi_c_length,
        conductor_colength,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceProbe {
    pub passed: bool,
    pub trials: usize,
    /// Trials whose `(w, psi, delta)` differed from the base point.
    pub mismatches: Vec<usize>,
}

/// Applies `trials` random `(U, V) ∈ GL_m(O) × GL_n(O)` and compares
/// `(w, length Ψ, δ)` with the base point.
pub fn invariance_probe(a: &DvrMatrix, trials: usize, seed: u64) -> Result<InvarianceProbe> {
    let base = analyze_point(a)?;
    if !base.regular_a {
        return Err(Error::PreconditionViolated("A is not regular at the point".into()));
    }
    let (m, n) = (a.rows(), a.cols());
    let mut rng = rng_from_seed(seed);
    let mut mismatches = Vec::new();
    for trial in 0..trials {
        let u = random_unimodular_with(a.backend(), m, 3 * m, &mut rng)?;
        let v = random_unimodular_with(a.backend(), n, 3 * n, &mut rng)?;
        let moved = analyze_point(&gl_act(a, &u, &v)?)?;
        if (moved.w, moved.psi_length, moved.delta) != (base.w, base.psi_length, base.delta) {
            mismatches.push(trial);
        }
    }
    Ok(InvarianceProbe {
        passed: mismatches.is_empty(),
        trials,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detmodel::{normalized_point, NormalizedPointSpec};
    use crate::dvr::DvrScalar;

    fn point(m: usize, n: usize, e: &[u64], b: Backend) -> DvrMatrix {
        normalized_point(
            &NormalizedPointSpec::new(ProblemShape::new(m, n).unwrap(), e.to_vec()).unwrap(),
            b,
        )
    }

    #[test]
    fn m2_point() {
        let b = Backend::int_local(5).unwrap();
        let r = analyze_point(&point(2, 4, &[1], b)).unwrap();
        assert_eq!(r.w, Valuation::Finite(1));
        assert_eq!(r.psi_length, Valuation::Finite(1));
        assert_eq!(r.phi_a_length, Valuation::Finite(3));
        assert_eq!(r.delta, Some(2));
        assert!(r.all_checks_pass(), "{:?}", r.checks);
        assert!(r.findings.is_empty());
    }

    #[test]
    fn m3_n4_point() {
        let b = Backend::int_local(2).unwrap();
        let r = analyze_point(&point(3, 4, &[1, 2], b)).unwrap();
        assert_eq!(r.w, Valuation::Finite(3));
        assert_eq!(r.psi_length, Valuation::Finite(3));
        assert_eq!(r.phi_a_length, Valuation::Finite(6));
        assert_eq!(r.phi_c_length, Some(Valuation::Finite(6)));
        assert_eq!(r.conductor_colength, Valuation::Finite(3));
        assert_eq!(r.delta, Some(3));
        assert!(r.regular_c);
        assert_eq!(r.checks.len(), 7);
        assert!(r.all_checks_pass());
    }

    #[test]
    fn unit_minor_point() {
        let b = Backend::poly_local(3).unwrap();
        let a = DvrMatrix::from_i64_rows(b, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0]]).unwrap();
        let r = analyze_point(&a).unwrap();
        assert_eq!((r.w, r.psi_length, r.delta), (Valuation::ZERO, Valuation::ZERO, Some(0)));
        assert!(r.all_checks_pass());
    }

    #[test]
    fn non_regular_point() {
        let b = Backend::int_local(5).unwrap();
        let a = DvrMatrix::from_i64_rows(b, &[[5, 10, 0, 5], [0, 0, 0, 0], [0, 0, 0, 0]]).unwrap();
        let r = analyze_point(&a).unwrap();
        assert!(!r.regular_a);
        assert_eq!(r.rank, 1);
        assert_eq!(r.w, Valuation::Infinite);
        assert_eq!(r.delta, None);
        assert!(r.all_checks_pass());
        assert!(matches!(crosscheck_ikm(&a), Err(Error::PreconditionViolated(_))));
        assert!(matches!(invariance_probe(&a, 1, 0), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn off_variety() {
        let b = Backend::int_local(5).unwrap();
        let a = DvrMatrix::identity(b, 2).unwrap();
        assert_eq!(analyze_point(&a), Err(Error::PointNotOnVariety));
        let bad_shape = DvrMatrix::zeros(b, 3, 2).unwrap();
        assert!(matches!(analyze_point(&bad_shape), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn hypersurface_edge() {
        // n = m: a single window, empty conductor product, delta = 0
        let b = Backend::int_local(3).unwrap();
        let r = analyze_point(&point(3, 3, &[2, 5], b)).unwrap();
        assert_eq!(r.w, Valuation::Finite(7));
        assert_eq!(r.conductor_colength, Valuation::ZERO);
        assert_eq!(r.phi_c_length, Some(Valuation::Finite(7)));
        assert_eq!(r.delta, Some(0));
        assert!(r.all_checks_pass());
    }

    #[test]
    fn ikm_crosscheck() {
        let b = Backend::int_local(5).unwrap();
        let c = crosscheck_ikm(&point(3, 5, &[1, 2], b)).unwrap();
        assert!(c.passed);
        assert_eq!(
            (c.psi_length, c.phi_c_length, c.conductor_colength),
            (Valuation::Finite(3), Valuation::Finite(9), Valuation::Finite(6))
        );
        let z = crosscheck_ikm(&point(4, 6, &[0, 0, 0], b)).unwrap();
        assert!(z.passed);
        assert_eq!((z.psi_length, z.phi_c_length, z.conductor_colength), (Valuation::ZERO, Valuation::ZERO, Valuation::ZERO));
    }

    #[test]
    fn invariance() {
        let b = Backend::int_local(5).unwrap();
        let a = point(2, 5, &[3], b);
        assert!(invariance_probe(&a, 0, 1).unwrap().passed);
        let p = invariance_probe(&a, 10, 1).unwrap();
        assert!(p.passed, "{:?}", p.mismatches);
    }

    #[test]
    fn report_json() {
        let b = Backend::int_local(5).unwrap();
        let r = analyze_point(&point(2, 3, &[1], b)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["regular_A"], true);
        assert_eq!(v["phi_A_length"], 2);
        assert_eq!(v["shape"], serde_json::json!({"m": 2, "n": 3, "t": 1}));
        let back: DefectReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);

        let rank_deficient = DvrMatrix::from_rows(
            b,
            vec![
                vec![DvrScalar::zero(b); 3],
                vec![DvrScalar::zero(b); 3],
                vec![DvrScalar::one(b), DvrScalar::zero(b), DvrScalar::zero(b)],
            ],
        )
        .unwrap();
        let r = analyze_point(&rank_deficient).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["w"], "inf");
        assert_eq!(v["delta"], serde_json::Value::Null);
    }
}
