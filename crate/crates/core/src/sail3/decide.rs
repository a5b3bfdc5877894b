//! Conjugacy of 3×3 operators: rational similarity, the invariant filter,
//! then a bounded search for an integer witness.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::dirichlet::shell;
use super::domain::{invariant3, Invariant3};
use super::{classify_spectrum, SpectrumClass, DEFAULT_MAX_RADIUS};
use crate::classify2::verify_witness;
use crate::error::{Error, Result};
use crate::intmat::{integer_intertwiners, similar_over_q, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Conjugate,
    NotConjugate,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason3 {
    WitnessFound,
    ClassMismatch,
    NotSimilarOverQ,
    InvariantMismatch,
    /// Invariants agree (or could not be computed) and no witness was
    /// found within the search bound.
    SearchExhausted,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict3 {
    pub verdict: VerdictKind,
    pub reason: Reason3,
    /// `C` with `AC = CB`, `det C = 1`.
    pub witness: Option<IntMatrix>,
    pub class_a: SpectrumClass,
    pub class_b: SpectrumClass,
    pub invariant_a: Option<Invariant3>,
    pub invariant_b: Option<Invariant3>,
    /// Why an invariant is missing, if one is.
    pub invariant_error: Option<String>,
    pub search_bound: u64,
}

impl Verdict3 {
    fn new(kind: VerdictKind, reason: Reason3, ca: SpectrumClass, cb: SpectrumClass, bound: u64) -> Self {
        Verdict3 {
            verdict: kind,
            reason,
            witness: None,
            class_a: ca,
            class_b: cb,
            invariant_a: None,
            invariant_b: None,
            invariant_error: None,
            search_bound: bound,
        }
    }
}

fn small(m: &IntMatrix) -> Option<[[i128; 3]; 3]> {
    let mut out = [[0i128; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = m[(i, j)].to_i128().filter(|v| v.unsigned_abs() < 1 << 40)?;
        }
    }
    Some(out)
}

fn det3(m: &[[i128; 3]; 3]) -> Option<i128> {
    let t = |a: i128, b: i128| a.checked_mul(b);
    let c0 = t(m[1][1], m[2][2])?.checked_sub(t(m[1][2], m[2][1])?)?;
    let c1 = t(m[1][0], m[2][2])?.checked_sub(t(m[1][2], m[2][0])?)?;
    let c2 = t(m[1][0], m[2][1])?.checked_sub(t(m[1][1], m[2][0])?)?;
    t(m[0][0], c0)?.checked_sub(t(m[0][1], c1)?)?.checked_add(t(m[0][2], c2)?)
}

/// First unimodular integer intertwiner (`AC = CB`) whose coordinates in
/// the reduced lattice basis have max-norm at most `bound`, normalized to
/// determinant +1. `-I` is central of determinant -1, so conjugacy over
/// GL₃(ℤ) and SL₃(ℤ) coincide.
pub fn search_witness(a: &IntMatrix, b: &IntMatrix, bound: u64) -> Result<Option<IntMatrix>> {
    let basis = integer_intertwiners(a, b)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let dim = basis.len();
    let fast: Option<Vec<[[i128; 3]; 3]>> = if dim == 3 { basis.iter().map(small).collect() } else { None };
    for s in 1..=bound as i64 {
        for coef in shell(s, dim) {
            let unimodular = match &fast {
                Some(f) => {
                    let mut m = [[0i128; 3]; 3];
                    for i in 0..3 {
                        for j in 0..3 {
                            m[i][j] = (0..dim).map(|k| coef[k] as i128 * f[k][i][j]).sum();
                        }
                    }
                    det3(&m).map(|d| d == 1 || d == -1)
                }
                None => None,
            };
            if unimodular == Some(false) {
                continue;
            }
            let mut c = IntMatrix::zeros(a.nrows(), a.ncols());
            for (k, m) in basis.iter().enumerate() {
                c = &c + &m.scale(&BigInt::from(coef[k]));
            }
            if !c.is_unimodular() {
                continue;
            }
            if !c.det().is_one() {
                c = c.scale(&BigInt::from(-1));
            }
            if verify_witness(a, b, &c) {
                return Ok(Some(c));
            }
            return Err(Error::Internal(format!("intertwiner {c} fails verification")));
        }
    }
    Ok(None)
}

/// Decide conjugacy of `a` and `b` in SL₃(ℤ), with the invariants computed
/// up to enumeration radius `max_radius`.
pub fn decide_conjugacy3(a: &IntMatrix, b: &IntMatrix, search_bound: u64) -> Result<Verdict3> {
    decide_conjugacy3_with(a, b, search_bound, DEFAULT_MAX_RADIUS)
}

pub fn decide_conjugacy3_with(a: &IntMatrix, b: &IntMatrix, search_bound: u64, max_radius: u64) -> Result<Verdict3> {
    if search_bound == 0 {
        return Err(Error::Domain("search bound must be positive".into()));
    }
    let ca = classify_spectrum(a)?;
    let cb = classify_spectrum(b)?;
    if ca != cb {
        return Ok(Verdict3::new(VerdictKind::NotConjugate, Reason3::ClassMismatch, ca, cb, search_bound));
    }
    if !similar_over_q(a, b)? {
        return Ok(Verdict3::new(VerdictKind::NotConjugate, Reason3::NotSimilarOverQ, ca, cb, search_bound));
    }
    let mut verdict = Verdict3::new(VerdictKind::Inconclusive, Reason3::SearchExhausted, ca, cb, search_bound);
    match (invariant3(a, max_radius), invariant3(b, max_radius)) {
        (Ok(ia), Ok(ib)) => {
            let differ = ia.invariant != ib.invariant;
            let stable = ia.stable && ib.stable;
            verdict.invariant_a = Some(ia.invariant);
            verdict.invariant_b = Some(ib.invariant);
            // an unconfirmed domain may still be missing faces
            if differ && !stable {
                verdict.invariant_error = Some("invariant not stable under doubling the radius".into());
            } else if differ {
                verdict.verdict = VerdictKind::NotConjugate;
                verdict.reason = Reason3::InvariantMismatch;
                return Ok(verdict);
            }
        }
        (ra, rb) => {
            let err = ra.err().or(rb.err()).map(|e| e.to_string());
            verdict.invariant_error = err;
        }
    }
    if let Some(c) = search_witness(a, b, search_bound)? {
        verdict.verdict = VerdictKind::Conjugate;
        verdict.reason = Reason3::WitnessFound;
        verdict.witness = Some(c);
    }
    Ok(verdict)
}
