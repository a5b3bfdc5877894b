//! Deterministic property suite over seeded random inputs. The report has
//! no timing or other run-dependent fields, so equal seeds give equal
//! reports.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cf::{cf_expand, period_cyclic_equal, period_of, slope_of_expanding_eigenvector};
use crate::classify2::{brute_force_conjugator, decide_gl2, decide_sl2, verify_witness};
use crate::error::Result;
use crate::intmat::IntMatrix;
use crate::samples;
use crate::sail2d::lls_matches_cf;
use crate::sail3::{decide_conjugacy3, invariant3, EigenCone3, VerdictKind, DEFAULT_MAX_RADIUS};

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub case: usize,
    /// Inputs of the failing case, as matrix literals.
    pub inputs: Vec<String>,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub cases: usize,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

/// Inputs of one case and its outcome: `Ok(None)` passes, `Ok(Some(msg))`
/// is a property failure.
struct Case {
    inputs: Vec<IntMatrix>,
    outcome: Result<Option<String>>,
}

type Check = fn(&mut ChaCha8Rng) -> Case;

fn case(inputs: &[&IntMatrix], f: impl FnOnce() -> Result<Option<String>>) -> Case {
    Case { inputs: inputs.iter().map(|m| (*m).clone()).collect(), outcome: f() }
}

fn period(a: &IntMatrix) -> Result<crate::cf::PeriodWord> {
    Ok(period_of(&cf_expand(&slope_of_expanding_eigenvector(a)?)?))
}

fn cf_conjugation(rng: &mut ChaCha8Rng) -> Case {
    let a = samples::hyperbolic2(rng, 10);
    let u = samples::unimodular(rng, 2, 4, true);
    case(&[&a, &u], || {
        let b = samples::conjugate(&a, &u);
        Ok((!period_cyclic_equal(&period(&a)?, &period(&b)?)).then(|| "periods of A and UAU⁻¹ differ".into()))
    })
}

fn lls_cf(rng: &mut ChaCha8Rng) -> Case {
    let a = samples::hyperbolic2(rng, 10);
    case(&[&a], || Ok(lls_matches_cf(&a)?.is_none().then(|| "LLS period differs from the CF period".into())))
}

fn pair2(rng: &mut ChaCha8Rng) -> (IntMatrix, IntMatrix) {
    use rand::Rng;
    loop {
        let a = samples::hyperbolic2(rng, 10);
        if rng.gen_bool(0.5) {
            let u = samples::unimodular(rng, 2, 3, true);
            let b = samples::conjugate(&a, &u);
            return (a, b);
        }
        if let Some(b) = samples::same_charpoly2(rng, &a, 10) {
            return (a, b);
        }
    }
}

const ORACLE_BOUND: u64 = 12;

fn gl2_oracle(rng: &mut ChaCha8Rng) -> Case {
    let (a, b) = pair2(rng);
    case(&[&a, &b], || {
        let v = decide_gl2(&a, &b)?;
        match &v.witness {
            Some(c) if !verify_witness(&a, &b, c) => return Ok(Some(format!("witness {c} fails AC = CB"))),
            None if v.conjugate => return Ok(Some("conjugate verdict without witness".into())),
            _ => {}
        }
        let o = brute_force_conjugator(&a, &b, ORACLE_BOUND, false)?;
        Ok((o.witness.is_some() && !v.conjugate).then(|| "oracle found a witness for a not-conjugate verdict".into()))
    })
}

fn sl2_oracle(rng: &mut ChaCha8Rng) -> Case {
    let (a, b) = pair2(rng);
    case(&[&a, &b], || {
        let v = decide_sl2(&a, &b)?;
        match &v.witness {
            Some(c) if !verify_witness(&a, &b, c) || c.det() != 1.into() => {
                return Ok(Some(format!("witness {c} is not an SL2 conjugator")))
            }
            None if v.conjugate => return Ok(Some("conjugate verdict without witness".into())),
            _ => {}
        }
        let o = brute_force_conjugator(&a, &b, ORACLE_BOUND, true)?;
        Ok((o.witness.is_some() && !v.conjugate).then(|| "oracle found an SL2 witness for a not-conjugate verdict".into()))
    })
}

fn orthant_partition(rng: &mut ChaCha8Rng) -> Case {
    use rand::Rng;
    let a = samples::companion3(-1, -3, 0);
    let v = [0; 3].map(|_| rng.gen_range(-40i64..=40));
    let p = IntMatrix::from_fn(1, 3, |_, j| v[j].into());
    case(&[&a, &p], || {
        if v == [0, 0, 0] {
            return Ok(None);
        }
        let mut hits = 0;
        for m in 0..8 {
            let o = [0, 1, 2].map(|b| if m >> b & 1 == 1 { -1 } else { 1 });
            if EigenCone3::new(&a, o)?.contains(&v) {
                hits += 1;
            }
        }
        Ok((hits != 1).then(|| format!("point lies in {hits} orthants")))
    })
}

fn sail3_conjugation(rng: &mut ChaCha8Rng) -> Case {
    use rand::Rng;
    let a = if rng.gen_bool(0.5) { samples::companion3(-1, -3, 0) } else { samples::companion3(-1, -1, 0) };
    let u = samples::unimodular(rng, 3, 2, true);
    case(&[&a, &u], || {
        let b = samples::conjugate(&a, &u);
        let ia = invariant3(&a, DEFAULT_MAX_RADIUS)?;
        let ib = invariant3(&b, DEFAULT_MAX_RADIUS)?;
        if ia.invariant != ib.invariant {
            return Ok(Some("Invariant3 differs between A and UAU⁻¹".into()));
        }
        let v = decide_conjugacy3(&a, &b, 50)?;
        Ok(match (&v.verdict, &v.witness) {
            (VerdictKind::Conjugate, Some(c)) if verify_witness(&a, &b, c) => None,
            _ => Some(format!("decision {:?} ({:?}) on a constructed conjugate", v.verdict, v.reason)),
        })
    })
}

/// Run every suite with `cases` cases (the 3-dimensional suite runs a
/// tenth as many, at least one). Each suite draws from its own stream
/// derived from `seed`.
pub fn run_selftest(seed: u64, cases: usize) -> SelftestReport {
    let suites: [(&'static str, Check, usize); 6] = [
        ("cf_conjugation_invariance", cf_conjugation, cases),
        ("lls_matches_cf", lls_cf, cases),
        ("gl2_matches_oracle", gl2_oracle, cases),
        ("sl2_matches_oracle", sl2_oracle, cases),
        ("orthant_partition", orthant_partition, cases),
        ("invariant3_conjugation", sail3_conjugation, cases.div_ceil(10).max(1)),
    ];
    let mut reports = Vec::new();
    for (k, (name, check, n)) in suites.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k as u64));
        let mut passed = 0;
        let mut failures = Vec::new();
        for case in 0..n {
            let c = check(&mut rng);
            let message = match c.outcome {
                Ok(None) => {
                    passed += 1;
                    continue;
                }
                Ok(Some(m)) => m,
                Err(e) => format!("error: {e}"),
            };
            failures.push(Failure { case, inputs: c.inputs.iter().map(|m| m.to_string()).collect(), message });
        }
        reports.push(SuiteReport { name, cases: n, passed, failures });
    }
    SelftestReport { seed, cases, passed: reports.iter().all(|r| r.failures.is_empty()), suites: reports }
}
