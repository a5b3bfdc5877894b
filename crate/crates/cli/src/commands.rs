use std::path::Path;

use serde_json::{json, Value};
use sailkit_core::cf::{cf_expand, period_of, slope_of_expanding_eigenvector};
use sailkit_core::classify2::{brute_force_conjugator, decide_gl2, decide_sl2, verify_witness, Reason2, Verdict2};
use sailkit_core::sail2d::{default_window, lls_period_detail, sail_vertices};
use sailkit_core::sail3::{
    classify_spectrum, decide_conjugacy3_with, dirichlet_generators, invariant3, kv_factor_sail, kv_fundamental_domain,
    klein_fundamental_domain, klein_sail_patch, Reason3, SpectrumClass, VerdictKind, DEFAULT_MAX_RADIUS,
};
use sailkit_core::selftest::run_selftest;
use sailkit_core::{Error, Result};

use crate::input::read_matrix;
use crate::{obj, DetArg, GroupArg, Outcome};

fn to_json<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("core types serialize")
}

/// `SAILKIT_MAX_RADIUS`, default 200.
pub fn max_radius() -> Result<u64> {
    match std::env::var("SAILKIT_MAX_RADIUS") {
        Ok(s) => s.trim().parse().map_err(|_| Error::Parse(format!("SAILKIT_MAX_RADIUS={s:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_MAX_RADIUS),
    }
}

fn check_radius(radius: u64) -> Result<u64> {
    let cap = max_radius()?;
    if radius > cap {
        return Err(Error::RadiusCap { radius, cap });
    }
    Ok(radius)
}

fn dim_gate(flag: &str, given: bool, n: usize, wanted: usize) -> Result<()> {
    if given && n != wanted {
        return Err(Error::Parse(format!("--{flag} applies to {wanted}x{wanted} input, got {n}x{n}")));
    }
    Ok(())
}

fn ok(report: Value, summary: String) -> Result<Outcome> {
    Ok(Outcome { report, summary, exit: 0 })
}

pub fn cf(arg: &str) -> Result<Outcome> {
    let a = read_matrix(arg)?;
    if a.nrows() != 2 {
        return Err(Error::DimensionMismatch(format!("cf expects a 2x2 matrix, got {}x{}", a.nrows(), a.ncols())));
    }
    let omega = slope_of_expanding_eigenvector(&a)?;
    let e = cf_expand(&omega)?;
    let period = period_of(&e);
    let report = json!({
        "matrix": to_json(&a),
        "omega": { "surd": to_json(&omega), "text": omega.to_string() },
        "expansion": to_json(&e),
        "preperiod": to_json(&e).get("preperiod").cloned(),
        "period": to_json(&e).get("period").cloned(),
        "canonical_period": to_json(&period),
        "q": e.period.len(),
    });
    let summary = format!("omega = {omega} = {e}, period length {}", e.period.len());
    ok(report, summary)
}

fn reason_chain2(v: &Verdict2) -> Vec<&'static str> {
    let mut chain = vec![];
    if v.reason == Reason2::CharpolyMismatch {
        chain.push("charpoly_differs");
        return chain;
    }
    chain.push("charpoly_equal");
    if v.reason == Reason2::PeriodMismatch {
        chain.push("period_differs");
        return chain;
    }
    chain.push("period_equal");
    if v.parity.is_some() {
        chain.push(if v.reason == Reason2::ParityObstruction { "parity_obstruction" } else { "parity_ok" });
    }
    if v.witness.is_some() {
        chain.push("witness_verified");
    }
    chain
}

pub fn classify(a: &str, b: &str, group: GroupArg, search_bound: Option<u64>, radius: Option<u64>) -> Result<Outcome> {
    let a = read_matrix(a)?;
    let b = read_matrix(b)?;
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(format!("A is {}x{}, B is {}x{}", a.nrows(), a.ncols(), b.nrows(), b.ncols())));
    }
    let n = a.nrows();
    dim_gate("search-bound", search_bound.is_some(), n, 3)?;
    dim_gate("radius", radius.is_some(), n, 3)?;
    match n {
        2 => {
            let v = match group {
                GroupArg::Gl => decide_gl2(&a, &b)?,
                GroupArg::Sl => decide_sl2(&a, &b)?,
            };
            if v.conjugate && !v.witness.as_ref().is_some_and(|c| verify_witness(&a, &b, c)) {
                return Err(Error::Internal("conjugate verdict without a verified witness".into()));
            }
            let summary = match &v.witness {
                Some(c) => format!("conjugate over {:?}; witness C = {c} (AC = CB verified)", v.group),
                None => format!("not conjugate over {:?} ({:?})", v.group, v.reason),
            };
            let report = json!({
                "dimension": 2,
                "a": to_json(&a),
                "b": to_json(&b),
                "group": to_json(&v.group),
                "verdict": if v.conjugate { "conjugate" } else { "not_conjugate" },
                "reason_chain": reason_chain2(&v),
                "detail": to_json(&v),
                "witness_verified": v.witness.is_some(),
            });
            ok(report, summary)
        }
        3 => {
            let bound = search_bound.unwrap_or(50);
            let radius = check_radius(radius.unwrap_or(max_radius()?))?;
            let v = decide_conjugacy3_with(&a, &b, bound, radius)?;
            let verified = v.witness.as_ref().is_some_and(|c| verify_witness(&a, &b, c));
            if v.verdict == VerdictKind::Conjugate && !verified {
                return Err(Error::Internal("conjugate verdict without a verified witness".into()));
            }
            let mut chain = vec![];
            if v.reason == Reason3::ClassMismatch {
                chain.push("spectrum_class_differs");
            } else {
                chain.push("spectrum_class_equal");
                if v.reason == Reason3::NotSimilarOverQ {
                    chain.push("not_similar_over_q");
                } else {
                    chain.push("similar_over_q");
                    chain.push(match (v.reason, &v.invariant_error) {
                        (Reason3::InvariantMismatch, _) => "invariant_differs",
                        (_, Some(_)) => "invariant_unavailable",
                        _ => "invariant_equal",
                    });
                    if v.reason != Reason3::InvariantMismatch {
                        chain.push(if verified { "witness_verified" } else { "search_exhausted" });
                    }
                }
            }
            let (word, exit) = match v.verdict {
                VerdictKind::Conjugate => ("conjugate", 0),
                VerdictKind::NotConjugate => ("not_conjugate", 0),
                VerdictKind::Inconclusive => ("inconclusive", 3),
            };
            let summary = match &v.witness {
                Some(c) => format!("conjugate; witness C = {c} (AC = CB, det C = 1 verified)"),
                None => format!("{word} ({:?})", v.reason),
            };
            let report = json!({
                "dimension": 3,
                "a": to_json(&a),
                "b": to_json(&b),
                "group": match group { GroupArg::Gl => "gl", GroupArg::Sl => "sl" },
                "note": "for 3x3 matrices GL and SL conjugacy coincide (-I has determinant -1)",
                "verdict": word,
                "reason_chain": chain,
                "detail": to_json(&v),
                "witness_verified": verified,
                "search_bound": bound,
                "max_radius": radius,
            });
            Ok(Outcome { report, summary, exit })
        }
        _ => Err(Error::DimensionMismatch(format!("classify supports 2x2 and 3x3 matrices, got {n}x{n}"))),
    }
}

pub struct SailFlags<'a> {
    pub window: Option<usize>,
    pub radius: Option<u64>,
    pub orthant: Option<&'a str>,
    pub component: Option<&'a str>,
    pub export_obj: Option<&'a Path>,
}

fn parse_orthant(s: &str) -> Result<[i8; 3]> {
    let signs: Vec<i8> = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            _ => Err(Error::Parse(format!("orthant must be three signs like ++-, got {s:?}"))),
        })
        .collect::<Result<_>>()?;
    <[i8; 3]>::try_from(signs).map_err(|_| Error::Parse(format!("orthant must be three signs like ++-, got {s:?}")))
}

fn parse_component(s: &str) -> Result<i8> {
    match s.trim() {
        "+" | "+1" | "1" => Ok(1),
        "-" | "-1" => Ok(-1),
        _ => Err(Error::Parse(format!("component must be + or -, got {s:?}"))),
    }
}

fn soft<T: serde::Serialize>(r: Result<T>) -> Value {
    match r {
        Ok(t) => to_json(&t),
        Err(e) => json!({ "error": crate::error_report(&e) }),
    }
}

pub fn sail(arg: &str, flags: SailFlags) -> Result<Outcome> {
    let a = read_matrix(arg)?;
    let n = a.nrows();
    dim_gate("window", flags.window.is_some(), n, 2)?;
    dim_gate("radius", flags.radius.is_some(), n, 3)?;
    dim_gate("orthant", flags.orthant.is_some(), n, 3)?;
    dim_gate("component", flags.component.is_some(), n, 3)?;
    dim_gate("export-obj", flags.export_obj.is_some(), n, 3)?;
    match n {
        2 => {
            let window = match flags.window {
                Some(w) => w,
                None => default_window(&a)?,
            };
            let chain = sail_vertices(&a, window)?;
            let period = lls_period_detail(&a)?;
            let summary = format!("{} sail vertices, LLS period {}", chain.vertices.len(), period.word);
            ok(json!({ "dimension": 2, "matrix": to_json(&a), "window": window, "chain": to_json(&chain), "lls_period": to_json(&period) }), summary)
        }
        3 => {
            let class = classify_spectrum(&a)?;
            let cap = max_radius()?;
            let gens = dirichlet_generators(&a)?;
            let invariant = invariant3(&a, cap);
            let inv_summary = match &invariant {
                Ok(r) => format!("invariant from radius {}{}", r.radius, if r.stable { ", stable at twice the radius" } else { ", not confirmed at twice the radius" }),
                Err(e) => format!("invariant unavailable: {e}"),
            };
            match class {
                SpectrumClass::Klein => {
                    if flags.component.is_some() {
                        return Err(Error::Parse("--component applies to matrices with one real eigenvalue".into()));
                    }
                    let radius = check_radius(flags.radius.unwrap_or(30))?;
                    let orthant = parse_orthant(flags.orthant.unwrap_or("+++"))?;
                    let patch = klein_sail_patch(&a, orthant, radius)?;
                    if let Some(path) = flags.export_obj {
                        std::fs::write(path, obj::to_obj(&patch))
                            .map_err(|e| Error::Parse(format!("writing {}: {e}", path.display())))?;
                    }
                    let domain = klein_fundamental_domain(&patch, &gens);
                    let certified = patch.certified_faces().count();
                    let summary = format!(
                        "klein sail, orthant {orthant:?}, radius {radius}: {} vertices, {} faces ({certified} certified); {}; {inv_summary}",
                        patch.vertices.len(),
                        patch.faces.len(),
                        match &domain {
                            Ok(d) => format!("fundamental domain with {} faces", d.faces.len()),
                            Err(e) => format!("fundamental domain unavailable: {e}"),
                        }
                    );
                    let report = json!({
                        "dimension": 3,
                        "class": to_json(&class),
                        "matrix": to_json(&a),
                        "radius": radius,
                        "orthant": orthant,
                        "patch": to_json(&patch),
                        "certified_faces": certified,
                        "dirichlet": to_json(&gens),
                        "fundamental_domain": soft(domain),
                        "invariant": soft(invariant),
                        "obj": flags.export_obj.map(|p| p.display().to_string()),
                    });
                    ok(report, summary)
                }
                SpectrumClass::KleinVoronoi => {
                    if flags.orthant.is_some() || flags.export_obj.is_some() {
                        return Err(Error::Parse("--orthant and --export-obj apply to matrices with three real eigenvalues".into()));
                    }
                    let radius = check_radius(flags.radius.unwrap_or(20))?;
                    let component = parse_component(flags.component.unwrap_or("+"))?;
                    let chain = kv_factor_sail(&a, component, radius)?;
                    let domain = kv_fundamental_domain(&chain, &gens);
                    let summary = format!(
                        "factor-sail, component {component:+}, bound {radius}: {} chain points; {}; {inv_summary}",
                        chain.points.len(),
                        match &domain {
                            Ok(d) => format!("period of {} vertices", d.faces[0].vertex_count),
                            Err(e) => format!("period unavailable: {e}"),
                        }
                    );
                    let report = json!({
                        "dimension": 3,
                        "class": to_json(&class),
                        "matrix": to_json(&a),
                        "radius": radius,
                        "component": component,
                        "chain": to_json(&chain),
                        "dirichlet": to_json(&gens),
                        "fundamental_domain": soft(domain),
                        "invariant": soft(invariant),
                    });
                    ok(report, summary)
                }
            }
        }
        _ => Err(Error::DimensionMismatch(format!("sail supports 2x2 and 3x3 matrices, got {n}x{n}"))),
    }
}

pub fn oracle(a: &str, b: &str, bound: u64, det: DetArg) -> Result<Outcome> {
    let a = read_matrix(a)?;
    let b = read_matrix(b)?;
    let det_plus = matches!(det, DetArg::Plus);
    let r = brute_force_conjugator(&a, &b, bound, det_plus)?;
    let verified = r.witness.as_ref().map(|c| verify_witness(&a, &b, c) && (!det_plus || c.det() == 1.into()));
    if verified == Some(false) {
        return Err(Error::Internal("oracle witness failed verification".into()));
    }
    let summary = match &r.witness {
        Some(c) => format!("witness C = {c} (AC = CB verified); {} hits among {} intertwiner points", r.hits, r.examined),
        None => format!("no witness with entries in [-{bound}, {bound}] ({} intertwiner points scanned)", r.examined),
    };
    let report = json!({
        "a": to_json(&a),
        "b": to_json(&b),
        "bound": bound,
        "det": if det_plus { "+1" } else { "any" },
        "result": to_json(&r),
        "witness_verified": verified.unwrap_or(false),
    });
    ok(report, summary)
}

pub fn selftest(seed: u64, cases: usize) -> Outcome {
    let r = run_selftest(seed, cases);
    let mut summary = format!("selftest seed {seed}, {cases} cases: {}", if r.passed { "pass" } else { "FAIL" });
    for s in &r.suites {
        summary.push_str(&format!("\n  {:<28} {}/{}", s.name, s.passed, s.cases));
        for f in &s.failures {
            summary.push_str(&format!("\n    case {}: {} (inputs {})", f.case, f.message, f.inputs.join(" ")));
        }
    }
    Outcome { report: to_json(&r), exit: if r.passed { 0 } else { 1 }, summary }
}
