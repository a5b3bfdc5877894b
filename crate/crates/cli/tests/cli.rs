use std::process::{Command, Output};

use serde_json::Value;

fn sailkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sailkit")).args(args).output().expect("binary runs")
}

fn run(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--no-timing", "--quiet"];
    full.extend_from_slice(args);
    let out = sailkit(&full);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (v, out.status.code().unwrap())
}

const KLEIN: &str = "[[0,0,1],[1,0,3],[0,1,0]]";
const KV: &str = "[[0,0,1],[1,0,1],[0,1,0]]";

#[test]
fn cf_golden_ratio() {
    let (v, code) = run(&["cf", "[[2,1],[1,1]]"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["report"]["period"], serde_json::json!([1]));
    assert_eq!(v["report"]["q"], 1);
    assert!(v.get("timing").is_none());

    let (v, _) = run(&["cf", "[[1,1],[1,0]]"]);
    assert_eq!(v["report"]["canonical_period"], serde_json::json!([1]));
}

#[test]
fn identity_is_a_domain_error() {
    let (v, code) = run(&["cf", "[[1,0],[0,1]]"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "domain");
    assert!(v["error"]["message"].as_str().unwrap().contains("hyperbolic"));
}

#[test]
fn parse_errors_exit_2() {
    let (v, code) = run(&["cf", "[[1,2],[3]]"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    let (_, code) = run(&["cf", "/nonexistent/matrix.txt"]);
    assert_eq!(code, 2);
}

#[test]
fn matrix_from_file_and_stdin() {
    let dir = std::env::temp_dir().join(format!("sailkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.txt");
    std::fs::write(&path, "2 1\n1 1\n").unwrap();
    let (v, code) = run(&["cf", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["q"], 1);

    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_sailkit"))
        .args(["--quiet", "--no-timing", "cf", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"[[2,1],[1,1]]").unwrap();
    let out = child.wait_with_output().unwrap();
    let w: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(w["report"], v["report"]);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn classify_two_by_two() {
    let (v, code) = run(&["classify", "[[2,1],[1,1]]", "[[2,1],[1,1]]"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["verdict"], "conjugate");
    assert_eq!(v["report"]["detail"]["witness"], serde_json::json!([[1, 0], [0, 1]]));

    let (v, _) = run(&["classify", "[[2,1],[1,1]]", "[[1,1],[1,0]]"]);
    assert_eq!(v["report"]["verdict"], "not_conjugate");
    assert_eq!(v["report"]["reason_chain"], serde_json::json!(["charpoly_differs"]));
}

#[test]
fn classify_sl_parity_obstruction() {
    // GL-conjugate, even period, and the det +1 oracle finds nothing
    let (a, b) = ("[[2,1],[3,2]]", "[[1,-1],[-2,3]]");
    let (v, code) = run(&["classify", a, b, "--group", "gl"]);
    assert_eq!((code, v["report"]["verdict"].as_str()), (0, Some("conjugate")));
    let (v, code) = run(&["classify", a, b, "--group", "sl"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["verdict"], "not_conjugate");
    assert_eq!(v["report"]["detail"]["reason"], "parity_obstruction");
    let (o, _) = run(&["oracle", a, b, "--det", "+1", "--bound", "10"]);
    assert!(o["report"]["result"]["witness"].is_null());
}

#[test]
fn classify_three_by_three() {
    let (v, code) = run(&["classify", KLEIN, "[[0,1,0],[0,0,1],[1,3,0]]"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["verdict"], "conjugate");
    assert_eq!(v["report"]["witness_verified"], true);

    let (v, code) = run(&["classify", KLEIN, KV]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["reason_chain"], serde_json::json!(["spectrum_class_differs"]));
}

#[test]
fn inconclusive_exits_3() {
    // equal factor-sail invariants, no witness in the search box; the
    // index forms (min |value| 2 vs 3) suggest the two are not conjugate
    let (a, b) = ("[[2,3,3],[-2,1,-2],[-3,1,-3]]", "[[2,1,2],[-3,-1,-3],[-2,2,-1]]");
    let (v, code) = run(&["classify", a, b, "--search-bound", "20"]);
    assert_eq!(code, 3);
    assert_eq!(v["report"]["verdict"], "inconclusive");
    assert_eq!(v["report"]["detail"]["invariant_a"], v["report"]["detail"]["invariant_b"]);
}

#[test]
fn dimension_gated_flags() {
    let (v, code) = run(&["classify", "[[2,1],[1,1]]", "[[2,1],[1,1]]", "--search-bound", "5"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    let (_, code) = run(&["sail", KLEIN, "--window", "4"]);
    assert_eq!(code, 2);
    let (_, code) = run(&["sail", "[[2,1],[1,1]]", "--radius", "4"]);
    assert_eq!(code, 2);
    let (_, code) = run(&["classify", KLEIN, "[[2,1],[1,1]]"]);
    assert_eq!(code, 2);
}

#[test]
fn sail_two_by_two_window() {
    let (v, code) = run(&["sail", "[[2,1],[1,1]]", "--window", "6"]);
    assert_eq!(code, 0);
    let chain = &v["report"]["chain"];
    assert_eq!(chain["vertices"].as_array().unwrap().len(), 6);
    assert!(chain["lls"].as_array().unwrap().iter().all(|x| x == 1));
}

#[test]
fn sail_klein_exports_obj() {
    let path = std::env::temp_dir().join(format!("sailkit-{}.obj", std::process::id()));
    let (v, code) = run(&["sail", KLEIN, "--radius", "30", "--export-obj", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let obj = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let nv = v["report"]["patch"]["vertices"].as_array().unwrap().len();
    let mut vs = 0;
    for line in obj.lines() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                vs += 1;
                assert_eq!(it.map(|t| t.parse::<i64>().unwrap()).count(), 3);
            }
            Some("f") => {
                let idx: Vec<usize> = it.map(|t| t.parse().unwrap()).collect();
                assert_eq!(idx.len(), 3);
                assert!(idx.iter().all(|&i| (1..=nv).contains(&i)));
            }
            _ => {}
        }
    }
    assert_eq!(vs, nv);
    assert!(v["report"]["fundamental_domain"]["faces"].as_array().is_some_and(|f| !f.is_empty()));
}

#[test]
fn sail_klein_voronoi_chain() {
    let (v, code) = run(&["sail", KV, "--component", "+"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["class"], "klein_voronoi");
    assert!(!v["report"]["chain"]["points"].as_array().unwrap().is_empty());
    let (_, code) = run(&["sail", KV, "--export-obj", "/tmp/never.obj"]);
    assert_eq!(code, 2);
}

#[test]
fn radius_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_sailkit"))
        .args(["--quiet", "sail", KLEIN, "--radius", "60"])
        .env("SAILKIT_MAX_RADIUS", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "radius_cap");
}

#[test]
fn oracle_examples() {
    let (v, code) = run(&["oracle", "[[2,1],[1,1]]", "[[2,1],[1,1]]", "--bound", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["result"]["witness"], serde_json::json!([[1, 0], [0, 1]]));

    let (v, _) = run(&["oracle", "[[2,1],[1,1]]", "[[1,1],[1,0]]", "--bound", "10"]);
    assert!(v["report"]["result"]["witness"].is_null());

    let (v, _) = run(&["oracle", "[[2,1],[3,2]]", "[[1,-1],[-2,3]]", "--bound", "5"]);
    assert!(v["report"]["result"]["witness"].is_array());
    assert_eq!(v["report"]["witness_verified"], true);
}

#[test]
fn summary_goes_to_stderr() {
    let out = sailkit(&["--no-timing", "cf", "[[2,1],[1,1]]"]);
    assert!(String::from_utf8(out.stderr).unwrap().contains("period length 1"));
    let out = sailkit(&["--quiet", "cf", "[[2,1],[1,1]]"]);
    assert!(out.stderr.is_empty());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["timing"]["elapsed_ms"].is_number());
}

#[test]
fn selftest_small_run_passes() {
    let (v, code) = run(&["selftest", "--seed", "7", "--cases", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["passed"], true);
    assert_eq!(v["report"]["suites"].as_array().unwrap().len(), 6);
}
