use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn hkr(args: &[&str]) -> Output {
    hkr_env(args, &[])
}

fn hkr_env(args: &[&str], env: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hkr"));
    cmd.args(args).env_remove("HKR_DATA");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("hkr runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/output-schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(v: &Value) {
    let s = schema();
    let errors: Vec<String> = s.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?} in {v}");
}

fn bundled_text() -> String {
    let o = hkr(&["export-data"]);
    assert_eq!(code(&o), 0);
    stdout(&o)
}

/// Writes the bundled dataset with one line of `family`'s block replaced.
fn corrupted(dir: &Path, family: &str, from: &str, to: &str) -> PathBuf {
    let text = bundled_text();
    let start = text.find(&format!("family {family}\n")).expect("family block");
    let offset = text[start..].find(from).expect("line in block");
    let mut out = text.clone();
    out.replace_range(start + offset..start + offset + from.len(), to);
    let path = dir.join("corrupt.dat");
    std::fs::write(&path, out).unwrap();
    path
}

#[test]
fn compute_prints_the_layout() {
    let o = hkr(&["compute", "2-8"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "2-8 (toric engine, Determined)");
    let cells = |l: &str| l.split_whitespace().skip(1).map(str::to_string).collect::<Vec<_>>();
    assert!(lines[1].starts_with("HH^0:"));
    assert_eq!(cells(lines[1]), ["1"]);
    assert_eq!(cells(lines[2]), ["0", "0"]);
    assert_eq!(cells(lines[3]), ["0", "18", "3"]);
    assert_eq!(cells(lines[4]), ["0", "0", "1", "10"]);
    assert_eq!(cells(lines[5]), ["0", "1", "0"]);
    assert_eq!(cells(lines[6]), ["0", "0"]);
    assert_eq!(cells(lines[7]), ["0"]);
    assert_eq!(lines.len(), 8);
}

#[test]
fn json_output_matches_schema_and_layout() {
    let o = hkr(&["compute", "2-8", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid(&v);
    assert_eq!(v["family"], "2-8");
    assert_eq!(v["engine"], "toric");
    assert_eq!(v["determinacy"], "Determined");
    let p = &v["parallelogram"];
    let row: Vec<u64> = ["pv01", "pv11", "pv02", "pv12", "pv22", "pv03"].iter().map(|k| p[k].as_u64().unwrap()).collect();
    assert_eq!(row, [0, 18, 3, 1, 1, 10]);
    assert_eq!(v["chi_checks"], serde_json::json!([true, true, true]));
    assert!(v.get("trace").is_none());
    // Round trip through the serializer keeps the record unchanged.
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
}

#[test]
fn json_trace_is_included_on_request() {
    let o = hkr(&["compute", "2-17", "--json", "--trace"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid(&v);
    let trace = v["trace"].as_array().unwrap();
    assert!(trace.iter().any(|t| t["label"] == "H(X, E* (x) L) restricted" && t["value"] == "(9,0,0,0)"));
    let text = stdout(&hkr(&["compute", "2-8", "--trace"]));
    assert!(text.contains("H(F, wedge^1 E* (x) E* (x) L): (0,0,0,0,1)"), "{text}");
}

#[test]
fn underdetermined_family_exits_3_with_intervals() {
    let o = hkr(&["compute", "2-5", "--json"]);
    assert_eq!(code(&o), 3);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid(&v);
    assert_eq!(v["determinacy"], "Underdetermined");
    assert!(v["parallelogram"]["pv12"].is_array());
    let text = hkr(&["compute", "2-5"]);
    assert_eq!(code(&text), 3);
    assert!(stdout(&text).contains("[3,5]"), "{}", stdout(&text));
}

#[test]
fn missing_models_and_bad_ids() {
    let o = hkr(&["compute", "1-1", "--engine", "toric"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("no toric model"));
    assert_eq!(code(&hkr(&["compute", "3-4"])), 2);
    assert_eq!(code(&hkr(&["compute", "11-1"])), 1);
    assert_eq!(code(&hkr(&["compute", "banana"])), 1);
    assert_eq!(code(&hkr(&["compute", "1-17", "--engine", "homogeneous"])), 0);
}

#[test]
fn verify_all_passes_on_the_bundled_data() {
    let o = hkr(&["verify-all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    let summary = out.lines().last().unwrap();
    assert!(summary.starts_with("considered 105: PASS "), "{summary}");
    assert!(summary.contains("FAIL 0"), "{summary}");
    assert!(out.lines().any(|l| l.starts_with("2-5") && l.contains("UNDERDETERMINED")));
    assert!(out.lines().any(|l| l.starts_with("3-4") && l.contains("SKIPPED")));
}

#[test]
fn verify_all_detects_a_chi_preserving_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = corrupted(dir.path(), "2-8", "expected 0 18 3 1 1 10", "expected 0 18 4 2 1 10");
    let report = dir.path().join("report.json");
    let o = hkr(&["--data", path.to_str().unwrap(), "verify-all", "--report", report.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let fails: Vec<&str> = out.lines().filter(|l| !l.starts_with("considered") && l.contains(" FAIL")).collect();
    assert_eq!(fails.len(), 1, "{out}");
    assert!(fails[0].starts_with("2-8"));
    assert!(out.lines().last().unwrap().contains("FAIL 1"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["summary"]["fail"], 1);
    assert_eq!(r["summary"]["considered"], 105);
    let failing: Vec<&Value> = r["results"].as_array().unwrap().iter().filter(|x| x["status"] == "FAIL").collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["family"], "2-8");
}

#[test]
fn invalid_dataset_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = corrupted(dir.path(), "2-8", "expected 0 18 3 1 1 10", "expected 0 18 3 1 1 9");
    let o = hkr(&["--data", path.to_str().unwrap(), "verify-all"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("2-8"), "{}", stderr(&o));
}

#[test]
fn verify_all_restricted_to_one_rank() {
    let o = hkr(&["verify-all", "--only", "1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.lines().last().unwrap().starts_with("considered 17:"), "{out}");
    assert_eq!(out.lines().count(), 18);
}

#[test]
fn parallel_output_is_identical_to_serial() {
    let serial = hkr(&["verify-all", "--all-models"]);
    let parallel = hkr(&["verify-all", "--all-models", "--parallel", "4"]);
    assert_eq!(code(&serial), 0);
    assert_eq!(stdout(&serial), stdout(&parallel));
}

#[test]
fn bwb_command() {
    let o = hkr(&["bwb", "Gr(2,5)", "O(1)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "(10,0,0,0,0,0,0)");
    let o = hkr(&["bwb", "Gr(2,4)", "cotangent"]);
    assert_eq!(stdout(&o).trim(), "(0,1,0,0,0)");
    assert_eq!(code(&hkr(&["bwb", "Gr(5,2)", "O(1)"])), 1);
    assert_eq!(code(&hkr(&["bwb", "P(2)", "O(1"])), 1);
}

#[test]
fn toric_command() {
    let dir = tempfile::tempdir().unwrap();
    let fan = dir.path().join("p2.fan");
    std::fs::write(&fan, "dim 2\nray 1 0\nray 0 1\nray -1 -1\ncone 0 1\ncone 1 2\ncone 0 2\n").unwrap();
    let f = fan.to_str().unwrap();
    assert_eq!(stdout(&hkr(&["toric", f, "1,1,1"])).trim(), "(10,0,0)");
    assert_eq!(stdout(&hkr(&["toric", f, "-1,-1,-1"])).trim(), "(0,0,1)");
    assert_eq!(stdout(&hkr(&["toric", f, "0,0,0", "--cotangent"])).trim(), "(0,1,0)");
    let o = hkr(&["toric", f, "1,1"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("expected 3 coefficients"));
}

#[test]
fn data_source_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let bad = corrupted(dir.path(), "2-8", "expected 0 18 3 1 1 10", "expected 0 18 4 2 1 10");
    let good = dir.path().join("good.dat");
    std::fs::write(&good, bundled_text()).unwrap();
    let config = dir.path().join("hkr.toml");
    std::fs::write(&config, format!("data = {:?}\nparallel = 2\n", bad.to_str().unwrap())).unwrap();
    let args = |extra: &[&'static str]| -> Vec<String> {
        let mut v: Vec<String> = extra.iter().map(|s| s.to_string()).collect();
        v.extend(["verify-all", "--only", "2"].map(String::from));
        v
    };
    let run = |args: Vec<String>, env: &[(&str, &Path)]| {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        code(&hkr_env(&a, env))
    };
    // Environment variable alone.
    assert_eq!(run(args(&[]), &[("HKR_DATA", &bad)]), 1);
    // Config file beats the environment.
    let mut with_config = vec!["--config".to_string(), config.to_str().unwrap().to_string()];
    with_config.extend(args(&[]));
    assert_eq!(run(with_config.clone(), &[("HKR_DATA", &good)]), 1);
    // The flag beats both.
    let mut with_flag = vec!["--data".to_string(), good.to_str().unwrap().to_string()];
    with_flag.extend(with_config);
    assert_eq!(run(with_flag, &[("HKR_DATA", &bad)]), 0);
    // Unknown keys are rejected.
    let typo = dir.path().join("typo.toml");
    std::fs::write(&typo, "dta = \"x\"\n").unwrap();
    assert_eq!(code(&hkr(&["--config", typo.to_str().unwrap(), "coverage"])), 1);
}

#[test]
fn export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let text = bundled_text();
    let path = dir.path().join("copy.dat");
    std::fs::write(&path, &text).unwrap();
    let o = hkr(&["--data", path.to_str().unwrap(), "export-data"]);
    assert_eq!(stdout(&o), text);
}

#[test]
fn coverage_command() {
    let o = hkr(&["coverage"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("special models: 5"));
    assert!(out.contains("families with several models: 1-17 2-34 3-27 9-1"));
    assert!(out.contains("2-20: printed 3, stored 5"));
}
