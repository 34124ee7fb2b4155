use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parazoo")).args(args).env_remove("PARAZOO_DATA_DIR").output().unwrap()
}

fn run_with_data(dir: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parazoo")).args(args).env("PARAZOO_DATA_DIR", dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{}: {}", e, stdout(o)))
}

fn bundled(name: &str) -> String {
    std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)).unwrap()
}

fn data_dir(tag: &str, cases: &str, table: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("parazoo-cli-{}-{}", tag, std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("cases.txt"), cases).unwrap();
    std::fs::write(dir.join("table.txt"), table).unwrap();
    dir
}

#[test]
fn invalid_type_is_a_usage_error() {
    let o = run(&["grade", "E9/1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("E9"));
}

#[test]
fn grade_borel_and_json() {
    let o = run(&["grade", "G2/", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["components"].as_array().unwrap().len(), 6);
    assert_eq!(v["nonreduced"], 0);
    let o = run(&["grade", "E7/1,3,4,6,7", "--json"]);
    assert_eq!(json(&o)["nonreduced"], 2);
}

#[test]
fn classify_g2_three_records() {
    let o = run(&["classify", "G2", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 3);
    for r in recs {
        assert!(r.get("black").is_some() && r.get("nonreduced").is_some() && r.get("basic_lemma_weakly_ample").is_some());
    }
}

#[test]
fn diagram_with_twisting() {
    let o = run(&["diagram", "E7/1,3,4,6,7", "--twisting", "1=1,0", "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(v["arrows"].as_array().unwrap().len(), 2);
    let bad = run(&["diagram", "E7/1,3,4,6,7", "--twisting", "1=1,0,0"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_case_and_table() {
    let o = run(&["verify-case", "--case", "2A"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("[PASS] case 2A"));
    let o = run(&["verify-case", "--all", "--json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["cases"].as_array().unwrap().len(), 15);
    assert_eq!(run(&["verify-case", "--case", "9Z"]).status.code(), Some(2));
    let o = run(&["check-table", "--json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["report"]["entries"].as_array().unwrap().len(), 59);
}

#[test]
fn numeric_subcommands() {
    let o = run(&["mp-triple", "--blocks", "2,3,2", "--seed", "3"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["triples"].as_array().unwrap().len(), 3);
    let o = run(&["lemma", "--u", "4", "--w", "6", "--form", "skew", "--trials", "10"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["checked"], 10);
    let o = run(&["spinor", "--check", "m=4"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("[PASS]"));
    assert_eq!(run(&["lemma", "--form", "herm"]).status.code(), Some(2));
}

#[test]
fn deform_random_and_from_file() {
    let o = run(&["deform", "--variant", "6D", "--seed", "4"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["verified"], true);
    assert_eq!(v["witness"]["name"], "C");
    // same inputs read back from a file
    let dir = data_dir("deform", "", "");
    let file = dir.join("inputs.json");
    std::fs::write(&file, v["inputs"].to_string()).unwrap();
    let o2 = run(&["deform", "--variant", "6D", "--seed", "4", "--input", file.to_str().unwrap()]);
    assert!(o2.status.success());
    assert_eq!(json(&o2)["witness"], v["witness"]);
    // an ample A violates the hypotheses
    let ample = r#"{"A": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1],[0,0,0,0],[0,0,0,0]], "B": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0],[1,0,0,0]]}"#;
    std::fs::write(&file, ample).unwrap();
    let o3 = run(&["deform", "--variant", "6D", "--input", file.to_str().unwrap()]);
    assert_eq!(o3.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_all_is_deterministic() {
    let args = ["verify-all", "--seed", "7", "--output", "json", "--trials", "20"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["pass"], true);
    assert_eq!(v["case_verifications"], 15);
    assert_eq!(v["suites"].as_array().unwrap().len(), 10);
    for d in v["data"].as_array().unwrap() {
        assert_eq!(d["sha256"].as_str().unwrap().len(), 64);
    }
    assert_eq!(run(&["verify-all", "--tolerance", "-1"]).status.code(), Some(2));
}

#[test]
fn corrupted_case_file_fails_with_stanza() {
    let cases = bundled("cases.txt").replacen("arrow A 1 B\narrow B 1 a", "arrow A 1 a\narrow B 1 a", 1);
    let dir = data_dir("arrow", &cases, &bundled("table.txt"));
    let o = run_with_data(&dir, &["verify-all", "--trials", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("[FAIL]  3") && out.contains("case 2A"), "{}", out);
    let o = run_with_data(&dir, &["verify-case", "--case", "2A"]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn corrupted_cell_reports_file_and_line() {
    let cases = bundled("cases.txt");
    let line = cases.lines().position(|l| l.starts_with("weight B")).unwrap() + 1;
    let broken: Vec<String> = cases
        .lines()
        .enumerate()
        .map(|(i, l)| if i + 1 == line { "weight B = (1) x".to_string() } else { l.to_string() })
        .collect();
    let dir = data_dir("cell", &broken.join("\n"), &bundled("table.txt"));
    let o = run_with_data(&dir, &["verify-all", "--output", "json", "--trials", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["pass"], false);
    let suite3 = &v["suites"][2];
    assert_eq!(suite3["pass"], false);
    let msg = suite3["failures"][0].as_str().unwrap();
    assert!(msg.contains(&format!("cases.txt:{}", line)), "{}", msg);
    std::fs::remove_dir_all(&dir).ok();
}
