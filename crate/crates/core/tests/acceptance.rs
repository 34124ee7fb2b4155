//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use parazoo::data::{cases_file, table_file};
use parazoo::harness::{self, RunConfig, SuiteResult};
use parazoo::mpchar::FormType;

struct Line {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn timed(f: impl FnOnce() -> SuiteResult) -> (SuiteResult, Duration) {
    let t = Instant::now();
    let s = f();
    (s, t.elapsed())
}

fn from_suite(id: usize, name: &'static str, s: &SuiteResult, extra: Vec<(bool, String)>) -> Line {
    let mut pass = s.pass;
    let mut detail = format!("{} checks", s.checked);
    if let Some(f) = s.failures.first() {
        detail.push_str(&format!("; first failure: {}", f));
    }
    for (ok, msg) in extra {
        pass &= ok;
        if !ok {
            detail.push_str(&format!("; {}", msg));
        }
    }
    Line { id, name, pass, detail }
}

fn metric_u64(s: &SuiteResult, key: &str) -> u64 {
    s.metrics.get(key).and_then(|v| v.as_u64()).unwrap_or(0)
}

fn main() -> ExitCode {
    let cfg = RunConfig::default();
    let cases = cases_file();
    let table = table_file();
    let mut lines = Vec::new();

    let s = harness::root_counts();
    lines.push(from_suite(1, "root counts", &s, vec![]));

    let (s, t) = timed(harness::grading_partition);
    let limit = Duration::from_secs(30);
    lines.push(from_suite(2, "E7/E8 grading partition and irreducibility", &s, vec![(t < limit, format!("limit {:?}", limit))]));
    lines[1].detail.push_str(&format!(", {:.2?}", t));

    let (s, t) = timed(|| harness::case_reproduction(&cases, &table));
    let limit = Duration::from_secs(10);
    let n = metric_u64(&s, "cases_verified");
    lines.push(from_suite(
        3,
        "15 weight-diagram cases",
        &s,
        vec![(t < limit, format!("limit {:?}", limit)), (n == 15, format!("{} cases verified", n))],
    ));
    lines[2].detail.push_str(&format!(", {:.2?}", t));

    let s = harness::table_check(&table);
    lines.push(from_suite(4, "59 Table entries with >= 2 non-reduced weights", &s, vec![]));

    let s = harness::penrose_suite(&cfg);
    lines.push(from_suite(5, "Penrose equations on 1000 random matrices", &s, vec![]));

    let s = harness::gl_characteristic_suite(&RunConfig { tolerance: 1e-10, ..cfg.clone() });
    lines.push(from_suite(6, "gl characteristic, blocks (2,3,2) and (1,4,2,1)", &s, vec![]));

    let s = harness::lemma_suite(&cfg, 4, 6, &[FormType::Symmetric, FormType::Skew], 100);
    lines.push(from_suite(7, "Lemma, 200 trials, U = C^4, W = C^6", &s, vec![(s.checked == 200, format!("{} trials", s.checked))]));

    let s = harness::spinor_suite(&cfg);
    lines.push(from_suite(8, "spinor identities", &s, vec![]));

    let s = harness::witt_suite(&cfg);
    lines.push(from_suite(9, "Witt invariants: exactly 5 pairs", &s, vec![]));

    let s = harness::deformation_suite(&cfg);
    let variants = s.metrics.get("variants").and_then(|v| v.as_object()).cloned().unwrap_or_default();
    let full = variants
        .values()
        .filter(|v| v["trials"].as_u64() == Some(100) && v["verified"].as_u64() == Some(100))
        .count();
    lines.push(from_suite(
        10,
        "deformation suites and explicit witnesses",
        &s,
        vec![(variants.len() == 17 && full == 17, format!("{} of {} suites fully verified", full, variants.len()))],
    ));

    let mut all = true;
    for l in &lines {
        all &= l.pass;
        println!("[{}] criterion {:>2}: {} ({})", if l.pass { "PASS" } else { "FAIL" }, l.id, l.name, l.detail);
    }
    println!("{}: {} of {} criteria", if all { "PASS" } else { "FAIL" }, lines.iter().filter(|l| l.pass).count(), lines.len());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
