use std::collections::{BTreeMap, BTreeSet};

use parazoo::classify::parse_table;
use parazoo::data::{bundled_cases, bundled_table, DataFile};
use parazoo::grading::{Grading, Weight};
use parazoo::walkdiag::{arrow_head, build_weight_diagram, parse_cases, rubbish_weights, verify_case, CaseSpec, StepRule};
use parazoo::Error;

fn cases() -> Vec<CaseSpec> {
    parse_cases(&bundled_cases()).unwrap()
}

fn case(id: &str) -> CaseSpec {
    cases().into_iter().find(|c| c.id == id).unwrap()
}

fn grading_of(c: &CaseSpec) -> Grading {
    Grading::new(c.diagram().unwrap())
}

fn twisting_of(c: &CaseSpec) -> Vec<(String, Weight)> {
    c.twists.iter().map(|t| (t.name.clone(), t.white_coeffs())).collect()
}

fn names_of(c: &CaseSpec) -> BTreeMap<Weight, String> {
    c.weights.iter().map(|w| (w.white_coeffs(), w.name.clone())).collect()
}

/// Arrow test straight from the root list: some root restricting to `chi`
/// plus some root restricting to `mu` is a root.
fn oracle_arrow(g: &Grading, chi: &Weight, mu: &Weight) -> bool {
    let restrict = |r: &Vec<i32>| Weight(g.diagram.white.iter().map(|&i| r[i]).collect());
    let roots: BTreeSet<Vec<i32>> = g.rs().roots.iter().cloned().collect();
    let left: Vec<&Vec<i32>> = g.rs().roots.iter().filter(|r| restrict(r) == *chi).collect();
    let right: Vec<&Vec<i32>> = g.rs().roots.iter().filter(|r| restrict(r) == *mu).collect();
    left.iter().any(|a| right.iter().any(|b| roots.contains(&a.iter().zip(b.iter()).map(|(x, y)| x + y).collect::<Vec<i32>>())))
}

#[test]
fn fifteen_cases_parse() {
    let ids: Vec<String> = cases().iter().map(|c| c.id.clone()).collect();
    assert_eq!(ids, ["1A", "2A", "2B", "2C", "2D", "2E", "3", "4A", "4B", "4C", "5A", "5B", "5C", "5D", "5E"]);
}

#[test]
fn all_cases_verify() {
    let table = parse_table(&bundled_table()).unwrap();
    for c in cases() {
        let r = verify_case(&c, Some(&table)).unwrap();
        assert!(r.pass, "case {}: {:?}", c.id, r.checks.iter().filter(|x| !x.ok).collect::<Vec<_>>());
    }
}

#[test]
fn case_2a_walk() {
    let c = case("2A");
    let g = grading_of(&c);
    let tw = twisting_of(&c);
    assert_eq!(tw[0].1, Weight(vec![1, 0]));
    let a = Weight(vec![0, 1]);
    let b = Weight(vec![1, 1]);
    assert_eq!(arrow_head(&g, &a, &tw[0].1), Some(b.clone()));
    assert_eq!(arrow_head(&g, &b, &tw[0].1), Some(Weight(vec![2, 1])));
    let rubbish = rubbish_weights(&g, &[tw[0].1.clone()], StepRule::Additive).unwrap();
    assert_eq!(rubbish, [Weight(vec![2, 1])].into());
    let wd = build_weight_diagram(&g, &tw, Some(&names_of(&c)), StepRule::Additive).unwrap();
    let names: BTreeSet<&str> = wd.vertices.iter().map(|v| v.name.as_str()).collect();
    assert_eq!(names, ["A", "B", "a"].into());
    assert_eq!(wd.arrows.len(), 2);
}

#[test]
fn case_2b_has_no_rubbish() {
    let c = case("2B");
    let g = grading_of(&c);
    let mus: Vec<Weight> = twisting_of(&c).into_iter().map(|t| t.1).collect();
    assert!(rubbish_weights(&g, &mus, StepRule::Additive).unwrap().is_empty());
    assert!(rubbish_weights(&g, &[], StepRule::Additive).unwrap().is_empty());
}

#[test]
fn arrow_head_past_top_is_empty() {
    let c = case("2A");
    let g = grading_of(&c);
    let top = g.weight_of(g.rs().highest_root());
    assert_eq!(arrow_head(&g, &top, &Weight(vec![1, 0])), None);
}

#[test]
fn arrows_agree_with_root_oracle() {
    for c in cases() {
        let g = grading_of(&c);
        let weights: Vec<Weight> = g.positive_weights().into_iter().cloned().collect();
        for (_, mu) in twisting_of(&c) {
            for chi in &weights {
                let got = arrow_head(&g, chi, &mu).is_some();
                assert_eq!(got, oracle_arrow(&g, chi, &mu), "case {} {} + {}", c.id, chi, mu);
            }
        }
    }
}

#[test]
fn case_1a_and_5b_arrows() {
    let c = case("1A");
    let g = grading_of(&c);
    let wd = build_weight_diagram(&g, &twisting_of(&c), Some(&names_of(&c)), StepRule::Additive).unwrap();
    let names: BTreeSet<&str> = wd.vertices.iter().map(|v| v.name.as_str()).collect();
    assert_eq!(names, ["A", "B", "C", "a", "b"].into());
    let arrows: BTreeSet<String> = wd.arrows.iter().map(|a| a.to_string()).collect();
    for want in ["A -1-> B", "A -3-> a", "A -2-> C", "B -3-> C"] {
        assert!(arrows.contains(want), "{} missing from {:?}", want, arrows);
    }

    let c = case("5B");
    let g = grading_of(&c);
    let wd = build_weight_diagram(&g, &twisting_of(&c), Some(&names_of(&c)), StepRule::Additive).unwrap();
    let arrows: BTreeSet<String> = wd.arrows.iter().map(|a| a.to_string()).collect();
    for want in ["A -1-> B", "A -2-> C", "C -2-> g", "A -17-> o", "B -17-> n"] {
        assert!(arrows.contains(want), "{} missing", want);
    }
}

#[test]
fn corrupted_arrow_fails_with_triple() {
    let text = bundled_cases().text.replacen("arrow A 1 B\narrow B 1 a", "arrow A 1 a\narrow B 1 a", 1);
    let file = DataFile::from_text("cases.txt", "test", text);
    let c = parse_cases(&file).unwrap().into_iter().find(|c| c.id == "2A").unwrap();
    let r = verify_case(&c, None).unwrap();
    assert!(!r.pass);
    let detail: String = r.checks.iter().filter(|x| !x.ok).map(|x| x.detail.clone()).collect();
    assert!(detail.contains("A -1-> B") && detail.contains("A -1-> a"), "{}", detail);
}

#[test]
fn corrupted_cell_reports_line() {
    let mut lines: Vec<String> = bundled_cases().text.lines().map(String::from).collect();
    let idx = lines.iter().position(|l| l.starts_with("weight B")).unwrap();
    lines[idx] = "weight B = (1) x".into();
    let file = DataFile::from_text("cases.txt", "test", lines.join("\n"));
    match parse_cases(&file) {
        Err(Error::Data { file, line, .. }) => {
            assert_eq!(file, "cases.txt");
            assert_eq!(line, idx + 1);
        }
        other => panic!("{:?}", other.map(|v| v.len())),
    }
}

#[test]
fn non_weight_twisting_rejected() {
    let g = grading_of(&case("2A"));
    assert!(matches!(rubbish_weights(&g, &[Weight(vec![9, 9])], StepRule::Additive), Err(Error::Rejected(_))));
}
