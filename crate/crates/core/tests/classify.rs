use parazoo::classify::{check_table, parse_table, scan_parabolics, shipped_facts, weakly_ample_by_basic_lemma};
use parazoo::data::{bundled_table, DataFile};
use parazoo::grading::Grading;
use parazoo::rootsys::RootSystem;
use parazoo::Error;

fn rs(s: &str) -> RootSystem {
    RootSystem::new(s.parse().unwrap())
}

#[test]
fn scan_record_counts() {
    assert_eq!(scan_parabolics(&rs("G2")).unwrap().len(), 3);
    assert_eq!(scan_parabolics(&rs("E7")).unwrap().len(), 127);
    assert_eq!(scan_parabolics(&rs("E8")).unwrap().len(), 255);
}

#[test]
fn maximal_parabolics_with_two_step_grading_are_weakly_ample() {
    for t in ["E6", "E7", "E8", "F4", "D6", "B5", "C5", "A6"] {
        let r = rs(t);
        let n = r.rank();
        for white in 0..n {
            let black: Vec<usize> = (0..n).filter(|&i| i != white).collect();
            let g = Grading::new(parazoo::grading::ColouredDiagram::new(r.clone(), &black).unwrap());
            if g.weight_of(r.highest_root()).0[0] == 1 {
                assert!(g.positive_nonreduced_weights().is_empty());
                assert!(weakly_ample_by_basic_lemma(&g));
            }
        }
    }
}

#[test]
fn case_2a_colouring_not_covered() {
    let g = Grading::new("E7/1,3,4,6,7".parse().unwrap());
    assert!(!weakly_ample_by_basic_lemma(&g));
}

#[test]
fn e8_borel_consistent() {
    let g = Grading::new("E8/".parse().unwrap());
    let k = g.positive_nonreduced_weights().len();
    assert_eq!(weakly_ample_by_basic_lemma(&g), k <= 1);
}

#[test]
fn table_entries() {
    let entries = parse_table(&bundled_table()).unwrap();
    assert_eq!(entries.len(), 59);
    let rep = check_table(&entries).unwrap();
    assert!(rep.pass);
    let count = |i: usize| rep.entries.iter().find(|r| r.index == i).unwrap().nonreduced;
    // row 19 as printed; the colouring drawn for its case is row 21
    assert_eq!(count(19), 3);
    assert_eq!(count(21), 2);
    assert_eq!(count(34), 2);
    assert_eq!(count(11), 4);
    assert!(rep.entries.iter().all(|r| r.nonreduced >= 2));
}

#[test]
fn table_agrees_with_scan() {
    let entries = parse_table(&bundled_table()).unwrap();
    let rep = check_table(&entries).unwrap();
    for t in ["E7", "E8"] {
        let scan = scan_parabolics(&rs(t)).unwrap();
        for (e, row) in entries.iter().zip(&rep.entries).filter(|(e, _)| e.group.to_string() == t) {
            let black: Vec<usize> = e.pattern.chars().enumerate().filter(|(_, c)| *c == 'B').map(|(i, _)| i + 1).collect();
            let rec = scan.iter().find(|r| r.black == black).unwrap();
            assert_eq!(rec.nonreduced, row.nonreduced);
        }
    }
}

#[test]
fn corrupt_table_reports_line() {
    let text = bundled_table().text.replacen("BWBWBWB", "BWBWBXB", 1);
    let line = text.lines().position(|l| l.contains("BWBWBXB")).unwrap() + 1;
    match parse_table(&DataFile::from_text("table.txt", "test", text)) {
        Err(Error::Data { line: l, .. }) => assert_eq!(l, line),
        other => panic!("{:?}", other.map(|v| v.len())),
    }
}

#[test]
fn shipped_facts_are_sourced() {
    let facts = shipped_facts();
    assert!(!facts.is_empty());
}
