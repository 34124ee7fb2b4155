use std::collections::{BTreeMap, BTreeSet};

use parazoo::grading::{ColouredDiagram, Grading, Weight};
use parazoo::rootsys::RootSystem;
use parazoo::Error;

fn grading(s: &str) -> Grading {
    Grading::new(s.parse().unwrap())
}

/// Components by direct restriction of every root to the white vertices.
fn restrict_all(g: &Grading) -> BTreeMap<Vec<i32>, usize> {
    let mut out = BTreeMap::new();
    for r in &g.rs().roots {
        let w: Vec<i32> = g.diagram.white.iter().map(|&i| r[i]).collect();
        *out.entry(w).or_insert(0) += 1;
    }
    out
}

#[test]
fn parse_examples() {
    let d: ColouredDiagram = "E7/1,3,5,7".parse().unwrap();
    assert_eq!(d.black_one_based(), vec![1, 3, 5, 7]);
    assert_eq!(d.white, vec![1, 3, 5]);
    assert_eq!(d.to_string(), "E7/1,3,5,7");
    let b: ColouredDiagram = "G2/".parse().unwrap();
    assert!(b.black.is_empty());
    assert_eq!(b.white.len(), 2);
    assert!(matches!("E9/1".parse::<ColouredDiagram>(), Err(Error::InvalidType(_))));
    assert!(matches!("E7/8".parse::<ColouredDiagram>(), Err(Error::Parse { .. })));
    assert!(matches!("E7/1,1".parse::<ColouredDiagram>(), Err(Error::Parse { .. })));
    assert!(matches!("E7/x".parse::<ColouredDiagram>(), Err(Error::Parse { .. })));
}

#[test]
fn a3_middle_white() {
    let g = grading("A3/1,3");
    let pos = g.positive_weights();
    assert_eq!(pos.len(), 1);
    let roots: BTreeSet<Vec<i32>> = g.roots_of(pos[0]).into_iter().cloned().collect();
    let want: BTreeSet<Vec<i32>> = [vec![0, 1, 0], vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]].into();
    assert_eq!(roots, want);
}

#[test]
fn components_partition_roots_against_restriction() {
    for s in ["E7/1,3,5,7", "E8/1,3,5,7,8", "F4/2", "G2/", "B4/1,4", "D5/2,3", "E6/"] {
        let g = grading(s);
        let oracle = restrict_all(&g);
        let mut total = g.zero_component.len();
        for (w, n) in &oracle {
            let chi = Weight(w.clone());
            if chi.is_zero() {
                assert_eq!(*n, g.zero_component.len(), "{}", s);
            } else {
                assert_eq!(g.roots_of(&chi).len(), *n, "{} {:?}", s, w);
                total += g.roots_of(&chi).len();
            }
        }
        assert_eq!(total, g.rs().roots.len(), "{}", s);
        assert_eq!(g.total_roots(), g.rs().roots.len(), "{}", s);
    }
}

#[test]
fn case_2a_weights() {
    // parabolic 19: black 1 3 4 6 7
    let g = grading("E7/1,3,4,6,7");
    let nr = g.positive_nonreduced_weights();
    let set: BTreeSet<Vec<i32>> = nr.iter().map(|w| w.0.clone()).collect();
    assert_eq!(set, [vec![0, 1], vec![1, 1]].into());
    assert!(g.is_reduced(&Weight(vec![2, 1])).unwrap());
    assert!(!g.is_reduced(&Weight(vec![0, 1])).unwrap());
    assert!(matches!(g.is_reduced(&Weight(vec![7, 7])), Err(Error::Rejected(_))));
}

#[test]
fn highest_weight_is_reduced() {
    for s in ["E7/1,3,5,7", "E8/2,4", "C4/", "G2/"] {
        let g = grading(s);
        let top = g.positive_weights().into_iter().max_by_key(|w| w.0.iter().sum::<i32>()).unwrap().clone();
        assert!(g.is_reduced(&top).unwrap(), "{}", s);
    }
}

#[test]
fn borel_components_single_roots() {
    for s in ["A2/", "G2/", "E8/"] {
        let g = grading(s);
        for w in g.positive_weights() {
            assert_eq!(g.roots_of(w).len(), 1);
            assert!(g.is_irreducible_component(w).unwrap());
        }
    }
    assert!(grading("A2/").positive_nonreduced_weights().is_empty());
}

#[test]
fn every_e7_component_irreducible() {
    let rs = RootSystem::new("E7".parse().unwrap());
    for mask in 0..(1u32 << 7) - 1 {
        let g = Grading::new(ColouredDiagram::from_mask(rs.clone(), mask).unwrap());
        for w in g.positive_weights() {
            assert!(g.is_irreducible_component(w).unwrap(), "mask {:b} {:?}", mask, w);
        }
    }
}

#[test]
fn labels() {
    let g = grading("E7/1,3,4,6,7");
    let zero = g.weight_label(&Weight::zero(2)).unwrap();
    assert!(zero.chars().filter(|c| c.is_ascii_digit()).all(|c| c == '0'));
    assert_eq!(g.black_labels(&Weight(vec![0, 1])).unwrap().len(), 5);
}
