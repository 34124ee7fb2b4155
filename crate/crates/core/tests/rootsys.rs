use std::collections::{BTreeSet, VecDeque};

use parazoo::rootsys::{cartan_matrix, catalogue, positive_root_count, Kind, RootSystem, SimpleType};
use parazoo::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All roots as the Weyl orbit of the simple roots, generated by simple
/// reflections `s_i(v) = v - <v, a_i^vee> a_i`.
fn weyl_orbit_roots(t: SimpleType) -> BTreeSet<Vec<i32>> {
    let a = cartan_matrix(t);
    let n = t.rank;
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(v) = queue.pop_front() {
        for i in 0..n {
            let p: i32 = (0..n).map(|j| a[i][j] * v[j]).sum();
            let mut w = v.clone();
            w[i] -= p;
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen
}

fn st(s: &str) -> SimpleType {
    s.parse().unwrap()
}

#[test]
fn positive_counts_match_orbit_and_closed_form() {
    for t in catalogue() {
        let rs = RootSystem::new(t);
        let orbit = weyl_orbit_roots(t);
        let pos: BTreeSet<Vec<i32>> = orbit.iter().filter(|v| v.iter().all(|&x| x >= 0)).cloned().collect();
        assert_eq!(orbit.len(), 2 * pos.len(), "{}", t);
        assert_eq!(rs.positive.len(), pos.len(), "{}", t);
        assert_eq!(rs.positive.len(), positive_root_count(t), "{}", t);
        let got: BTreeSet<Vec<i32>> = rs.roots.iter().cloned().collect();
        assert_eq!(got, orbit, "{}", t);
    }
}

#[test]
fn documented_counts() {
    assert_eq!(RootSystem::build(Kind::A, 2).unwrap().positive.len(), 3);
    assert_eq!(RootSystem::build(Kind::E, 8).unwrap().positive.len(), 120);
    assert_eq!(RootSystem::build(Kind::G, 2).unwrap().positive.len(), 6);
}

#[test]
fn positive_roots_sorted_by_height_then_lex() {
    for t in catalogue() {
        let rs = RootSystem::new(t);
        for w in rs.positive.windows(2) {
            let (h0, h1): (i32, i32) = (w[0].iter().sum(), w[1].iter().sum());
            assert!(h0 < h1 || (h0 == h1 && w[0] < w[1]), "{}: {:?} before {:?}", t, w[0], w[1]);
        }
    }
}

#[test]
fn is_root_examples() {
    let a2 = RootSystem::new(st("A2"));
    assert!(a2.is_root(&[1, 1]).unwrap());
    assert!(!a2.is_root(&[2, 0]).unwrap());
    let g2 = RootSystem::new(st("G2"));
    assert!(g2.is_root(&[3, 1]).unwrap());
    assert!(matches!(a2.is_root(&[1, 1, 0]), Err(Error::Rejected(_))));
}

#[test]
fn invalid_types_rejected() {
    for s in ["E9", "E5", "D3", "B1", "A0", "F5", "G3", "H3", "", "E"] {
        assert!(matches!(s.parse::<SimpleType>(), Err(Error::InvalidType(_))), "{:?}", s);
    }
    assert!(RootSystem::build(Kind::D, 3).is_err());
}

#[test]
fn sums_of_roots_agree_with_orbit_small_rank() {
    for t in catalogue().into_iter().filter(|t| t.rank <= 4) {
        let rs = RootSystem::new(t);
        let orbit = weyl_orbit_roots(t);
        for x in &rs.roots {
            for y in &rs.roots {
                let s: Vec<i32> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                assert_eq!(rs.is_root(&s).unwrap(), orbit.contains(&s), "{} {:?}+{:?}", t, x, y);
            }
        }
    }
}

#[test]
fn sums_of_roots_agree_with_orbit_e8_sampled() {
    let t = st("E8");
    let rs = RootSystem::new(t);
    let orbit = weyl_orbit_roots(t);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20_000 {
        let x = &rs.roots[rng.random_range(0..rs.roots.len())];
        let y = &rs.roots[rng.random_range(0..rs.roots.len())];
        let s: Vec<i32> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        assert_eq!(rs.is_root(&s).unwrap(), orbit.contains(&s));
    }
}

#[test]
fn highest_root_dominates() {
    for t in catalogue() {
        let rs = RootSystem::new(t);
        let h = rs.highest_root();
        for r in &rs.positive {
            assert!(r.iter().zip(h).all(|(a, b)| a <= b), "{}", t);
        }
    }
}
