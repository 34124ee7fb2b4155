use nalgebra::DMatrix;
use parazoo::ampleness::{random_subspace_with_invariants, witt_pairs};
use parazoo::cxlinalg::{
    c, eye, from_real_rows, mp_inverse, mp_inverse_regularized, penrose_residuals, random_matrix, random_unitary, real,
    restriction_invariants, sharp_adjoint, svd, with_singular_values, zeros, BilinearSpace, CMat, CVec, WEDGE2_PAIRS,
};
use parazoo::spinor::{lift, wedge};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

#[test]
fn mp_inverse_examples() {
    let f = from_real_rows(&[&[2.0]]);
    assert!((mp_inverse(&f)[(0, 0)] - real(0.5)).norm() < 1e-15);
    let z = zeros(3, 2);
    let zp = mp_inverse(&z);
    assert_eq!(zp.shape(), (2, 3));
    assert_eq!(zp.norm(), 0.0);
}

#[test]
fn penrose_random_5x3() {
    let mut r = rng(1);
    for _ in 0..50 {
        let f = random_matrix(&mut r, 5, 3);
        let res = penrose_residuals(&f, &mp_inverse(&f));
        assert!(res.iter().all(|&x| x < 1e-10), "{:?}", res);
    }
}

#[test]
fn penrose_rank_deficient_and_ill_conditioned() {
    let mut r = rng(2);
    for t in 0..200 {
        let m = r.random_range(1..=8);
        let n = r.random_range(1..=8);
        let k = r.random_range(0..=m.min(n));
        let sigma: Vec<f64> = (0..k).map(|i| 10f64.powf(-(i as f64) * 5.0 / (k.max(2) - 1) as f64)).collect();
        let f = with_singular_values(&mut r, m, n, &sigma);
        let res = penrose_residuals(&f, &mp_inverse(&f));
        assert!(res.iter().all(|&x| x < 1e-10), "trial {}: {:?}", t, res);
    }
}

#[test]
fn mp_inverse_agrees_with_tikhonov_limit() {
    // F^+ = lim (F* F + d^2 I)^{-1} F*, computed independently
    let mut r = rng(3);
    for _ in 0..30 {
        let m = r.random_range(1..=6);
        let n = r.random_range(1..=6);
        let k = r.random_range(0..=m.min(n));
        let sigma: Vec<f64> = (0..k).map(|_| r.random_range(0.5..3.0)).collect();
        let f = with_singular_values(&mut r, m, n, &sigma);
        // bias ~ d2 / sigma_min^2, rounding ~ eps / d2
        let d2 = 1e-8;
        let lhs = f.adjoint() * &f + eye(n) * real(d2);
        let tik = lhs.full_piv_lu().solve(&f.adjoint()).unwrap();
        assert!(rel(&mp_inverse(&f), &tik) < 1e-6);
        assert!(rel(&mp_inverse_regularized(&f, d2), &tik) < 1e-6);
    }
}

#[test]
fn mp_inverse_of_invertible_is_inverse() {
    let mut r = rng(4);
    for _ in 0..100 {
        let n = r.random_range(1..=8);
        let f = random_matrix(&mut r, n, n);
        let inv = f.clone().full_piv_lu().try_inverse().unwrap();
        assert!(rel(&mp_inverse(&f), &inv) < 1e-8);
    }
}

#[test]
fn svd_reconstructs() {
    let mut r = rng(5);
    for _ in 0..100 {
        let m = r.random_range(1..=9);
        let n = r.random_range(1..=9);
        let f = random_matrix(&mut r, m, n);
        let (u, s, v) = svd(&f);
        let k = s.len();
        let sd = CMat::from_fn(k, k, |i, j| if i == j { real(s[i]) } else { real(0.0) });
        assert!(rel(&(&u * sd * v.adjoint()), &f) < 1e-12);
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
        assert!(rel(&(u.adjoint() * &u), &eye(k)) < 1e-12);
    }
}

#[test]
fn sharp_adjoint_examples() {
    let mut r = rng(6);
    let sym = BilinearSpace::symmetric(4);
    let skew = BilinearSpace::symplectic(4).unwrap();
    let a = random_matrix(&mut r, 4, 4);
    let b = random_matrix(&mut r, 4, 4);
    assert!(rel(&sharp_adjoint(&a, &sym).unwrap(), &a.transpose()) < 1e-14);
    let i = skew.gram.clone();
    assert!(rel(&sharp_adjoint(&a, &skew).unwrap(), &(-&i * a.transpose() * &i)) < 1e-14);
    for sp in [&sym, &skew, &BilinearSpace::det2x2()] {
        let ab = sharp_adjoint(&(&a * &b), sp).unwrap();
        let ba = sharp_adjoint(&b, sp).unwrap() * sharp_adjoint(&a, sp).unwrap();
        assert!(rel(&ab, &ba) < 1e-12);
        let sa = sharp_adjoint(&a, sp).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                let ex = eye(4).column(x).into_owned();
                let ey = eye(4).column(y).into_owned();
                assert!((sp.form(&(&a * &ex), &ey) - sp.form(&ex, &(&sa * &ey))).norm() < 1e-12);
            }
        }
    }
    assert!(sharp_adjoint(&zeros(3, 3), &sym).is_err());
}

#[test]
fn restriction_invariant_examples() {
    let sym = BilinearSpace::symmetric(3);
    let e1 = CMat::from_column_slice(3, 1, &[real(1.0), real(0.0), real(0.0)]);
    assert_eq!(restriction_invariants(&e1, &sym).unwrap(), (1, 0));
    let iso = CMat::from_column_slice(3, 1, &[real(1.0), c(0.0, 1.0), real(0.0)]);
    assert_eq!(restriction_invariants(&iso, &sym).unwrap(), (1, 1));
    assert_eq!(restriction_invariants(&zeros(3, 2), &sym).unwrap(), (0, 0));
}

#[test]
fn restriction_invariants_preserved_by_isometries() {
    let mut r = rng(7);
    let sym = BilinearSpace::symmetric(5);
    for _ in 0..50 {
        let i = r.random_range(0..=3);
        let j = r.random_range(0..=i.min(5 - i));
        let s = random_subspace_with_invariants(&mut r, &sym, i, j).unwrap();
        // real orthogonal maps preserve the symmetric form
        let q = DMatrix::<f64>::from_fn(5, 5, |_, _| r.random_range(-1.0..1.0)).qr().q();
        let qc = q.map(real);
        assert_eq!(restriction_invariants(&(&qc * &s), &sym).unwrap(), (i, j));
        // any change of basis of the span keeps the invariants
        let g = random_matrix(&mut r, s.ncols(), s.ncols());
        assert_eq!(restriction_invariants(&(&s * g), &sym).unwrap(), (i, j));
    }
}

#[test]
fn exactly_five_witt_pairs_for_c2_into_c3() {
    let pairs = witt_pairs(2, 3);
    assert_eq!(pairs, vec![(0, 0), (1, 0), (1, 1), (2, 0), (2, 1)]);
    let sym = BilinearSpace::symmetric(3);
    let mut r = rng(8);
    for &(i, j) in &pairs {
        let s = random_subspace_with_invariants(&mut r, &sym, i, j).unwrap();
        assert_eq!(restriction_invariants(&s, &sym).unwrap(), (i, j));
    }
    assert!(random_subspace_with_invariants(&mut r, &sym, 2, 2).is_err());
}

/// `Pf` as half the `e_1234` coefficient of `x ^ x`.
fn pf_by_wedge(x: &CVec) -> parazoo::cxlinalg::C64 {
    let full = lift(4, 2, x);
    wedge(&full, &full)[15] * 0.5
}

#[test]
fn quadratic_value_examples() {
    let det = BilinearSpace::det2x2();
    let id = CVec::from_vec(vec![real(1.0), real(0.0), real(0.0), real(1.0)]);
    assert!((det.quadratic_value(&id).unwrap() - real(1.0)).norm() < 1e-15);
    let pf = BilinearSpace::pfaffian4();
    let mut x = CVec::zeros(6);
    x[0] = real(1.0);
    x[5] = real(1.0);
    assert!((pf.quadratic_value(&x).unwrap() - real(1.0)).norm() < 1e-15);
    let mut y = CVec::zeros(6);
    y[0] = real(1.0);
    assert_eq!(pf.quadratic_value(&y).unwrap(), real(0.0));
    assert!(BilinearSpace::symmetric(3).quadratic_value(&CVec::zeros(3)).is_err());
}

#[test]
fn pfaffian_matches_wedge_and_determinant() {
    let pf = BilinearSpace::pfaffian4();
    let det = BilinearSpace::det2x2();
    let mut r = rng(9);
    for _ in 0..200 {
        let x = random_matrix(&mut r, 6, 1).column(0).into_owned();
        let v = pf.quadratic_value(&x).unwrap();
        assert!((v - pf_by_wedge(&x)).norm() < 1e-12);
        let mut m = zeros(4, 4);
        for (k, &(i, j)) in WEDGE2_PAIRS.iter().enumerate() {
            m[(i, j)] = x[k];
            m[(j, i)] = -x[k];
        }
        assert!((m.determinant() - v * v).norm() < 1e-10 * (1.0 + v.norm().powi(2)));
        let y = random_matrix(&mut r, 4, 1).column(0).into_owned();
        let d = y[0] * y[3] - y[1] * y[2];
        assert!((det.quadratic_value(&y).unwrap() - d).norm() < 1e-12);
    }
}

proptest! {
    #[test]
    fn penrose_holds_for_any_seed(seed in any::<u64>(), m in 1usize..7, n in 1usize..7) {
        let mut r = rng(seed);
        let f = random_matrix(&mut r, m, n);
        let res = penrose_residuals(&f, &mp_inverse(&f));
        prop_assert!(res.iter().all(|&x| x < 1e-10));
    }

    #[test]
    fn unitary_columns_orthonormal(seed in any::<u64>(), n in 1usize..8) {
        let u = random_unitary(&mut rng(seed), n);
        prop_assert!(rel(&(u.adjoint() * &u), &eye(n)) < 1e-12);
    }
}
