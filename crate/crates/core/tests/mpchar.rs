use std::collections::BTreeMap;

use parazoo::cxlinalg::{from_real_rows, random_matrix, real, zeros, BilinearSpace, CMat};
use parazoo::harness::random_lemma_map;
use parazoo::mpchar::{
    build_classical_grading, embed_lemma_triple, gl_hermitian_characteristic, lemma_ambient_form, lemma_b_from_a,
    lemma_residuals, verify_sl2, BlockNilpotent, FormType, SL2_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn diag(xs: &[f64]) -> CMat {
    CMat::from_fn(xs.len(), xs.len(), |i, j| if i == j { real(xs[i]) } else { real(0.0) })
}

fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn verify_sl2_examples() {
    let z = zeros(2, 2);
    assert!(verify_sl2(&z, &z, &z, None, SL2_TOL).unwrap().accepted);
    let e = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let f = from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
    let h = diag(&[1.0, -1.0]);
    assert!(verify_sl2(&e, &h, &f, Some(&diag(&[1.0, 1.0])), SL2_TOL).unwrap().accepted);
    let bad = verify_sl2(&e, &diag(&[1.0, 1.0]), &f, None, SL2_TOL).unwrap();
    assert!(!bad.accepted);
    assert!((bad.residuals.he_minus_2e - 2.0).abs() < 1e-15);
    assert!(verify_sl2(&e, &zeros(3, 3), &f, None, SL2_TOL).is_err());
}

#[test]
fn scalar_blocks() {
    // e maps V_1 to V_2, stored below the diagonal, so h is -1 on V_1
    for (x, fx) in [(1.0, 1.0), (2.0, 0.5)] {
        let blocks = BTreeMap::from([((0, 1), from_real_rows(&[&[x]]))]);
        let b = BlockNilpotent::new(vec![1, 1], blocks).unwrap();
        let t = &gl_hermitian_characteristic(&b, SL2_TOL)[&(0, 1)];
        assert!(t.accepted);
        assert!(close(&t.h, &diag(&[-1.0, 1.0]), 1e-14));
        assert!((t.f[(0, 1)] - real(fx)).norm() < 1e-14);
    }
}

#[test]
fn block_shape_checked() {
    let blocks = BTreeMap::from([((0, 1), zeros(2, 2))]);
    assert!(BlockNilpotent::new(vec![1, 2], blocks).is_err());
    let below = BTreeMap::from([((1, 0), zeros(1, 1))]);
    assert!(BlockNilpotent::new(vec![1, 1], below).is_err());
}

#[test]
fn gl_characteristic_random_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for dims in [vec![2, 3, 2], vec![1, 4, 2, 1]] {
        for _ in 0..100 {
            let x = BlockNilpotent::random(&mut rng, &dims);
            for ((i, j), t) in gl_hermitian_characteristic(&x, SL2_TOL) {
                assert!(t.accepted, "{:?} {:?}", (i, j), t.residuals);
                assert!(t.residuals.h_hermitian.unwrap() < 1e-10);
                // (e e+) e = e on the block
                let e = &x.blocks[&(i, j)];
                let ep = t.f.view((x.dims[..i].iter().sum(), x.dims[..j].iter().sum()), (x.dims[i], x.dims[j])).into_owned();
                assert!(close(&(e * &ep * e), e, 1e-10 * e.norm().max(1.0)));
            }
        }
    }
}

#[test]
fn classical_grading_components() {
    let g = build_classical_grading(&[1], 2, FormType::Symmetric).unwrap();
    assert_eq!(g.component_dim(&[2]), 0);
    let s = build_classical_grading(&[1], 2, FormType::Skew).unwrap();
    assert_eq!(s.component_dim(&[2]), 1);
    for (dims, w, form) in [
        (vec![1], 2, FormType::Symmetric),
        (vec![2, 1], 3, FormType::Symmetric),
        (vec![2, 2], 4, FormType::Skew),
        (vec![1, 2, 1], 0, FormType::Symmetric),
        (vec![3], 2, FormType::Skew),
    ] {
        let g = build_classical_grading(&dims, w, form).unwrap();
        let total: usize = g.components.values().map(|b| b.len()).sum();
        assert_eq!(total, g.expected_total());
        for basis in g.components.values() {
            for x in basis {
                assert!(g.skew_residual(x) < 1e-14);
            }
        }
    }
    assert!(build_classical_grading(&[1], 3, FormType::Skew).is_err());
    assert!(build_classical_grading(&[0], 2, FormType::Symmetric).is_err());
}

/// `(2A - 2ABA + (AB)^# A, 2B - 2BAB + B (AB)^#)` computed from scratch.
fn sl2_equations(a: &CMat, b: &CMat, g: &CMat) -> (f64, f64) {
    let ginv = g.clone().full_piv_lu().try_inverse().unwrap();
    let ab = a * b;
    let sharp = ginv * ab.transpose() * g;
    let two = real(2.0);
    let ea = (a * two - &ab * a * two + &sharp * a).norm() / a.norm().max(1.0);
    let eb = (b * two - b * a * b * two + b * &sharp).norm() / b.norm().max(1.0);
    (ea, eb)
}

#[test]
fn lemma_zero_map() {
    let w = BilinearSpace::symmetric(6);
    let sol = lemma_b_from_a(&zeros(6, 4), &w).unwrap();
    assert_eq!(sol.b.norm(), 0.0);
    assert!(lemma_residuals(&zeros(6, 4), &w, &sol).unwrap().max() < 1e-12);
}

#[test]
fn lemma_random_maps_both_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for form in [FormType::Symmetric, FormType::Skew] {
        let w = form.w_space(6).unwrap();
        for t in 0..100 {
            let a = if t % 2 == 0 { random_lemma_map(&mut rng, &w, form, 4) } else { random_matrix(&mut rng, 6, 4) };
            let sol = lemma_b_from_a(&a, &w).unwrap();
            let (ea, eb) = sl2_equations(&a, &sol.b, &w.gram);
            assert!(ea < 1e-9 && eb < 1e-9, "{:?} trial {}: {} {}", form, t, ea, eb);
            let r = lemma_residuals(&a, &w, &sol).unwrap();
            assert!(r.max() < 1e-9, "{:?}", r);
            let triple = embed_lemma_triple(&a, &w, form, &sol, 1e-9).unwrap();
            assert!(triple.accepted, "{:?}", triple.residuals);
            let om = lemma_ambient_form(4, &w, form);
            for x in [&triple.e, &triple.f] {
                assert!((x.transpose() * &om + &om * x).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn lemma_isotropic_images() {
    // Im A totally isotropic: the whole image is the radical
    let w = BilinearSpace::symplectic(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let k = rng.random_range(1..=3);
        let mut a = zeros(6, 4);
        let coeffs = random_matrix(&mut rng, k, 4);
        a.view_mut((0, 0), (k, 4)).copy_from(&coeffs);
        let sol = lemma_b_from_a(&a, &w).unwrap();
        let r = lemma_residuals(&a, &w, &sol).unwrap();
        assert_eq!(r.dims[1], 0);
        assert!(r.max() < 1e-9, "{:?}", r);
    }
}

#[test]
fn form_type_parse() {
    assert_eq!("sym".parse::<FormType>().unwrap(), FormType::Symmetric);
    assert_eq!("skew".parse::<FormType>().unwrap(), FormType::Skew);
    assert!("herm".parse::<FormType>().is_err());
}
