//! Hermitian characteristics built from Moore-Penrose inverses.
//!
//! `gl(V)` blocks get `f = e+`; for orthogonal and symplectic algebras the
//! component `Hom(U, W)` needs the Lemma construction of `B` from `A`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cxlinalg::{
    complement, eye, hcat, mp_inverse, null_space, orthonormalize, range_basis, real, sharp_adjoint, svd, zeros,
    BilinearSpace, CMat, CVec, FormKind, RANK_TOL,
};
use crate::error::{Error, Result};

pub const SL2_TOL: f64 = 1e-9;

/// Nilpotent element of `gl(V)` for the flag `V = V_1 + ... + V_k`, given by
/// blocks `e_ij: V_i -> V_j` with `i < j`.
#[derive(Clone, Debug)]
pub struct BlockNilpotent {
    pub dims: Vec<usize>,
    pub blocks: BTreeMap<(usize, usize), CMat>,
}

impl BlockNilpotent {
    pub fn new(dims: Vec<usize>, blocks: BTreeMap<(usize, usize), CMat>) -> Result<Self> {
        for (&(i, j), m) in &blocks {
            if i >= j || j >= dims.len() {
                return Err(Error::Dimension(format!("block ({}, {}) is not above the diagonal", i + 1, j + 1)));
            }
            if m.nrows() != dims[j] || m.ncols() != dims[i] {
                return Err(Error::Dimension(format!(
                    "block ({}, {}) is {}x{}, expected {}x{}",
                    i + 1,
                    j + 1,
                    m.nrows(),
                    m.ncols(),
                    dims[j],
                    dims[i]
                )));
            }
        }
        Ok(BlockNilpotent { dims, blocks })
    }

    /// Every block `(i, j)` filled with a random Gaussian matrix.
    pub fn random<R: rand::Rng>(rng: &mut R, dims: &[usize]) -> Self {
        let mut blocks = BTreeMap::new();
        for i in 0..dims.len() {
            for j in i + 1..dims.len() {
                blocks.insert((i, j), crate::cxlinalg::random_matrix(rng, dims[j], dims[i]));
            }
        }
        BlockNilpotent { dims: dims.to_vec(), blocks }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    fn offset(&self, i: usize) -> usize {
        self.dims[..i].iter().sum()
    }

    /// Place a block operator `V_src -> V_dst` into `End(V)`.
    pub fn embed(&self, dst: usize, src: usize, m: &CMat) -> CMat {
        let n = self.total_dim();
        let mut out = zeros(n, n);
        out.view_mut((self.offset(dst), self.offset(src)), (m.nrows(), m.ncols())).copy_from(m);
        out
    }

    pub fn matrix(&self) -> CMat {
        let n = self.total_dim();
        let mut out = zeros(n, n);
        for (&(i, j), m) in &self.blocks {
            out += self.embed(j, i, m);
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Sl2Residuals {
    pub ef_minus_h: f64,
    pub he_minus_2e: f64,
    pub hf_plus_2f: f64,
    /// `None` unless Hermitian-ness was requested.
    pub h_hermitian: Option<f64>,
}

impl Sl2Residuals {
    pub fn max(&self) -> f64 {
        [self.ef_minus_h, self.he_minus_2e, self.hf_plus_2f, self.h_hermitian.unwrap_or(0.0)]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct Sl2Triple {
    pub e: CMat,
    pub h: CMat,
    pub f: CMat,
    pub residuals: Sl2Residuals,
    pub accepted: bool,
}

fn bracket(x: &CMat, y: &CMat) -> CMat {
    x * y - y * x
}

/// Residuals of the `sl_2` relations, absolute Frobenius norms. With
/// `hermitian_form = Some(K)` the characteristic is also tested for being
/// self-adjoint with respect to `<x, y> = y* K x`.
pub fn verify_sl2(e: &CMat, h: &CMat, f: &CMat, hermitian_form: Option<&CMat>, tol: f64) -> Result<Sl2Triple> {
    let n = e.nrows();
    for (name, m) in [("e", e), ("h", h), ("f", f)] {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Dimension(format!("{} is {}x{}, expected {}x{}", name, m.nrows(), m.ncols(), n, n)));
        }
    }
    let herm = match hermitian_form {
        Some(k) => {
            if k.nrows() != n || k.ncols() != n {
                return Err(Error::Dimension("Hermitian form has the wrong size".into()));
            }
            Some((k * h - h.adjoint() * k).norm())
        }
        None => None,
    };
    let residuals = Sl2Residuals {
        ef_minus_h: (bracket(e, f) - h).norm(),
        he_minus_2e: (bracket(h, e) - e * real(2.0)).norm(),
        hf_plus_2f: (bracket(h, f) + f * real(2.0)).norm(),
        h_hermitian: herm,
    };
    let accepted = residuals.max() < tol;
    Ok(Sl2Triple { e: e.clone(), h: h.clone(), f: f.clone(), residuals, accepted })
}

/// One triple per block: `f_ji = e_ij+` and `h = [e, f]`, which is
/// `e e+` on `V_j` and `-e+ e` on `V_i`.
pub fn gl_hermitian_characteristic(x: &BlockNilpotent, tol: f64) -> BTreeMap<(usize, usize), Sl2Triple> {
    let mut out = BTreeMap::new();
    for (&(i, j), eij) in &x.blocks {
        let fp = mp_inverse(eij);
        let e = x.embed(j, i, eij);
        let f = x.embed(i, j, &fp);
        let h = x.embed(j, j, &(eij * &fp)) - x.embed(i, i, &(&fp * eij));
        let t = verify_sl2(&e, &h, &f, Some(&eye(x.total_dim())), tol).expect("square by construction");
        out.insert((i, j), t);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FormType {
    Symmetric,
    Skew,
}

impl FormType {
    pub fn sign(self) -> f64 {
        match self {
            FormType::Symmetric => 1.0,
            FormType::Skew => -1.0,
        }
    }

    pub fn w_space(self, dim: usize) -> Result<BilinearSpace> {
        match self {
            FormType::Symmetric => Ok(BilinearSpace::symmetric(dim)),
            FormType::Skew => BilinearSpace::symplectic(dim),
        }
    }
}

impl std::str::FromStr for FormType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" | "symmetric" => Ok(FormType::Symmetric),
            "skew" | "symplectic" => Ok(FormType::Skew),
            _ => Err(Error::Config(format!("unknown form {:?}, expected sym or skew", s))),
        }
    }
}

/// `V = U_1^+ + ... + U_k^+ + U_1^- + ... + U_k^- + W` with `U_i^+` paired
/// to `U_i^-` by the identity and the standard form on `W`. Components of
/// the grading are the operators skew for the form that shift weights by
/// `chi`, where `U_i^+` has weight `e_i`, `U_i^-` has `-e_i`, `W` has `0`.
#[derive(Clone, Debug)]
pub struct ClassicalGrading {
    pub u_dims: Vec<usize>,
    pub w_dim: usize,
    pub form: FormType,
    pub omega: CMat,
    /// Weight vector of every coordinate of `V`.
    pub coord_weights: Vec<Vec<i32>>,
    /// Bases of the components, keyed by weight (zero included).
    pub components: BTreeMap<Vec<i32>, Vec<CMat>>,
}

pub fn build_classical_grading(u_dims: &[usize], w_dim: usize, form: FormType) -> Result<ClassicalGrading> {
    if u_dims.contains(&0) {
        return Err(Error::Dimension("flag pieces must be nonzero".into()));
    }
    if form == FormType::Skew && !w_dim.is_multiple_of(2) {
        return Err(Error::Dimension(format!("skew form needs even dim W, got {}", w_dim)));
    }
    let k = u_dims.len();
    let usum: usize = u_dims.iter().sum();
    let n = 2 * usum + w_dim;
    if n == 0 {
        return Err(Error::Dimension("empty space".into()));
    }
    let eps = form.sign();
    let w = form.w_space(w_dim)?;
    let mut omega = zeros(n, n);
    for i in 0..usum {
        omega[(i, usum + i)] = real(1.0);
        omega[(usum + i, i)] = real(eps);
    }
    omega.view_mut((2 * usum, 2 * usum), (w_dim, w_dim)).copy_from(&w.gram);

    let mut coord_weights = Vec::with_capacity(n);
    for sign in [1, -1] {
        for (i, &d) in u_dims.iter().enumerate() {
            for _ in 0..d {
                let mut wt = vec![0; k];
                wt[i] = sign;
                coord_weights.push(wt);
            }
        }
    }
    coord_weights.extend(std::iter::repeat_n(vec![0; k], w_dim));

    let mut shifts: Vec<Vec<i32>> = Vec::new();
    for a in &coord_weights {
        for b in &coord_weights {
            let d: Vec<i32> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            if !shifts.contains(&d) {
                shifts.push(d);
            }
        }
    }
    shifts.sort();

    let mut components = BTreeMap::new();
    for chi in shifts {
        let positions: Vec<(usize, usize)> = (0..n)
            .flat_map(|t| (0..n).map(move |s| (t, s)))
            .filter(|&(t, s)| {
                coord_weights[t].iter().zip(&coord_weights[s]).map(|(x, y)| x - y).collect::<Vec<_>>() == chi
            })
            .collect();
        // X^T Omega + Omega X = 0 on operators supported on `positions`
        let mut m = zeros(n * n, positions.len());
        for (c, &(t, s)) in positions.iter().enumerate() {
            let mut x = zeros(n, n);
            x[(t, s)] = real(1.0);
            let r = x.transpose() * &omega + &omega * &x;
            for (idx, v) in r.iter().enumerate() {
                m[(idx, c)] = *v;
            }
        }
        let ns = null_space(&m, RANK_TOL);
        let basis: Vec<CMat> = (0..ns.ncols())
            .map(|c| {
                let mut x = zeros(n, n);
                for (p, &(t, s)) in positions.iter().enumerate() {
                    x[(t, s)] = ns[(p, c)];
                }
                x
            })
            .collect();
        if !basis.is_empty() {
            components.insert(chi, basis);
        }
    }
    Ok(ClassicalGrading { u_dims: u_dims.to_vec(), w_dim, form, omega, coord_weights, components })
}

impl ClassicalGrading {
    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }

    pub fn component_dim(&self, chi: &[i32]) -> usize {
        self.components.get(chi).map_or(0, |b| b.len())
    }

    /// `||X^T Omega + Omega X||`.
    pub fn skew_residual(&self, x: &CMat) -> f64 {
        (x.transpose() * &self.omega + &self.omega * x).norm()
    }

    /// `dim so(V)` or `dim sp(V)`.
    pub fn expected_total(&self) -> usize {
        let n = self.dim();
        match self.form {
            FormType::Symmetric => n * (n - 1) / 2,
            FormType::Skew => n * (n + 1) / 2,
        }
    }
}

/// Output of the Lemma construction for `A: U -> W`.
#[derive(Clone, Debug)]
pub struct LemmaSolution {
    pub b: CMat,
    /// Gram matrix `H` of the Hermitian form on `U`, `<x, y> = y* H x`.
    pub hermitian_u: CMat,
    /// Orthonormal bases of `W_0, W_1, W_2, W_3`.
    pub w_parts: [CMat; 4],
    /// Bases of `U_0, U_1, U_2`.
    pub u_parts: [CMat; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaResiduals {
    /// `||2A - 2ABA + (AB)^# A|| / max(1, ||A||)`.
    pub eq_a: f64,
    /// `||2B - 2BAB + B (AB)^#|| / max(1, ||B||)`.
    pub eq_b: f64,
    /// `BA` self-adjoint for `H`.
    pub ba_hermitian: f64,
    /// `AB - (AB)^#` self-adjoint for the standard form on `W`.
    pub ab_hermitian: f64,
    /// `AB` acting on `W_0..W_3` as `Id, 2 Id, 0, 0`.
    pub ab_on_parts: [f64; 4],
    pub dims: [usize; 4],
}

impl LemmaResiduals {
    pub fn max(&self) -> f64 {
        let mut m = self.eq_a.max(self.eq_b).max(self.ba_hermitian).max(self.ab_hermitian);
        for r in self.ab_on_parts {
            m = m.max(r);
        }
        m
    }
}

/// Build `B: W -> U` and a Hermitian form on `U` solving the sl_2 equations
/// for `A: U -> W` (a `dim W x dim U` matrix).
pub fn lemma_b_from_a(a: &CMat, w: &BilinearSpace) -> Result<LemmaSolution> {
    let k = w.dim();
    let n = a.ncols();
    if a.nrows() != k {
        return Err(Error::Dimension(format!("A has {} rows, W has dimension {}", a.nrows(), k)));
    }
    if !matches!(w.kind, FormKind::Symmetric | FormKind::Symplectic) {
        return Err(Error::Rejected("W must carry the standard symmetric or symplectic form".into()));
    }
    let q = range_basis(a, RANK_TOL);
    let r = q.ncols();
    // radical of the form restricted to Im A, in coordinates of q
    // threshold against ||G||, not the restricted Gram, so a fully isotropic
    // image has the whole image as radical
    let restricted = q.transpose() * &w.gram * &q;
    let (_, sv, rv) = svd(&restricted);
    let thr = RANK_TOL * w.gram.norm();
    let rad_cols: Vec<CVec> = (0..r).filter(|&i| sv[i] <= thr).map(|i| rv.column(i).into_owned()).collect();
    let rad = if rad_cols.is_empty() { zeros(r, 0) } else { orthonormalize(&CMat::from_columns(&rad_cols), 1e-12) };
    let w0 = &q * &rad;
    let w1 = &q * complement(&rad, r);
    let w2 = &w.gram * w0.conjugate();
    // W_3 is the omega-orthogonal complement of W_0 + W_1 + W_2; it is
    // Hermitian-orthogonal to W_0 and W_2 but in general not to W_1
    let w012 = hcat(&[&w0, &w1, &w2], k);
    let w3 = orthonormalize(&null_space(&(w012.transpose() * &w.gram), RANK_TOL), 1e-12);

    let ap = mp_inverse(a);
    let u0 = &ap * &w0;
    let u1 = &ap * &w1;
    let u2 = null_space(a, RANK_TOL);

    let m = hcat(&[&w0, &w1, &w2, &w3], k);
    let minv = m
        .clone()
        .full_piv_lu()
        .try_inverse()
        .ok_or_else(|| Error::Rejected("W_0..W_3 do not span W".into()))?;
    let img = hcat(&[&u0, &(&u1 * real(2.0)), &zeros(n, w2.ncols() + w3.ncols())], n);
    let b = img * minv;

    let p = hcat(&[&u0, &u1, &u2], n);
    let pinv = p
        .clone()
        .full_piv_lu()
        .try_inverse()
        .ok_or_else(|| Error::Rejected("U_0, U_1, U_2 do not span U".into()))?;
    let hermitian_u = pinv.adjoint() * &pinv;
    Ok(LemmaSolution { b, hermitian_u, w_parts: [w0, w1, w2, w3], u_parts: [u0, u1, u2] })
}

pub fn lemma_residuals(a: &CMat, w: &BilinearSpace, sol: &LemmaSolution) -> Result<LemmaResiduals> {
    let b = &sol.b;
    let ab = a * b;
    let ab_sharp = sharp_adjoint(&ab, w)?;
    let two = real(2.0);
    let eq_a = (a * two - (&ab * a) * two + &ab_sharp * a).norm() / a.norm().max(1.0);
    let eq_b = (b * two - (b * a * b) * two + b * &ab_sharp).norm() / b.norm().max(1.0);
    let ba = b * a;
    let h = &sol.hermitian_u;
    let ba_hermitian = (h * &ba - ba.adjoint() * h).norm() / h.norm().max(1.0);
    let x = &ab - &ab_sharp;
    let ab_hermitian = (&x - x.adjoint()).norm();
    let scales = [1.0, 2.0, 0.0, 0.0];
    let mut ab_on_parts = [0.0; 4];
    let mut dims = [0; 4];
    for (t, part) in sol.w_parts.iter().enumerate() {
        ab_on_parts[t] = (&ab * part - part * real(scales[t])).norm();
        dims[t] = part.ncols();
    }
    Ok(LemmaResiduals { eq_a, eq_b, ba_hermitian, ab_hermitian, ab_on_parts, dims })
}

/// The pair `(A, B)` placed in `so(V)` or `sp(V)` for
/// `V = U^+ + W + U^-`, with the triple `e, h = [e, f], f` and the Hermitian
/// form on `V` induced by `H` on `U^- = U`.
pub fn embed_lemma_triple(a: &CMat, w: &BilinearSpace, form: FormType, sol: &LemmaSolution, tol: f64) -> Result<Sl2Triple> {
    let k = w.dim();
    let n = a.ncols();
    let eps = real(form.sign());
    let g = &w.gram;
    let ginv = g.clone().full_piv_lu().try_inverse().ok_or_else(|| Error::Rejected("degenerate form".into()))?;
    let dim = 2 * n + k;
    // block offsets: U^+ at 0, W at n, U^- at n + k
    let (up, wo, um) = (0, n, n + k);
    let mut e = zeros(dim, dim);
    e.view_mut((wo, um), (k, n)).copy_from(a);
    e.view_mut((up, wo), (n, k)).copy_from(&(a.transpose() * g * (-eps)));
    let mut f = zeros(dim, dim);
    f.view_mut((um, wo), (n, k)).copy_from(&sol.b);
    f.view_mut((wo, up), (k, n)).copy_from(&(&ginv * sol.b.transpose() * (-eps)));
    let h = bracket(&e, &f);
    let hu = &sol.hermitian_u;
    let hu_dual = hu
        .conjugate()
        .full_piv_lu()
        .try_inverse()
        .ok_or_else(|| Error::Rejected("Hermitian form on U is singular".into()))?;
    let mut kform = zeros(dim, dim);
    kform.view_mut((up, up), (n, n)).copy_from(&hu_dual);
    kform.view_mut((wo, wo), (k, k)).copy_from(&eye(k));
    kform.view_mut((um, um), (n, n)).copy_from(hu);
    verify_sl2(&e, &h, &f, Some(&kform), tol)
}

/// `Omega` on `U^+ + W + U^-` matching `embed_lemma_triple`.
pub fn lemma_ambient_form(n: usize, w: &BilinearSpace, form: FormType) -> CMat {
    let k = w.dim();
    let dim = 2 * n + k;
    let mut om = zeros(dim, dim);
    for i in 0..n {
        om[(i, n + k + i)] = real(1.0);
        om[(n + k + i, i)] = real(form.sign());
    }
    om.view_mut((n, n), (k, k)).copy_from(&w.gram);
    om
}
