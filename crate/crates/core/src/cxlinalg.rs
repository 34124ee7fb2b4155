//! Dense complex linear algebra: subspaces, the Moore-Penrose inverse,
//! bilinear forms and their adjoints.
//!
//! Rank decisions use a tolerance relative to the largest singular value.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const RANK_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn zeros(r: usize, cols: usize) -> CMat {
    CMat::zeros(r, cols)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let r = rows.len();
    let cols = if r == 0 { 0 } else { rows[0].len() };
    CMat::from_fn(r, cols, |i, j| real(rows[i][j]))
}

pub fn hcat(blocks: &[&CMat], rows: usize) -> CMat {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((0, at), (rows, b.ncols())).copy_from(b);
        at += b.ncols();
    }
    out
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub fn random_matrix<R: Rng>(rng: &mut R, r: usize, cols: usize) -> CMat {
    CMat::from_fn(r, cols, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Haar-like random unitary from the QR factor of a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    orthonormalize(&random_matrix(rng, n, n), 1e-12)
}

/// Matrix with prescribed singular values (padded with zeros).
pub fn with_singular_values<R: Rng>(rng: &mut R, r: usize, cols: usize, sigma: &[f64]) -> CMat {
    let u = random_unitary(rng, r);
    let v = random_unitary(rng, cols);
    let mut s = zeros(r, cols);
    for (i, &x) in sigma.iter().enumerate().take(r.min(cols)) {
        s[(i, i)] = real(x);
    }
    &u * s * v.adjoint()
}

/// Thin SVD pieces: left vectors, singular values (descending), right
/// vectors (as columns).
///
/// One-sided Jacobi: nalgebra's complex SVD loses up to 1e-4 in the
/// reconstruction on some small matrices with condition number near 1e6.
pub fn svd(m: &CMat) -> (CMat, Vec<f64>, CMat) {
    if m.nrows() == 0 || m.ncols() == 0 {
        return (zeros(m.nrows(), 0), Vec::new(), zeros(m.ncols(), 0));
    }
    if m.nrows() < m.ncols() {
        let (u, s, v) = svd(&m.adjoint());
        return (v, s, u);
    }
    let (rows, n) = m.shape();
    let mut a = m.clone();
    let mut v = eye(n);
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for mat in [&mut a, &mut v] {
                    for i in 0..mat.nrows() {
                        let x = mat[(i, p)];
                        let y = mat[(i, q)] * phase;
                        mat[(i, p)] = x * cs - y * sn;
                        mat[(i, q)] = x * sn + y * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sv: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| sv[y].partial_cmp(&sv[x]).unwrap());
    let sv: Vec<f64> = order.iter().map(|&k| sv[k]).collect();
    let v = CMat::from_fn(n, n, |i, k| v[(i, order[k])]);
    let mut cols: Vec<CVec> = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        if sv[k] > 0.0 {
            cols.push(a.column(j) / real(sv[k]));
        }
    }
    let nonzero = cols.len();
    let q = if nonzero == 0 { zeros(rows, 0) } else { CMat::from_columns(&cols) };
    let extra = complement(&q, rows);
    for j in 0..n - nonzero {
        cols.push(extra.column(j).into_owned());
    }
    (CMat::from_columns(&cols), sv, v)
}

fn numerical_rank(sv: &[f64], rel_tol: f64) -> usize {
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > rel_tol * top).count(),
        _ => 0,
    }
}

pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    numerical_rank(&svd(m).1, rel_tol)
}

/// Orthonormal basis of the column space.
pub fn range_basis(m: &CMat, rel_tol: f64) -> CMat {
    let (u, sv, _) = svd(m);
    let r = numerical_rank(&sv, rel_tol);
    u.columns(0, r).into_owned()
}

/// Orthonormal basis of the orthogonal complement of the kernel.
pub fn coimage_basis(m: &CMat, rel_tol: f64) -> CMat {
    let (_, sv, v) = svd(m);
    let r = numerical_rank(&sv, rel_tol);
    v.columns(0, r).into_owned()
}

/// Orthonormal basis of the kernel.
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    complement(&coimage_basis(m, rel_tol), m.ncols())
}

/// Modified Gram-Schmidt with one reorthogonalization pass; columns whose
/// residual falls below `tol` times their original norm are dropped.
pub fn orthonormalize(m: &CMat, tol: f64) -> CMat {
    let mut basis: Vec<CVec> = Vec::new();
    for j in 0..m.ncols() {
        let orig = m.column(j).into_owned();
        let n0 = orig.norm();
        if n0 == 0.0 {
            continue;
        }
        let mut v = orig;
        for _ in 0..2 {
            for q in &basis {
                let p = q.dotc(&v);
                v -= q * p;
            }
        }
        let nv = v.norm();
        if nv > tol * n0 {
            basis.push(v / real(nv));
        }
    }
    let rows = m.nrows();
    let cols: Vec<CVec> = basis;
    if cols.is_empty() {
        return zeros(rows, 0);
    }
    CMat::from_columns(&cols)
}

/// Orthonormal basis of the Hermitian complement of the span of the
/// orthonormal columns `q` in `C^n`.
pub fn complement(q: &CMat, n: usize) -> CMat {
    let k = q.ncols();
    if k >= n {
        return zeros(n, 0);
    }
    let mut cols: Vec<CVec> = (0..k).map(|j| q.column(j).into_owned()).collect();
    // squared residual of each standard vector against the current span
    let mut resid: Vec<f64> = (0..n).map(|i| 1.0 - (0..k).map(|j| q[(i, j)].norm_sqr()).sum::<f64>()).collect();
    let mut out: Vec<CVec> = Vec::new();
    while out.len() < n - k {
        // the standard vector with the largest residual, first on ties
        let top = resid.iter().cloned().fold(f64::MIN, f64::max);
        let i = resid.iter().position(|&r| r >= top - 1e-12).expect("n > 0");
        let mut v = CVec::zeros(n);
        v[i] = real(1.0);
        for _ in 0..2 {
            for b in &cols {
                let p = b.dotc(&v);
                v -= b * p;
            }
        }
        let v = &v / real(v.norm());
        for (r, x) in resid.iter_mut().zip(v.iter()) {
            *r -= x.norm_sqr();
        }
        cols.push(v.clone());
        out.push(v);
    }
    CMat::from_columns(&out)
}

/// Moore-Penrose inverse by the geometric construction: `F` restricts to a
/// bijection from the Hermitian complement of its kernel onto its image;
/// invert it there and extend by zero on the complement of the image.
pub fn mp_inverse(f: &CMat) -> CMat {
    mp_inverse_tol(f, RANK_TOL)
}

pub fn mp_inverse_tol(f: &CMat, rel_tol: f64) -> CMat {
    let (u, sv, v) = svd(f);
    let r = numerical_rank(&sv, rel_tol);
    if r == 0 {
        return zeros(f.ncols(), f.nrows());
    }
    // orthonormal bases of Ker^perp (columns of p) and Im (columns of q);
    // in these bases the restricted map is diag(sv)
    let p = v.columns(0, r);
    let q = u.columns(0, r);
    let inv = CMat::from_diagonal(&CVec::from_fn(r, |i, _| real(1.0 / sv[i])));
    p * inv * q.adjoint()
}

/// Tikhonov limit `(F* F + delta I)^{-1} F*`, an independent route to `F+`.
pub fn mp_inverse_regularized(f: &CMat, delta: f64) -> CMat {
    let n = f.ncols();
    let a = f.adjoint() * f + eye(n) * real(delta);
    let inv = a.full_piv_lu().try_inverse().unwrap_or_else(|| zeros(n, n));
    inv * f.adjoint()
}

/// Relative residuals of the four Penrose equations, each normalized by the
/// product of the norms of its factors:
/// `[F F+ F = F, F+ F F+ = F+, F F+ Hermitian, F+ F Hermitian]`.
pub fn penrose_residuals(f: &CMat, fp: &CMat) -> [f64; 4] {
    let nf = f.norm();
    let np = fp.norm();
    if nf == 0.0 || np == 0.0 {
        return [f.norm(), fp.norm(), 0.0, 0.0];
    }
    let ffp = f * fp;
    let fpf = fp * f;
    [
        (&ffp * f - f).norm() / (nf * nf * np),
        (&fpf * fp - fp).norm() / (np * np * nf),
        (&ffp - ffp.adjoint()).norm() / (nf * np),
        (&fpf - fpf.adjoint()).norm() / (nf * np),
    ]
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).norm() <= tol * m.norm().max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum FormKind {
    /// Matrix `Id`.
    Symmetric,
    /// Matrix `[[0, Id], [-Id, 0]]`.
    Symplectic,
    /// `det` on `C^2 (x) C^2`, basis `e_i (x) f_j` at index `2i + j`.
    Det2x2,
    /// `Pf` on `Lambda^2 C^4`, basis `12, 13, 14, 23, 24, 34`.
    Pfaffian4,
    /// Spinor form on `Lambda^* C^m`.
    Spinor(usize),
    /// Any other nondegenerate symmetric or skew form.
    Other,
}

/// A space with a nondegenerate bilinear form `w(x, y) = x^T G y`.
#[derive(Clone, Debug)]
pub struct BilinearSpace {
    pub kind: FormKind,
    pub gram: CMat,
}

/// Index of `e_i ^ e_j` (`i < j`, 0-based) in the basis of `Lambda^2 C^4`.
pub fn wedge2_index(i: usize, j: usize) -> usize {
    const IDX: [[usize; 4]; 4] = [[9, 0, 1, 2], [0, 9, 3, 4], [1, 3, 9, 5], [2, 4, 5, 9]];
    assert!(i != j && i < 4 && j < 4);
    IDX[i][j]
}

/// Pairs `(i, j)` in the basis order of `Lambda^2 C^4`.
pub const WEDGE2_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl BilinearSpace {
    pub fn symmetric(n: usize) -> Self {
        BilinearSpace { kind: FormKind::Symmetric, gram: eye(n) }
    }

    pub fn symplectic(n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::Dimension(format!("symplectic form needs even dimension, got {}", n)));
        }
        let h = n / 2;
        let mut g = zeros(n, n);
        for i in 0..h {
            g[(i, h + i)] = real(1.0);
            g[(h + i, i)] = real(-1.0);
        }
        Ok(BilinearSpace { kind: FormKind::Symplectic, gram: g })
    }

    /// Polarization of `det`, so that `q(x) = x^T G x / 2 = det`.
    pub fn det2x2() -> Self {
        let mut g = zeros(4, 4);
        g[(0, 3)] = real(1.0);
        g[(3, 0)] = real(1.0);
        g[(1, 2)] = real(-1.0);
        g[(2, 1)] = real(-1.0);
        BilinearSpace { kind: FormKind::Det2x2, gram: g }
    }

    /// Polarization of `Pf(x) = x12 x34 - x13 x24 + x14 x23`.
    pub fn pfaffian4() -> Self {
        let mut g = zeros(6, 6);
        for (a, b, s) in [(0, 5, 1.0), (1, 4, -1.0), (2, 3, 1.0)] {
            g[(a, b)] = real(s);
            g[(b, a)] = real(s);
        }
        BilinearSpace { kind: FormKind::Pfaffian4, gram: g }
    }

    pub fn from_gram(kind: FormKind, gram: CMat) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::Dimension("gram matrix is not square".into()));
        }
        Ok(BilinearSpace { kind, gram })
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn form(&self, x: &CVec, y: &CVec) -> C64 {
        (x.transpose() * &self.gram * y)[(0, 0)]
    }

    /// `{u, v} = w(u, I^T conj(v))`.
    pub fn hermitian(&self, u: &CVec, v: &CVec) -> C64 {
        let w = self.gram.transpose() * v.conjugate();
        self.form(u, &w)
    }

    /// `det` or `Pf` of a vector.
    pub fn quadratic_value(&self, x: &CVec) -> Result<C64> {
        match self.kind {
            FormKind::Det2x2 | FormKind::Pfaffian4 => {
                if x.len() != self.dim() {
                    return Err(Error::Dimension(format!("vector of length {} for dimension {}", x.len(), self.dim())));
                }
                Ok(self.form(x, x) * 0.5)
            }
            _ => Err(Error::Rejected("quadratic value is defined for det and Pf only".into())),
        }
    }
}

/// `A^#` with `w(A x, y) = w(x, A^# y)`, i.e. `G^{-1} A^T G`.
pub fn sharp_adjoint(a: &CMat, space: &BilinearSpace) -> Result<CMat> {
    let n = space.dim();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::Dimension(format!("{}x{} operator on a {}-dimensional space", a.nrows(), a.ncols(), n)));
    }
    let ginv = space
        .gram
        .clone()
        .full_piv_lu()
        .try_inverse()
        .ok_or_else(|| Error::Rejected("degenerate form".into()))?;
    Ok(ginv * a.transpose() * &space.gram)
}

/// Rank of the span of the columns of `s` and the dimension of the radical
/// of the form restricted to that span.
pub fn restriction_invariants(s: &CMat, space: &BilinearSpace) -> Result<(usize, usize)> {
    restriction_invariants_tol(s, space, RANK_TOL)
}

pub fn restriction_invariants_tol(s: &CMat, space: &BilinearSpace, rel_tol: f64) -> Result<(usize, usize)> {
    if s.nrows() != space.dim() {
        return Err(Error::Dimension(format!("vectors of length {} in a {}-dimensional space", s.nrows(), space.dim())));
    }
    let q = range_basis(s, rel_tol);
    let r = q.ncols();
    if r == 0 {
        return Ok((0, 0));
    }
    let gr = q.transpose() * &space.gram * &q;
    let scale = space.gram.norm().max(f64::MIN_POSITIVE);
    let (_, sv, _) = svd(&gr);
    let k = sv.iter().filter(|&&x| x > rel_tol * scale).count();
    Ok((r, r - k))
}

/// Gram matrix `S^T G S` of the restriction to the columns of `s`.
pub fn restricted_gram(s: &CMat, space: &BilinearSpace) -> CMat {
    s.transpose() * &space.gram * s
}
