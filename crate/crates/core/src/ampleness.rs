//! Ampleness of tensors in quadratic spaces and searches for ample
//! deformations.
//!
//! A tensor `A in C^k (x) R` is handled as the matrix whose columns are the
//! images of the dual basis of `C^k`, so its image is the column span. It
//! is ample when the form of `R` restricted to the image is zero or
//! nondegenerate.
//!
//! Every deformation family here is affine in its unknown (`C`, `E`, `f`,
//! `v`, `x`, ...), so the search works on `D(t) = D_0 + sum t_j L_j` with
//! `L_j` read off the defining formula.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cxlinalg::{
    c, hcat, mp_inverse, null_space, random_matrix, random_vector, range_basis, rank, real, restriction_invariants_tol,
    svd, zeros, BilinearSpace, CMat, CVec, FormKind, C64, RANK_TOL,
};
use crate::error::{Error, Result};
use crate::spinor::{exterior_basis, lift, project, wedge, Parity, SpinModule};

pub const AMPLE_TOL: f64 = 1e-9;
const LINE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    AmpleNondegenerate,
    AmpleIsotropic,
    NotAmple,
}

impl Classification {
    pub fn is_ample(self) -> bool {
        self != Classification::NotAmple
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(match self {
            Classification::AmpleNondegenerate => "ample-nondeg",
            Classification::AmpleIsotropic => "ample-isotropic",
            Classification::NotAmple => "not-ample",
        })
    }
}

fn classify_invariants(rank: usize, kernel: usize) -> Classification {
    if kernel == rank {
        Classification::AmpleIsotropic
    } else if kernel == 0 {
        Classification::AmpleNondegenerate
    } else {
        Classification::NotAmple
    }
}

/// Classification of the column span of `a` in `space`.
pub fn is_ample(space: &BilinearSpace, a: &CMat) -> Result<Classification> {
    let (r, k) = restriction_invariants_tol(a, space, AMPLE_TOL)?;
    Ok(classify_invariants(r, k))
}

/// Second route to the classification: radical dimension as
/// `rank D - rank D^T G D`, without orthonormalizing the image.
pub fn is_ample_by_gram(space: &BilinearSpace, d: &CMat) -> Result<Classification> {
    if d.nrows() != space.dim() {
        return Err(Error::Dimension("vectors do not live in the space".into()));
    }
    let (_, sd, _) = svd(d);
    let top = sd.first().copied().unwrap_or(0.0);
    let r = sd.iter().filter(|&&s| s > AMPLE_TOL * top).count();
    let g = d.transpose() * &space.gram * d;
    let (_, sg, _) = svd(&g);
    let thr = AMPLE_TOL * top * top * space.gram.norm();
    let rg = sg.iter().filter(|&&s| s > thr).count();
    Ok(classify_invariants(r, r.saturating_sub(rg)))
}

/// Nonzero up to tolerance.
pub fn is_nontrivial(m: &CMat) -> bool {
    m.norm() > RANK_TOL
}

/// Subvarieties of `P(V)` cut out by quadrics that the line test supports.
#[derive(Clone, Debug)]
pub enum TwoVariety {
    /// Zero set of one nondegenerate quadratic form.
    Quadric(BilinearSpace),
    /// Rank-one tensors in `C^2 (x) C^k`, coordinate `i k + j`.
    Segre(usize),
    /// Decomposable vectors in `Lambda^2 C^4`.
    Plucker,
}

impl TwoVariety {
    pub fn ambient_dim(&self) -> usize {
        match self {
            TwoVariety::Quadric(s) => s.dim(),
            TwoVariety::Segre(k) => 2 * k,
            TwoVariety::Plucker => 6,
        }
    }

    pub fn name(&self) -> String {
        match self {
            TwoVariety::Quadric(s) => format!("quadric:{}", s.dim()),
            TwoVariety::Segre(k) => format!("segre:{}", k),
            TwoVariety::Plucker => "plucker".into(),
        }
    }

    /// Gram matrices of the defining quadrics `x^T G x`.
    pub fn quadrics(&self) -> Vec<CMat> {
        match self {
            TwoVariety::Quadric(s) => vec![s.gram.clone()],
            TwoVariety::Plucker => vec![BilinearSpace::pfaffian4().gram],
            TwoVariety::Segre(k) => {
                let k = *k;
                let mut out = Vec::new();
                for j1 in 0..k {
                    for j2 in j1 + 1..k {
                        let mut g = zeros(2 * k, 2 * k);
                        let (a, b) = (j1, k + j2);
                        let (x, y) = (j2, k + j1);
                        g[(a, b)] = real(0.5);
                        g[(b, a)] = real(0.5);
                        g[(x, y)] = real(-0.5);
                        g[(y, x)] = real(-0.5);
                        out.push(g);
                    }
                }
                out
            }
        }
    }

    pub fn contains(&self, v: &CVec) -> bool {
        let n2 = v.norm_squared();
        n2 > 0.0 && self.quadrics().iter().all(|g| (v.transpose() * g * v)[(0, 0)].norm() <= LINE_TOL * n2 * g.norm())
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> CVec {
        match self {
            TwoVariety::Quadric(s) => random_isotropic(rng, &s.gram, &crate::cxlinalg::eye(s.dim())),
            TwoVariety::Segre(k) => {
                let a = random_vector(rng, 2);
                let b = random_vector(rng, *k);
                CVec::from_fn(2 * k, |idx, _| a[idx / k] * b[idx % k])
            }
            TwoVariety::Plucker => {
                let a = random_vector(rng, 4);
                let b = random_vector(rng, 4);
                CVec::from_fn(6, |idx, _| {
                    let (i, j) = crate::cxlinalg::WEDGE2_PAIRS[idx];
                    a[i] * b[j] - a[j] * b[i]
                })
            }
        }
    }

    /// Common kernel of the differentials of the quadrics at `p`.
    pub fn tangent_space(&self, p: &CVec) -> CMat {
        let qs = self.quadrics();
        let n = self.ambient_dim();
        let mut m = zeros(qs.len(), n);
        for (l, g) in qs.iter().enumerate() {
            let row = (g * p).transpose();
            m.row_mut(l).copy_from(&row);
        }
        null_space(&m, RANK_TOL)
    }

    /// A line `span{p, q}` with `p` on the variety and `q` tangent there but
    /// off it, so the line meets the variety only at `p`.
    pub fn random_degenerate_line<R: Rng>(&self, rng: &mut R) -> CMat {
        loop {
            let p = self.random_point(rng);
            let t = self.tangent_space(&p);
            let q = &t * random_vector(rng, t.ncols());
            if self.contains(&q) {
                continue;
            }
            let a = hcat(&[&CMat::from_column_slice(p.len(), 1, p.as_slice()), &CMat::from_column_slice(q.len(), 1, q.as_slice())], p.len());
            let a = a * random_matrix(rng, 2, 2);
            if is_degenerate_line_map(&a, self).unwrap_or(false) {
                return a;
            }
        }
    }
}

impl FromStr for TwoVariety {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        let num = |a: &str| -> Result<usize> { a.parse().map_err(|_| Error::Config(format!("bad variety size {:?}", a))) };
        match kind {
            "quadric" => Ok(TwoVariety::Quadric(BilinearSpace::symmetric(num(arg)?))),
            "segre" => Ok(TwoVariety::Segre(num(arg)?)),
            "plucker" => Ok(TwoVariety::Plucker),
            _ => Err(Error::Config(format!("unsupported variety {:?}", s))),
        }
    }
}

/// How a projective line meets a 2-variety.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LineMeet {
    Empty,
    Point,
    TwoPoints,
    Contained,
}

/// Intersection of `P(span(columns of a))` with the variety; `None` when the
/// columns do not span a plane.
pub fn line_meet(a: &CMat, x: &TwoVariety) -> Result<Option<LineMeet>> {
    if a.nrows() != x.ambient_dim() {
        return Err(Error::Dimension(format!("map into C^{}, variety lives in C^{}", a.nrows(), x.ambient_dim())));
    }
    let q = range_basis(a, RANK_TOL);
    if q.ncols() != 2 {
        return Ok(None);
    }
    let (p1, p2) = (q.column(0).into_owned(), q.column(1).into_owned());
    let qs = x.quadrics();
    let scale = qs.iter().map(|g| g.norm()).fold(0.0, f64::max);
    // binary quadratic c0 s^2 + c1 s t + c2 t^2 per quadric
    let mut coeffs = zeros(qs.len(), 3);
    for (l, g) in qs.iter().enumerate() {
        let b = |u: &CVec, v: &CVec| (u.transpose() * g * v)[(0, 0)];
        coeffs[(l, 0)] = b(&p1, &p1);
        coeffs[(l, 1)] = b(&p1, &p2) * 2.0;
        coeffs[(l, 2)] = b(&p2, &p2);
    }
    let (_, sv, v) = svd(&coeffs);
    let d = sv.iter().filter(|&&s| s > LINE_TOL * scale).count();
    Ok(Some(match d {
        0 => LineMeet::Contained,
        1 => {
            let f: Vec<C64> = (0..3).map(|i| v[(i, 0)].conj()).collect();
            let disc = f[1] * f[1] - f[0] * f[2] * 4.0;
            if disc.norm() <= LINE_TOL {
                LineMeet::Point
            } else {
                LineMeet::TwoPoints
            }
        }
        2 => {
            // a common root [s:t] means (s^2, st, t^2) spans the annihilator
            let rows = CMat::from_fn(2, 3, |r, i| v[(i, r)].conj());
            let n = null_space(&rows, RANK_TOL);
            let n = n.column(0);
            if (n[1] * n[1] - n[0] * n[2]).norm() <= LINE_TOL {
                LineMeet::Point
            } else {
                LineMeet::Empty
            }
        }
        _ => LineMeet::Empty,
    }))
}

/// `A: C^2 -> V` is degenerate when its image is a plane whose line meets
/// the variety in exactly one point.
pub fn is_degenerate_line_map(a: &CMat, x: &TwoVariety) -> Result<bool> {
    if a.ncols() != 2 {
        return Err(Error::Dimension(format!("line maps have 2 columns, got {}", a.ncols())));
    }
    Ok(line_meet(a, x)? == Some(LineMeet::Point))
}

/// Random `v` with `v^T G v = 0` inside the column span of `basis`.
fn random_isotropic<R: Rng>(rng: &mut R, g: &CMat, basis: &CMat) -> CVec {
    let d = basis.ncols();
    loop {
        let v = basis * random_vector(rng, d);
        let w = basis * random_vector(rng, d);
        let a = (w.transpose() * g * &w)[(0, 0)];
        let b = (v.transpose() * g * &w)[(0, 0)];
        let cc = (v.transpose() * g * &v)[(0, 0)];
        if a.norm() < 1e-8 {
            if cc.norm() < 1e-12 {
                return v;
            }
            continue;
        }
        let t = (-b + (b * b - a * cc).sqrt()) / a;
        let x = v + w * t;
        if x.norm() > 1e-6 {
            return &x / real(x.norm());
        }
    }
}

/// Random subspace of a symmetric space with Witt invariants `(i, j)`:
/// `j`-dimensional radical inside an `i`-dimensional span.
pub fn random_subspace_with_invariants<R: Rng>(rng: &mut R, space: &BilinearSpace, i: usize, j: usize) -> Result<CMat> {
    let n = space.dim();
    if j > i || i > n || i + j > n {
        return Err(Error::Rejected(format!("no subspace with invariants ({}, {}) in dimension {}", i, j, n)));
    }
    let g = &space.gram;
    for _ in 0..50 {
        let mut iso: Vec<CVec> = Vec::new();
        let perp = |iso: &Vec<CVec>| -> CMat {
            if iso.is_empty() {
                return crate::cxlinalg::eye(n);
            }
            let m = CMat::from_fn(iso.len(), n, |r, col| (g.transpose() * &iso[r])[col]);
            null_space(&m, RANK_TOL)
        };
        while iso.len() < j {
            let p = perp(&iso);
            iso.push(random_isotropic(rng, g, &p));
        }
        let p = perp(&iso);
        let mut cols: Vec<CVec> = iso.clone();
        for _ in 0..i - j {
            cols.push(&p * random_vector(rng, p.ncols()));
        }
        let s = if cols.is_empty() { zeros(n, 0) } else { CMat::from_columns(&cols) };
        if restriction_invariants_tol(&s, space, AMPLE_TOL)? == (i, j) {
            return Ok(s);
        }
    }
    Err(Error::Exhausted(50))
}

/// Random `dim x k` matrix whose column span is degenerate but not trivial.
pub fn random_not_ample<R: Rng>(rng: &mut R, space: &BilinearSpace, k: usize) -> Result<CMat> {
    let n = space.dim();
    let mut choices = Vec::new();
    for i in 2..=k.min(n) {
        for j in 1..i {
            if i + j <= n {
                choices.push((i, j));
            }
        }
    }
    if choices.is_empty() {
        return Err(Error::Rejected(format!("every map C^{} -> C^{} is ample", k, n)));
    }
    let (i, j) = choices[rng.random_range(0..choices.len())];
    let s = random_subspace_with_invariants(rng, space, i, j)?;
    let a = s * random_matrix(rng, i, k);
    if is_ample(space, &a)?.is_ample() {
        return Err(Error::Rejected("generated map is ample".into()));
    }
    Ok(a)
}

/// All pairs `(i, j)` with `0 <= i <= min(dv, dw)` and
/// `0 <= j <= min(i, dw - i)`.
pub fn witt_pairs(dim_v: usize, dim_w: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..=dim_v.min(dim_w) {
        for j in 0..=i.min(dim_w - i) {
            out.push((i, j));
        }
    }
    out
}

// Exterior algebra in lexicographic coordinates.

fn wedge_lex(n: usize, ka: usize, a: &CVec, kb: usize, b: &CVec) -> CVec {
    project(n, ka + kb, &wedge(&lift(n, ka, a), &lift(n, kb, b)))
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let mask = (1u32 << i) | (1u32 << j);
    exterior_basis(n, 2).iter().position(|&m| m == mask).expect("pair")
}

fn unit(n: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[i] = real(1.0);
    v
}

fn col(m: &CMat, j: usize) -> CVec {
    m.column(j).into_owned()
}

fn as_col(v: &CVec) -> CMat {
    CMat::from_column_slice(v.len(), 1, v.as_slice())
}

/// `Lambda^2 C^4` vector from `(i, j, coefficient)` terms, 1-based indices.
pub fn l2(terms: &[(usize, usize, f64)]) -> CVec {
    let mut v = CVec::zeros(6);
    for &(i, j, x) in terms {
        let (a, b) = (i - 1, j - 1);
        let (lo, hi, s) = if a < b { (a, b, x) } else { (b, a, -x) };
        v[pair_index(4, lo, hi)] += real(s);
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Variant {
    V1A,
    V1B,
    V1C,
    V4A,
    V4B,
    V5A,
    V5B,
    V5C,
    V6A,
    V6B,
    V6C,
    V6D,
    V6E,
    V7A,
    V7B,
    V7C,
}

pub const ALL_VARIANTS: [Variant; 16] = [
    Variant::V1A,
    Variant::V1B,
    Variant::V1C,
    Variant::V4A,
    Variant::V4B,
    Variant::V5A,
    Variant::V5B,
    Variant::V5C,
    Variant::V6A,
    Variant::V6B,
    Variant::V6C,
    Variant::V6D,
    Variant::V6E,
    Variant::V7A,
    Variant::V7B,
    Variant::V7C,
];

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::V1A => "1A",
            Variant::V1B => "1B",
            Variant::V1C => "1C",
            Variant::V4A => "4A",
            Variant::V4B => "4B",
            Variant::V5A => "5A",
            Variant::V5B => "5B",
            Variant::V5C => "5C",
            Variant::V6A => "6A",
            Variant::V6B => "6B",
            Variant::V6C => "6C",
            Variant::V6D => "6D",
            Variant::V6E => "6E",
            Variant::V7A => "7A",
            Variant::V7B => "7B",
            Variant::V7C => "7C",
        }
    }

    /// Name of the unknown the search produces.
    pub fn unknown(self) -> &'static str {
        match self {
            Variant::V1A | Variant::V4A | Variant::V5B | Variant::V6A | Variant::V6B | Variant::V6D | Variant::V6E => "C",
            Variant::V1B | Variant::V5A => "E",
            Variant::V1C | Variant::V4B => "f",
            Variant::V5C => "A",
            Variant::V6C => "B",
            Variant::V7A => "v",
            Variant::V7B => "x",
            Variant::V7C => "w",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ALL_VARIANTS
            .iter()
            .copied()
            .find(|v| v.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown variant {:?}", s)))
    }
}

/// What the deformed object must satisfy.
#[derive(Clone, Debug)]
pub enum Goal {
    Ample(BilinearSpace),
    NondegenerateLine(TwoVariety),
    Rank(usize),
}

/// Named input tensors of a deformation problem.
#[derive(Clone, Debug, Default)]
pub struct DeformInputs {
    pub mats: BTreeMap<String, CMat>,
    pub variety: Option<TwoVariety>,
}

impl DeformInputs {
    pub fn get(&self, name: &str) -> Result<&CMat> {
        self.mats.get(name).ok_or_else(|| Error::Config(format!("missing input {:?}", name)))
    }

    pub fn with(mut self, name: &str, m: CMat) -> Self {
        self.mats.insert(name.to_string(), m);
        self
    }

    fn variety(&self) -> Result<&TwoVariety> {
        self.variety.as_ref().ok_or_else(|| Error::Config("missing variety".into()))
    }
}

fn half_spaces() -> (SpinModule, BilinearSpace, BilinearSpace) {
    let sm = SpinModule::new(4).expect("m = 4");
    let plus = sm.half_space(Parity::Even).expect("even m");
    let minus = sm.half_space(Parity::Odd).expect("even m");
    (sm, plus, minus)
}

fn expect_shape(name: &str, m: &CMat, rows: usize, cols: usize) -> Result<()> {
    if m.nrows() != rows || m.ncols() != cols {
        return Err(Error::Dimension(format!(
            "{} is {}x{}, expected {}x{}",
            name,
            m.nrows(),
            m.ncols(),
            rows,
            cols
        )));
    }
    Ok(())
}

/// `4 x 3` det-view of a map `C^2 -> C^2 (x) C^3` stored as a `6 x 2`
/// matrix with row `3 a + c`: column `c` is the matrix `[s][a]` flattened
/// at `2 s + a`.
fn det_view_2x3(m: &CMat) -> CMat {
    CMat::from_fn(4, 3, |r, cc| {
        let (s, a) = (r / 2, r % 2);
        m[(a * 3 + cc, s)]
    })
}

/// Shape of the unknown for the given inputs.
pub fn unknown_shape(v: Variant, inp: &DeformInputs) -> Result<(usize, usize)> {
    Ok(match v {
        Variant::V1A | Variant::V4A => (inp.get("A")?.nrows(), inp.get("B")?.nrows()),
        Variant::V1B => (2, 2),
        Variant::V1C | Variant::V4B => (1, inp.get("A")?.ncols()),
        Variant::V5A => (2, 6),
        Variant::V5B => (2, 3),
        Variant::V5C => (3, 2),
        Variant::V6A => (4, 2),
        Variant::V6B => (2, 4),
        Variant::V6C => (4, 2),
        Variant::V6D | Variant::V6E => (4, 4),
        Variant::V7A => (8, 1),
        Variant::V7B | Variant::V7C => (8, 3),
    })
}

/// Goal of the variant.
pub fn goal(v: Variant, inp: &DeformInputs) -> Result<Goal> {
    Ok(match v {
        Variant::V1A | Variant::V1B | Variant::V1C => Goal::NondegenerateLine(inp.variety()?.clone()),
        Variant::V4A | Variant::V4B => Goal::Ample(BilinearSpace::symmetric(inp.get("A")?.nrows())),
        Variant::V5A | Variant::V5B | Variant::V6A => Goal::Ample(BilinearSpace::det2x2()),
        Variant::V5C => Goal::Rank(2),
        Variant::V6B | Variant::V6C | Variant::V6D | Variant::V6E => Goal::Ample(BilinearSpace::pfaffian4()),
        Variant::V7A | Variant::V7B | Variant::V7C => Goal::Ample(half_spaces().2),
    })
}

/// The deformed object for unknown `w`, in the view where the goal is
/// tested (columns span the image).
pub fn apply(v: Variant, inp: &DeformInputs, w: &CMat) -> Result<CMat> {
    let (r, cc) = unknown_shape(v, inp)?;
    expect_shape(v.unknown(), w, r, cc)?;
    match v {
        Variant::V1A | Variant::V4A => {
            let a = inp.get("A")?;
            let b = inp.get("B")?;
            expect_shape("B", b, b.nrows(), a.ncols())?;
            Ok(a + w * b)
        }
        Variant::V1B => {
            let a = inp.get("A")?;
            let b = inp.get("B")?;
            expect_shape("B", b, a.nrows(), 2)?;
            Ok(a + b * w)
        }
        Variant::V1C | Variant::V4B => {
            let a = inp.get("A")?;
            let vv = inp.get("v")?;
            expect_shape("v", vv, a.nrows(), 1)?;
            Ok(a + vv * w)
        }
        Variant::V5A => {
            let a = inp.get("A")?;
            let b = inp.get("B")?;
            expect_shape("A", a, 6, 2)?;
            expect_shape("B", b, 6, 2)?;
            let mut ea = zeros(6, 2);
            for s in 0..2 {
                for l in 0..3 {
                    for cidx in 0..3 {
                        if l == cidx {
                            continue;
                        }
                        let pw = wedge_lex(3, 1, &unit(3, l), 1, &unit(3, cidx));
                        for wi in 0..3 {
                            if pw[wi] == c(0.0, 0.0) {
                                continue;
                            }
                            for a2 in 0..2 {
                                for a1 in 0..2 {
                                    ea[(a2 * 3 + wi, s)] += w[(a2, 2 * l + a1)] * a[(a1 * 3 + cidx, s)] * pw[wi];
                                }
                            }
                        }
                    }
                }
            }
            Ok(det_view_2x3(&(b + ea)))
        }
        Variant::V5B => {
            let a = inp.get("A")?;
            let b = inp.get("B")?;
            expect_shape("A", a, 4, 3)?;
            expect_shape("B", b, 2, 3)?;
            let mut d = a.clone();
            for (p, &mask) in exterior_basis(3, 2).iter().enumerate() {
                let x = mask.trailing_zeros() as usize;
                let y = 31 - mask.leading_zeros() as usize;
                for i in 0..2 {
                    for j in 0..2 {
                        d[(2 * i + j, p)] += b[(i, x)] * w[(j, y)] - b[(i, y)] * w[(j, x)];
                    }
                }
            }
            Ok(d)
        }
        Variant::V5C => {
            let vv = inp.get("v")?;
            let b = inp.get("B")?;
            expect_shape("v", vv, 3, 1)?;
            expect_shape("B", b, 3, 2)?;
            let v0 = col(vv, 0);
            let mut d = b.clone();
            for f in 0..2 {
                let x = wedge_lex(3, 1, &v0, 1, &col(w, f));
                for p in 0..3 {
                    d[(p, f)] += x[p];
                }
            }
            Ok(d)
        }
        Variant::V6A => {
            let a = inp.get("A")?;
            let b = inp.get("B")?;
            expect_shape("A", a, 6, 2)?;
            expect_shape("B", b, 4, 4)?;
            let mut d = b.clone();
            for s in 0..2 {
                for t in 0..2 {
                    let x = wedge_lex(4, 2, &col(a, s), 1, &col(w, t));
                    for r3 in 0..4 {
                        d[(r3, 2 * s + t)] += x[r3];
                    }
                }
            }
            Ok(d.transpose())
        }
        Variant::V6B => {
            let a = inp.get("A")?;
            let b = inp.get("B")?;
            expect_shape("A", a, 2, 6)?;
            expect_shape("B", b, 4, 4)?;
            let mut d = a.clone();
            let contract = |bx: usize, cy: usize, j: usize| -> C64 { (0..2).map(|i| w[(i, cy)] * b[(2 * i + j, bx)]).sum() };
            for (p, &(x, y)) in crate::cxlinalg::WEDGE2_PAIRS.iter().enumerate() {
                for j in 0..2 {
                    d[(j, p)] += contract(x, y, j) - contract(y, x, j);
                }
            }
            Ok(d.transpose())
        }
        Variant::V6C => {
            let a = inp.get("A")?;
            let ww = inp.get("w")?;
            expect_shape("A", a, 6, 2)?;
            expect_shape("w", ww, 4, 1)?;
            let mut d = a.clone();
            for s in 0..2 {
                let x = wedge_lex(4, 1, &col(ww, 0), 1, &col(w, s));
                for p in 0..6 {
                    d[(p, s)] += x[p];
                }
            }
            Ok(d)
        }
        Variant::V6D => {
            let a = inp.get("A")?;
            let b = inp.get("B")?;
            expect_shape("A", a, 6, 4)?;
            expect_shape("B", b, 6, 4)?;
            let mut d = b.clone();
            for (p, &(i, j)) in crate::cxlinalg::WEDGE2_PAIRS.iter().enumerate() {
                let x = wedge_lex(4, 2, &col(a, i), 1, &col(w, j)) - wedge_lex(4, 2, &col(a, j), 1, &col(w, i));
                for t in 0..4 {
                    d[(p, t)] += x[t];
                }
            }
            Ok(d)
        }
        Variant::V6E => {
            let a = inp.get("A")?;
            let u = inp.get("u")?;
            expect_shape("A", a, 6, 4)?;
            expect_shape("u", u, 4, 1)?;
            let mut d = a.clone();
            for bcol in 0..4 {
                let x = wedge_lex(4, 1, &col(w, bcol), 1, &col(u, 0));
                for p in 0..6 {
                    d[(p, bcol)] += x[p];
                }
            }
            Ok(d)
        }
        Variant::V7A => {
            let a = inp.get("A")?;
            let b = inp.get("B")?;
            let k = a.ncols();
            expect_shape("A", a, 8, k)?;
            expect_shape("B", b, 8, k)?;
            let sm = SpinModule::new(4)?;
            let rho = sm.rho_half(&col(w, 0), Parity::Even)?;
            Ok(b + rho * a)
        }
        Variant::V7B => {
            let a = inp.get("A")?;
            let b = inp.get("B")?;
            expect_shape("A", a, 8, 3)?;
            expect_shape("B", b, 8, 3)?;
            let sm = SpinModule::new(4)?;
            let rhos: Vec<CMat> = (0..3).map(|j| sm.rho_half(&col(w, j), Parity::Even)).collect::<Result<_>>()?;
            let mut d = b.clone();
            for (p, &mask) in exterior_basis(3, 2).iter().enumerate() {
                let i = mask.trailing_zeros() as usize;
                let j = 31 - mask.leading_zeros() as usize;
                let x = &rhos[j] * col(a, i) - &rhos[i] * col(a, j);
                for t in 0..8 {
                    d[(t, p)] += x[t];
                }
            }
            Ok(d)
        }
        Variant::V7C => {
            let a = inp.get("A")?;
            let s = inp.get("s")?;
            expect_shape("A", a, 8, 3)?;
            expect_shape("s", s, 8, 1)?;
            let sm = SpinModule::new(4)?;
            let mut d = a.clone();
            for i in 0..3 {
                let x = sm.rho_half(&col(w, i), Parity::Even)? * col(s, 0);
                for t in 0..8 {
                    d[(t, i)] += x[t];
                }
            }
            Ok(d)
        }
    }
}

/// Does the deformed object satisfy the goal?
pub fn goal_met(goal: &Goal, d: &CMat) -> Result<bool> {
    Ok(match goal {
        Goal::Ample(space) => is_ample(space, d)?.is_ample(),
        Goal::NondegenerateLine(x) => !is_degenerate_line_map(d, x)?,
        Goal::Rank(r) => rank(d, AMPLE_TOL) == *r,
    })
}

/// Recheck by a different route than `goal_met`.
fn goal_met_independent(goal: &Goal, d: &CMat) -> Result<bool> {
    Ok(match goal {
        Goal::Ample(space) => is_ample_by_gram(space, d)?.is_ample(),
        Goal::NondegenerateLine(x) => {
            // rank below two, or the pencil misses the variety or meets it
            // twice or lies on it
            match line_meet(d, x)? {
                None => true,
                Some(m) => m != LineMeet::Point,
            }
        }
        Goal::Rank(r) => {
            let (_, sv, _) = svd(d);
            let top = sv.first().copied().unwrap_or(0.0);
            sv.iter().filter(|&&s| s > AMPLE_TOL * top.max(1e-300)).count() == *r
        }
    })
}

/// Validate the hypotheses of the statement on the inputs.
pub fn check_hypotheses(v: Variant, inp: &DeformInputs) -> Result<()> {
    let fail = |m: &str| Err(Error::Hypothesis(m.to_string()));
    let not_ample = |space: &BilinearSpace, m: &CMat, name: &str| -> Result<()> {
        if is_ample(space, m)?.is_ample() {
            return Err(Error::Hypothesis(format!("{} is already ample", name)));
        }
        Ok(())
    };
    let (w_r, w_c) = unknown_shape(v, inp)?;
    apply(v, inp, &zeros(w_r, w_c))?;
    let pf = BilinearSpace::pfaffian4();
    let det = BilinearSpace::det2x2();
    match v {
        Variant::V1A | Variant::V1B | Variant::V1C => {
            let x = inp.variety()?;
            if !is_degenerate_line_map(inp.get("A")?, x)? {
                return fail("A is not degenerate");
            }
            match v {
                Variant::V1A => {
                    if !is_nontrivial(inp.get("B")?) {
                        return fail("B is trivial");
                    }
                }
                Variant::V1B => {
                    if !is_degenerate_line_map(inp.get("B")?, x)? {
                        return fail("B is not degenerate");
                    }
                }
                _ => {
                    let vv = col(inp.get("v")?, 0);
                    if vv.norm() <= RANK_TOL || x.contains(&vv) {
                        return fail("v lies on the cone over X");
                    }
                }
            }
        }
        Variant::V4A => {
            let a = inp.get("A")?;
            let (n, k) = (a.nrows(), a.ncols());
            if !(k <= 3 || (k == 4 && n == 4)) {
                return fail("requires k <= 3 or k = n = 4");
            }
            not_ample(&BilinearSpace::symmetric(n), a, "A")?;
            if !is_nontrivial(inp.get("B")?) {
                return fail("B is trivial");
            }
        }
        Variant::V4B => {
            let a = inp.get("A")?;
            if a.nrows() > 4 {
                return fail("requires n <= 4");
            }
            not_ample(&BilinearSpace::symmetric(a.nrows()), a, "A")?;
            if !is_nontrivial(inp.get("v")?) {
                return fail("v is trivial");
            }
        }
        Variant::V5A => {
            not_ample(&det, &det_view_2x3(inp.get("A")?), "A")?;
            not_ample(&det, &det_view_2x3(inp.get("B")?), "B")?;
        }
        Variant::V5B => {
            not_ample(&det, inp.get("A")?, "A")?;
            if !is_nontrivial(inp.get("B")?) {
                return fail("B is trivial");
            }
        }
        Variant::V5C => {
            if !is_nontrivial(inp.get("v")?) {
                return fail("v is zero");
            }
        }
        Variant::V6A => {
            not_ample(&pf, inp.get("A")?, "A")?;
            not_ample(&det, &inp.get("B")?.transpose(), "B")?;
        }
        Variant::V6B => {
            not_ample(&pf, &inp.get("A")?.transpose(), "A")?;
            not_ample(&det, inp.get("B")?, "B")?;
        }
        Variant::V6C => {
            not_ample(&pf, inp.get("A")?, "A")?;
            if !is_nontrivial(inp.get("w")?) {
                return fail("w is trivial");
            }
        }
        Variant::V6D => {
            not_ample(&pf, inp.get("A")?, "A")?;
            not_ample(&pf, inp.get("B")?, "B")?;
        }
        Variant::V6E => {
            not_ample(&pf, inp.get("A")?, "A")?;
            if !is_nontrivial(inp.get("u")?) {
                return fail("u is zero");
            }
        }
        Variant::V7A | Variant::V7B => {
            let (_, plus, minus) = half_spaces();
            let a = inp.get("A")?;
            if v == Variant::V7A && !(a.ncols() == 2 || a.ncols() == 3) {
                return fail("requires k = 2 or 3");
            }
            not_ample(&plus, a, "A")?;
            not_ample(&minus, inp.get("B")?, "B")?;
        }
        Variant::V7C => {
            let (_, _, minus) = half_spaces();
            not_ample(&minus, inp.get("A")?, "A")?;
            if !is_nontrivial(inp.get("s")?) {
                return fail("s is trivial");
            }
        }
    }
    Ok(())
}

// Normal forms used by the explicit constructions.

/// The five not-ample normal forms of `C^4 (x) Lambda^2 C^4`; column `a`
/// is the coefficient of `e_{a+1}`.
pub fn pf_normal_forms() -> [CMat; 5] {
    let base = [l2(&[(1, 2, 1.0), (3, 4, 1.0)]), l2(&[(1, 3, 1.0)])];
    let extra: [Vec<CVec>; 5] = [
        vec![],
        vec![l2(&[(1, 4, 1.0)])],
        vec![l2(&[(3, 4, 1.0)])],
        vec![l2(&[(1, 4, 1.0)]), l2(&[(1, 2, 1.0)])],
        vec![l2(&[(1, 4, 1.0)]), l2(&[(2, 4, 1.0)])],
    ];
    extra.map(|ex| {
        let mut cols = base.to_vec();
        cols.extend(ex);
        while cols.len() < 4 {
            cols.push(CVec::zeros(6));
        }
        CMat::from_columns(&cols)
    })
}

/// Half-spinor vector from `(subset, coefficient)` terms, 1-based indices.
pub fn spinor_vec(parity: Parity, terms: &[(&[usize], f64)]) -> CVec {
    let sm = SpinModule::new(4).expect("m = 4");
    let mut full = CVec::zeros(16);
    for (subset, x) in terms {
        let idx: Vec<usize> = subset.iter().map(|i| i - 1).collect();
        full += sm.basis_vector(&idx) * real(*x);
    }
    sm.to_half(parity, &full)
}

/// `f_1 (x) 1 + f_2 (x) (e_12 + e_34)` in `C^2 (x) S^+`.
pub fn spinor_normal_form_k2() -> CMat {
    CMat::from_columns(&[
        spinor_vec(Parity::Even, &[(&[], 1.0)]),
        spinor_vec(Parity::Even, &[(&[1, 2], 1.0), (&[3, 4], 1.0)]),
    ])
}

/// The three not-ample normal forms of `C^3 (x) S^+`.
pub fn spinor_normal_forms_k3() -> [CMat; 3] {
    let e = Parity::Even;
    [
        CMat::from_columns(&[
            spinor_vec(e, &[(&[1, 2], 1.0), (&[3, 4], 1.0)]),
            spinor_vec(e, &[(&[], 1.0)]),
            CVec::zeros(8),
        ]),
        CMat::from_columns(&[
            spinor_vec(e, &[(&[], 1.0)]),
            spinor_vec(e, &[(&[1, 2], 1.0)]),
            spinor_vec(e, &[(&[3, 4], 1.0)]),
        ]),
        CMat::from_columns(&[
            spinor_vec(e, &[(&[], 1.0), (&[1, 2, 3, 4], 1.0)]),
            spinor_vec(e, &[(&[1, 2], 1.0)]),
            spinor_vec(e, &[(&[1, 3], 1.0)]),
        ]),
    ]
}

/// Vector of `V = U + U'` from `(index, dual, coefficient)`, 1-based.
fn vvec(terms: &[(usize, bool, f64)]) -> CVec {
    let mut v = CVec::zeros(8);
    for &(i, dual, x) in terms {
        v[if dual { 4 + i - 1 } else { i - 1 }] += real(x);
    }
    v
}

/// The unknown `x` (columns `x_1, x_2, x_3`) of the explicit spinor
/// construction for each normal form of `C^3 (x) S^+`.
pub fn spinor_explicit_x() -> [CMat; 3] {
    [
        CMat::from_columns(&[CVec::zeros(8), vvec(&[(2, false, 1.0)]), vvec(&[(1, false, 1.0), (1, true, 1.0)])]),
        CMat::from_columns(&[
            vvec(&[(1, false, 1.0), (2, false, 1.0), (3, false, 1.0), (1, true, 1.0)]),
            vvec(&[(3, true, 1.0)]),
            vvec(&[(1, true, 1.0)]),
        ]),
        CMat::from_columns(&[vvec(&[(4, false, 1.0)]), vvec(&[(1, true, 1.0)]), vvec(&[(1, false, 1.0), (3, true, 1.0)])]),
    ]
}

/// `C = e_3 (x) f_2 + e_4 (x) f_4`, column `b` is `C_{b+1}`.
pub fn pf_explicit_c() -> CMat {
    let mut cm = zeros(4, 4);
    cm[(1, 2)] = real(1.0);
    cm[(3, 3)] = real(1.0);
    cm
}

fn matches(a: &CMat, b: &CMat) -> bool {
    a.shape() == b.shape() && (a - b).norm() <= 1e-12 * (1.0 + b.norm())
}

const SWEEP: [f64; 8] = [1.0, 2.0, 3.0, 0.5, 5.0, -1.0, 7.0, 0.25];

fn sweep(w: &CMat) -> Vec<CMat> {
    SWEEP.iter().map(|&l| w * real(l)).collect()
}

/// `u'` with `u' ^ u = -f_a ^ f_b` for `u` in `span{f_a, f_b}`.
fn inverse_in_plane(u: &CVec, a: usize, b: usize) -> CVec {
    let mut out = CVec::zeros(4);
    if u[a].norm() >= u[b].norm() {
        // (x f_a + y f_b) ^ (ua f_a + ub f_b) = (x ub - y ua) f_a ^ f_b
        out[b] = u[a].inv();
    } else {
        out[a] = -u[b].inv();
    }
    out
}

/// `u'` with `f_a ^ f_b ^ u' ^ u != 0`, chosen among basis vectors.
fn completing_vector(u: &CVec, a: usize, b: usize) -> Option<CVec> {
    let rest: Vec<usize> = (0..4).filter(|&i| i != a && i != b).collect();
    let (c1, c2) = (rest[0], rest[1]);
    // f_a ^ f_b ^ f_c1 ^ u has coefficient +-u[c2]
    if u[c2].norm() >= u[c1].norm() && u[c2].norm() > RANK_TOL {
        Some(unit(4, c1))
    } else if u[c1].norm() > RANK_TOL {
        Some(unit(4, c2))
    } else {
        None
    }
}

fn in_plane(u: &CVec, a: usize, b: usize) -> bool {
    (0..4).filter(|&i| i != a && i != b).all(|i| u[i].norm() <= RANK_TOL * u.norm())
}

fn single(pos_col: usize, v: &CVec) -> CMat {
    let mut cm = zeros(4, 4);
    cm.set_column(pos_col, v);
    cm
}

/// Candidates prescribed by the proofs, tried before any search.
pub fn explicit_candidates(v: Variant, inp: &DeformInputs) -> Result<Vec<CMat>> {
    let mut out = Vec::new();
    match v {
        Variant::V1A => {
            // kill a vector not in Ker B
            let a = inp.get("A")?;
            let b = inp.get("B")?;
            let (_, _, rv) = svd(b);
            let u = col(&rv, 0);
            let bu = b * &u;
            let phi = bu.adjoint() / real(bu.norm_squared());
            out.push(-(a * &u) * phi);
        }
        Variant::V1B => {
            let a = inp.get("A")?;
            let b = inp.get("B")?;
            let n = a.nrows();
            let ker = null_space(&hcat(&[a, b], n), RANK_TOL);
            if ker.ncols() > 0 {
                let z = col(&ker, 0);
                let u = z.rows(0, 2).into_owned();
                let w = z.rows(2, 2).into_owned();
                if u.norm() > RANK_TOL {
                    out.push(&w * u.adjoint() / real(u.norm_squared()));
                }
            }
        }
        Variant::V1C => {
            let a = inp.get("A")?;
            let vv = inp.get("v")?;
            let u = mp_inverse(a) * vv;
            if (a * &u - vv).norm() <= 1e-9 * vv.norm() && u.norm() > RANK_TOL {
                out.push(-u.adjoint() / real(u.norm_squared()));
            }
        }
        Variant::V5C => {
            let vv = col(inp.get("v")?, 0);
            let big = (0..3).max_by(|&i, &j| vv[i].norm().partial_cmp(&vv[j].norm()).unwrap()).unwrap();
            let rest: Vec<usize> = (0..3).filter(|&i| i != big).collect();
            let mut am = zeros(3, 2);
            am[(rest[0], 0)] = real(1.0);
            am[(rest[1], 1)] = real(1.0);
            out.extend(sweep(&am));
        }
        Variant::V6A => {
            let a = inp.get("A")?;
            let canon = CMat::from_columns(&[l2(&[(1, 2, 1.0), (3, 4, 1.0)]), l2(&[(1, 3, 1.0)])]);
            if matches(a, &canon) {
                let mut cm = zeros(4, 2);
                cm[(3, 0)] = real(1.0);
                cm[(1, 1)] = real(1.0);
                out.extend(sweep(&cm));
            }
        }
        Variant::V6D => {
            let a = inp.get("A")?;
            if pf_normal_forms().iter().any(|f| matches(a, f)) {
                out.extend(sweep(&pf_explicit_c()));
            }
        }
        Variant::V6E => {
            let a = inp.get("A")?;
            let u = col(inp.get("u")?, 0);
            let forms = pf_normal_forms();
            if let Some(idx) = forms.iter().position(|f| matches(a, f)) {
                let (f1, f3, f4) = (0, 2, 3);
                let cand = match idx {
                    0 | 2 => {
                        if in_plane(&u, f1, f3) {
                            Some(single(1, &inverse_in_plane(&u, f1, f3)))
                        } else {
                            completing_vector(&u, f1, f3).map(|up| single(if idx == 0 { 0 } else { 2 }, &up))
                        }
                    }
                    1 | 3 => {
                        if !in_plane(&u, f1, f3) {
                            completing_vector(&u, f1, f3).map(|up| single(2, &up))
                        } else if !in_plane(&u, f1, f4) {
                            completing_vector(&u, f1, f4).map(|up| single(1, &up))
                        } else {
                            let lam = u[f1];
                            let mut cm = zeros(4, 4);
                            cm[(f3, 1)] = lam.inv();
                            cm[(f4, 2)] = lam.inv();
                            Some(cm)
                        }
                    }
                    _ => {
                        if in_plane(&u, f1, f4) {
                            Some(single(2, &inverse_in_plane(&u, f1, f4)))
                        } else {
                            completing_vector(&u, f1, f4).map(|up| single(0, &up))
                        }
                    }
                };
                out.extend(cand);
            }
        }
        Variant::V7A => {
            let a = inp.get("A")?;
            let b = inp.get("B")?;
            if a.ncols() == 2 && matches(a, &spinor_normal_form_k2()) {
                let sm = SpinModule::new(4)?;
                let x1 = sm.from_half(Parity::Odd, &col(b, 0));
                let in_u = (0..16u32).all(|s| s.count_ones() == 1 || x1[s as usize].norm() <= RANK_TOL);
                if in_u {
                    let mut vv = CVec::zeros(8);
                    for i in 0..4 {
                        vv[i] = -x1[1 << i];
                    }
                    out.push(as_col(&vv));
                } else {
                    let s2 = sm.from_half(Parity::Even, &col(a, 1));
                    let best = (0..4)
                        .map(|i| {
                            let y = sm.rho(&sm.v_basis(i, true)).unwrap() * &s2;
                            (i, sm.spin_form(&y, &x1).unwrap().norm())
                        })
                        .max_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
                        .unwrap();
                    if best.1 > RANK_TOL {
                        out.extend(sweep(&as_col(&sm.v_basis(best.0, true))));
                    }
                }
            }
        }
        Variant::V7B => {
            let a = inp.get("A")?;
            if let Some(idx) = spinor_normal_forms_k3().iter().position(|f| matches(a, f)) {
                out.extend(sweep(&spinor_explicit_x()[idx]));
            }
        }
        _ => {}
    }
    Ok(out)
}

/// `D(t) = D_0 + sum t_j L_j`, with `t` the column-major entries of the
/// unknown.
struct Family {
    base: CMat,
    dirs: Vec<CMat>,
    shape: (usize, usize),
}

impl Family {
    fn new(v: Variant, inp: &DeformInputs) -> Result<Self> {
        let shape = unknown_shape(v, inp)?;
        let base = apply(v, inp, &zeros(shape.0, shape.1))?;
        let mut dirs = Vec::new();
        for j in 0..shape.0 * shape.1 {
            let mut w = zeros(shape.0, shape.1);
            w[(j % shape.0, j / shape.0)] = real(1.0);
            dirs.push(apply(v, inp, &w)? - &base);
        }
        Ok(Family { base, dirs, shape })
    }

    fn eval(&self, t: &CVec) -> CMat {
        let mut d = self.base.clone();
        for (j, l) in self.dirs.iter().enumerate() {
            if t[j] != c(0.0, 0.0) {
                d += l * t[j];
            }
        }
        d
    }

    fn unknown(&self, t: &CVec) -> CMat {
        CMat::from_column_slice(self.shape.0, self.shape.1, t.as_slice())
    }

    fn params(&self) -> usize {
        self.dirs.len()
    }

    /// Parameters forcing `D(t) u = 0` for each column `u` of `us`: a
    /// particular solution and a kernel basis, if consistent.
    fn kernel_forcing(&self, us: &CMat) -> Option<(CVec, CMat)> {
        let rows = self.base.nrows();
        let t = us.ncols();
        let p = self.params();
        let mut m = zeros(rows * t, p);
        let mut rhs = CVec::zeros(rows * t);
        for s in 0..t {
            let u = col(us, s);
            let b = -(&self.base * &u);
            for r in 0..rows {
                rhs[s * rows + r] = b[r];
            }
            for (j, l) in self.dirs.iter().enumerate() {
                let lu = l * &u;
                for r in 0..rows {
                    m[(s * rows + r, j)] = lu[r];
                }
            }
        }
        let tp = mp_inverse(&m) * &rhs;
        if (&m * &tp - &rhs).norm() > 1e-9 * (1.0 + rhs.norm()) {
            return None;
        }
        Some((tp, null_space(&m, RANK_TOL)))
    }

    /// Gauss-Newton on `D^T G_l D = 0` for all `l`.
    fn newton(&self, grams: &[CMat], start: CVec) -> Option<CVec> {
        let mut t = start;
        let k = self.base.ncols();
        let p = self.params();
        let idx: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
        let neq = idx.len() * grams.len();
        for _ in 0..60 {
            let d = self.eval(&t);
            let mut f = CVec::zeros(neq);
            let mut jac = zeros(neq, p);
            for (gi, g) in grams.iter().enumerate() {
                let gd = g * &d;
                let dtg = d.transpose() * g;
                let q = d.transpose() * &gd;
                for (e, &(i, j)) in idx.iter().enumerate() {
                    f[gi * idx.len() + e] = q[(i, j)];
                }
                for (pj, l) in self.dirs.iter().enumerate() {
                    let dq = l.transpose() * &gd + &dtg * l;
                    for (e, &(i, j)) in idx.iter().enumerate() {
                        jac[(gi * idx.len() + e, pj)] = dq[(i, j)];
                    }
                }
            }
            let scale = 1.0 + d.norm_squared();
            if f.norm() <= 1e-13 * scale {
                return Some(t);
            }
            let step = mp_inverse(&jac) * &f;
            if !step.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return None;
            }
            t -= step;
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stage {
    Explicit,
    Random,
    KernelForcing,
    Isotropic,
}

#[derive(Clone, Debug)]
pub struct DeformTask {
    pub variant: Variant,
    pub inputs: DeformInputs,
    pub seed: u64,
    pub max_restarts: usize,
}

#[derive(Clone, Debug)]
pub struct DeformOutcome {
    pub variant: Variant,
    pub witness: CMat,
    pub deformed: CMat,
    pub verified: bool,
    pub stage: Stage,
    /// Candidates evaluated, including the successful one.
    pub attempts: usize,
    pub restarts: usize,
    pub classification: Option<Classification>,
}

fn finish(v: Variant, inp: &DeformInputs, goal: &Goal, w: CMat, stage: Stage, attempts: usize, restarts: usize) -> Result<DeformOutcome> {
    // recompute from the formula, not from the affine family
    let d = apply(v, inp, &w)?;
    let verified = goal_met(goal, &d)? && goal_met_independent(goal, &d)?;
    let classification = match goal {
        Goal::Ample(space) => Some(is_ample(space, &d)?),
        _ => None,
    };
    Ok(DeformOutcome { variant: v, witness: w, deformed: d, verified, stage, attempts, restarts, classification })
}

fn grams_of(goal: &Goal) -> Vec<CMat> {
    match goal {
        Goal::Ample(s) => vec![s.gram.clone()],
        Goal::NondegenerateLine(x) => x.quadrics(),
        Goal::Rank(_) => vec![],
    }
}

/// Find the unknown of the statement so that the deformed object meets the
/// goal. Candidates are tried in order: the explicit construction, then per
/// restart a random unknown, rank-dropping unknowns, and an isotropic
/// solution found by Gauss-Newton.
pub fn deform(task: &DeformTask) -> Result<DeformOutcome> {
    let v = task.variant;
    let inp = &task.inputs;
    check_hypotheses(v, inp)?;
    let goal = goal(v, inp)?;
    let mut attempts = 0;
    for w in explicit_candidates(v, inp)? {
        attempts += 1;
        if goal_met(&goal, &apply(v, inp, &w)?)? {
            return finish(v, inp, &goal, w, Stage::Explicit, attempts, 0);
        }
    }
    let fam = Family::new(v, inp)?;
    let p = fam.params();
    let k = fam.base.ncols();
    let grams = grams_of(&goal);
    let mut rng = ChaCha8Rng::seed_from_u64(task.seed);
    for r in 0..task.max_restarts {
        let lam = SWEEP[r % SWEEP.len()];
        let t = random_vector(&mut rng, p) * real(lam);
        attempts += 1;
        if goal_met(&goal, &fam.eval(&t))? {
            return finish(v, inp, &goal, fam.unknown(&t), Stage::Random, attempts, r);
        }
        if !matches!(goal, Goal::Rank(_)) {
            for depth in 1..=k {
                let us = random_matrix(&mut rng, k, depth);
                if let Some((tp, ns)) = fam.kernel_forcing(&us) {
                    let t = if ns.ncols() > 0 { &tp + &ns * random_vector(&mut rng, ns.ncols()) } else { tp };
                    attempts += 1;
                    if goal_met(&goal, &fam.eval(&t))? {
                        return finish(v, inp, &goal, fam.unknown(&t), Stage::KernelForcing, attempts, r);
                    }
                }
            }
        }
        if !grams.is_empty() {
            let start = random_vector(&mut rng, p);
            if let Some(t) = fam.newton(&grams, start) {
                attempts += 1;
                if goal_met(&goal, &fam.eval(&t))? {
                    return finish(v, inp, &goal, fam.unknown(&t), Stage::Isotropic, attempts, r);
                }
            }
        }
    }
    Err(Error::Exhausted(task.max_restarts))
}

/// Random variety among the supported kinds.
pub fn random_variety<R: Rng>(rng: &mut R) -> TwoVariety {
    match rng.random_range(0..5) {
        0 => TwoVariety::Quadric(BilinearSpace::symmetric(3)),
        1 => TwoVariety::Quadric(BilinearSpace::symmetric(4)),
        2 => TwoVariety::Segre(2),
        3 => TwoVariety::Segre(3),
        _ => TwoVariety::Plucker,
    }
}

fn random_rank<R: Rng>(rng: &mut R, rows: usize, cols: usize, r: usize) -> CMat {
    random_matrix(rng, rows, r) * random_matrix(rng, r, cols)
}

/// Random inputs satisfying the hypotheses of the variant. `k` selects the
/// number of tensor factors for `7A` (2 or 3) and is ignored elsewhere.
pub fn random_inputs<R: Rng>(rng: &mut R, v: Variant, k: usize) -> Result<DeformInputs> {
    let pf = BilinearSpace::pfaffian4();
    let det = BilinearSpace::det2x2();
    let (_, plus, minus) = half_spaces();
    let inp = DeformInputs::default();
    let out = match v {
        Variant::V1A | Variant::V1B | Variant::V1C => {
            let x = random_variety(rng);
            let n = x.ambient_dim();
            let a = x.random_degenerate_line(rng);
            let inp = match v {
                Variant::V1A => {
                    let p = rng.random_range(1..=3);
                    let r = rng.random_range(1..=p.min(2));
                    inp.with("A", a).with("B", random_rank(rng, p, 2, r))
                }
                Variant::V1B => {
                    let b = x.random_degenerate_line(rng);
                    inp.with("A", a).with("B", b)
                }
                _ => {
                    let vv = loop {
                        let vv = random_vector(rng, n);
                        if !x.contains(&vv) {
                            break vv;
                        }
                    };
                    inp.with("A", a).with("v", as_col(&vv))
                }
            };
            DeformInputs { variety: Some(x), ..inp }
        }
        Variant::V4A => {
            let (n, k) = if rng.random_range(0..5) == 0 { (4, 4) } else { (rng.random_range(3..=6), rng.random_range(2..=3)) };
            let p = rng.random_range(1..=3);
            let r = rng.random_range(1..=p.min(k));
            let a = random_not_ample(rng, &BilinearSpace::symmetric(n), k)?;
            inp.with("A", a).with("B", random_rank(rng, p, k, r))
        }
        Variant::V4B => {
            let n = rng.random_range(3..=4);
            let k = rng.random_range(2..=4);
            let sp = BilinearSpace::symmetric(n);
            let a = random_not_ample(rng, &sp, k)?;
            let vv = if rng.random_bool(0.3) { random_isotropic(rng, &sp.gram, &crate::cxlinalg::eye(n)) } else { random_vector(rng, n) };
            inp.with("A", a).with("v", as_col(&vv))
        }
        Variant::V5A => {
            let to_map = |d: &CMat| CMat::from_fn(6, 2, |row, s| d[(2 * s + row / 3, row % 3)]);
            let a = to_map(&random_not_ample(rng, &det, 3)?);
            let b = to_map(&random_not_ample(rng, &det, 3)?);
            inp.with("A", a).with("B", b)
        }
        Variant::V5B => {
            let r = rng.random_range(1..=2);
            inp.with("A", random_not_ample(rng, &det, 3)?).with("B", random_rank(rng, 2, 3, r))
        }
        Variant::V5C => {
            let r = rng.random_range(0..=2);
            let vv = if rng.random_bool(0.3) { as_col(&unit(3, rng.random_range(0..3))) } else { random_matrix(rng, 3, 1) };
            inp.with("v", vv).with("B", random_rank(rng, 3, 2, r))
        }
        Variant::V6A => inp
            .with("A", random_not_ample(rng, &pf, 2)?)
            .with("B", random_not_ample(rng, &det, 4)?.transpose()),
        Variant::V6B => inp
            .with("A", random_not_ample(rng, &pf, 2)?.transpose())
            .with("B", random_not_ample(rng, &det, 4)?),
        Variant::V6C => {
            let w = if rng.random_bool(0.3) { as_col(&unit(4, rng.random_range(0..4))) } else { random_matrix(rng, 4, 1) };
            inp.with("A", random_not_ample(rng, &pf, 2)?).with("w", w)
        }
        Variant::V6D => inp.with("A", random_not_ample(rng, &pf, 4)?).with("B", random_not_ample(rng, &pf, 4)?),
        Variant::V6E => {
            let u = if rng.random_bool(0.3) { as_col(&unit(4, rng.random_range(0..4))) } else { random_matrix(rng, 4, 1) };
            inp.with("A", random_not_ample(rng, &pf, 4)?).with("u", u)
        }
        Variant::V7A => {
            if !(k == 2 || k == 3) {
                return Err(Error::Config(format!("7A needs k = 2 or 3, got {}", k)));
            }
            inp.with("A", random_not_ample(rng, &plus, k)?).with("B", random_not_ample(rng, &minus, k)?)
        }
        Variant::V7B => inp.with("A", random_not_ample(rng, &plus, 3)?).with("B", random_not_ample(rng, &minus, 3)?),
        Variant::V7C => {
            let s = if rng.random_bool(0.3) {
                random_isotropic(rng, &plus.gram, &crate::cxlinalg::eye(8))
            } else {
                random_vector(rng, 8)
            };
            inp.with("A", random_not_ample(rng, &minus, 3)?).with("s", as_col(&s))
        }
    };
    check_hypotheses(v, &out)?;
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct VariantSummary {
    pub variant: String,
    pub trials: usize,
    pub verified: usize,
    pub by_stage: BTreeMap<String, usize>,
    pub max_restarts_used: usize,
    pub failures: Vec<String>,
}

/// Deform `trials` random inputs of the variant with seeds derived from
/// `seed`.
pub fn run_variant_suite(v: Variant, k: usize, trials: usize, seed: u64, max_restarts: usize) -> VariantSummary {
    let label = if v == Variant::V7A { format!("7A(k={})", k) } else { v.name().to_string() };
    let mut sum = VariantSummary {
        variant: label,
        trials,
        verified: 0,
        by_stage: BTreeMap::new(),
        max_restarts_used: 0,
        failures: Vec::new(),
    };
    for t in 0..trials {
        let s = seed.wrapping_mul(1_000_003).wrapping_add((v as u64) << 32).wrapping_add(t as u64 * 7919 + k as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let inputs = match random_inputs(&mut rng, v, k) {
            Ok(i) => i,
            Err(e) => {
                sum.failures.push(format!("trial {}: input generation: {}", t, e));
                continue;
            }
        };
        let task = DeformTask { variant: v, inputs, seed: s ^ 0x5eed, max_restarts };
        match deform(&task) {
            Ok(o) if o.verified => {
                sum.verified += 1;
                *sum.by_stage.entry(format!("{:?}", o.stage)).or_default() += 1;
                sum.max_restarts_used = sum.max_restarts_used.max(o.restarts);
            }
            Ok(_) => sum.failures.push(format!("trial {}: witness failed the recheck", t)),
            Err(e) => sum.failures.push(format!("trial {}: {}", t, e)),
        }
    }
    sum
}

/// Parsing and printing of complex matrices as JSON: an array of rows whose
/// entries are numbers or `[re, im]` pairs.
pub mod json {
    use serde_json::{json, Value};

    use super::*;

    pub fn matrix_to_json(m: &CMat) -> Value {
        let rows: Vec<Value> = (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect();
        Value::Array(rows)
    }

    pub fn matrix_from_json(v: &Value) -> Result<CMat> {
        let bad = |m: &str| Error::Config(format!("matrix JSON: {}", m));
        let rows = v.as_array().ok_or_else(|| bad("expected an array of rows"))?;
        let ncols = rows.first().and_then(|r| r.as_array()).map_or(0, |r| r.len());
        let mut m = zeros(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_array().ok_or_else(|| bad("row is not an array"))?;
            if r.len() != ncols {
                return Err(bad("ragged rows"));
            }
            for (j, e) in r.iter().enumerate() {
                m[(i, j)] = match e {
                    Value::Number(x) => real(x.as_f64().ok_or_else(|| bad("bad number"))?),
                    Value::Array(p) if p.len() == 2 => c(
                        p[0].as_f64().ok_or_else(|| bad("bad real part"))?,
                        p[1].as_f64().ok_or_else(|| bad("bad imaginary part"))?,
                    ),
                    _ => return Err(bad("entry must be a number or [re, im]")),
                };
            }
        }
        Ok(m)
    }

    /// `{"variety": "quadric:3", "A": [[...]], ...}`.
    pub fn inputs_from_json(v: &Value) -> Result<DeformInputs> {
        let obj = v.as_object().ok_or_else(|| Error::Config("inputs must be a JSON object".into()))?;
        let mut out = DeformInputs::default();
        for (key, val) in obj {
            if key == "variety" {
                let s = val.as_str().ok_or_else(|| Error::Config("variety must be a string".into()))?;
                out.variety = Some(s.parse()?);
            } else {
                out.mats.insert(key.clone(), matrix_from_json(val)?);
            }
        }
        Ok(out)
    }

    pub fn inputs_to_json(inp: &DeformInputs) -> Value {
        let mut obj = serde_json::Map::new();
        if let Some(x) = &inp.variety {
            obj.insert("variety".into(), Value::String(x.name()));
        }
        for (k, m) in &inp.mats {
            obj.insert(k.clone(), matrix_to_json(m));
        }
        Value::Object(obj)
    }

    pub fn outcome_to_json(o: &DeformOutcome) -> Value {
        json!({
            "variant": o.variant.name(),
            "verified": o.verified,
            "stage": format!("{:?}", o.stage),
            "attempts": o.attempts,
            "restarts": o.restarts,
            "classification": o.classification.map(|c| c.to_string()),
            "witness": { "name": o.variant.unknown(), "matrix": matrix_to_json(&o.witness) },
            "deformed": matrix_to_json(&o.deformed),
        })
    }
}

pub fn variant_dims(v: Variant) -> FormKind {
    match v {
        Variant::V4A | Variant::V4B => FormKind::Symmetric,
        Variant::V5A | Variant::V5B | Variant::V6A => FormKind::Det2x2,
        Variant::V6B | Variant::V6C | Variant::V6D | Variant::V6E => FormKind::Pfaffian4,
        Variant::V7A | Variant::V7B | Variant::V7C => FormKind::Spinor(4),
        _ => FormKind::Other,
    }
}
