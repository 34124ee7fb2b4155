//! Half-spinor modules as even and odd parts of `Lambda^* U`.
//!
//! `V = U + U'` with bases `e_1..e_m` and `e_1*..e_m*`; a vector of `V` is a
//! length-`2m` coordinate vector, `e_i` at `i` and `e_i*` at `m + i`. Basis
//! elements of `Lambda^* U` are subsets of `{0..m-1}` stored as bitmasks,
//! and the bitmask is also the coordinate index.

use crate::cxlinalg::{real, zeros, BilinearSpace, CMat, CVec, FormKind, C64};
use crate::error::{Error, Result};

/// `(-1)^{#{j in s : j < i}}`.
fn pass_sign(s: u32, i: usize) -> f64 {
    if (s & ((1u32 << i) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Sign of `e_S ^ e_T` relative to `e_{S u T}`; zero when they overlap.
pub fn wedge_sign(s: u32, t: u32) -> f64 {
    if s & t != 0 {
        return 0.0;
    }
    let mut inv = 0;
    for i in 0..32 {
        if t >> i & 1 == 1 {
            inv += (s >> (i + 1)).count_ones();
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Wedge product of two elements of `Lambda^* C^n` in bitmask coordinates.
pub fn wedge(a: &CVec, b: &CVec) -> CVec {
    let len = a.len();
    let mut out = CVec::zeros(len);
    for s in 0..len {
        if a[s] == C64::new(0.0, 0.0) {
            continue;
        }
        for t in 0..len {
            if s & t != 0 || b[t] == C64::new(0.0, 0.0) {
                continue;
            }
            out[s | t] += a[s] * b[t] * wedge_sign(s as u32, t as u32);
        }
    }
    out
}

/// Bitmasks of the `k`-subsets of `{0..n-1}`, ordered lexicographically as
/// sorted tuples (`12, 13, 14, 23, ...`).
pub fn exterior_basis(n: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..n {
            rec(i + 1, n, k - 1, acc | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, 0, &mut out);
    out
}

/// Embed coordinates on `exterior_basis(n, k)` into bitmask coordinates.
pub fn lift(n: usize, k: usize, x: &CVec) -> CVec {
    let mut out = CVec::zeros(1 << n);
    for (i, &m) in exterior_basis(n, k).iter().enumerate() {
        out[m as usize] = x[i];
    }
    out
}

/// Read the degree-`k` part of a bitmask vector in `exterior_basis` order.
pub fn project(n: usize, k: usize, x: &CVec) -> CVec {
    let b = exterior_basis(n, k);
    CVec::from_fn(b.len(), |i, _| x[b[i] as usize])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpinModule {
    pub m: usize,
    pub even: Vec<u32>,
    pub odd: Vec<u32>,
    /// Full subset, the element `det`.
    pub det: u32,
    /// Gram matrix of the spinor form on `Lambda^* U`; `None` for odd `m`.
    pub form_gram: Option<CMat>,
}

impl SpinModule {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > 12 {
            return Err(Error::Dimension(format!("half-dimension {} out of range 1..12", m)));
        }
        let len = 1u32 << m;
        let even = (0..len).filter(|s| s.count_ones() % 2 == 0).collect();
        let odd = (0..len).filter(|s| s.count_ones() % 2 == 1).collect();
        let det = len - 1;
        let form_gram = if m.is_multiple_of(2) {
            let mut g = zeros(len as usize, len as usize);
            for s in 0..len {
                let t = det ^ s;
                let sign = if (s.count_ones() / 2) % 2 == 0 { 1.0 } else { -1.0 };
                g[(s as usize, t as usize)] = real(wedge_sign(s, t) * sign);
            }
            Some(g)
        } else {
            None
        };
        Ok(SpinModule { m, even, odd, det, form_gram })
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    pub fn half_dim(&self) -> usize {
        1 << (self.m - 1)
    }

    pub fn half(&self, p: Parity) -> &[u32] {
        match p {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    /// The symmetric form on `V`, `(v, w) = (1/2) sum (v_i w*_i + v*_i w_i)`,
    /// normalized so that `rho(v)^2 = (v, v) Id`.
    pub fn vector_form(&self) -> CMat {
        let m = self.m;
        let mut g = zeros(2 * m, 2 * m);
        for i in 0..m {
            g[(i, m + i)] = real(0.5);
            g[(m + i, i)] = real(0.5);
        }
        g
    }

    pub fn vector_dot(&self, v: &CVec, w: &CVec) -> C64 {
        (v.transpose() * self.vector_form() * w)[(0, 0)]
    }

    /// `rho(v)` on `Lambda^* U`: wedge by the `U` part, contraction by the
    /// `U'` part.
    pub fn rho(&self, v: &CVec) -> Result<CMat> {
        let m = self.m;
        if v.len() != 2 * m {
            return Err(Error::Dimension(format!("vector of length {} for V of dimension {}", v.len(), 2 * m)));
        }
        let n = self.dim();
        let mut out = zeros(n, n);
        for s in 0..n as u32 {
            for i in 0..m {
                let bit = 1u32 << i;
                let sign = pass_sign(s, i);
                if s & bit == 0 {
                    out[((s | bit) as usize, s as usize)] += v[i] * sign;
                } else {
                    out[((s ^ bit) as usize, s as usize)] += v[m + i] * sign;
                }
            }
        }
        Ok(out)
    }

    pub fn rho_apply(&self, v: &CVec, s: &CVec) -> Result<CVec> {
        if s.len() != self.dim() {
            return Err(Error::Dimension(format!("spinor of length {}, expected {}", s.len(), self.dim())));
        }
        Ok(self.rho(v)? * s)
    }

    /// `rho(v)` as a map `S^p -> S^{-p}` in half-module coordinates.
    pub fn rho_half(&self, v: &CVec, from: Parity) -> Result<CMat> {
        let r = self.rho(v)?;
        let src = self.half(from);
        let dst = self.half(from.flip());
        Ok(CMat::from_fn(dst.len(), src.len(), |i, j| r[(dst[i] as usize, src[j] as usize)]))
    }

    fn gram(&self) -> Result<&CMat> {
        self.form_gram
            .as_ref()
            .ok_or_else(|| Error::Rejected(format!("no spinor form for odd m = {}; S+ is dual to S-", self.m)))
    }

    /// Coefficient of `det` in `(-1)^{[deg u / 2]} u ^ v`, extended bilinearly.
    pub fn spin_form(&self, u: &CVec, v: &CVec) -> Result<C64> {
        let g = self.gram()?;
        if u.len() != self.dim() || v.len() != self.dim() {
            return Err(Error::Dimension("spinor length mismatch".into()));
        }
        Ok((u.transpose() * g * v)[(0, 0)])
    }

    /// Spinor form restricted to `S^p`, in half-module coordinates.
    pub fn half_gram(&self, p: Parity) -> Result<CMat> {
        let g = self.gram()?;
        let b = self.half(p);
        Ok(CMat::from_fn(b.len(), b.len(), |i, j| g[(b[i] as usize, b[j] as usize)]))
    }

    pub fn half_space(&self, p: Parity) -> Result<BilinearSpace> {
        BilinearSpace::from_gram(FormKind::Spinor(self.m), self.half_gram(p)?)
    }

    /// Full-module vector from half-module coordinates.
    pub fn from_half(&self, p: Parity, x: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim());
        for (i, &s) in self.half(p).iter().enumerate() {
            out[s as usize] = x[i];
        }
        out
    }

    pub fn to_half(&self, p: Parity, x: &CVec) -> CVec {
        let b = self.half(p);
        CVec::from_fn(b.len(), |i, _| x[b[i] as usize])
    }

    /// Basis vector of `Lambda^* U` for the subset given by 0-based indices.
    pub fn basis_vector(&self, subset: &[usize]) -> CVec {
        let mask: u32 = subset.iter().map(|&i| 1u32 << i).sum();
        let mut v = CVec::zeros(self.dim());
        v[mask as usize] = real(1.0);
        v
    }

    /// Coordinate vector of `e_i` (`dual = false`) or `e_i*` in `V`.
    pub fn v_basis(&self, i: usize, dual: bool) -> CVec {
        let mut v = CVec::zeros(2 * self.m);
        v[if dual { self.m + i } else { i }] = real(1.0);
        v
    }
}

/// Ampleness of `A in C^k (x) S^p` for `m = 4`; columns of `a` are the
/// images of the dual basis, in half-module coordinates.
pub fn spinor_is_ample(a: &CMat, p: Parity, m: usize) -> Result<crate::ampleness::Classification> {
    if m != 4 {
        return Err(Error::Rejected(format!("spinor ampleness is defined here for m = 4, got {}", m)));
    }
    let sm = SpinModule::new(m)?;
    crate::ampleness::is_ample(&sm.half_space(p)?, a)
}
