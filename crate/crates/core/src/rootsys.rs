//! Root systems of the simple Lie algebras, with roots as integer vectors in
//! the basis of simple roots.
//!
//! Vertex numbering follows Bourbaki for A-D, F4 and G2. For E the branch
//! vertex comes last: E6 is the chain 1..5 with 6 attached to 3, E7 the chain
//! 1..6 with 7 attached to 4, E8 the chain 1..7 with 8 attached to 5.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Root = Vec<i32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Kind {
    fn letter(self) -> char {
        match self {
            Kind::A => 'A',
            Kind::B => 'B',
            Kind::C => 'C',
            Kind::D => 'D',
            Kind::E => 'E',
            Kind::F => 'F',
            Kind::G => 'G',
        }
    }

    pub fn valid_rank(self, rank: usize) -> bool {
        match self {
            Kind::A => rank >= 1,
            Kind::B | Kind::C => rank >= 2,
            Kind::D => rank >= 4,
            Kind::E => (6..=8).contains(&rank),
            Kind::F => rank == 4,
            Kind::G => rank == 2,
        }
    }
}

/// A simple type such as `E7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimpleType {
    pub kind: Kind,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(kind: Kind, rank: usize) -> Result<Self> {
        if !kind.valid_rank(rank) {
            return Err(Error::InvalidType(format!("{}{}", kind.letter(), rank)));
        }
        Ok(SimpleType { kind, rank })
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('A') => Kind::A,
            Some('B') => Kind::B,
            Some('C') => Kind::C,
            Some('D') => Kind::D,
            Some('E') => Kind::E,
            Some('F') => Kind::F,
            Some('G') => Kind::G,
            _ => return Err(Error::InvalidType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidType(s.to_string()))?;
        SimpleType::new(kind, rank)
    }
}

/// Cartan matrix with `a[i][j] = <alpha_j, alpha_i^vee>`, so that the pairing
/// of a root `c` with the coroot of vertex `i` is `sum_j c[j] * a[i][j]`.
pub fn cartan_matrix(t: SimpleType) -> Vec<Vec<i32>> {
    let n = t.rank;
    let mut a = vec![vec![0; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match t.kind {
        Kind::A | Kind::B | Kind::C => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        Kind::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        Kind::E => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 4, n - 1);
        }
        Kind::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        Kind::G => link(0, 1),
    }
    match t.kind {
        // alpha_n short
        Kind::B => a[n - 1][n - 2] = -2,
        // alpha_n long
        Kind::C => a[n - 2][n - 1] = -2,
        // alpha_1, alpha_2 long; alpha_3, alpha_4 short
        Kind::F => a[2][1] = -2,
        // alpha_1 short
        Kind::G => a[0][1] = -3,
        _ => {}
    }
    a
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub stype: SimpleType,
    pub cartan: Vec<Vec<i32>>,
    /// Positive roots sorted by height, then lexicographically.
    pub positive: Vec<Root>,
    /// Positive roots followed by their negatives in the same order.
    pub roots: Vec<Root>,
    index: HashSet<Root>,
}

impl RootSystem {
    pub fn new(stype: SimpleType) -> Self {
        let cartan = cartan_matrix(stype);
        let positive = positive_roots(&cartan);
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|r| r.iter().map(|x| -x).collect::<Root>()));
        let index = roots.iter().cloned().collect();
        RootSystem { stype, cartan, positive, roots, index }
    }

    pub fn build(kind: Kind, rank: usize) -> Result<Self> {
        Ok(Self::new(SimpleType::new(kind, rank)?))
    }

    pub fn rank(&self) -> usize {
        self.stype.rank
    }

    pub fn contains(&self, v: &[i32]) -> bool {
        self.index.contains(v)
    }

    pub fn is_root(&self, v: &[i32]) -> Result<bool> {
        if v.len() != self.rank() {
            return Err(Error::Rejected(format!(
                "vector of length {} for a rank {} system",
                v.len(),
                self.rank()
            )));
        }
        Ok(self.contains(v))
    }

    /// `<v, alpha_i^vee>`.
    pub fn coroot_pairing(&self, v: &[i32], i: usize) -> i32 {
        self.cartan[i].iter().zip(v).map(|(a, c)| a * c).sum()
    }

    pub fn highest_root(&self) -> &Root {
        self.positive.last().expect("nonempty root system")
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut r = vec![0; self.rank()];
        r[i] = 1;
        r
    }
}

/// Positive roots by alpha-strings: for a positive root `a` and simple root
/// `alpha_j`, `a + alpha_j` is a root iff `p - <a, alpha_j^vee> > 0`, where
/// `p` is the largest integer with `a - p alpha_j` a root.
fn positive_roots(cartan: &[Vec<i32>]) -> Vec<Root> {
    let n = cartan.len();
    let mut known: HashSet<Root> = HashSet::new();
    let mut layer: Vec<Root> = (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect();
    let mut all = Vec::new();
    while !layer.is_empty() {
        layer.sort();
        for r in &layer {
            known.insert(r.clone());
        }
        let mut next: Vec<Root> = Vec::new();
        for r in &layer {
            for j in 0..n {
                let mut p = 0;
                let mut down = r.clone();
                loop {
                    down[j] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i32 = cartan[j].iter().zip(r).map(|(a, c)| a * c).sum();
                if p - pairing > 0 {
                    let mut up = r.clone();
                    up[j] += 1;
                    if !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        all.append(&mut layer);
        layer = next;
    }
    all
}

/// Closed-form number of positive roots.
pub fn positive_root_count(t: SimpleType) -> usize {
    let n = t.rank;
    match (t.kind, n) {
        (Kind::A, _) => n * (n + 1) / 2,
        (Kind::B, _) | (Kind::C, _) => n * n,
        (Kind::D, _) => n * (n - 1),
        (Kind::E, 6) => 36,
        (Kind::E, 7) => 63,
        (Kind::E, 8) => 120,
        (Kind::F, _) => 24,
        (Kind::G, _) => 6,
        _ => unreachable!("validated type"),
    }
}

/// All types checked by the root-count suite.
pub fn catalogue() -> Vec<SimpleType> {
    let mut out = Vec::new();
    let ranges: [(Kind, std::ops::RangeInclusive<usize>); 7] = [
        (Kind::A, 1..=8),
        (Kind::B, 2..=8),
        (Kind::C, 2..=8),
        (Kind::D, 4..=8),
        (Kind::E, 6..=8),
        (Kind::F, 4..=4),
        (Kind::G, 2..=2),
    ];
    for (k, r) in ranges {
        for n in r {
            out.push(SimpleType { kind: k, rank: n });
        }
    }
    out
}
