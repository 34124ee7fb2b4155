//! Gradings of a simple Lie algebra by the centre of a Levi subgroup.
//!
//! A coloured diagram marks the Levi simple roots black; every root then
//! gets the weight obtained by restricting its coordinates to the white
//! vertices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{Root, RootSystem, SimpleType};

#[derive(Clone, Debug)]
pub struct ColouredDiagram {
    pub rs: RootSystem,
    /// Black vertices, 0-based, ascending.
    pub black: Vec<usize>,
    /// White vertices, 0-based, ascending.
    pub white: Vec<usize>,
}

impl ColouredDiagram {
    /// `black` holds 0-based vertex indices.
    pub fn new(rs: RootSystem, black: &[usize]) -> Result<Self> {
        let n = rs.rank();
        let mut b = black.to_vec();
        b.sort_unstable();
        for w in b.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Rejected(format!("vertex {} listed twice", w[0] + 1)));
            }
        }
        if let Some(&v) = b.iter().find(|&&v| v >= n) {
            return Err(Error::Rejected(format!("vertex {} out of range 1..{}", v + 1, n)));
        }
        let white: Vec<usize> = (0..n).filter(|v| !b.contains(v)).collect();
        if white.is_empty() {
            return Err(Error::Rejected("no white vertex".into()));
        }
        Ok(ColouredDiagram { rs, black: b, white })
    }

    pub fn from_mask(rs: RootSystem, black_mask: u32) -> Result<Self> {
        let black: Vec<usize> = (0..rs.rank()).filter(|i| black_mask >> i & 1 == 1).collect();
        Self::new(rs, &black)
    }

    /// 1-based black vertices.
    pub fn black_one_based(&self) -> Vec<usize> {
        self.black.iter().map(|v| v + 1).collect()
    }

    /// `B`/`W` string in vertex order.
    pub fn pattern(&self) -> String {
        (0..self.rs.rank())
            .map(|v| if self.black.contains(&v) { 'B' } else { 'W' })
            .collect()
    }
}

impl fmt::Display for ColouredDiagram {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let b: Vec<String> = self.black_one_based().iter().map(|v| v.to_string()).collect();
        write!(f, "{}/{}", self.rs.stype, b.join(","))
    }
}

impl FromStr for ColouredDiagram {
    type Err = Error;

    /// `<TYPE>/<black-list>`, e.g. `E7/1,3,5,7`; `G2/` is the Borel.
    fn from_str(s: &str) -> Result<Self> {
        let slash = s.find('/').ok_or(Error::Parse {
            pos: s.len(),
            msg: "expected '/' after the type".into(),
        })?;
        let stype: SimpleType = s[..slash].parse()?;
        let rs = RootSystem::new(stype);
        let mut black = Vec::new();
        let list = &s[slash + 1..];
        let mut pos = slash + 1;
        if !list.trim().is_empty() {
            for item in list.split(',') {
                let v: usize = item.trim().parse().map_err(|_| Error::Parse {
                    pos,
                    msg: format!("expected a vertex number, found {:?}", item),
                })?;
                if v == 0 || v > stype.rank {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("vertex {} out of range 1..{}", v, stype.rank),
                    });
                }
                if black.contains(&(v - 1)) {
                    return Err(Error::Parse { pos, msg: format!("vertex {} repeated", v) });
                }
                black.push(v - 1);
                pos += item.len() + 1;
            }
        }
        ColouredDiagram::new(rs, &black).map_err(|e| Error::Parse { pos: 0, msg: e.to_string() })
    }
}

/// Coefficients of a weight at the white vertices, ascending vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i32>);

impl Weight {
    pub fn zero(len: usize) -> Self {
        Weight(vec![0; len])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i32) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct Grading {
    pub diagram: ColouredDiagram,
    /// Nonzero weights and their roots (indices into `rs.roots`).
    pub components: BTreeMap<Weight, Vec<usize>>,
    /// Levi roots.
    pub zero_component: Vec<usize>,
}

impl Grading {
    pub fn new(diagram: ColouredDiagram) -> Self {
        let mut components: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        let mut zero_component = Vec::new();
        for (i, r) in diagram.rs.roots.iter().enumerate() {
            let w = restrict(&diagram.white, r);
            if w.is_zero() {
                zero_component.push(i);
            } else {
                components.entry(w).or_default().push(i);
            }
        }
        Grading { diagram, components, zero_component }
    }

    pub fn rs(&self) -> &RootSystem {
        &self.diagram.rs
    }

    pub fn weight_of(&self, root: &[i32]) -> Weight {
        restrict(&self.diagram.white, root)
    }

    pub fn is_weight(&self, chi: &Weight) -> bool {
        self.components.contains_key(chi)
    }

    pub fn roots_of(&self, chi: &Weight) -> Vec<&Root> {
        self.components
            .get(chi)
            .map(|ix| ix.iter().map(|&i| &self.diagram.rs.roots[i]).collect())
            .unwrap_or_default()
    }

    pub fn positive_weights(&self) -> Vec<&Weight> {
        self.components.keys().filter(|w| w.is_positive()).collect()
    }

    fn check_weight(&self, chi: &Weight) -> Result<()> {
        if chi.0.len() != self.diagram.white.len() {
            return Err(Error::Rejected(format!(
                "weight {} has {} coefficients, expected {}",
                chi,
                chi.0.len(),
                self.diagram.white.len()
            )));
        }
        if !self.is_weight(chi) {
            return Err(Error::Rejected(format!("{} is not a weight", chi)));
        }
        Ok(())
    }

    /// `chi` is reduced when `2 chi` is not a weight.
    pub fn is_reduced(&self, chi: &Weight) -> Result<bool> {
        self.check_weight(chi)?;
        Ok(!self.is_weight(&chi.scale(2)))
    }

    pub fn positive_nonreduced_weights(&self) -> Vec<Weight> {
        self.positive_weights()
            .into_iter()
            .filter(|w| self.is_weight(&w.scale(2)))
            .cloned()
            .collect()
    }

    /// Positive Levi roots.
    pub fn levi_positive(&self) -> Vec<&Root> {
        self.zero_component
            .iter()
            .map(|&i| &self.diagram.rs.roots[i])
            .filter(|r| r.iter().all(|&x| x >= 0))
            .collect()
    }

    /// Roots of the component killed by every positive Levi root, i.e. the
    /// highest weight vectors of the Levi module.
    pub fn highest_roots(&self, chi: &Weight) -> Vec<Root> {
        let levi = self.levi_positive();
        let rs = self.rs();
        self.roots_of(chi)
            .into_iter()
            .filter(|g| {
                levi.iter().all(|b| {
                    let s: Vec<i32> = g.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
                    !rs.contains(&s)
                })
            })
            .cloned()
            .collect()
    }

    /// The Levi module on the component is irreducible iff it has exactly
    /// one highest root.
    pub fn is_irreducible_component(&self, chi: &Weight) -> Result<bool> {
        self.check_weight(chi)?;
        Ok(self.highest_roots(chi).len() == 1)
    }

    /// Labels of the highest weight at the black vertices, ascending.
    pub fn black_labels(&self, chi: &Weight) -> Result<Vec<i32>> {
        self.check_weight(chi)?;
        let hs = self.highest_roots(chi);
        if hs.len() != 1 {
            return Err(Error::Rejected(format!("component {} is not irreducible", chi)));
        }
        Ok(self
            .diagram
            .black
            .iter()
            .map(|&b| self.rs().coroot_pairing(&hs[0], b))
            .collect())
    }

    /// Printed form of a weight in vertex order: white coefficients bare,
    /// black labels of the highest weight in parentheses.
    pub fn weight_label(&self, chi: &Weight) -> Result<String> {
        if chi.is_zero() && chi.0.len() == self.diagram.white.len() {
            let parts: Vec<String> = (0..self.rs().rank())
                .map(|v| if self.diagram.black.contains(&v) { "(0)".into() } else { "0".into() })
                .collect();
            return Ok(parts.join(" "));
        }
        let labels = self.black_labels(chi)?;
        let mut parts = Vec::new();
        for v in 0..self.rs().rank() {
            if let Some(k) = self.diagram.black.iter().position(|&b| b == v) {
                parts.push(format!("({})", labels[k]));
            } else {
                let k = self.diagram.white.iter().position(|&w| w == v).unwrap();
                parts.push(chi.0[k].to_string());
            }
        }
        Ok(parts.join(" "))
    }

    pub fn total_roots(&self) -> usize {
        self.components.values().map(|v| v.len()).sum::<usize>() + self.zero_component.len()
    }
}

fn restrict(white: &[usize], r: &[i32]) -> Weight {
    Weight(white.iter().map(|&i| r[i]).collect())
}

pub fn compute_grading(diagram: ColouredDiagram) -> Grading {
    Grading::new(diagram)
}
