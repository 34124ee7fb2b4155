//! Basic-Lemma classification of parabolics and the Table of open cases.

use serde::Serialize;

use crate::data::DataFile;
use crate::error::{Error, Result};
use crate::grading::{ColouredDiagram, Grading};
use crate::rootsys::{RootSystem, SimpleType};

/// At most one non-reduced positive weight.
pub fn weakly_ample_by_basic_lemma(g: &Grading) -> bool {
    g.positive_nonreduced_weights().len() <= 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    /// 1-based black vertices.
    pub black: Vec<usize>,
    pub nonreduced: usize,
    pub basic_lemma_weakly_ample: bool,
}

/// One record per proper colouring, ordered by the bitmask of black vertices
/// (bit `i` is vertex `i + 1`).
pub fn scan_parabolics(rs: &RootSystem) -> Result<Vec<ScanRecord>> {
    let n = rs.rank();
    if n > 8 {
        return Err(Error::Rejected(format!("rank {} too large to scan", n)));
    }
    let full = (1u32 << n) - 1;
    let mut out = Vec::with_capacity(full as usize);
    for mask in 0..full {
        let g = Grading::new(ColouredDiagram::from_mask(rs.clone(), mask)?);
        let k = g.positive_nonreduced_weights().len();
        out.push(ScanRecord {
            black: g.diagram.black_one_based(),
            nonreduced: k,
            basic_lemma_weakly_ample: k <= 1,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub index: usize,
    pub group: SimpleType,
    /// `B`/`W` per vertex.
    pub pattern: String,
    pub line: usize,
}

impl TableEntry {
    pub fn diagram(&self) -> Result<ColouredDiagram> {
        let black: Vec<usize> = self.pattern.chars().enumerate().filter(|(_, c)| *c == 'B').map(|(i, _)| i).collect();
        ColouredDiagram::new(RootSystem::new(self.group), &black)
    }
}

pub fn parse_table(file: &DataFile) -> Result<Vec<TableEntry>> {
    let err = |line: usize, msg: String| Error::Data { file: file.name.clone(), line, msg };
    let mut out: Vec<TableEntry> = Vec::new();
    for (ix, raw) in file.text.lines().enumerate() {
        let line = ix + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(err(line, format!("expected `index group pattern`, found {:?}", l)));
        }
        let index: usize = parts[0].parse().map_err(|_| err(line, format!("bad index {:?}", parts[0])))?;
        let group: SimpleType = parts[1].parse().map_err(|e: Error| err(line, e.to_string()))?;
        let pattern = parts[2].to_string();
        if pattern.len() != group.rank || !pattern.chars().all(|c| c == 'B' || c == 'W') {
            return Err(err(line, format!("pattern {:?} does not fit {}", pattern, group)));
        }
        if !pattern.contains('W') {
            return Err(err(line, "pattern has no white vertex".into()));
        }
        if out.iter().any(|e| e.index == index) {
            return Err(err(line, format!("duplicate entry {}", index)));
        }
        out.push(TableEntry { index, group, pattern, line });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub index: usize,
    pub group: String,
    pub pattern: String,
    pub black: Vec<usize>,
    pub nonreduced: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub entries: Vec<TableRow>,
    pub pass: bool,
}

/// Every listed parabolic must escape the Basic Lemma: at least two
/// non-reduced positive weights.
pub fn check_table(entries: &[TableEntry]) -> Result<TableReport> {
    let mut rows = Vec::new();
    for e in entries {
        let g = Grading::new(e.diagram()?);
        let k = g.positive_nonreduced_weights().len();
        rows.push(TableRow {
            index: e.index,
            group: e.group.to_string(),
            pattern: e.pattern.clone(),
            black: g.diagram.black_one_based(),
            nonreduced: k,
            pass: k >= 2,
        });
    }
    let pass = !rows.is_empty() && rows.iter().all(|r| r.pass);
    Ok(TableReport { entries: rows, pass })
}

/// A fact about ampleness of a Levi module on a graded component, with the
/// argument it rests on.
#[derive(Clone, Debug, Serialize)]
pub struct AmpleFact {
    pub shape: &'static str,
    pub ample: bool,
    pub source: &'static str,
}

/// Facts established by the constructions in this crate. Classifications
/// from outside sources are deliberately absent.
pub fn shipped_facts() -> Vec<AmpleFact> {
    vec![
        AmpleFact { shape: "reduced component", ample: true, source: "Basic Lemma" },
        AmpleFact {
            shape: "Hom(U_i, U_j) block of gl(V)",
            ample: true,
            source: "Moore-Penrose characteristic (mpchar::gl_hermitian_characteristic)",
        },
        AmpleFact {
            shape: "Hom(U, W) component of so/sp",
            ample: true,
            source: "B from A construction (mpchar::lemma_b_from_a)",
        },
        AmpleFact {
            shape: "C^k (x) C^n with a nondegenerate form, image trivial or nondegenerate",
            ample: true,
            source: "Witt invariants (k,0) and (k,k)",
        },
    ]
}
