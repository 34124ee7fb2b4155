//! Weight diagrams: non-reduced weights, rubbish weights reachable from them
//! by twisting weights, and the arrows between them.
//!
//! Arrows are decided without structure constants. Each positive component
//! is an irreducible Levi module and the bracket of two components is a
//! submodule of the target, so the bracket is either zero or onto; it is
//! nonzero as soon as one pair of roots sums to a root.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::classify::TableEntry;
use crate::data::DataFile;
use crate::error::{Error, Result};
use crate::grading::{ColouredDiagram, Grading, Weight};
use crate::rootsys::{RootSystem, SimpleType};

/// How twisting weights may be combined with a non-reduced weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StepRule {
    /// `chi + sum n_i mu_i` with all `n_i >= 0`.
    Additive,
    /// Closure under `+mu` and `-mu` steps through reduced positive weights.
    Signed,
}

fn check_twisting(g: &Grading, twisting: &[Weight]) -> Result<()> {
    for mu in twisting {
        if mu.0.len() != g.diagram.white.len() || !g.is_weight(mu) || !mu.is_positive() {
            return Err(Error::Rejected(format!("twisting {} is not a positive weight", mu)));
        }
    }
    Ok(())
}

pub fn rubbish_weights(g: &Grading, twisting: &[Weight], rule: StepRule) -> Result<BTreeSet<Weight>> {
    check_twisting(g, twisting)?;
    let nonreduced = g.positive_nonreduced_weights();
    let reduced_positive = |w: &Weight| w.is_positive() && g.is_weight(w) && !g.is_weight(&w.scale(2));
    let mut out = BTreeSet::new();
    match rule {
        StepRule::Additive => {
            // every weight is bounded by the restriction of the highest root
            let top = g.weight_of(g.rs().highest_root());
            let mut seen: BTreeSet<Weight> = nonreduced.iter().cloned().collect();
            let mut queue: VecDeque<Weight> = nonreduced.into_iter().collect();
            while let Some(w) = queue.pop_front() {
                for mu in twisting {
                    let next = w.add(mu);
                    if next.0.iter().zip(&top.0).any(|(a, b)| a > b) || seen.contains(&next) {
                        continue;
                    }
                    seen.insert(next.clone());
                    if reduced_positive(&next) {
                        out.insert(next.clone());
                    }
                    queue.push_back(next);
                }
            }
        }
        StepRule::Signed => {
            let mut seen: BTreeSet<Weight> = nonreduced.iter().cloned().collect();
            let mut queue: VecDeque<Weight> = nonreduced.into_iter().collect();
            while let Some(w) = queue.pop_front() {
                for mu in twisting {
                    for next in [w.add(mu), w.sub(mu)] {
                        if reduced_positive(&next) && !seen.contains(&next) {
                            seen.insert(next.clone());
                            out.insert(next.clone());
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn root_sum_exists(g: &Grading, chi1: &Weight, mu: &Weight) -> bool {
    let rs = g.rs();
    let right = g.roots_of(mu);
    g.roots_of(chi1).iter().any(|a| {
        right.iter().any(|b| {
            let s: Vec<i32> = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
            rs.contains(&s)
        })
    })
}

/// Head of the arrow `chi1 -mu-> chi1 + mu`, if the bracket is nonzero.
pub fn arrow_head(g: &Grading, chi1: &Weight, mu: &Weight) -> Option<Weight> {
    let chi2 = chi1.add(mu);
    if chi2.0.len() != g.diagram.white.len() || !g.is_weight(&chi2) {
        return None;
    }
    if root_sum_exists(g, chi1, mu) {
        Some(chi2)
    } else {
        None
    }
}

/// Whether every root of the target component is a sum of a root of `chi1`
/// and a root of `mu`. Equivalent to `arrow_head` being `Some` when the
/// bracket-onto argument holds.
pub fn bracket_covers_target(g: &Grading, chi1: &Weight, mu: &Weight) -> bool {
    let chi2 = chi1.add(mu);
    let left = g.roots_of(chi1);
    let right = g.roots_of(mu);
    let sums: BTreeSet<Vec<i32>> = left
        .iter()
        .flat_map(|a| {
            right
                .iter()
                .map(move |b| a.iter().zip(b.iter()).map(|(x, y)| x + y).collect::<Vec<i32>>())
        })
        .collect();
    let target = g.roots_of(&chi2);
    !target.is_empty() && target.iter().all(|r| sums.contains(*r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub name: String,
    pub weight: Weight,
    pub reduced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Arrow {
    pub tail: String,
    pub label: String,
    pub head: String,
}

impl std::fmt::Display for Arrow {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        write!(f, "{} -{}-> {}", self.tail, self.label, self.head)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightDiagram {
    pub twisting: Vec<(String, Weight)>,
    pub vertices: Vec<Vertex>,
    pub arrows: Vec<Arrow>,
}

fn default_name(capital: bool, k: usize) -> String {
    let base = if capital { b'A' } else { b'a' };
    if k < 26 {
        ((base + k as u8) as char).to_string()
    } else {
        format!("{}{}", (base + (k % 26) as u8) as char, k / 26)
    }
}

/// Builds the diagram. Vertices are named from `names` when given, otherwise
/// capitals for non-reduced weights and small letters for rubbish weights,
/// each in lexicographic order.
pub fn build_weight_diagram(
    g: &Grading,
    twisting: &[(String, Weight)],
    names: Option<&BTreeMap<Weight, String>>,
    rule: StepRule,
) -> Result<WeightDiagram> {
    let mus: Vec<Weight> = twisting.iter().map(|(_, w)| w.clone()).collect();
    let rubbish = rubbish_weights(g, &mus, rule)?;
    let mut vertices = Vec::new();
    for (k, w) in g.positive_nonreduced_weights().into_iter().enumerate() {
        let name = names.and_then(|m| m.get(&w).cloned()).unwrap_or_else(|| default_name(true, k));
        vertices.push(Vertex { name, weight: w, reduced: false });
    }
    for (k, w) in rubbish.into_iter().enumerate() {
        let name = names.and_then(|m| m.get(&w).cloned()).unwrap_or_else(|| default_name(false, k));
        vertices.push(Vertex { name, weight: w, reduced: true });
    }
    let by_weight: BTreeMap<&Weight, &str> =
        vertices.iter().map(|v| (&v.weight, v.name.as_str())).collect();
    let mut arrows = Vec::new();
    for v in &vertices {
        for (label, mu) in twisting {
            if let Some(h) = arrow_head(g, &v.weight, mu) {
                if let Some(head) = by_weight.get(&h) {
                    arrows.push(Arrow { tail: v.name.clone(), label: label.clone(), head: head.to_string() });
                }
            }
        }
    }
    Ok(WeightDiagram { twisting: twisting.to_vec(), vertices, arrows })
}

/// One cell of a printed weight diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cell {
    White(i32),
    Black(i32),
}

#[derive(Clone, Debug, Serialize)]
pub struct PrintedWeight {
    pub name: String,
    pub line: usize,
    pub cells: Vec<Cell>,
}

impl PrintedWeight {
    pub fn black(&self) -> Vec<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| matches!(c, Cell::Black(_)))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn white_coeffs(&self) -> Weight {
        Weight(self.cells.iter().filter_map(|c| if let Cell::White(x) = c { Some(*x) } else { None }).collect())
    }

    pub fn black_labels(&self) -> Vec<i32> {
        self.cells.iter().filter_map(|c| if let Cell::Black(x) = c { Some(*x) } else { None }).collect()
    }

    pub fn is_capital(&self) -> bool {
        self.name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrintedArrow {
    pub arrow: Arrow,
    pub line: usize,
}

/// A transcribed case: the colouring it draws, its named weights, twisting
/// weights and arrows.
#[derive(Clone, Debug, Serialize)]
pub struct CaseSpec {
    pub id: String,
    pub line: usize,
    pub group: SimpleType,
    /// Table entries the case text says it covers.
    pub parabolics: Vec<usize>,
    /// 1-based black vertices.
    pub black: Vec<usize>,
    pub weights: Vec<PrintedWeight>,
    pub twists: Vec<PrintedWeight>,
    pub arrows: Vec<PrintedArrow>,
}

impl CaseSpec {
    pub fn diagram(&self) -> Result<ColouredDiagram> {
        let black: Vec<usize> = self
            .black
            .iter()
            .map(|&v| {
                if v == 0 || v > self.group.rank {
                    Err(Error::Rejected(format!("case {}: vertex {} out of range", self.id, v)))
                } else {
                    Ok(v - 1)
                }
            })
            .collect::<Result<_>>()?;
        ColouredDiagram::new(RootSystem::new(self.group), &black)
    }
}

fn data_err(file: &DataFile, line: usize, msg: impl Into<String>) -> Error {
    Error::Data { file: file.name.clone(), line, msg: msg.into() }
}

fn parse_cells(file: &DataFile, line: usize, s: &str) -> Result<Vec<Cell>> {
    s.split_whitespace()
        .map(|tok| {
            if let Some(inner) = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
                inner.parse().map(Cell::Black)
            } else {
                tok.parse().map(Cell::White)
            }
            .map_err(|_| data_err(file, line, format!("bad diagram cell {:?}", tok)))
        })
        .collect()
}

pub fn parse_cases(file: &DataFile) -> Result<Vec<CaseSpec>> {
    let mut out: Vec<CaseSpec> = Vec::new();
    for (ix, raw) in file.text.lines().enumerate() {
        let line = ix + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if let Some(rest) = l.strip_prefix("[case ") {
            let id = rest
                .strip_suffix(']')
                .ok_or_else(|| data_err(file, line, "unterminated stanza header"))?
                .trim()
                .to_string();
            if out.iter().any(|c| c.id == id) {
                return Err(data_err(file, line, format!("duplicate case {}", id)));
            }
            out.push(CaseSpec {
                id,
                line,
                group: SimpleType::new(crate::rootsys::Kind::E, 7)?,
                parabolics: Vec::new(),
                black: Vec::new(),
                weights: Vec::new(),
                twists: Vec::new(),
                arrows: Vec::new(),
            });
            continue;
        }
        let case = out.last_mut().ok_or_else(|| data_err(file, line, "entry outside a case stanza"))?;
        let (key, value) = match l.split_once('=') {
            Some((k, v)) => (k.trim(), Some(v.trim())),
            None => (l, None),
        };
        let words: Vec<&str> = key.split_whitespace().collect();
        match (words.as_slice(), value) {
            (["group"], Some(v)) => {
                case.group = v.parse().map_err(|e: Error| data_err(file, line, e.to_string()))?;
            }
            (["parabolics"], Some(v)) | (["black"], Some(v)) => {
                let nums: Vec<usize> = v
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| data_err(file, line, format!("bad number {:?}", t))))
                    .collect::<Result<_>>()?;
                if words[0] == "black" {
                    case.black = nums;
                } else {
                    case.parabolics = nums;
                }
            }
            (["weight", name], Some(v)) | (["twist", name], Some(v)) => {
                let pw = PrintedWeight { name: name.to_string(), line, cells: parse_cells(file, line, v)? };
                if words[0] == "twist" {
                    if name.parse::<u32>().is_err() {
                        return Err(data_err(file, line, format!("twisting label {:?} is not a numeral", name)));
                    }
                    case.twists.push(pw);
                } else {
                    if !name.chars().all(|c| c.is_ascii_alphabetic()) {
                        return Err(data_err(file, line, format!("weight name {:?} is not a letter", name)));
                    }
                    case.weights.push(pw);
                }
            }
            (["arrow", tail, label, head], None) => case.arrows.push(PrintedArrow {
                arrow: Arrow { tail: tail.to_string(), label: label.to_string(), head: head.to_string() },
                line,
            }),
            _ => return Err(data_err(file, line, format!("cannot parse {:?}", l))),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub diagram: String,
    pub pass: bool,
    pub checks: Vec<CheckItem>,
    /// Informational; does not affect `pass`.
    pub table_link: Option<CheckItem>,
    pub vertices: usize,
    pub arrows: usize,
}

fn item(name: &str, ok: bool, detail: String) -> CheckItem {
    CheckItem { name: name.into(), ok, detail }
}

fn show_set<T: std::fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", v.join(", "))
}

/// Checks a transcribed case against the computed grading: colouring,
/// printed labels, non-reduced and rubbish weights, and the arrow set.
pub fn verify_case(spec: &CaseSpec, table: Option<&[TableEntry]>) -> Result<CaseReport> {
    let diagram = spec.diagram().map_err(|e| Error::Config(format!("case {}: {}", spec.id, e)))?;
    let g = Grading::new(diagram);
    let n = spec.group.rank;
    let mut checks = Vec::new();

    let black0: Vec<usize> = spec.black.iter().map(|v| v - 1).collect();
    let bad_colour: Vec<&str> = spec
        .weights
        .iter()
        .chain(&spec.twists)
        .filter(|w| w.cells.len() != n || w.black() != black0)
        .map(|w| w.name.as_str())
        .collect();
    checks.push(item(
        "colouring",
        bad_colour.is_empty(),
        if bad_colour.is_empty() {
            format!("all diagrams drawn on {}", g.diagram.pattern())
        } else {
            format!("diagrams not on the stated colouring: {}", bad_colour.join(" "))
        },
    ));
    if !bad_colour.is_empty() {
        return Ok(CaseReport {
            case: spec.id.clone(),
            diagram: g.diagram.to_string(),
            pass: false,
            checks,
            table_link: None,
            vertices: 0,
            arrows: 0,
        });
    }

    let mut not_weights = Vec::new();
    let mut bad_labels = Vec::new();
    for w in spec.weights.iter().chain(&spec.twists) {
        let chi = w.white_coeffs();
        if !g.is_weight(&chi) {
            not_weights.push(format!("{}={}", w.name, chi));
            continue;
        }
        match g.black_labels(&chi) {
            Ok(l) if l == w.black_labels() => {}
            Ok(l) => bad_labels.push(format!("{}: printed {:?}, computed {:?}", w.name, w.black_labels(), l)),
            Err(e) => bad_labels.push(format!("{}: {}", w.name, e)),
        }
    }
    checks.push(item(
        "weights",
        not_weights.is_empty(),
        if not_weights.is_empty() {
            format!("{} named weights are weights", spec.weights.len() + spec.twists.len())
        } else {
            format!("not weights: {}", not_weights.join(" "))
        },
    ));
    checks.push(item(
        "labels",
        bad_labels.is_empty(),
        if bad_labels.is_empty() {
            "black labels equal the highest-weight labels".into()
        } else {
            bad_labels.join("; ")
        },
    ));

    let twisting: Vec<(String, Weight)> = spec.twists.iter().map(|t| (t.name.clone(), t.white_coeffs())).collect();
    let twist_ok = twisting.iter().all(|(_, w)| g.is_weight(w) && w.is_positive());
    checks.push(item(
        "twisting",
        twist_ok,
        if twist_ok {
            format!("{} positive twisting weights", twisting.len())
        } else {
            "a twisting weight is not a positive weight".into()
        },
    ));
    if !twist_ok || !not_weights.is_empty() {
        let pass = false;
        return Ok(CaseReport {
            case: spec.id.clone(),
            diagram: g.diagram.to_string(),
            pass,
            checks,
            table_link: None,
            vertices: 0,
            arrows: 0,
        });
    }

    let mut names: BTreeMap<Weight, String> = BTreeMap::new();
    let mut dup = Vec::new();
    for w in &spec.weights {
        if let Some(prev) = names.insert(w.white_coeffs(), w.name.clone()) {
            dup.push(format!("{}={}", prev, w.name));
        }
    }
    let printed_caps: BTreeSet<Weight> = spec.weights.iter().filter(|w| w.is_capital()).map(|w| w.white_coeffs()).collect();
    let printed_small: BTreeSet<Weight> = spec.weights.iter().filter(|w| !w.is_capital()).map(|w| w.white_coeffs()).collect();
    let computed_caps: BTreeSet<Weight> = g.positive_nonreduced_weights().into_iter().collect();
    let caps_ok = printed_caps == computed_caps && dup.is_empty();
    checks.push(item(
        "nonreduced",
        caps_ok,
        if caps_ok {
            format!("capitals are exactly the {} non-reduced positive weights", computed_caps.len())
        } else {
            format!(
                "printed {} computed {}{}",
                show_set(&printed_caps),
                show_set(&computed_caps),
                if dup.is_empty() { String::new() } else { format!(" duplicates {}", dup.join(" ")) }
            )
        },
    ));
    let mus: Vec<Weight> = twisting.iter().map(|(_, w)| w.clone()).collect();
    let rubbish = rubbish_weights(&g, &mus, StepRule::Additive)?;
    let small_ok = printed_small == rubbish;
    checks.push(item(
        "rubbish",
        small_ok,
        if small_ok {
            format!("small letters are exactly the {} rubbish weights", rubbish.len())
        } else {
            let missing: Vec<&Weight> = rubbish.difference(&printed_small).collect();
            let extra: Vec<&Weight> = printed_small.difference(&rubbish).collect();
            format!("computed but not printed {}; printed but not computed {}", show_set(missing), show_set(extra))
        },
    ));

    let wd = build_weight_diagram(&g, &twisting, Some(&names), StepRule::Additive)?;
    let computed: BTreeSet<Arrow> = wd.arrows.iter().cloned().collect();
    let printed: BTreeSet<Arrow> = spec.arrows.iter().map(|a| a.arrow.clone()).collect();
    let arrows_ok = computed == printed;
    checks.push(item(
        "arrows",
        arrows_ok,
        if arrows_ok {
            format!("{} arrows equal the printed list", computed.len())
        } else {
            let missing: Vec<String> = computed.difference(&printed).map(|a| a.to_string()).collect();
            let extra: Vec<String> = printed
                .difference(&computed)
                .map(|a| {
                    let line = spec.arrows.iter().find(|p| &p.arrow == a).map(|p| p.line).unwrap_or(0);
                    format!("{} (line {})", a, line)
                })
                .collect();
            format!("computed but not printed [{}]; printed but not computed [{}]", missing.join(", "), extra.join(", "))
        },
    ));

    let table_link = table.map(|rows| {
        let pattern = g.diagram.pattern();
        let drawn: Vec<usize> = rows
            .iter()
            .filter(|r| r.group == spec.group && r.pattern == pattern)
            .map(|r| r.index)
            .collect();
        let ok = drawn.iter().any(|i| spec.parabolics.contains(i));
        item(
            "table_link",
            ok,
            format!("drawn colouring is Table row(s) {:?}; case cites {:?}", drawn, spec.parabolics),
        )
    });

    let pass = checks.iter().all(|c| c.ok);
    Ok(CaseReport {
        case: spec.id.clone(),
        diagram: g.diagram.to_string(),
        pass,
        checks,
        table_link,
        vertices: wd.vertices.len(),
        arrows: wd.arrows.len(),
    })
}
