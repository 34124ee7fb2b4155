//! Verification suites behind `verify-all`, one per acceptance criterion.
//!
//! Every suite is pure given the run seed, so reports are reproducible byte
//! for byte. Timings are deliberately left out of the report.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::ampleness::{
    self, deform, pf_normal_forms, random_subspace_with_invariants, run_variant_suite, spinor_normal_forms_k3,
    witt_pairs, DeformInputs, DeformTask, Stage, Variant, ALL_VARIANTS,
};
use crate::classify::{check_table, parse_table};
use crate::cxlinalg::{
    mp_inverse, penrose_residuals, random_matrix, random_vector, real, restriction_invariants, with_singular_values,
    zeros, BilinearSpace, CMat,
};
use crate::data::{cases_file, table_file, DataFile};
use crate::error::{Error, Result};
use crate::grading::{ColouredDiagram, Grading};
use crate::mpchar::{gl_hermitian_characteristic, lemma_b_from_a, lemma_residuals, BlockNilpotent, FormType, SL2_TOL};
use crate::rootsys::{catalogue, positive_root_count, Kind, RootSystem, SimpleType};
use crate::spinor::{Parity, SpinModule};
use crate::walkdiag::{parse_cases, verify_case};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
const MAX_LISTED_FAILURES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    /// Relative tolerance for residual checks.
    pub tolerance: f64,
    pub output: OutputFormat,
    /// Trials per deformation variant.
    pub deform_trials: usize,
    pub max_restarts: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: 0, tolerance: DEFAULT_TOLERANCE, output: OutputFormat::Text, deform_trials: 100, max_restarts: 1000 }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub id: usize,
    pub name: String,
    /// What the suite verifies: case ids, variants, identities.
    pub anchor: String,
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<String>,
    pub metrics: BTreeMap<String, Value>,
}

impl SuiteResult {
    fn new(id: usize, name: &str, anchor: &str) -> Self {
        SuiteResult {
            id,
            name: name.into(),
            anchor: anchor.into(),
            pass: true,
            checked: 0,
            failures: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.pass = false;
            if self.failures.len() < MAX_LISTED_FAILURES {
                self.failures.push(msg());
            }
        }
    }

    fn fail(&mut self, msg: String) {
        self.pass = false;
        if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures.push(msg);
        }
    }

    fn metric(&mut self, key: &str, v: impl Into<Value>) {
        self.metrics.insert(key.into(), v.into());
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({}; {} checks){}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.anchor,
            self.checked,
            if self.failures.is_empty() { String::new() } else { format!(": {}", self.failures.join("; ")) }
        )
    }
}

pub fn root_counts() -> SuiteResult {
    let mut s = SuiteResult::new(1, "root counts", "positive roots of A1-A8, B2-B8, C2-C8, D4-D8, E6-E8, F4, G2");
    for t in catalogue() {
        let rs = RootSystem::new(t);
        let (got, want) = (rs.positive.len(), positive_root_count(t));
        s.check(got == want, || format!("{}: {} positive roots, expected {}", t, got, want));
    }
    s
}

pub fn grading_partition() -> SuiteResult {
    let mut s = SuiteResult::new(2, "grading partition", "all 127 E7 and 255 E8 colourings");
    let mut components = 0usize;
    for rank in [7, 8] {
        let rs = RootSystem::new(SimpleType { kind: Kind::E, rank });
        let total = rs.roots.len();
        for mask in 0..(1u32 << rank) - 1 {
            let g = Grading::new(ColouredDiagram::from_mask(rs.clone(), mask).expect("proper colouring"));
            let sum: usize = g.components.values().map(|v| v.len()).sum::<usize>() + g.zero_component.len();
            let label = g.diagram.to_string();
            s.check(sum == total, || format!("{}: components cover {} of {} roots", label, sum, total));
            for chi in g.positive_weights() {
                components += 1;
                let ok = g.is_irreducible_component(chi).unwrap_or(false);
                s.check(ok, || format!("{}: component {} has several highest roots", label, chi));
            }
        }
    }
    s.metric("positive_components", components);
    s
}

pub fn case_reproduction(cases: &Result<DataFile>, table: &Result<DataFile>) -> SuiteResult {
    let mut s = SuiteResult::new(3, "case reproduction", "cases 1A 2A-2E 3 4A-4C 5A-5E");
    let file = match cases {
        Ok(f) => f,
        Err(e) => {
            s.fail(e.to_string());
            return s;
        }
    };
    let specs = match parse_cases(file) {
        Ok(v) => v,
        Err(e) => {
            s.fail(e.to_string());
            return s;
        }
    };
    let entries = table.as_ref().ok().and_then(|t| parse_table(t).ok());
    let expected = ["1A", "2A", "2B", "2C", "2D", "2E", "3", "4A", "4B", "4C", "5A", "5B", "5C", "5D", "5E"];
    let ids: BTreeSet<&str> = specs.iter().map(|c| c.id.as_str()).collect();
    for id in expected {
        s.check(ids.contains(id), || format!("case {} missing from {}", id, file.name));
    }
    let mut verified = Vec::new();
    for spec in &specs {
        match verify_case(spec, entries.as_deref()) {
            Ok(r) => {
                let bad: Vec<String> = r.checks.iter().filter(|c| !c.ok).map(|c| format!("{}: {}", c.name, c.detail)).collect();
                s.check(r.pass, || format!("case {} (line {}): {}", spec.id, spec.line, bad.join(", ")));
                if r.pass {
                    verified.push(spec.id.clone());
                }
            }
            Err(e) => s.check(false, || format!("case {} (line {}): {}", spec.id, spec.line, e)),
        }
    }
    s.metric("cases_verified", verified.len());
    s.metric("verified", verified);
    s
}

pub fn table_check(table: &Result<DataFile>) -> SuiteResult {
    let mut s = SuiteResult::new(4, "table check", "59 Table entries, at least two non-reduced weights each");
    let entries = match table.as_ref().map_err(Clone::clone).and_then(parse_table) {
        Ok(e) => e,
        Err(e) => {
            s.fail(e.to_string());
            return s;
        }
    };
    s.check(entries.len() == 59, || format!("{} entries, expected 59", entries.len()));
    match check_table(&entries) {
        Ok(rep) => {
            for r in &rep.entries {
                s.check(r.pass, || format!("entry {} ({} {}): {} non-reduced", r.index, r.group, r.pattern, r.nonreduced));
            }
        }
        Err(e) => s.fail(e.to_string()),
    }
    s
}

pub fn penrose_suite(cfg: &RunConfig) -> SuiteResult {
    let mut s = SuiteResult::new(5, "Penrose equations", "four Penrose equations, inverse of invertible F");
    let mut rng = cfg.rng(5);
    let mut worst = 0.0f64;
    let mut worst_inv = 0.0f64;
    for t in 0..1000 {
        let rows = rng.random_range(1..=8);
        let cols = rng.random_range(1..=8);
        let full = rows.min(cols);
        let r = if rng.random_bool(0.3) { rng.random_range(0..=full) } else { full };
        let log_cond: f64 = rng.random_range(0.0..=6.0);
        let sigma: Vec<f64> =
            (0..r).map(|i| if r > 1 { 10f64.powf(-log_cond * i as f64 / (r - 1) as f64) } else { 1.0 }).collect();
        let f = with_singular_values(&mut rng, rows, cols, &sigma) * real(rng.random_range(0.1..10.0));
        let fp = mp_inverse(&f);
        let res = penrose_residuals(&f, &fp);
        let m = res.iter().cloned().fold(0.0, f64::max);
        worst = worst.max(m);
        s.check(m < cfg.tolerance, || format!("trial {} ({}x{}, rank {}): residuals {:?}", t, rows, cols, r, res));
        if rows == cols && r == rows {
            if let Some(inv) = f.clone().full_piv_lu().try_inverse() {
                let e = (&fp - &inv).norm() / inv.norm();
                worst_inv = worst_inv.max(e);
                s.check(e < 1e-8, || format!("trial {}: F+ differs from the inverse by {:e}", t, e));
            }
        }
    }
    s.metric("max_relative_residual", worst);
    s.metric("max_inverse_error", worst_inv);
    s
}

pub fn gl_characteristic_suite(cfg: &RunConfig) -> SuiteResult {
    let mut s = SuiteResult::new(6, "gl characteristic", "per-block triples for blocks (2,3,2) and (1,4,2,1)");
    let mut rng = cfg.rng(6);
    let mut worst = 0.0f64;
    let mut worst_h = 0.0f64;
    for dims in [vec![2, 3, 2], vec![1, 4, 2, 1]] {
        for t in 0..100 {
            let x = BlockNilpotent::random(&mut rng, &dims);
            for ((i, j), tr) in gl_hermitian_characteristic(&x, SL2_TOL) {
                let herm = tr.residuals.h_hermitian.unwrap_or(f64::INFINITY);
                worst = worst.max(tr.residuals.ef_minus_h.max(tr.residuals.he_minus_2e).max(tr.residuals.hf_plus_2f));
                worst_h = worst_h.max(herm);
                s.check(tr.accepted, || format!("{:?} trial {} block ({},{}): residual {:e}", dims, t, i, j, tr.residuals.max()));
                s.check(herm < cfg.tolerance, || format!("{:?} trial {} block ({},{}): h not Hermitian ({:e})", dims, t, i, j, herm));
            }
        }
    }
    s.metric("max_sl2_residual", worst);
    s.metric("max_hermitian_residual", worst_h);
    s
}

/// Random `A: C^u -> W` whose image has a random radical, so all four
/// parts of the decomposition of `W` occur.
pub fn random_lemma_map<R: Rng>(rng: &mut R, w: &BilinearSpace, form: FormType, u: usize) -> CMat {
    let n = w.dim();
    let r = rng.random_range(0..=u.min(n));
    if r == 0 {
        return zeros(n, u);
    }
    let mut choices = Vec::new();
    for j in 0..=r {
        if r + j <= n && (form == FormType::Symmetric || (r - j) % 2 == 0) {
            choices.push(j);
        }
    }
    let j = choices[rng.random_range(0..choices.len())];
    let basis = random_subspace_with_invariants(rng, w, r, j).unwrap_or_else(|_| random_matrix(rng, n, r));
    basis * random_matrix(rng, r, u)
}

pub fn lemma_suite(cfg: &RunConfig, u: usize, w_dim: usize, forms: &[FormType], trials: usize) -> SuiteResult {
    let mut s = SuiteResult::new(7, "orthogonal/symplectic Lemma", "B from A, both sl2 equations, AB on the parts");
    let mut rng = cfg.rng(7);
    let mut worst = 0.0f64;
    let mut parts_seen = [0usize; 4];
    for &form in forms {
        let w = match form.w_space(w_dim) {
            Ok(w) => w,
            Err(e) => {
                s.fail(e.to_string());
                continue;
            }
        };
        for t in 0..trials {
            let a = random_lemma_map(&mut rng, &w, form, u);
            let res = lemma_b_from_a(&a, &w).and_then(|sol| lemma_residuals(&a, &w, &sol));
            match res {
                Ok(r) => {
                    worst = worst.max(r.max());
                    for (k, d) in r.dims.iter().enumerate() {
                        if *d > 0 {
                            parts_seen[k] += 1;
                        }
                    }
                    s.check(r.max() < SL2_TOL, || format!("{:?} trial {}: residual {:e}", form, t, r.max()));
                }
                Err(e) => s.check(false, || format!("{:?} trial {}: {}", form, t, e)),
            }
        }
    }
    s.metric("max_residual", worst);
    s.metric("trials_with_nonzero_part", parts_seen.to_vec());
    s
}

/// Clifford identities, parity, symmetry type and the (s, s) dichotomy.
pub fn spinor_checks(cfg: &RunConfig, m: usize) -> SuiteResult {
    let mut s = SuiteResult::new(8, "spinor identities", "rho(v)^2 = (v,v) Id, orthogonality and symmetry of the form");
    let sm = match SpinModule::new(m) {
        Ok(sm) => sm,
        Err(e) => {
            s.fail(e.to_string());
            return s;
        }
    };
    let mut rng = cfg.rng(8 + m as u64);
    let n = sm.dim();
    let id = crate::cxlinalg::eye(n);
    s.check(sm.half_dim() == 1 << (m - 1) && sm.even.len() == sm.half_dim() && sm.odd.len() == sm.half_dim(), || {
        format!("half dimensions {} and {}", sm.even.len(), sm.odd.len())
    });
    let mut worst = 0.0f64;
    for t in 0..100 {
        let v = random_vector(&mut rng, 2 * m);
        let w = random_vector(&mut rng, 2 * m);
        let rv = sm.rho(&v).expect("length 2m");
        let rw = sm.rho(&w).expect("length 2m");
        let sq = (&rv * &rv - &id * sm.vector_dot(&v, &v)).norm() / (1.0 + v.norm_squared());
        let pol = (&rv * &rw + &rw * &rv - &id * (sm.vector_dot(&v, &w) * 2.0)).norm() / (1.0 + v.norm() * w.norm());
        worst = worst.max(sq).max(pol);
        s.check(sq < cfg.tolerance, || format!("trial {}: rho(v)^2 residual {:e}", t, sq));
        s.check(pol < cfg.tolerance, || format!("trial {}: Clifford relation residual {:e}", t, pol));
    }
    s.metric("max_clifford_residual", worst);
    for i in 0..2 * m {
        let mut e = crate::cxlinalg::CVec::zeros(2 * m);
        e[i] = real(1.0);
        let r = sm.rho(&e).expect("length 2m");
        for &src in &sm.even {
            for &dst in &sm.even {
                s.check(r[(dst as usize, src as usize)] == real(0.0), || format!("rho(V) keeps parity at {}", src));
            }
        }
    }
    if m.is_multiple_of(2) {
        let g = sm.form_gram.as_ref().expect("even m");
        for &a in &sm.even {
            for &b in &sm.odd {
                s.check(g[(a as usize, b as usize)] == real(0.0) && g[(b as usize, a as usize)] == real(0.0), || {
                    format!("S+ and S- pair nontrivially at ({}, {})", a, b)
                });
            }
        }
        let sign = if m.is_multiple_of(4) { 1.0 } else { -1.0 };
        for p in [Parity::Even, Parity::Odd] {
            let h = sm.half_gram(p).expect("even m");
            let asym = (h.transpose() - &h * real(sign)).norm();
            s.check(asym == 0.0, || format!("form on {:?} half is not {}", p, if sign > 0.0 { "symmetric" } else { "skew" }));
        }
    }
    if m == 2 {
        let h = sm.half_gram(Parity::Even).expect("even m");
        s.check((h.transpose() + &h).norm() == 0.0, || "m = 2 form is not skew".into());
    }
    if m == 4 {
        // the (s, s) dichotomy for the orbit map v -> rho(v) s
        let minus = sm.half_space(Parity::Odd).expect("m = 4");
        let plus = sm.half_space(Parity::Even).expect("m = 4");
        for t in 0..20 {
            let generic = random_vector(&mut rng, 8);
            let iso = ampleness::random_subspace_with_invariants(&mut rng, &plus, 1, 1).expect("isotropic line");
            for (label, x) in [("generic", generic), ("isotropic", iso.column(0).into_owned())] {
                let full = sm.from_half(Parity::Even, &x);
                let cols: Vec<_> = (0..2 * m)
                    .map(|i| {
                        let mut e = crate::cxlinalg::CVec::zeros(2 * m);
                        e[i] = real(1.0);
                        sm.to_half(Parity::Odd, &(sm.rho(&e).expect("length 2m") * &full))
                    })
                    .collect();
                let span = CMat::from_columns(&cols);
                let (r, k) = restriction_invariants(&span, &minus).expect("shapes");
                let norm = sm.spin_form(&full, &full).expect("m = 4").norm();
                let ok = if label == "generic" { norm > 1e-8 && r == 8 } else { r == 4 && k == 4 };
                s.check(ok, || format!("trial {} {} s: rho(V)s has invariants ({}, {})", t, label, r, k));
            }
        }
    }
    s
}

pub fn spinor_suite(cfg: &RunConfig) -> SuiteResult {
    let mut s = spinor_checks(cfg, 4);
    let two = spinor_checks(cfg, 2);
    s.checked += two.checked;
    if !two.pass {
        s.pass = false;
        s.failures.extend(two.failures.into_iter().map(|f| format!("m = 2: {}", f)));
    }
    s
}

pub fn witt_suite(cfg: &RunConfig) -> SuiteResult {
    let mut s = SuiteResult::new(9, "Witt invariants", "maps C^2 -> C^3, symmetric form: exactly 5 orbits");
    let (dv, dw) = (2, 3);
    let w = BilinearSpace::symmetric(dw);
    let allowed: BTreeSet<(usize, usize)> = witt_pairs(dv, dw).into_iter().collect();
    s.check(allowed.len() == 5, || format!("{} pairs allowed by the inequalities", allowed.len()));
    let mut rng = cfg.rng(9);
    let mut realized = BTreeSet::new();
    for &(i, j) in &allowed {
        for _ in 0..5 {
            let a = match random_subspace_with_invariants(&mut rng, &w, i, j) {
                Ok(b) if i > 0 => b * random_matrix(&mut rng, i, dv),
                Ok(_) => zeros(dw, dv),
                Err(e) => {
                    s.fail(format!("({}, {}): {}", i, j, e));
                    continue;
                }
            };
            let got = restriction_invariants(&a, &w).expect("shapes");
            s.check(got == (i, j), || format!("constructed ({}, {}) measured {:?}", i, j, got));
            realized.insert(got);
        }
    }
    for _ in 0..500 {
        let r = rng.random_range(0..=dv);
        let a = random_matrix(&mut rng, dw, r) * random_matrix(&mut rng, r, dv);
        let got = restriction_invariants(&a, &w).expect("shapes");
        s.check(allowed.contains(&got), || format!("random map realizes {:?}, outside the allowed set", got));
        realized.insert(got);
    }
    s.check(realized == allowed, || format!("realized {:?}, allowed {:?}", realized, allowed));
    s.metric("realized", realized.iter().map(|&(i, j)| vec![i, j]).collect::<Vec<_>>());
    s
}

/// `(verified, stage, attempts)` of one search, or its error.
pub type WitnessCheck = Result<(bool, Stage, usize)>;

/// The explicit constructions on the normal forms, each of which must
/// verify on its first candidate.
pub fn explicit_witness_checks(cfg: &RunConfig) -> Vec<(String, WitnessCheck)> {
    let mut rng = cfg.rng(100);
    let pf = BilinearSpace::pfaffian4();
    let sm = SpinModule::new(4).expect("m = 4");
    let minus = sm.half_space(Parity::Odd).expect("m = 4");
    let mut tasks: Vec<(String, Variant, DeformInputs)> = Vec::new();
    for (i, a) in pf_normal_forms().iter().enumerate() {
        let b = ampleness::random_not_ample(&mut rng, &pf, 4).expect("not-ample B");
        tasks.push((format!("6D A{}", i + 1), Variant::V6D, DeformInputs::default().with("A", a.clone()).with("B", b)));
    }
    let mut e1 = zeros(3, 1);
    e1[(0, 0)] = real(1.0);
    tasks.push(("5C v=e1 B=0".into(), Variant::V5C, DeformInputs::default().with("v", e1).with("B", zeros(3, 2))));
    for (i, a) in spinor_normal_forms_k3().iter().enumerate() {
        let b = ampleness::random_not_ample(&mut rng, &minus, 3).expect("not-ample B");
        tasks.push((format!("7B A{}", i + 1), Variant::V7B, DeformInputs::default().with("A", a.clone()).with("B", b)));
    }
    tasks
        .into_iter()
        .map(|(label, v, inp)| {
            let r = deform(&DeformTask { variant: v, inputs: inp, seed: cfg.seed, max_restarts: cfg.max_restarts })
                .map(|o| (o.verified, o.stage, o.attempts));
            (label, r)
        })
        .collect()
}

pub fn deformation_suite(cfg: &RunConfig) -> SuiteResult {
    let mut s = SuiteResult::new(10, "deformation suites", "variants 1A-7C; explicit witnesses for 6D, 5C, 7B");
    let mut per_variant = BTreeMap::new();
    for v in ALL_VARIANTS {
        let ks: &[usize] = if v == Variant::V7A { &[2, 3] } else { &[0] };
        for &k in ks {
            let sum = run_variant_suite(v, k, cfg.deform_trials, cfg.seed, cfg.max_restarts);
            s.checked += sum.trials;
            if sum.verified != sum.trials {
                s.pass = false;
                for f in sum.failures.iter().take(3) {
                    if s.failures.len() < MAX_LISTED_FAILURES {
                        s.failures.push(format!("{} {}", sum.variant, f));
                    }
                }
            }
            per_variant.insert(
                sum.variant.clone(),
                json!({"verified": sum.verified, "trials": sum.trials, "by_stage": sum.by_stage, "max_restarts_used": sum.max_restarts_used}),
            );
        }
    }
    let mut explicit = BTreeMap::new();
    for (label, r) in explicit_witness_checks(cfg) {
        let ok = matches!(r, Ok((true, Stage::Explicit, 1)));
        s.check(ok, || format!("{}: explicit witness did not verify first: {:?}", label, r));
        explicit.insert(label, ok);
    }
    s.metric("variants", json!(per_variant));
    s.metric("explicit_witnesses", json!(explicit));
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub tolerance: f64,
    pub deform_trials: usize,
    pub max_restarts: usize,
    pub data: Vec<Value>,
    pub suites: Vec<SuiteResult>,
    pub case_verifications: usize,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in &self.data {
            out.push_str(&format!(
                "data {} ({}): sha256 {}\n",
                d["name"].as_str().unwrap_or("?"),
                d["origin"].as_str().unwrap_or("?"),
                d["sha256"].as_str().unwrap_or("-")
            ));
        }
        for s in &self.suites {
            out.push_str(&s.line());
            out.push('\n');
        }
        out.push_str(&format!(
            "{}: {} of {} suites, {} case verifications\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.suites.iter().filter(|s| s.pass).count(),
            self.suites.len(),
            self.case_verifications
        ));
        out
    }
}

fn data_entry(name: &str, f: &Result<DataFile>) -> Value {
    match f {
        Ok(d) => json!({"name": d.name, "origin": d.origin, "sha256": d.sha256}),
        Err(e) => json!({"name": name, "origin": "unreadable", "sha256": Value::Null, "error": e.to_string()}),
    }
}

/// Run every suite. Data files come from the bundle or from the directory
/// named by the data-dir variable.
pub fn run_all_verifications(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let cases = cases_file();
    let table = table_file();
    let suites = vec![
        root_counts(),
        grading_partition(),
        case_reproduction(&cases, &table),
        table_check(&table),
        penrose_suite(cfg),
        gl_characteristic_suite(cfg),
        lemma_suite(cfg, 4, 6, &[FormType::Symmetric, FormType::Skew], 100),
        spinor_suite(cfg),
        witt_suite(cfg),
        deformation_suite(cfg),
    ];
    let case_verifications = suites[2].metrics.get("cases_verified").and_then(|v| v.as_u64()).unwrap_or(0) as usize;
    let pass = suites.iter().all(|s| s.pass);
    Ok(Report {
        tool: "parazoo",
        version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        tolerance: cfg.tolerance,
        deform_trials: cfg.deform_trials,
        max_restarts: cfg.max_restarts,
        data: vec![data_entry(crate::data::CASES_FILE, &cases), data_entry(crate::data::TABLE_FILE, &table)],
        suites,
        case_verifications,
        pass,
    })
}

/// Triples of the gl characteristic of a random block nilpotent.
pub fn mp_triple_report(dims: &[usize], seed: u64, tol: f64) -> Result<Value> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Config("block dimensions must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = BlockNilpotent::random(&mut rng, dims);
    let mut blocks = Vec::new();
    let mut all = true;
    for ((i, j), t) in gl_hermitian_characteristic(&x, SL2_TOL) {
        let herm = t.residuals.h_hermitian.unwrap_or(f64::INFINITY);
        let ok = t.accepted && herm < tol;
        all &= ok;
        blocks.push(json!({
            "block": [i + 1, j + 1],
            "rank": crate::cxlinalg::rank(&x.blocks[&(i, j)], crate::cxlinalg::RANK_TOL),
            "ef_minus_h": t.residuals.ef_minus_h,
            "he_minus_2e": t.residuals.he_minus_2e,
            "hf_plus_2f": t.residuals.hf_plus_2f,
            "h_hermitian": herm,
            "accepted": ok,
        }));
    }
    Ok(json!({"dims": dims, "seed": seed, "triples": blocks, "pass": all}))
}

/// Seeded random inputs for a variant and the search on them.
pub fn deform_seeded(v: Variant, k: usize, seed: u64, max_restarts: usize) -> Result<(DeformInputs, Result<ampleness::DeformOutcome>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs = ampleness::random_inputs(&mut rng, v, k)?;
    let out = deform(&DeformTask { variant: v, inputs: inputs.clone(), seed, max_restarts });
    Ok((inputs, out))
}
