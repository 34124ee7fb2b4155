use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use parazoo::ampleness::{self, json as ajson, DeformTask, Variant};
use parazoo::classify::{check_table, parse_table, scan_parabolics};
use parazoo::data::{cases_file, table_file};
use parazoo::grading::{ColouredDiagram, Grading, Weight};
use parazoo::harness::{self, OutputFormat, RunConfig};
use parazoo::mpchar::FormType;
use parazoo::rootsys::{RootSystem, SimpleType};
use parazoo::walkdiag::{build_weight_diagram, parse_cases, verify_case, StepRule};
use parazoo::Error;

#[derive(Parser)]
#[command(name = "parazoo", version, about = "Gradings, weight diagrams and ampleness checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Additive,
    Signed,
}

#[derive(Subcommand)]
enum Cmd {
    /// Components of the grading of a coloured diagram such as E7/1,3,5,7
    Grade {
        diagram: String,
        #[arg(long)]
        json: bool,
    },
    /// Basic Lemma scan of every parabolic of a type
    Classify {
        #[arg(value_name = "TYPE")]
        stype: String,
        #[arg(long)]
        json: bool,
    },
    /// Weight diagram for twisting weights given as NAME=c1,c2,... over the
    /// white vertices
    Diagram {
        diagram: String,
        #[arg(long, num_args = 1.., required = true)]
        twisting: Vec<String>,
        #[arg(long, value_enum, default_value = "additive")]
        rule: Rule,
        #[arg(long)]
        json: bool,
    },
    /// Check bundled cases against the computed weight diagrams
    VerifyCase {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        case: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
    },
    /// Non-reduced weight counts for the Table entries
    CheckTable {
        #[arg(long)]
        json: bool,
    },
    /// gl characteristic of a random block nilpotent
    MpTriple {
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = harness::DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// B from A trials for the orthogonal and symplectic Lemma
    Lemma {
        #[arg(long, default_value_t = 4)]
        u: usize,
        #[arg(long, default_value_t = 6)]
        w: usize,
        #[arg(long, default_value = "sym")]
        form: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Ample deformation search; random inputs unless --input is given
    Deform {
        #[arg(long)]
        variant: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of tensor factors for 7A on random inputs
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        max_restarts: usize,
    },
    /// Spinor module identities, e.g. --check m=4
    Spinor {
        #[arg(long, default_value = "m=4")]
        check: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run every verification suite
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = harness::DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
        /// Trials per deformation variant
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

enum Failure {
    /// A verification ran and failed.
    Check,
    Usage(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

/// `println!` that exits quietly when stdout is closed, e.g. piped into `head`.
macro_rules! out {
    ($($t:tt)*) => {
        if writeln!(std::io::stdout().lock(), $($t)*).is_err() {
            std::process::exit(0);
        }
    };
}

fn print_json(v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn grade(diagram: &str, as_json: bool) -> Outcome {
    let d: ColouredDiagram = diagram.parse()?;
    let g = Grading::new(d);
    let mut rows = Vec::new();
    for chi in g.positive_weights() {
        rows.push(json!({
            "weight": chi.0,
            "label": g.weight_label(chi)?,
            "roots": g.roots_of(chi).len(),
            "reduced": g.is_reduced(chi)?,
            "irreducible": g.is_irreducible_component(chi)?,
        }));
    }
    let nonreduced = g.positive_nonreduced_weights().len();
    if as_json {
        print_json(&json!({
            "diagram": g.diagram.to_string(),
            "pattern": g.diagram.pattern(),
            "levi_roots": g.zero_component.len(),
            "components": rows,
            "nonreduced": nonreduced,
            "basic_lemma_weakly_ample": nonreduced <= 1,
        }));
    } else {
        out!("{} ({}), Levi roots {}", g.diagram, g.diagram.pattern(), g.zero_component.len());
        for r in &rows {
            out!(
                "  {:<24} roots {:>3}  {}",
                r["label"].as_str().unwrap_or(""),
                r["roots"],
                if r["reduced"].as_bool() == Some(true) { "reduced" } else { "non-reduced" }
            );
        }
        out!("non-reduced positive weights: {}", nonreduced);
    }
    Ok(())
}

fn classify(stype: &str, as_json: bool) -> Outcome {
    let t: SimpleType = stype.parse()?;
    let recs = scan_parabolics(&RootSystem::new(t))?;
    if as_json {
        print_json(&serde_json::to_value(&recs).expect("serializable"));
    } else {
        for r in &recs {
            let b: Vec<String> = r.black.iter().map(|v| v.to_string()).collect();
            out!("{}/{:<16} non-reduced {}  basic lemma {}", t, b.join(","), r.nonreduced, r.basic_lemma_weakly_ample);
        }
    }
    Ok(())
}

fn parse_twisting(items: &[String], width: usize) -> Result<Vec<(String, Weight)>, Error> {
    let mut out = Vec::new();
    for (k, item) in items.iter().enumerate() {
        let (name, coeffs) = match item.split_once('=') {
            Some((n, c)) => (n.trim().to_string(), c),
            None => ((k + 1).to_string(), item.as_str()),
        };
        let w: Vec<i32> = coeffs
            .split(',')
            .map(|x| x.trim().parse::<i32>())
            .collect::<Result<_, _>>()
            .map_err(|_| Error::Config(format!("twisting {:?}: expected integers", item)))?;
        if w.len() != width {
            return Err(Error::Config(format!("twisting {:?} has {} coefficients, the diagram has {} white vertices", item, w.len(), width)));
        }
        out.push((name, Weight(w)));
    }
    Ok(out)
}

fn diagram(diagram: &str, twisting: &[String], rule: Rule, as_json: bool) -> Outcome {
    let d: ColouredDiagram = diagram.parse()?;
    let g = Grading::new(d);
    let tw = parse_twisting(twisting, g.diagram.white.len())?;
    let rule = match rule {
        Rule::Additive => StepRule::Additive,
        Rule::Signed => StepRule::Signed,
    };
    let wd = build_weight_diagram(&g, &tw, None, rule)?;
    if as_json {
        print_json(&serde_json::to_value(&wd).expect("serializable"));
    } else {
        for v in &wd.vertices {
            out!("{:<4} {}{}", v.name, g.weight_label(&v.weight)?, if v.reduced { "" } else { "  (non-reduced)" });
        }
        for a in &wd.arrows {
            out!("{}", a);
        }
    }
    Ok(())
}

fn verify_cases(case: Option<&str>, as_json: bool) -> Outcome {
    let file = cases_file()?;
    let table = table_file().ok().and_then(|t| parse_table(&t).ok());
    let specs = parse_cases(&file)?;
    let chosen: Vec<_> = match case {
        Some(id) => {
            let s: Vec<_> = specs.iter().filter(|s| s.id == id).collect();
            if s.is_empty() {
                return Err(Error::Config(format!("no case {:?} in {}", id, file.origin)).into());
            }
            s
        }
        None => specs.iter().collect(),
    };
    let mut reports = Vec::new();
    for s in chosen {
        reports.push(verify_case(s, table.as_deref())?);
    }
    let pass = reports.iter().all(|r| r.pass);
    if as_json {
        print_json(&json!({"cases": reports, "sha256": file.sha256, "pass": pass}));
    } else {
        for r in &reports {
            out!("[{}] case {} {} ({} vertices, {} arrows)", if r.pass { "PASS" } else { "FAIL" }, r.case, r.diagram, r.vertices, r.arrows);
            for c in r.checks.iter().filter(|c| !c.ok) {
                out!("    {}: {}", c.name, c.detail);
            }
            if let Some(l) = &r.table_link {
                if !l.ok {
                    out!("    note: {}", l.detail);
                }
            }
        }
    }
    verdict(pass)
}

fn table(as_json: bool) -> Outcome {
    let file = table_file()?;
    let rep = check_table(&parse_table(&file)?)?;
    if as_json {
        print_json(&json!({"report": rep, "sha256": file.sha256}));
    } else {
        for r in &rep.entries {
            out!("[{}] {:>2} {} {} non-reduced {}", if r.pass { "PASS" } else { "FAIL" }, r.index, r.group, r.pattern, r.nonreduced);
        }
    }
    verdict(rep.pass)
}

fn lemma(u: usize, w: usize, form: &str, trials: usize, seed: u64) -> Outcome {
    let form: FormType = form.parse()?;
    let cfg = RunConfig { seed, ..Default::default() };
    let s = harness::lemma_suite(&cfg, u, w, &[form], trials);
    print_json(&serde_json::to_value(&s).expect("serializable"));
    verdict(s.pass)
}

fn deform(variant: &str, seed: u64, input: Option<&PathBuf>, k: usize, max_restarts: usize) -> Outcome {
    let v: Variant = variant.parse()?;
    let (inputs, res) = match input {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("cannot read {}: {}", p.display(), e)))?;
            let val: Value = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", p.display(), e)))?;
            let inputs = ajson::inputs_from_json(&val)?;
            let res = ampleness::deform(&DeformTask { variant: v, inputs: inputs.clone(), seed, max_restarts });
            (inputs, res)
        }
        None => harness::deform_seeded(v, k, seed, max_restarts)?,
    };
    let o = res?;
    let mut out = ajson::outcome_to_json(&o);
    out["inputs"] = ajson::inputs_to_json(&inputs);
    out["seed"] = json!(seed);
    print_json(&out);
    verdict(o.verified)
}

fn spinor(check: &str, seed: u64, as_json: bool) -> Outcome {
    let m: usize = check
        .strip_prefix("m=")
        .and_then(|x| x.parse().ok())
        .ok_or_else(|| Error::Config(format!("expected --check m=<n>, got {:?}", check)))?;
    let cfg = RunConfig { seed, ..Default::default() };
    let s = harness::spinor_checks(&cfg, m);
    if as_json {
        print_json(&serde_json::to_value(&s).expect("serializable"));
    } else {
        out!("{}", s.line());
    }
    verdict(s.pass)
}

fn verify_all(seed: u64, tolerance: f64, output: Output, trials: usize) -> Outcome {
    let cfg = RunConfig {
        seed,
        tolerance,
        output: match output {
            Output::Text => OutputFormat::Text,
            Output::Json => OutputFormat::Json,
        },
        deform_trials: trials,
        ..Default::default()
    };
    let rep = harness::run_all_verifications(&cfg)?;
    match cfg.output {
        OutputFormat::Json => out!("{}", rep.to_json()),
        OutputFormat::Text => out!("{}", rep.to_text().trim_end()),
    }
    verdict(rep.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Grade { diagram, json } => grade(diagram, *json),
        Cmd::Classify { stype, json } => classify(stype, *json),
        Cmd::Diagram { diagram: d, twisting, rule, json } => diagram(d, twisting, *rule, *json),
        Cmd::VerifyCase { case, all: _, json } => verify_cases(case.as_deref(), *json),
        Cmd::CheckTable { json } => table(*json),
        Cmd::MpTriple { blocks, seed, tolerance } => harness::mp_triple_report(blocks, *seed, *tolerance)
            .map_err(Failure::from)
            .and_then(|v| {
                print_json(&v);
                verdict(v["pass"].as_bool() == Some(true))
            }),
        Cmd::Lemma { u, w, form, trials, seed } => lemma(*u, *w, form, *trials, *seed),
        Cmd::Deform { variant, seed, input, k, max_restarts } => deform(variant, *seed, input.as_ref(), *k, *max_restarts),
        Cmd::Spinor { check, seed, json } => spinor(check, *seed, *json),
        Cmd::VerifyAll { seed, tolerance, output, trials } => verify_all(*seed, *tolerance, *output, *trials),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
