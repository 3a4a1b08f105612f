//! `modreedy`: command-line checks for modified Reedy structures.
//!
//! Reports go to stdout as JSON. Exit codes: 0 all checks pass, 1 a check failed (the
//! report carries a witness), 2 usage or format error, 3 budget exceeded.

mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modreedy::ambient::verify::{verify_model_axioms, AxiomOptions};
use modreedy::ambient::{Carrier, ChainCarrier, FinSet, Selector};
use modreedy::comparisons::check_nerve_adjunctions;
use modreedy::diagram::{classify, latching_object, matching_object, Diagram, DiagramMap, Structure};
use modreedy::engine::{factorize, lift, DiagramSquare, Mode};
use modreedy::ktheory::{build_bisimplicial, compare_bisimplicial, BisimplicialSet, Pipeline, USelector, WaldhausenSubcat};
use modreedy::reedy::{check_acceptable, check_compat, mask, parse_objects, ReedyStructure, Side};
use modreedy::suite::{run_criteria, run_suite};
use modreedy::{Budget, Error, Result};
use serde_json::{json, Value};

use input::{assignment, read_json, reedy_arg, AssignmentFile, DiagramFile, MapFile, SquareFile};

#[derive(Parser)]
#[command(name = "modreedy", version, about = "Checks for modified Reedy and projective model structures")]
struct Cli {
    /// Budget profile: small | default | large.
    #[arg(long, global = true, env = modreedy::budget::PROFILE_ENV, default_value = "default")]
    budget: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Reedy axioms of a category document.
    CheckReedy {
        /// JSON file or built-in name (`grid(1,1)`, `chain(2)`, `simplex_op(1)`, `arrow`).
        reedy: String,
    },
    /// Check left and right acceptability of a full subcategory.
    CheckAcceptable {
        reedy: String,
        /// Comma-separated object names.
        #[arg(long, allow_hyphen_values = true)]
        c0: String,
        #[arg(long, default_value = "finset-wfs")]
        ambient: String,
        #[arg(long, default_value = "both", value_parser = ["left", "right", "both"])]
        side: String,
    },
    /// Check the compatibility clauses of a model assignment.
    CheckCompat {
        reedy: String,
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long)]
        side: String,
        #[arg(long, default_value = "")]
        c0: String,
    },
    /// Classify a map of diagrams.
    Classify {
        map: PathBuf,
        #[command(flatten)]
        structure: StructureArgs,
    },
    /// Factor a map of diagrams.
    Factor {
        map: PathBuf,
        /// cof-then-acyfib | acycof-then-fib.
        #[arg(long)]
        mode: String,
        #[command(flatten)]
        structure: StructureArgs,
    },
    /// Find a diagonal of a commuting square of diagram maps.
    Lift { square: PathBuf },
    /// Latching object of a diagram at an object.
    Latching {
        diagram: PathBuf,
        #[arg(long)]
        at: String,
    },
    /// Matching object of a diagram at an object.
    Matching {
        diagram: PathBuf,
        #[arg(long)]
        at: String,
    },
    /// Verify the hom bijections of the nerve-level adjoint pairs.
    NerveAdjointCheck {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        n: usize,
    },
    /// Verify the model axioms of an ambient structure.
    VerifyAmbient {
        #[arg(long)]
        ambient: String,
    },
    /// Truncated bisimplicial sets of cofibrant grid diagrams.
    Tdot {
        #[command(subcommand)]
        command: TdotCommand,
    },
    /// Run the acceptance suites.
    Suite {
        /// All criteria, including the determinism rerun.
        #[arg(long, conflicts_with = "criterion")]
        all: bool,
        /// Criteria to run (1-9); repeatable.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=9))]
        criterion: Vec<u64>,
        /// json | text.
        #[arg(long, default_value = "json", value_parser = ["json", "text"])]
        format: String,
    },
}

#[derive(Args)]
struct StructureArgs {
    /// left | right | proj.
    #[arg(long)]
    structure: String,
    #[arg(long, default_value = "")]
    c0: String,
}

#[derive(Subcommand)]
enum TdotCommand {
    Build {
        /// evcof | nerve.
        #[arg(long)]
        pipeline: String,
        #[arg(long = "N")]
        truncation: usize,
        /// deg0-ch | deg0-ch-dim<=k | zero-only.
        #[arg(long)]
        u: String,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long)]
        out: PathBuf,
    },
    Compare { a: PathBuf, b: PathBuf },
}

/// A report and whether its checks passed.
struct Outcome {
    report: Value,
    passed: bool,
}

impl Outcome {
    fn new(report: impl serde::Serialize, passed: bool) -> Result<Self> {
        Ok(Outcome { report: serde_json::to_value(report)?, passed })
    }
}

macro_rules! with_carrier {
    ($sel:expr, |$c:ident| $body:expr) => {
        match $sel {
            Selector::FinSet(_) => {
                let $c = &FinSet;
                $body
            }
            Selector::Chain { p, .. } => {
                let $c = &ChainCarrier::new(*p)?;
                $body
            }
        }
    };
}

fn objects(r: &ReedyStructure, list: &str) -> Result<Vec<bool>> {
    Ok(mask(r.cat().num_objects(), &parse_objects(r.cat(), list)?))
}

fn object(r: &ReedyStructure, name: &str) -> Result<usize> {
    r.cat().object_ix(name)
}

fn check_reedy(reedy: &str) -> Result<Outcome> {
    let report = if std::path::Path::new(reedy).exists() {
        read_json::<modreedy::reedy::ReedyDoc>(std::path::Path::new(reedy))?.check()?
    } else {
        reedy_arg(reedy)?.to_doc().check()?
    };
    let passed = report.passed;
    Outcome::new(report, passed)
}

fn check_acceptable_cmd(reedy: &str, c0: &str, ambient: &str, side: &str, budget: &Budget) -> Result<Outcome> {
    let r = reedy_arg(reedy)?;
    let objs = parse_objects(r.cat(), c0)?;
    let sel = Selector::parse(ambient)?;
    let report = with_carrier!(&sel, |c| check_acceptable(c, &r, &objs, budget, 0)?);
    let passed = match side {
        "left" => report.left,
        "right" => report.right,
        _ => report.left && report.right,
    };
    Outcome::new(report, passed)
}

fn check_compat_cmd(reedy: &str, file: &PathBuf, side: &str, c0: &str, budget: &Budget) -> Result<Outcome> {
    let r = reedy_arg(reedy)?;
    let doc: AssignmentFile = read_json(file)?;
    let sel = Selector::parse(&doc.ambient)?;
    let side = Side::parse(side)?;
    let c0 = objects(&r, c0)?;
    let report = with_carrier!(&sel, |c| check_compat(c, &r, &c0, &assignment(c, &r, &sel, &doc.models)?, side, budget)?);
    let passed = report.passed;
    Outcome::new(report, passed)
}

fn load_map<C: Carrier>(c: &C, r: &ReedyStructure, doc: &MapFile) -> Result<DiagramMap<C>> {
    DiagramMap::from_doc(c, r.cat().clone(), &doc.map)
}

fn classify_cmd(file: &PathBuf, args: &StructureArgs) -> Result<Outcome> {
    let doc: MapFile = read_json(file)?;
    let r = doc.reedy.build()?;
    let sel = Selector::parse(&doc.ambient)?;
    let structure = Structure::parse(&args.structure)?;
    let c0 = objects(&r, &args.c0)?;
    let v = with_carrier!(&sel, |c| {
        let f = load_map(c, &r, &doc)?;
        classify(c, &r, &c0, &assignment(c, &r, &sel, &doc.models)?, &f, structure)?
    });
    Outcome::new(v, true)
}

fn factor_cmd(file: &PathBuf, mode: &str, args: &StructureArgs) -> Result<Outcome> {
    let doc: MapFile = read_json(file)?;
    let r = doc.reedy.build()?;
    let sel = Selector::parse(&doc.ambient)?;
    let structure = Structure::parse(&args.structure)?;
    let mode = Mode::parse(mode)?;
    let c0 = objects(&r, &args.c0)?;
    with_carrier!(&sel, |c| {
        let a = assignment(c, &r, &sel, &doc.models)?;
        let g = load_map(c, &r, &doc)?;
        let fz = factorize(c, &r, &c0, &a, &g, mode, structure)?;
        let composite = fz.p.after(c, &fz.f).comps == g.comps;
        let (vf, vp) = (classify(c, &r, &c0, &a, &fz.f, structure)?, classify(c, &r, &c0, &a, &fz.p, structure)?);
        let classes = match mode {
            Mode::CofThenAcyfib => vf.cof && vp.acyclic_fib,
            Mode::AcycofThenFib => vf.acyclic_cof && vp.fib,
        };
        let report = json!({
            "mode": mode.label(),
            "structure": structure.label(),
            "composite_equals_input": composite,
            "classes_verified": classes,
            "f": fz.f.to_doc(c),
            "z": fz.z.to_doc(c),
            "p": fz.p.to_doc(c),
            "f_class": vf,
            "p_class": vp,
        });
        Outcome::new(report, composite && classes)
    })
}

fn lift_cmd(file: &PathBuf) -> Result<Outcome> {
    let doc: SquareFile = read_json(file)?;
    let r = doc.reedy.build()?;
    let sel = Selector::parse(&doc.ambient)?;
    with_carrier!(&sel, |c| {
        let map = |d| DiagramMap::from_doc(c, r.cat().clone(), d);
        let s = &doc.square;
        let sq = DiagramSquare { left: map(&s.left)?, right: map(&s.right)?, top: map(&s.top)?, bottom: map(&s.bottom)? };
        let (k, stats) = lift(c, &r, &sq, 1 << 20)?;
        let found = k.is_some();
        Outcome::new(json!({ "diagonal": k.map(|k| k.to_doc(c)), "stats": stats }), found)
    })
}

fn boundary_cmd(file: &PathBuf, at: &str, latching: bool) -> Result<Outcome> {
    let doc: DiagramFile = read_json(file)?;
    let r = doc.reedy.build()?;
    let sel = Selector::parse(&doc.ambient)?;
    let alpha = object(&r, at)?;
    with_carrier!(&sel, |c| {
        let x = Diagram::from_doc(c, r.cat().clone(), &doc.diagram)?;
        let (cone, slice) = if latching {
            (latching_object(c, &r, &x, alpha)?, r.latching(alpha))
        } else {
            (matching_object(c, &r, &x, alpha)?, r.matching(alpha))
        };
        let cat = r.cat();
        let legs: serde_json::Map<String, Value> = slice
            .legs
            .iter()
            .zip(&cone.cone.legs)
            .map(|(&u, leg)| (cat.morphism_id(u).to_string(), c.encode_mor(leg)))
            .collect();
        let report = json!({
            "object": at,
            "kind": if latching { "latching" } else { "matching" },
            "apex": c.encode_obj(cone.apex()),
            "legs": legs,
            "absolute": c.encode_mor(&cone.absolute),
        });
        Outcome::new(report, true)
    })
}

fn nerve_cmd(ambient: &str, n: usize, budget: &Budget) -> Result<Outcome> {
    let sel = Selector::parse(ambient)?;
    let report = with_carrier!(&sel, |c| check_nerve_adjunctions(c, n, budget)?);
    let passed = report.passed;
    Outcome::new(report, passed)
}

fn verify_ambient_cmd(ambient: &str, budget: &Budget) -> Result<Outcome> {
    let sel = Selector::parse(ambient)?;
    let report = with_carrier!(&sel, |c| verify_model_axioms(c, &sel.kind(), budget, AxiomOptions::all())?);
    let passed = report.passed();
    Outcome::new(report, passed)
}

fn tdot_cmd(cmd: &TdotCommand, budget: &Budget) -> Result<Outcome> {
    match cmd {
        TdotCommand::Build { pipeline, truncation, u, p, out } => {
            let pipeline = Pipeline::parse(pipeline)?;
            let u = WaldhausenSubcat::new(ChainCarrier::new(*p)?, USelector::parse(u)?);
            let set = build_bisimplicial(&u, *truncation, pipeline, budget)?;
            std::fs::write(out, set.to_json())?;
            let levels: serde_json::Map<String, Value> = set.entries.iter().map(|(k, v)| (k.clone(), json!(v.len()))).collect();
            Outcome::new(json!({ "pipeline": pipeline.label(), "truncation": truncation, "entries": levels, "out": out }), true)
        }
        TdotCommand::Compare { a, b } => {
            let load = |p: &PathBuf| -> Result<BisimplicialSet> { BisimplicialSet::from_json(&std::fs::read_to_string(p)?) };
            let cmp = compare_bisimplicial(&load(a)?, &load(b)?)?;
            let equal = cmp.equal;
            Outcome::new(cmp, equal)
        }
    }
}

fn suite_cmd(all: bool, criteria: &[u64], format: &str) -> Result<(Outcome, Option<String>)> {
    let report = if all || criteria.is_empty() {
        run_suite()?
    } else {
        run_criteria(&criteria.iter().map(|&k| k as usize).collect::<Vec<_>>())?
    };
    let text = (format == "text").then(|| report.to_text());
    let passed = report.passed;
    Ok((Outcome { report: serde_json::from_str(&report.to_json())?, passed }, text))
}

fn run(cli: &Cli) -> Result<(Outcome, Option<String>)> {
    let budget = Budget::profile(&cli.budget)?;
    let plain = |o: Result<Outcome>| o.map(|o| (o, None));
    match &cli.command {
        Command::CheckReedy { reedy } => plain(check_reedy(reedy)),
        Command::CheckAcceptable { reedy, c0, ambient, side } => plain(check_acceptable_cmd(reedy, c0, ambient, side, &budget)),
        Command::CheckCompat { reedy, assignment, side, c0 } => plain(check_compat_cmd(reedy, assignment, side, c0, &budget)),
        Command::Classify { map, structure } => plain(classify_cmd(map, structure)),
        Command::Factor { map, mode, structure } => plain(factor_cmd(map, mode, structure)),
        Command::Lift { square } => plain(lift_cmd(square)),
        Command::Latching { diagram, at } => plain(boundary_cmd(diagram, at, true)),
        Command::Matching { diagram, at } => plain(boundary_cmd(diagram, at, false)),
        Command::NerveAdjointCheck { ambient, n } => plain(nerve_cmd(ambient, *n, &budget)),
        Command::VerifyAmbient { ambient } => plain(verify_ambient_cmd(ambient, &budget)),
        Command::Tdot { command } => plain(tdot_cmd(command, &budget)),
        Command::Suite { all, criterion, format } => suite_cmd(*all, criterion, format),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::CheckFailed(_) | Error::CharacterizationMismatch { .. } | Error::Oracle(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((outcome, text)) => {
            let body = text.unwrap_or_else(|| serde_json::to_string_pretty(&outcome.report).expect("reports serialize") + "\n");
            // A closed pipe downstream is not an error of the check.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
