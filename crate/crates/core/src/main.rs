//! Command-line front door: evaluation, validation, countermodel
//! search, replication scenarios, and proof checking.
//!
//! Exit codes follow one contract across subcommands: 0 for the
//! affirmative outcome (true / conditions hold / no countermodel /
//! all cases pass / proof valid), 1 for the negative one, 2 for
//! errors (bad files, bad flags, exhausted budgets).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pnlogic::formula;
use pnlogic::model::{self, ConditionReport, LoadedFile, Model};
use pnlogic::proof;
use pnlogic::replicate::{self, CaseId, CaseResult};
use pnlogic::search::{self, ConditionSet, SearchSpec, SearchVerdict};
use pnlogic::semantics::{self, BoxMode, EvalContext};

#[derive(Parser)]
#[command(
    name = "pnlogic",
    version,
    about = "Finite-model workbench for an intuitionistic modal logic over pre-ordered neighborhood frames"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a world of a model.
    Eval(EvalArgs),
    /// Report every frame/model condition for a file.
    Check(CheckArgs),
    /// Search small frames for a countermodel to an axiom scheme.
    Search(SearchArgs),
    /// Run the built-in replication scenarios.
    Replicate(ReplicateArgs),
    /// Check a derivation file.
    Prove(ProveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BoxModeArg {
    Standard,
    Simple,
}

impl From<BoxModeArg> for BoxMode {
    fn from(arg: BoxModeArg) -> BoxMode {
        match arg {
            BoxModeArg::Standard => BoxMode::Standard,
            BoxModeArg::Simple => BoxMode::Simple,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RequireArg {
    Cond2,
    Star,
    Starstar,
}

#[derive(Args)]
struct EvalArgs {
    /// Model file (JSON).
    #[arg(long)]
    model: PathBuf,
    /// World index to evaluate at.
    #[arg(long)]
    world: u8,
    /// Formula text.
    #[arg(long)]
    formula: String,
    #[arg(long, value_enum, default_value = "standard")]
    box_mode: BoxModeArg,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Model file: frame plus valuation.
    #[arg(long, conflicts_with = "frame")]
    model: Option<PathBuf>,
    /// Frame file: no valuation.
    #[arg(long)]
    frame: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// Axiom scheme; its atoms are metavariables.
    scheme: String,
    #[arg(long, default_value_t = search::MAX_SEARCH_WORLDS)]
    max_worlds: u8,
    /// Frame condition to require; repeatable.
    #[arg(long = "require", value_enum)]
    require: Vec<RequireArg>,
    #[arg(long, value_enum, default_value = "standard")]
    box_mode: BoxModeArg,
    /// Neighborhood family size cap per world.
    #[arg(long, default_value_t = search::DEFAULT_FAMILY_CAP)]
    cap: u8,
    /// Where to write a found countermodel.
    #[arg(long, default_value = "countermodel.json")]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReplicateArgs {
    /// Case name, or `all`.
    case: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ProveArgs {
    /// Proof file.
    path: PathBuf,
    /// After checking, verify each line is scheme-valid on every
    /// enumerated frame.
    #[arg(long)]
    soundness_sweep: bool,
    /// World bound for the soundness sweep.
    #[arg(long, default_value_t = 2)]
    max_worlds: u8,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Check(args) => cmd_check(args),
        Command::Search(args) => cmd_search(args),
        Command::Replicate(args) => cmd_replicate(args),
        Command::Prove(args) => cmd_prove(args),
    };
    ExitCode::from(code)
}

fn fail(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    2
}

fn read_file(path: &Path) -> Result<String, u8> {
    fs::read_to_string(path).map_err(|e| fail(format_args!("{}: {e}", path.display())))
}

fn print_warnings(warnings: &[String]) {
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
}

fn load_model(path: &Path) -> Result<Model, u8> {
    let text = read_file(path)?;
    let loaded = model::model_from_json(&text).map_err(fail)?;
    print_warnings(&loaded.warnings);
    Ok(loaded.value)
}

#[derive(Serialize)]
struct EvalOutput {
    forces: bool,
    world: u8,
    formula: String,
    extension: model::WorldSet,
}

fn cmd_eval(args: EvalArgs) -> u8 {
    let model = match load_model(&args.model) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let formula = match formula::parse(&args.formula) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let ctx = EvalContext::new(&model, args.box_mode.into()).expect("neighborhood mode");
    let extension = match semantics::extension(&ctx, &formula) {
        Ok(ext) => ext,
        Err(e) => return fail(e),
    };
    if args.world >= model.frame().world_count() {
        return fail(format_args!(
            "world {} out of range for {} worlds",
            args.world,
            model.frame().world_count()
        ));
    }
    let holds = extension.contains(args.world);
    if args.json {
        let output = EvalOutput {
            forces: holds,
            world: args.world,
            formula: formula.to_string(),
            extension,
        };
        println!("{}", serde_json::to_string(&output).expect("serializable"));
    } else {
        println!("{holds}");
        println!("extension: {extension}");
    }
    u8::from(!holds)
}

#[derive(Serialize)]
struct CheckOutput {
    file: &'static str,
    reports: Vec<ConditionReport>,
    core_ok: bool,
}

fn cmd_check(args: CheckArgs) -> u8 {
    let (path, want_model) = match (&args.model, &args.frame) {
        (Some(p), None) => (p, true),
        (None, Some(p)) => (p, false),
        _ => return fail("pass exactly one of --model or --frame"),
    };
    let text = match read_file(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let loaded = match model::load_str(&text) {
        Ok(l) => l,
        Err(e) => return fail(e),
    };
    print_warnings(&loaded.warnings);
    let (frame, valuation_report, kind) = match (loaded.value, want_model) {
        (LoadedFile::Model(m), true) => {
            let report = model::validate_model(&m).pop().expect("valuation report");
            (m.frame().clone(), Some(report), "model")
        }
        (LoadedFile::Frame(f), false) => (f, None, "frame"),
        (LoadedFile::Frame(_), true) => return fail(model::ModelError::MissingValuation),
        (LoadedFile::Model(_), false) => return fail(model::ModelError::UnexpectedValuation),
    };
    let mut reports = model::validate_frame(&frame);
    reports.push(model::check_cond2(&frame));
    reports.push(model::check_star(&frame));
    reports.push(model::check_starstar(&frame));
    if let Some(report) = valuation_report {
        reports.push(report);
    }
    let core_ok = reports
        .iter()
        .filter(|r| {
            matches!(
                r.condition,
                model::ConditionId::OrderAxioms
                    | model::ConditionId::Cond1
                    | model::ConditionId::ValuationMonotone
            )
        })
        .all(|r| r.holds);
    if args.json {
        let output = CheckOutput {
            file: kind,
            reports,
            core_ok,
        };
        println!("{}", serde_json::to_string(&output).expect("serializable"));
    } else {
        println!("{:<19} {:<6} witness", "condition", "holds");
        for report in &reports {
            let witness = report
                .witness
                .as_ref()
                .map_or_else(|| "-".to_string(), |w| w.to_string());
            println!(
                "{:<19} {:<6} {witness}",
                report.condition.to_string(),
                if report.holds { "yes" } else { "no" },
            );
        }
    }
    u8::from(!core_ok)
}

#[derive(Serialize)]
struct SearchOutput {
    verdict: SearchVerdict,
    scheme: String,
    stats: search::SearchStats,
    countermodel: Option<serde_json::Value>,
}

fn cmd_search(args: SearchArgs) -> u8 {
    let scheme = match formula::parse(&args.scheme) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let mut required = ConditionSet::NONE;
    for requirement in &args.require {
        match requirement {
            RequireArg::Cond2 => required.cond2 = true,
            RequireArg::Star => required.star = true,
            RequireArg::Starstar => required.starstar = true,
        }
    }
    let spec = SearchSpec::new(scheme)
        .max_worlds(args.max_worlds)
        .family_cap(args.cap)
        .box_mode(args.box_mode.into())
        .require(required);
    let outcome = match search::find_countermodel(&spec) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let document = search::countermodel_document(&spec.scheme, &outcome);
    if args.json {
        let output = SearchOutput {
            verdict: outcome.verdict,
            scheme: spec.scheme.to_string(),
            stats: outcome.stats.clone(),
            countermodel: document.clone(),
        };
        println!("{}", serde_json::to_string(&output).expect("serializable"));
    } else {
        println!("verdict: {}", outcome.verdict);
        println!("frames visited: {}", outcome.stats.frames_visited);
        println!("models visited: {}", outcome.stats.models_visited);
        if let (Some(model), Some(world)) = (&outcome.model, outcome.world) {
            let assignment = model
                .valuation()
                .iter()
                .map(|(atom, set)| format!("{atom}={set}"))
                .collect::<Vec<_>>()
                .join(", ");
            println!("witness world: {world}");
            println!("assignment: {assignment}");
        }
    }
    if let Some(document) = document {
        let text = serde_json::to_string_pretty(&document).expect("serializable");
        if let Err(e) = fs::write(&args.out, text + "\n") {
            return fail(format_args!("{}: {e}", args.out.display()));
        }
        if !args.json {
            println!("countermodel written to {}", args.out.display());
        }
    }
    match outcome.verdict {
        SearchVerdict::Exhausted => 0,
        SearchVerdict::CountermodelFound => 1,
        SearchVerdict::BudgetExhausted => 2,
    }
}

#[derive(Serialize)]
struct ReplicateOutput {
    cases: Vec<CaseResult>,
    passed: usize,
    total: usize,
}

fn cmd_replicate(args: ReplicateArgs) -> u8 {
    let results = if args.case == "all" {
        replicate::run_all()
    } else {
        match CaseId::from_name(&args.case) {
            Some(case) => vec![replicate::run(case)],
            None => {
                let known = CaseId::ALL
                    .iter()
                    .map(|c| c.name())
                    .collect::<Vec<_>>()
                    .join(", ");
                return fail(format_args!(
                    "unknown case `{}`; known cases: all, {known}",
                    args.case
                ));
            }
        }
    };
    let passed = results.iter().filter(|r| r.pass).count();
    let total = results.len();
    if args.json {
        let output = ReplicateOutput {
            cases: results,
            passed,
            total,
        };
        println!("{}", serde_json::to_string(&output).expect("serializable"));
        return u8::from(passed != total);
    }
    for result in &results {
        println!(
            "{}: {}",
            result.name,
            if result.pass { "pass" } else { "FAIL" }
        );
        for check in &result.checks {
            println!(
                "  [{}] {}",
                if check.pass { "ok" } else { "FAIL" },
                check.label
            );
        }
    }
    println!("replicate: {passed}/{total} cases passed");
    u8::from(passed != total)
}

#[derive(Serialize)]
struct SweepOutput {
    frames_checked: u64,
    evaluations: u64,
    clean: bool,
}

#[derive(Serialize)]
struct ProveOutput {
    valid: bool,
    first_error: Option<ProveError>,
    sweep: Option<SweepOutput>,
}

#[derive(Serialize)]
struct ProveError {
    line: usize,
    reason: String,
}

fn cmd_prove(args: ProveArgs) -> u8 {
    let text = match read_file(&args.path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let lines = match proof::parse_proof(&text) {
        Ok(l) => l,
        Err(e) => return fail(e),
    };
    let report = proof::check_proof(&lines);
    let sweep = if args.soundness_sweep && report.valid {
        match proof::soundness_sweep(&lines, args.max_worlds) {
            Ok(s) => Some(s),
            Err(e) => return fail(e),
        }
    } else {
        None
    };
    let ok = report.valid && sweep.as_ref().is_none_or(|s| s.clean());
    if args.json {
        let output = ProveOutput {
            valid: report.valid,
            first_error: report.first_error.as_ref().map(|e| ProveError {
                line: e.line,
                reason: e.defect.to_string(),
            }),
            sweep: sweep.as_ref().map(|s| SweepOutput {
                frames_checked: s.frames_checked,
                evaluations: s.evaluations,
                clean: s.clean(),
            }),
        };
        println!("{}", serde_json::to_string(&output).expect("serializable"));
        return u8::from(!ok);
    }
    match &report.first_error {
        None => println!("valid"),
        Some(error) => println!("invalid at {error}"),
    }
    if let Some(s) = &sweep {
        match &s.violation {
            None => println!(
                "soundness sweep: clean ({} lines, {} frames)",
                lines.len(),
                s.frames_checked
            ),
            Some(v) => println!(
                "soundness sweep: line {} fails on a {}-world frame at world {}",
                v.scheme_index + 1,
                v.frame.world_count(),
                v.world
            ),
        }
    }
    u8::from(!ok)
}
