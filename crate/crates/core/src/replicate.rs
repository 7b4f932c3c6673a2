//! Self-contained replication scenarios. Each case re-establishes one
//! semantic fact end to end — from embedded models or fresh searches —
//! and reports a list of named boolean checks, so `replicate all` acts
//! as an executable summary of what the workbench knows.

use serde::Serialize;

use crate::builtin;
use crate::formula::{parse, Formula};
use crate::model::{check_cond2, check_star, check_starstar, validate_model};
use crate::search::{
    self, ConditionSet, SearchSpec, SearchVerdict, DEFAULT_FAMILY_CAP,
};
use crate::semantics::{self, BoxMode, EvalContext};
use crate::proof::AxiomId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseId {
    Birel,
    KFail,
    MonFail,
    DValid,
    TSound,
    SimpleTFail,
    NablaVsDiamond,
    FourStar,
    StarstarFour,
}

impl CaseId {
    pub const ALL: [CaseId; 9] = [
        CaseId::Birel,
        CaseId::KFail,
        CaseId::MonFail,
        CaseId::DValid,
        CaseId::TSound,
        CaseId::SimpleTFail,
        CaseId::NablaVsDiamond,
        CaseId::FourStar,
        CaseId::StarstarFour,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Birel => "birel",
            CaseId::KFail => "k-fail",
            CaseId::MonFail => "mon-fail",
            CaseId::DValid => "d-valid",
            CaseId::TSound => "t-sound",
            CaseId::SimpleTFail => "simple-t-fail",
            CaseId::NablaVsDiamond => "nabla-vs-diamond",
            CaseId::FourStar => "four-star",
            CaseId::StarstarFour => "starstar-four",
        }
    }

    pub fn from_name(name: &str) -> Option<CaseId> {
        CaseId::ALL.iter().copied().find(|c| c.name() == name)
    }
}

/// One named boolean check within a case.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub pass: bool,
}

impl Check {
    fn new(label: impl Into<String>, pass: bool) -> Check {
        Check {
            label: label.into(),
            pass,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CaseResult {
    pub name: &'static str,
    pub pass: bool,
    pub checks: Vec<Check>,
}

fn result(name: &'static str, checks: Vec<Check>) -> CaseResult {
    CaseResult {
        name,
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

fn forces_check(model: &crate::model::Model, world: u8, text: &str) -> bool {
    let ctx = EvalContext::new(model, BoxMode::Standard).expect("standard mode");
    semantics::forces(&ctx, world, &parse(text).expect("case formula parses"))
        .expect("world is in range")
}

fn model_ok(model: &crate::model::Model) -> bool {
    validate_model(model).iter().all(|r| r.holds)
}

fn case_birel() -> CaseResult {
    let model = builtin::birel_model();
    let mut checks = vec![
        Check::new("embedded model passes validation", model_ok(&model)),
        Check::new(
            "neighborhood clause: world 0 forces [](p & q)",
            forces_check(&model, 0, "[](p & q)"),
        ),
        Check::new(
            "neighborhood clause: world 0 does not force []p",
            !forces_check(&model, 0, "[]p"),
        ),
    ];
    for (mode, label) in [
        (BoxMode::RelPlain, "plain relational clause"),
        (BoxMode::RelLocal, "local relational clause"),
    ] {
        let transcript = semantics::birelational_refutation(mode).expect("relational mode");
        let reproductions = transcript.reproductions();
        checks.push(Check::new(
            format!(
                "{label}: {}/{} relations reproduce the pattern",
                reproductions,
                transcript.rows.len()
            ),
            reproductions == 0 && transcript.rows.len() == 16,
        ));
    }
    result(CaseId::Birel.name(), checks)
}

fn case_k_fail() -> CaseResult {
    let model = builtin::k_countermodel();
    let checks = vec![
        Check::new("embedded model passes validation", model_ok(&model)),
        Check::new(
            "world 2 forces [](p -> q)",
            forces_check(&model, 2, "[](p -> q)"),
        ),
        Check::new(
            "world 2 does not force []p -> []q",
            !forces_check(&model, 2, "[]p -> []q"),
        ),
        Check::new(
            "the full K instance fails in the model",
            !search::valid_in_model(
                &model,
                BoxMode::Standard,
                &parse("[](p -> q) -> ([]p -> []q)").unwrap(),
            )
            .expect("standard mode"),
        ),
    ];
    result(CaseId::KFail.name(), checks)
}

fn case_mon_fail() -> CaseResult {
    let model = builtin::mon_rule_model();
    let premise_valid =
        search::valid_in_model(&model, BoxMode::Standard, &parse("p -> q").unwrap())
            .expect("standard mode");
    let conclusion_valid =
        search::valid_in_model(&model, BoxMode::Standard, &parse("[]p -> []q").unwrap())
            .expect("standard mode");
    let mut checks = vec![
        Check::new("embedded model passes validation", model_ok(&model)),
        Check::new("p -> q is valid in the model", premise_valid),
        Check::new("[]p -> []q is not valid in the model", !conclusion_valid),
    ];
    match search::rule_countermodel_mon(2, DEFAULT_FAMILY_CAP) {
        Ok(outcome) => {
            let found = outcome.verdict == SearchVerdict::CountermodelFound;
            let replayed = found
                && outcome.model.as_ref().is_some_and(|m| {
                    search::valid_in_model(m, BoxMode::Standard, &parse("p -> q").unwrap())
                        .unwrap_or(false)
                        && !search::valid_in_model(
                            m,
                            BoxMode::Standard,
                            &parse("[]p -> []q").unwrap(),
                        )
                        .unwrap_or(true)
                });
            checks.push(Check::new(
                "search finds a separating model within 2 worlds",
                found,
            ));
            checks.push(Check::new("found witness replays", replayed));
        }
        Err(_) => checks.push(Check::new("search finds a separating model within 2 worlds", false)),
    }
    result(CaseId::MonFail.name(), checks)
}

fn case_d_valid() -> CaseResult {
    let spec = SearchSpec::new(parse("[]a -> ~[]~a").unwrap());
    let check = match search::find_countermodel(&spec) {
        Ok(outcome) => Check::new(
            format!(
                "no countermodel to []a -> ~[]~a within 3 worlds ({} frames checked)",
                outcome.stats.frames_visited
            ),
            outcome.verdict == SearchVerdict::Exhausted,
        ),
        Err(_) => Check::new("no countermodel to []a -> ~[]~a within 3 worlds", false),
    };
    result(CaseId::DValid.name(), vec![check])
}

fn case_t_sound() -> CaseResult {
    let schemes: Vec<Formula> = AxiomId::ALL
        .iter()
        .map(|id| id.template().clone())
        .collect();
    let check = match search::scheme_sweep(
        &schemes,
        2,
        DEFAULT_FAMILY_CAP,
        BoxMode::Standard,
        ConditionSet::NONE,
    ) {
        Ok(report) => Check::new(
            format!(
                "all ten axiom schemes valid on every frame up to 2 worlds ({} frames)",
                report.frames_checked
            ),
            report.clean(),
        ),
        Err(_) => Check::new("all ten axiom schemes valid on every frame up to 2 worlds", false),
    };
    result(CaseId::TSound.name(), vec![check])
}

fn case_simple_t_fail() -> CaseResult {
    let spec = SearchSpec::new(parse("[]a -> a").unwrap())
        .max_worlds(2)
        .box_mode(BoxMode::Simple)
        .require(ConditionSet::just_cond2());
    let mut checks = Vec::new();
    match search::find_countermodel(&spec) {
        Ok(outcome) => {
            let found = outcome.verdict == SearchVerdict::CountermodelFound;
            checks.push(Check::new(
                "simple box: countermodel to []a -> a found within 2 worlds",
                found,
            ));
            let replayed = outcome.model.as_ref().is_some_and(|m| {
                !search::valid_in_model(m, BoxMode::Simple, &instantiated(&spec.scheme))
                    .unwrap_or(true)
            });
            checks.push(Check::new("found witness replays under the simple clause", replayed));
        }
        Err(_) => checks.push(Check::new(
            "simple box: countermodel to []a -> a found within 2 worlds",
            false,
        )),
    }
    let standard = SearchSpec::new(parse("[]a -> a").unwrap()).max_worlds(2);
    checks.push(Check::new(
        "standard box: []a -> a survives the same search space",
        search::find_countermodel(&standard)
            .map(|o| o.verdict == SearchVerdict::Exhausted)
            .unwrap_or(false),
    ));
    result(CaseId::SimpleTFail.name(), checks)
}

/// Reads the scheme at the witness valuation: metavariables become the
/// atoms the model's valuation already binds.
fn instantiated(scheme: &Formula) -> Formula {
    let map = scheme
        .atoms()
        .into_iter()
        .map(|a| (a.clone(), Formula::Atom(a)))
        .collect();
    scheme.substitute(&map).expect("identity substitution")
}

fn case_nabla_vs_diamond() -> CaseResult {
    let nabla = SearchSpec::new(parse("[]a -> <>a").unwrap()).require(ConditionSet::just_cond2());
    let diamond =
        SearchSpec::new(parse("[]a -> <*>a").unwrap()).require(ConditionSet::just_cond2());
    let mut checks = Vec::new();
    match search::find_countermodel(&nabla) {
        Ok(outcome) => checks.push(Check::new(
            format!(
                "[]a -> <>a: no countermodel on growing-neighborhood frames ({} frames)",
                outcome.stats.frames_visited
            ),
            outcome.verdict == SearchVerdict::Exhausted,
        )),
        Err(_) => checks.push(Check::new("[]a -> <>a search runs", false)),
    }
    match search::find_countermodel(&diamond) {
        Ok(outcome) => {
            let found = outcome.verdict == SearchVerdict::CountermodelFound;
            checks.push(Check::new(
                "[]a -> <*>a: countermodel found on the same frame class",
                found,
            ));
            let replayed = outcome.model.as_ref().is_some_and(|m| {
                !search::valid_in_model(m, BoxMode::Standard, &instantiated(&diamond.scheme))
                    .unwrap_or(true)
            });
            checks.push(Check::new("found witness replays", replayed));
        }
        Err(_) => checks.push(Check::new("[]a -> <*>a search runs", false)),
    }
    result(CaseId::NablaVsDiamond.name(), checks)
}

fn case_four_star() -> CaseResult {
    let model = builtin::star_without_starstar_model();
    let checks = vec![
        Check::new("embedded model passes validation", model_ok(&model)),
        Check::new("star condition holds", check_star(model.frame()).holds),
        Check::new(
            "subset closure fails",
            !check_starstar(model.frame()).holds,
        ),
        Check::new(
            "neighborhoods grow along the (identity) order",
            check_cond2(model.frame()).holds,
        ),
        Check::new("world 0 forces []p", forces_check(&model, 0, "[]p")),
        Check::new(
            "world 0 does not force [][]p",
            !forces_check(&model, 0, "[][]p"),
        ),
    ];
    result(CaseId::FourStar.name(), checks)
}

fn case_starstar_four() -> CaseResult {
    let checks = match search::verify_starstar_implies_four(3, DEFAULT_FAMILY_CAP) {
        Ok(report) => vec![
            Check::new(
                format!(
                    "every subset-closed frame validates []a -> [][]a ({} frames)",
                    report.frames_checked
                ),
                report.counterexample.is_none(),
            ),
            Check::new(
                "replay: star model keeps star, drops subset closure",
                report.replay.star_holds && !report.replay.starstar_holds,
            ),
            Check::new(
                "replay: star model forces []p but not [][]p at world 0",
                report.replay.box_forced && !report.replay.boxbox_forced,
            ),
        ],
        Err(_) => vec![Check::new("subset-closure sweep runs", false)],
    };
    result(CaseId::StarstarFour.name(), checks)
}

/// Runs one case.
pub fn run(case: CaseId) -> CaseResult {
    match case {
        CaseId::Birel => case_birel(),
        CaseId::KFail => case_k_fail(),
        CaseId::MonFail => case_mon_fail(),
        CaseId::DValid => case_d_valid(),
        CaseId::TSound => case_t_sound(),
        CaseId::SimpleTFail => case_simple_t_fail(),
        CaseId::NablaVsDiamond => case_nabla_vs_diamond(),
        CaseId::FourStar => case_four_star(),
        CaseId::StarstarFour => case_starstar_four(),
    }
}

/// Runs every case in declaration order.
pub fn run_all() -> Vec<CaseResult> {
    CaseId::ALL.iter().map(|c| run(*c)).collect()
}
