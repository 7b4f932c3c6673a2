//! Checker for Hilbert-style derivations in the base system: a
//! complete intuitionistic axiom basis plus the reflection axiom
//! `[]a -> a`, closed under modus ponens and the extensionality rule
//! (from converse implications between two formulas, infer a boxed
//! implication between them).
//!
//! The biconditional is not primitive, so one extensionality step
//! yields a single boxed implication; apply it twice for both
//! directions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{self, Formula};
use crate::search::{self, ConditionSet, SearchError, SweepReport};
use crate::semantics::BoxMode;

/// The fixed axiom basis.
///
/// A1 `a -> (b -> a)`; A2 `(a -> (b -> c)) -> ((a -> b) -> (a -> c))`;
/// A3 `a & b -> a`; A4 `a & b -> b`; A5 `a -> (b -> (a & b))`;
/// A6 `a -> a | b`; A7 `b -> a | b`;
/// A8 `(a -> c) -> ((b -> c) -> ((a | b) -> c))`; A9 `_|_ -> a`;
/// T `[]a -> a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AxiomId {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    T,
}

impl AxiomId {
    pub const ALL: [AxiomId; 10] = [
        AxiomId::A1,
        AxiomId::A2,
        AxiomId::A3,
        AxiomId::A4,
        AxiomId::A5,
        AxiomId::A6,
        AxiomId::A7,
        AxiomId::A8,
        AxiomId::A9,
        AxiomId::T,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::A1 => "A1",
            AxiomId::A2 => "A2",
            AxiomId::A3 => "A3",
            AxiomId::A4 => "A4",
            AxiomId::A5 => "A5",
            AxiomId::A6 => "A6",
            AxiomId::A7 => "A7",
            AxiomId::A8 => "A8",
            AxiomId::A9 => "A9",
            AxiomId::T => "T",
        }
    }

    pub fn from_name(name: &str) -> Option<AxiomId> {
        AxiomId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(name))
    }

    /// The scheme with metavariable atoms `a`, `b`, `c`.
    pub fn template(self) -> &'static Formula {
        static TEMPLATES: OnceLock<Vec<Formula>> = OnceLock::new();
        let templates = TEMPLATES.get_or_init(|| {
            [
                "a -> (b -> a)",
                "(a -> (b -> c)) -> ((a -> b) -> (a -> c))",
                "a & b -> a",
                "a & b -> b",
                "a -> (b -> (a & b))",
                "a -> a | b",
                "b -> a | b",
                "(a -> c) -> ((b -> c) -> ((a | b) -> c))",
                "_|_ -> a",
                "[]a -> a",
            ]
            .iter()
            .map(|text| formula::parse(text).expect("axiom templates parse"))
            .collect()
        });
        &templates[AxiomId::ALL.iter().position(|id| *id == self).unwrap()]
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a proof line is justified. Cited line numbers are 1-based and
/// must point at earlier lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// An axiom instance. Without an explicit substitution the checker
    /// infers one by matching the template.
    Axiom {
        id: AxiomId,
        substitution: Option<BTreeMap<String, Formula>>,
    },
    /// From `antecedent` and `implication` (which must read
    /// `antecedent -> this line`), infer this line.
    ModusPonens { antecedent: usize, implication: usize },
    /// From converse implications on two earlier lines, infer a boxed
    /// implication between the same formulas, in either direction.
    Extensionality { first: usize, second: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub index: usize,
    pub formula: Formula,
    pub justification: Justification,
}

/// Why a proof line does not check.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ProofDefect {
    #[error("line indices must be sequential from 1: expected {expected}, found {found}")]
    IndexSequence { expected: usize, found: usize },
    #[error("formula is not an instance of axiom {id}")]
    NotAnInstance { id: AxiomId },
    #[error("the given substitution does not turn axiom {id} into this formula")]
    SubstitutionMismatch { id: AxiomId },
    #[error("substitution is missing metavariable `{variable}` of axiom {id}")]
    SubstitutionIncomplete { id: AxiomId, variable: String },
    #[error("citation {cited} must name an earlier line")]
    Citation { cited: usize },
    #[error("line {implication} is not an implication from line {antecedent} to this formula")]
    ModusPonensMismatch { antecedent: usize, implication: usize },
    #[error("extensionality must conclude a boxed implication `[]x -> []y`")]
    ExtensionalityShape,
    #[error("lines {first} and {second} are not converse implications matching this conclusion")]
    ExtensionalityMismatch { first: usize, second: usize },
}

/// Location and reason of the first failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub defect: ProofDefect,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.defect)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofReport {
    pub valid: bool,
    pub first_error: Option<LineError>,
}

/// Matches `f` against the templates in the fixed order A1..A9, T and
/// returns the first scheme together with the witnessing substitution.
pub fn match_axiom(f: &Formula) -> Option<(AxiomId, BTreeMap<String, Formula>)> {
    for id in AxiomId::ALL {
        let mut binding = BTreeMap::new();
        if match_template(id.template(), f, &mut binding) {
            return Some((id, binding));
        }
    }
    None
}

fn match_template(
    template: &Formula,
    f: &Formula,
    binding: &mut BTreeMap<String, Formula>,
) -> bool {
    match (template, f) {
        (Formula::Atom(name), _) => match binding.get(name) {
            Some(bound) => bound == f,
            None => {
                binding.insert(name.clone(), f.clone());
                true
            }
        },
        (Formula::Bottom, Formula::Bottom) => true,
        (Formula::And(ta, tb), Formula::And(fa, fb))
        | (Formula::Or(ta, tb), Formula::Or(fa, fb))
        | (Formula::Implies(ta, tb), Formula::Implies(fa, fb)) => {
            match_template(ta, fa, binding) && match_template(tb, fb, binding)
        }
        (Formula::Box(t), Formula::Box(g))
        | (Formula::Nabla(t), Formula::Nabla(g))
        | (Formula::Diamond(t), Formula::Diamond(g)) => match_template(t, g, binding),
        _ => false,
    }
}

fn check_line(lines: &[ProofLine], at: usize) -> Result<(), ProofDefect> {
    let line = &lines[at];
    let expected = at + 1;
    if line.index != expected {
        return Err(ProofDefect::IndexSequence {
            expected,
            found: line.index,
        });
    }
    let cite = |cited: usize| -> Result<&Formula, ProofDefect> {
        if cited == 0 || cited >= expected {
            return Err(ProofDefect::Citation { cited });
        }
        Ok(&lines[cited - 1].formula)
    };
    match &line.justification {
        Justification::Axiom { id, substitution } => match substitution {
            Some(map) => {
                for variable in id.template().atoms() {
                    if !map.contains_key(&variable) {
                        return Err(ProofDefect::SubstitutionIncomplete { id: *id, variable });
                    }
                }
                let instance = id
                    .template()
                    .substitute(map)
                    .expect("completeness was checked");
                if instance != line.formula {
                    return Err(ProofDefect::SubstitutionMismatch { id: *id });
                }
                Ok(())
            }
            None => {
                let mut binding = BTreeMap::new();
                if match_template(id.template(), &line.formula, &mut binding) {
                    Ok(())
                } else {
                    Err(ProofDefect::NotAnInstance { id: *id })
                }
            }
        },
        Justification::ModusPonens {
            antecedent,
            implication,
        } => {
            let from = cite(*antecedent)?;
            let via = cite(*implication)?;
            let expected_implication =
                Formula::implies(from.clone(), line.formula.clone());
            if *via != expected_implication {
                return Err(ProofDefect::ModusPonensMismatch {
                    antecedent: *antecedent,
                    implication: *implication,
                });
            }
            Ok(())
        }
        Justification::Extensionality { first, second } => {
            let lhs = cite(*first)?;
            let rhs = cite(*second)?;
            let (alpha, beta) = match &line.formula {
                Formula::Implies(a, b) => match (a.as_ref(), b.as_ref()) {
                    (Formula::Box(alpha), Formula::Box(beta)) => (alpha.as_ref(), beta.as_ref()),
                    _ => return Err(ProofDefect::ExtensionalityShape),
                },
                _ => return Err(ProofDefect::ExtensionalityShape),
            };
            let forward = Formula::implies(alpha.clone(), beta.clone());
            let backward = Formula::implies(beta.clone(), alpha.clone());
            let matches = (*lhs == forward && *rhs == backward)
                || (*lhs == backward && *rhs == forward);
            if !matches {
                return Err(ProofDefect::ExtensionalityMismatch {
                    first: *first,
                    second: *second,
                });
            }
            Ok(())
        }
    }
}

/// Verifies every line; the empty proof is valid.
pub fn check_proof(lines: &[ProofLine]) -> ProofReport {
    for at in 0..lines.len() {
        if let Err(defect) = check_line(lines, at) {
            return ProofReport {
                valid: false,
                first_error: Some(LineError {
                    line: at + 1,
                    defect,
                }),
            };
        }
    }
    ProofReport {
        valid: true,
        first_error: None,
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SweepRejection {
    #[error("proof does not check ({0}); nothing to sweep")]
    InvalidProof(LineError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Checks the proof, then asserts that every line's formula (atoms read
/// as metavariables) is scheme-valid on every enumerated frame up to
/// `max_worlds`. A violation in the report would witness an unsound
/// rule, so none is ever expected.
pub fn soundness_sweep(lines: &[ProofLine], max_worlds: u8) -> Result<SweepReport, SweepRejection> {
    let report = check_proof(lines);
    if let Some(error) = report.first_error {
        return Err(SweepRejection::InvalidProof(error));
    }
    let schemes: Vec<Formula> = lines.iter().map(|l| l.formula.clone()).collect();
    Ok(search::scheme_sweep(
        &schemes,
        max_worlds,
        search::DEFAULT_FAMILY_CAP,
        BoxMode::Standard,
        ConditionSet::NONE,
    )?)
}

/// Parse error for the line-oriented proof file format.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ProofParseError {
    /// 1-based source line.
    pub line: usize,
    pub message: String,
}

/// Parses the proof file format:
///
/// ```text
/// 1: []p -> p            ; axiom T
/// 2: ([]p -> p) -> (q -> ([]p -> p)) ; axiom A1
/// 3: q -> ([]p -> p)     ; mp 1 2
/// ```
///
/// `#` starts a comment; blank lines are skipped. Justifications are
/// `axiom <id>`, `mp <i> <j>` (i antecedent, j implication) and
/// `ext <i> <j>`.
pub fn parse_proof(text: &str) -> Result<Vec<ProofLine>, ProofParseError> {
    let mut lines = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let err = |message: String| ProofParseError { line: no, message };
        let content = match raw.find('#') {
            Some(at) => &raw[..at],
            None => raw,
        };
        if content.trim().is_empty() {
            continue;
        }
        let (index_part, rest) = content
            .split_once(':')
            .ok_or_else(|| err("missing `:` after the line index".into()))?;
        let index: usize = index_part
            .trim()
            .parse()
            .map_err(|_| err(format!("bad line index `{}`", index_part.trim())))?;
        let (formula_part, just_part) = rest
            .split_once(';')
            .ok_or_else(|| err("missing `;` before the justification".into()))?;
        let formula = formula::parse(formula_part.trim())
            .map_err(|e| err(format!("formula: {e}")))?;
        let words: Vec<&str> = just_part.split_whitespace().collect();
        let cited = |word: &str| -> Result<usize, ProofParseError> {
            word.parse()
                .map_err(|_| err(format!("bad line citation `{word}`")))
        };
        let justification = match words.as_slice() {
            ["axiom", id] => Justification::Axiom {
                id: AxiomId::from_name(id)
                    .ok_or_else(|| err(format!("unknown axiom `{id}`")))?,
                substitution: None,
            },
            ["mp", i, j] => Justification::ModusPonens {
                antecedent: cited(i)?,
                implication: cited(j)?,
            },
            ["ext", i, j] => Justification::Extensionality {
                first: cited(i)?,
                second: cited(j)?,
            },
            [] => return Err(err("missing justification".into())),
            other => return Err(err(format!("bad justification `{}`", other.join(" ")))),
        };
        lines.push(ProofLine {
            index,
            formula,
            justification,
        });
    }
    Ok(lines)
}
