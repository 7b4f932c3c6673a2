//! Models and proof texts used by the replication suite. They are
//! compiled into the binary so `replicate` never depends on the working
//! directory.

use std::collections::BTreeMap;

use crate::model::{Frame, Model, WorldSet};

fn ws(worlds: &[u8]) -> WorldSet {
    WorldSet::from_worlds(worlds)
}

fn model(worlds: u8, order: &[(u8, u8)], nbhd: Vec<Vec<WorldSet>>, valuation: &[(&str, WorldSet)]) -> Model {
    let frame = Frame::new(worlds, order, nbhd).expect("builtin frame is well-formed");
    let valuation = valuation
        .iter()
        .map(|(atom, set)| (atom.to_string(), *set))
        .collect::<BTreeMap<_, _>>();
    Model::new(frame, valuation).expect("builtin valuation is well-formed")
}

/// Two worlds with identity order where `[](p & q)` holds at world 0
/// while `[]p` does not — the behavior no binary accessibility relation
/// can reproduce.
pub fn birel_model() -> Model {
    model(
        2,
        &[],
        vec![vec![ws(&[0])], vec![ws(&[1])]],
        &[("p", ws(&[0, 1])), ("q", ws(&[0]))],
    )
}

/// Three worlds with 2 <= 0: world 2 forces `[](p -> q)` but not
/// `[]p -> []q`, separating axiom K.
pub fn k_countermodel() -> Model {
    model(
        3,
        &[(2, 0)],
        vec![
            vec![ws(&[0]), ws(&[0, 1, 2])],
            vec![ws(&[1])],
            vec![ws(&[0, 1, 2])],
        ],
        &[("p", ws(&[0])), ("q", ws(&[0, 1]))],
    )
}

/// Two worlds with identity order where `p -> q` is valid yet
/// `[]p -> []q` is not, separating the monotonicity rule.
pub fn mon_rule_model() -> Model {
    model(
        2,
        &[],
        vec![vec![ws(&[0])], vec![ws(&[1])]],
        &[("p", ws(&[0])), ("q", ws(&[0, 1]))],
    )
}

/// Three worlds with identity order satisfying the star condition but
/// not its subset-closure strengthening: world 0 forces `[]p` but not
/// `[][]p`, so axiom 4 fails here.
pub fn star_without_starstar_model() -> Model {
    model(
        3,
        &[],
        vec![
            vec![ws(&[0, 1]), ws(&[0, 2])],
            vec![ws(&[0, 1]), ws(&[0, 2])],
            vec![ws(&[2])],
        ],
        &[("p", ws(&[0, 2]))],
    )
}

/// Derivation files bundled for the proof checker.
pub mod proofs {
    /// One axiom-T instance weakened by an A1 step.
    pub const T_INSTANCE: &str = include_str!("../fixtures/proofs/t_instance.prf");
    /// The standard five-line derivation of `p -> p` from A1 and A2.
    pub const IDENTITY: &str = include_str!("../fixtures/proofs/identity.prf");
    /// Derives both boxed implications between `p & p` and `p`, then
    /// conjoins them into the full biconditional.
    pub const EXT_BICONDITIONAL: &str = include_str!("../fixtures/proofs/ext_biconditional.prf");
    /// Modus ponens citing a line that is not the required implication.
    pub const BROKEN_MP_SHAPE: &str = include_str!("../fixtures/proofs/broken_mp_shape.prf");
    /// Claims an axiom id the formula does not instantiate.
    pub const BROKEN_AXIOM_ID: &str = include_str!("../fixtures/proofs/broken_axiom_id.prf");
    /// Extensionality citing lines that are not converse implications.
    pub const BROKEN_EXT_PREMISES: &str =
        include_str!("../fixtures/proofs/broken_ext_premises.prf");
    /// Cites a line that comes later in the derivation.
    pub const BROKEN_FORWARD_CITATION: &str =
        include_str!("../fixtures/proofs/broken_forward_citation.prf");

    /// The whole corpus with expected verdicts.
    pub fn corpus() -> Vec<(&'static str, &'static str, bool)> {
        vec![
            ("t_instance", T_INSTANCE, true),
            ("identity", IDENTITY, true),
            ("ext_biconditional", EXT_BICONDITIONAL, true),
            ("broken_mp_shape", BROKEN_MP_SHAPE, false),
            ("broken_axiom_id", BROKEN_AXIOM_ID, false),
            ("broken_ext_premises", BROKEN_EXT_PREMISES, false),
            ("broken_forward_citation", BROKEN_FORWARD_CITATION, false),
        ]
    }
}
