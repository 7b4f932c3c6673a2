//! Forcing and formula extensions.
//!
//! The satisfaction clauses are intuitionistic: implication quantifies
//! over all order-successors, atoms read the (upward-closed) valuation,
//! and falsum never holds. Necessity comes in four interpretations
//! ([`BoxMode`]); possibility exists in two flavors, one through some
//! neighborhood (`<>`) and one through every neighborhood (`<*>`).
//!
//! Everything here is pure over immutable inputs; contexts borrow their
//! model and can be evaluated concurrently without coordination.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::builtin;
use crate::formula::Formula;
use crate::model::{Model, WorldSet};

/// How `[]` is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoxMode {
    /// `w` forces `[]f` iff `w` forces `f` and the extension of `f` is
    /// a neighborhood of `w`.
    Standard,
    /// `w` forces `[]f` iff the extension of `f` is a neighborhood of
    /// `w`. Monotone only over frames where neighborhoods grow along
    /// the order; axiom T fails in this mode.
    Simple,
    /// Relational clause: every `R`-successor of `w` forces `f`.
    RelPlain,
    /// Relational clause with a local conjunct: `w` itself forces `f`
    /// and so does every `R`-successor.
    RelLocal,
}

impl BoxMode {
    pub fn is_relational(self) -> bool {
        matches!(self, BoxMode::RelPlain | BoxMode::RelLocal)
    }
}

impl fmt::Display for BoxMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BoxMode::Standard => "standard",
            BoxMode::Simple => "simple",
            BoxMode::RelPlain => "rel-plain",
            BoxMode::RelLocal => "rel-local",
        };
        f.write_str(name)
    }
}

/// An arbitrary binary accessibility relation for the relational box
/// clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    succ: Vec<WorldSet>,
}

impl Relation {
    pub fn from_pairs(worlds: u8, pairs: &[(u8, u8)]) -> Result<Relation, SemanticsError> {
        let mut succ = vec![WorldSet::EMPTY; worlds as usize];
        for &(w, v) in pairs {
            if w >= worlds || v >= worlds {
                return Err(SemanticsError::RelationOutOfRange {
                    pair: (w, v),
                    worlds,
                });
            }
            succ[w as usize] = succ[w as usize].with(v);
        }
        Ok(Relation { succ })
    }

    pub fn successors(&self, w: u8) -> WorldSet {
        self.succ[w as usize]
    }

    pub fn pairs(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for (w, set) in self.succ.iter().enumerate() {
            for v in set.iter() {
                out.push((w as u8, v));
            }
        }
        out
    }
}

/// A model together with a box interpretation and, for the relational
/// modes, the accessibility relation.
#[derive(Clone, Debug)]
pub struct EvalContext<'a> {
    model: &'a Model,
    mode: BoxMode,
    relation: Option<Relation>,
}

impl<'a> EvalContext<'a> {
    /// Context for the neighborhood modes.
    pub fn new(model: &'a Model, mode: BoxMode) -> Result<EvalContext<'a>, SemanticsError> {
        if mode.is_relational() {
            return Err(SemanticsError::RelationRequired(mode));
        }
        Ok(EvalContext {
            model,
            mode,
            relation: None,
        })
    }

    /// Context for the relational modes.
    pub fn with_relation(
        model: &'a Model,
        mode: BoxMode,
        relation: Relation,
    ) -> Result<EvalContext<'a>, SemanticsError> {
        if !mode.is_relational() {
            return Err(SemanticsError::RelationNotAllowed(mode));
        }
        if relation.succ.len() != model.frame().world_count() as usize {
            return Err(SemanticsError::RelationArity {
                expected: model.frame().world_count(),
                got: relation.succ.len(),
            });
        }
        Ok(EvalContext {
            model,
            mode,
            relation: Some(relation),
        })
    }

    pub fn model(&self) -> &Model {
        self.model
    }

    pub fn mode(&self) -> BoxMode {
        self.mode
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("box mode {0} requires a relation")]
    RelationRequired(BoxMode),
    #[error("box mode {0} does not take a relation")]
    RelationNotAllowed(BoxMode),
    #[error("relation pair ({}, {}) out of range for {worlds} worlds", pair.0, pair.1)]
    RelationOutOfRange { pair: (u8, u8), worlds: u8 },
    #[error("relation covers {got} worlds, model has {expected}")]
    RelationArity { expected: u8, got: usize },
    #[error("`{op}` has no meaning under box mode {mode}")]
    ModalOperatorUnsupported { op: &'static str, mode: BoxMode },
    #[error("world {world} out of range for {worlds} worlds")]
    WorldOutOfRange { world: u8, worlds: u8 },
    #[error("monotonicity is only defined for the standard and simple modes, not {0}")]
    MonotonicityMode(BoxMode),
}

/// The set of worlds forcing `f`, computed bottom-up.
pub fn extension(ctx: &EvalContext<'_>, f: &Formula) -> Result<WorldSet, SemanticsError> {
    let frame = ctx.model.frame();
    let n = frame.world_count();
    let universe = frame.universe();
    match f {
        Formula::Atom(name) => Ok(ctx.model.atom_extension(name)),
        Formula::Bottom => Ok(WorldSet::EMPTY),
        Formula::And(a, b) => Ok(extension(ctx, a)?.intersection(extension(ctx, b)?)),
        Formula::Or(a, b) => Ok(extension(ctx, a)?.union(extension(ctx, b)?)),
        Formula::Implies(a, b) => {
            let ea = extension(ctx, a)?;
            let eb = extension(ctx, b)?;
            let failing = ea.difference(eb);
            let mut out = WorldSet::EMPTY;
            for w in 0..n {
                if frame.up_set(w).intersection(failing).is_empty() {
                    out = out.with(w);
                }
            }
            Ok(out)
        }
        Formula::Box(a) => {
            let ea = extension(ctx, a)?;
            let mut out = WorldSet::EMPTY;
            match ctx.mode {
                BoxMode::Standard => {
                    for w in 0..n {
                        if ea.contains(w) && frame.has_neighborhood(w, ea) {
                            out = out.with(w);
                        }
                    }
                }
                BoxMode::Simple => {
                    for w in 0..n {
                        if frame.has_neighborhood(w, ea) {
                            out = out.with(w);
                        }
                    }
                }
                BoxMode::RelPlain => {
                    let rel = ctx.relation.as_ref().expect("checked at construction");
                    for w in 0..n {
                        if rel.successors(w).is_subset(ea) {
                            out = out.with(w);
                        }
                    }
                }
                BoxMode::RelLocal => {
                    let rel = ctx.relation.as_ref().expect("checked at construction");
                    for w in 0..n {
                        if ea.contains(w) && rel.successors(w).is_subset(ea) {
                            out = out.with(w);
                        }
                    }
                }
            }
            Ok(out.intersection(universe))
        }
        Formula::Nabla(a) => {
            if ctx.mode.is_relational() {
                return Err(SemanticsError::ModalOperatorUnsupported {
                    op: "<>",
                    mode: ctx.mode,
                });
            }
            let ea = extension(ctx, a)?;
            let mut out = WorldSet::EMPTY;
            for w in 0..n {
                if frame
                    .neighborhoods(w)
                    .iter()
                    .any(|x| !x.intersection(ea).is_empty())
                {
                    out = out.with(w);
                }
            }
            Ok(out)
        }
        Formula::Diamond(a) => {
            if ctx.mode.is_relational() {
                return Err(SemanticsError::ModalOperatorUnsupported {
                    op: "<*>",
                    mode: ctx.mode,
                });
            }
            let ea = extension(ctx, a)?;
            let mut out = WorldSet::EMPTY;
            for w in 0..n {
                if frame
                    .neighborhoods(w)
                    .iter()
                    .all(|x| !x.intersection(ea).is_empty())
                {
                    out = out.with(w);
                }
            }
            Ok(out)
        }
    }
}

/// Whether `w` forces `f`; equals membership in [`extension`].
pub fn forces(ctx: &EvalContext<'_>, world: u8, f: &Formula) -> Result<bool, SemanticsError> {
    let worlds = ctx.model.frame().world_count();
    if world >= worlds {
        return Err(SemanticsError::WorldOutOfRange { world, worlds });
    }
    Ok(extension(ctx, f)?.contains(world))
}

/// First order pair `(w, v)` along which forcing of `f` is lost, if
/// any. `None` means the extension is upward closed.
pub fn check_monotonicity(
    ctx: &EvalContext<'_>,
    f: &Formula,
) -> Result<Option<(u8, u8)>, SemanticsError> {
    if ctx.mode.is_relational() {
        return Err(SemanticsError::MonotonicityMode(ctx.mode));
    }
    let ext = extension(ctx, f)?;
    let frame = ctx.model.frame();
    for w in ext.iter() {
        let escapees = frame.up_set(w).difference(ext);
        if let Some(v) = escapees.iter().next() {
            return Ok(Some((w, v)));
        }
    }
    Ok(None)
}

/// One accessibility relation tried by the refutation harness.
#[derive(Clone, Debug, Serialize)]
pub struct BirelRow {
    pub relation: Vec<(u8, u8)>,
    pub forces_box_conj: bool,
    pub forces_box_atom: bool,
    /// True when this relation reproduces the neighborhood pattern
    /// (boxed conjunction forced, boxed conjunct not).
    pub reproduces: bool,
}

/// Exhaustive sweep over all sixteen relations on the fixed two-world
/// model, for one relational clause.
#[derive(Clone, Debug, Serialize)]
pub struct BirelTranscript {
    pub mode: BoxMode,
    /// `[](p & q)` at world 0 under the standard neighborhood clause.
    pub target_box_conj: bool,
    /// `[]p` at world 0 under the standard neighborhood clause.
    pub target_box_atom: bool,
    pub rows: Vec<BirelRow>,
}

impl BirelTranscript {
    /// Number of relations reproducing the neighborhood pattern.
    pub fn reproductions(&self) -> usize {
        self.rows.iter().filter(|r| r.reproduces).count()
    }
}

/// Tries every binary relation on the fixed two-world model and records
/// whether any of them makes `[](p & q)` true and `[]p` false at world
/// 0, the way the neighborhood semantics does. None can: `p` holds
/// everywhere, so a universally quantified clause forces `[]p` no
/// matter which relation is chosen.
pub fn birelational_refutation(mode: BoxMode) -> Result<BirelTranscript, SemanticsError> {
    if !mode.is_relational() {
        return Err(SemanticsError::RelationNotAllowed(mode));
    }
    let model = builtin::birel_model();
    let box_conj = Formula::boxed(Formula::and(Formula::atom("p"), Formula::atom("q")));
    let box_atom = Formula::boxed(Formula::atom("p"));

    let standard = EvalContext::new(&model, BoxMode::Standard)?;
    let target_box_conj = forces(&standard, 0, &box_conj)?;
    let target_box_atom = forces(&standard, 0, &box_atom)?;

    let all_pairs = [(0u8, 0u8), (0, 1), (1, 0), (1, 1)];
    let mut rows = Vec::with_capacity(16);
    for mask in 0u32..16 {
        let pairs: Vec<(u8, u8)> = all_pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| *p)
            .collect();
        let relation = Relation::from_pairs(2, &pairs)?;
        let ctx = EvalContext::with_relation(&model, mode, relation)?;
        let forces_box_conj = forces(&ctx, 0, &box_conj)?;
        let forces_box_atom = forces(&ctx, 0, &box_atom)?;
        rows.push(BirelRow {
            relation: pairs,
            forces_box_conj,
            forces_box_atom,
            reproduces: forces_box_conj == target_box_conj && forces_box_atom == target_box_atom,
        });
    }
    Ok(BirelTranscript {
        mode,
        target_box_conj,
        target_box_atom,
        rows,
    })
}
