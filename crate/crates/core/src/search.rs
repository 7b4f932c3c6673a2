//! Exhaustive enumeration of small frames and countermodel search for
//! axiom schemes under selectable frame conditions.
//!
//! Enumeration is deterministic: frames are ordered by world count,
//! then by the order relation (as a bitmask over non-reflexive pairs,
//! ascending), then by the per-world neighborhood families
//! (lexicographically, ascending by family mask). Scheme validity
//! quantifies every metavariable over the upward-closed subsets of the
//! frame, since valuations must be monotone.
//!
//! The hot loops work on a compact representation where a neighborhood
//! family is a bitmask over the subsets of the universe, so condition
//! checks and box evaluation are single-word operations. Results are
//! converted to ordinary [`Frame`]s and [`Model`]s only when reported.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::model::{self, Frame, Model, Witness, WorldSet};
use crate::semantics::{self, BoxMode, EvalContext};

/// Enumeration never goes beyond this many worlds.
pub const MAX_SEARCH_WORLDS: u8 = 3;
/// Hard cap on neighborhood family size per world.
pub const MAX_FAMILY_CAP: u8 = 4;
/// Default neighborhood family cap.
pub const DEFAULT_FAMILY_CAP: u8 = 3;
/// Cap on metavariable assignments examined per frame.
pub const ASSIGNMENT_BUDGET: u64 = 1 << 20;

/// Frame conditions a search may require on top of condition (1).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConditionSet {
    pub cond2: bool,
    pub star: bool,
    pub starstar: bool,
}

impl ConditionSet {
    pub const NONE: ConditionSet = ConditionSet {
        cond2: false,
        star: false,
        starstar: false,
    };

    pub fn just_cond2() -> ConditionSet {
        ConditionSet {
            cond2: true,
            ..ConditionSet::NONE
        }
    }

    pub fn just_starstar() -> ConditionSet {
        ConditionSet {
            starstar: true,
            ..ConditionSet::NONE
        }
    }
}

/// What to search for and where.
#[derive(Clone, Debug)]
pub struct SearchSpec {
    /// Scheme whose atoms are read as metavariables.
    pub scheme: Formula,
    pub max_worlds: u8,
    pub required_conditions: ConditionSet,
    pub box_mode: BoxMode,
    pub nbhd_family_cap: u8,
}

impl SearchSpec {
    pub fn new(scheme: Formula) -> SearchSpec {
        SearchSpec {
            scheme,
            max_worlds: MAX_SEARCH_WORLDS,
            required_conditions: ConditionSet::NONE,
            box_mode: BoxMode::Standard,
            nbhd_family_cap: DEFAULT_FAMILY_CAP,
        }
    }

    pub fn max_worlds(mut self, n: u8) -> SearchSpec {
        self.max_worlds = n;
        self
    }

    pub fn require(mut self, conditions: ConditionSet) -> SearchSpec {
        self.required_conditions = conditions;
        self
    }

    pub fn box_mode(mut self, mode: BoxMode) -> SearchSpec {
        self.box_mode = mode;
        self
    }

    pub fn family_cap(mut self, cap: u8) -> SearchSpec {
        self.nbhd_family_cap = cap;
        self
    }

    fn validate(&self) -> Result<(), SearchError> {
        check_bounds(self.max_worlds, self.nbhd_family_cap)?;
        if !matches!(self.box_mode, BoxMode::Standard | BoxMode::Simple) {
            return Err(SearchError::Mode(self.box_mode));
        }
        Ok(())
    }
}

fn check_bounds(max_worlds: u8, cap: u8) -> Result<(), SearchError> {
    if max_worlds == 0 || max_worlds > MAX_SEARCH_WORLDS {
        return Err(SearchError::MaxWorlds(max_worlds));
    }
    if cap > MAX_FAMILY_CAP {
        return Err(SearchError::FamilyCap(cap));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchVerdict {
    #[serde(rename = "countermodel-found")]
    CountermodelFound,
    #[serde(rename = "exhausted-no-countermodel")]
    Exhausted,
    #[serde(rename = "sample-budget-exhausted")]
    BudgetExhausted,
}

impl fmt::Display for SearchVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SearchVerdict::CountermodelFound => "countermodel-found",
            SearchVerdict::Exhausted => "exhausted-no-countermodel",
            SearchVerdict::BudgetExhausted => "sample-budget-exhausted",
        };
        f.write_str(name)
    }
}

/// Work counters. `frames_visited` counts frames that passed all
/// filters and were scheme-checked; `models_visited` counts evaluated
/// metavariable assignments. Elapsed time is informational and excluded
/// from equality and serialization.
#[derive(Clone, Debug, Serialize)]
pub struct SearchStats {
    pub frames_visited: u64,
    pub models_visited: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for SearchStats {
    fn eq(&self, other: &Self) -> bool {
        self.frames_visited == other.frames_visited && self.models_visited == other.models_visited
    }
}

impl Eq for SearchStats {}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub verdict: SearchVerdict,
    /// Present iff a countermodel was found: the frame with the
    /// witnessing metavariable valuation.
    pub model: Option<Model>,
    /// Least world at which the instantiated scheme fails.
    pub world: Option<u8>,
    pub stats: SearchStats,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("max_worlds must be between 1 and {MAX_SEARCH_WORLDS}, got {0}")]
    MaxWorlds(u8),
    #[error("neighborhood family cap must be at most {MAX_FAMILY_CAP}, got {0}")]
    FamilyCap(u8),
    #[error("box mode {0} is not searchable; use standard or simple")]
    Mode(BoxMode),
    #[error(
        "assignment budget exceeded: {metavariables} metavariables over {upsets} upward-closed sets need {needed} assignments (budget {ASSIGNMENT_BUDGET})"
    )]
    Budget {
        metavariables: usize,
        upsets: usize,
        needed: u64,
    },
}

// ---------------------------------------------------------------------
// Compact enumeration machinery.
//
// Subsets of the universe are indexed by their own bitmask, so for n
// worlds a neighborhood family is a bitmask over 2^n subset indices and
// `X in N_w` is one bit test.

struct OrderInfo {
    /// Up-set of each world as a world mask, including the world.
    up: Vec<u16>,
    /// Non-reflexive pairs (w, v) with w <= v, lexicographic.
    strict: Vec<(u8, u8)>,
    /// Upward-closed world masks, ascending.
    upsets: Vec<u16>,
}

struct FrameSpace {
    worlds: u8,
    world_full: u16,
    /// Bitmask over all subset indices.
    family_full: u16,
    /// All partial orders, ascending by strict-pair bitmask.
    orders: Vec<OrderInfo>,
    /// Family masks with at most `cap` members, ascending.
    families: Vec<u16>,
    /// `contains[v]`: subsets having world v as a member.
    contains: Vec<u16>,
    /// `meets[a]`: subsets intersecting the world mask `a`.
    meets: Vec<u16>,
    /// Whether a family mask is closed under taking subsets.
    down_closed: Vec<bool>,
}

impl FrameSpace {
    fn new(worlds: u8, cap: u8, prefilter_starstar: bool) -> FrameSpace {
        debug_assert!((1..=MAX_SEARCH_WORLDS).contains(&worlds));
        let n_subsets: u16 = 1 << worlds;
        let world_full: u16 = n_subsets - 1;
        let family_full: u16 = if n_subsets >= 16 {
            u16::MAX
        } else {
            (1u16 << n_subsets) - 1
        };

        let mut contains = vec![0u16; worlds as usize];
        for (v, slot) in contains.iter_mut().enumerate() {
            for s in 0..n_subsets {
                if s & (1 << v) != 0 {
                    *slot |= 1 << s;
                }
            }
        }
        let mut meets = vec![0u16; n_subsets as usize];
        for (a, slot) in meets.iter_mut().enumerate() {
            for s in 0..n_subsets {
                if s as usize & a != 0 {
                    *slot |= 1 << s;
                }
            }
        }
        let mut down_closed = vec![false; family_full as usize + 1];
        for (fam, slot) in down_closed.iter_mut().enumerate() {
            let fam = fam as u16;
            let mut ok = true;
            let mut rest = fam;
            'outer: while rest != 0 {
                let x = rest.trailing_zeros() as u16;
                rest &= rest - 1;
                let mut sub = x;
                loop {
                    if fam & (1 << sub) == 0 {
                        ok = false;
                        break 'outer;
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & x;
                }
            }
            *slot = ok;
        }

        let families: Vec<u16> = (0..=family_full)
            .filter(|f| f.count_ones() <= cap as u32)
            .filter(|f| !prefilter_starstar || down_closed[*f as usize])
            .collect();

        let mut pairs = Vec::new();
        for w in 0..worlds {
            for v in 0..worlds {
                if w != v {
                    pairs.push((w, v));
                }
            }
        }
        let mut orders = Vec::new();
        'mask: for mask in 0u32..(1 << pairs.len()) {
            let mut up: Vec<u16> = (0..worlds).map(|w| 1u16 << w).collect();
            let mut strict = Vec::new();
            for (i, &(w, v)) in pairs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    up[w as usize] |= 1 << v;
                    strict.push((w, v));
                }
            }
            for w in 0..worlds {
                for v in 0..worlds {
                    if w == v {
                        continue;
                    }
                    let le_wv = up[w as usize] & (1 << v) != 0;
                    if le_wv && up[v as usize] & (1 << w) != 0 {
                        continue 'mask; // antisymmetry
                    }
                    if le_wv && up[v as usize] & !up[w as usize] != 0 {
                        continue 'mask; // transitivity
                    }
                }
            }
            let upsets = (0..=world_full)
                .filter(|&s| (0..worlds).all(|w| s & (1 << w) == 0 || up[w as usize] & !s == 0))
                .collect();
            orders.push(OrderInfo { up, strict, upsets });
        }

        FrameSpace {
            worlds,
            world_full,
            family_full,
            orders,
            families,
            contains,
            meets,
            down_closed,
        }
    }

    fn cond1_ok(&self, order: &OrderInfo, fams: &[u16; 3]) -> bool {
        order.strict.iter().all(|&(w, v)| {
            fams[w as usize] & self.contains[v as usize] & !fams[v as usize] == 0
        })
    }

    fn cond2_ok(&self, order: &OrderInfo, fams: &[u16; 3]) -> bool {
        order
            .strict
            .iter()
            .all(|&(w, v)| fams[w as usize] & !fams[v as usize] == 0)
    }

    fn star_ok(&self, fams: &[u16; 3]) -> bool {
        for w in 0..self.worlds {
            let mut rest = fams[w as usize];
            while rest != 0 {
                let x = rest.trailing_zeros() as u16;
                rest &= rest - 1;
                let mut holders = 0u16;
                for v in 0..self.worlds {
                    if fams[v as usize] & (1 << x) != 0 {
                        holders |= 1 << v;
                    }
                }
                if fams[w as usize] & (1 << holders) == 0 {
                    return false;
                }
            }
        }
        true
    }

    fn starstar_ok(&self, fams: &[u16; 3]) -> bool {
        (0..self.worlds).all(|w| self.down_closed[fams[w as usize] as usize])
    }

    fn passes(&self, order: &OrderInfo, fams: &[u16; 3], required: ConditionSet) -> bool {
        self.cond1_ok(order, fams)
            && (!required.cond2 || self.cond2_ok(order, fams))
            && (!required.star || self.star_ok(fams))
            && (!required.starstar || self.starstar_ok(fams))
    }

    fn build_frame(&self, order: &OrderInfo, fams: &[u16; 3]) -> Frame {
        let nbhd = (0..self.worlds)
            .map(|w| {
                let mut family = Vec::new();
                let mut rest = fams[w as usize];
                while rest != 0 {
                    let x = rest.trailing_zeros() as u16;
                    rest &= rest - 1;
                    family.push(WorldSet::from_mask(x));
                }
                family
            })
            .collect();
        Frame::new(self.worlds, &order.strict, nbhd).expect("enumerated frame is in range")
    }
}

/// Visits every candidate in enumeration order. `filters` of `None`
/// skips all condition checks (including condition (1)); otherwise
/// condition (1) plus the given set is enforced.
fn scan_candidates<T>(
    max_worlds: u8,
    cap: u8,
    filters: Option<ConditionSet>,
    mut visit: impl FnMut(&FrameSpace, &OrderInfo, &[u16; 3]) -> ControlFlow<T>,
) -> Option<T> {
    for n in 1..=max_worlds {
        let space = FrameSpace::new(n, cap, filters.is_some_and(|f| f.starstar));
        let m = space.families.len();
        for order in &space.orders {
            let flow = (|| -> ControlFlow<T> {
                let mut check = |fams: [u16; 3]| -> ControlFlow<T> {
                    match filters {
                        Some(required) if !space.passes(order, &fams, required) => {
                            ControlFlow::Continue(())
                        }
                        _ => visit(&space, order, &fams),
                    }
                };
                match n {
                    1 => {
                        for i0 in 0..m {
                            check([space.families[i0], 0, 0])?;
                        }
                    }
                    2 => {
                        for i0 in 0..m {
                            for i1 in 0..m {
                                check([space.families[i0], space.families[i1], 0])?;
                            }
                        }
                    }
                    _ => {
                        for i0 in 0..m {
                            for i1 in 0..m {
                                for i2 in 0..m {
                                    check([
                                        space.families[i0],
                                        space.families[i1],
                                        space.families[i2],
                                    ])?;
                                }
                            }
                        }
                    }
                }
                ControlFlow::Continue(())
            })();
            if let ControlFlow::Break(t) = flow {
                return Some(t);
            }
        }
    }
    None
}

// ---------------------------------------------------------------------
// Compiled formulas evaluated over the compact representation.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Atom(u8),
    Bottom,
    And,
    Or,
    Implies,
    BoxStandard,
    BoxSimple,
    Nabla,
    Diamond,
}

struct Compiled {
    ops: Vec<Op>,
    vars: Vec<String>,
    propositional: bool,
}

impl Compiled {
    fn new(scheme: &Formula, mode: BoxMode) -> Compiled {
        let vars: Vec<String> = scheme.atoms().into_iter().collect();
        let mut ops = Vec::new();
        fn walk(f: &Formula, vars: &[String], mode: BoxMode, ops: &mut Vec<Op>) {
            match f {
                Formula::Atom(name) => {
                    let i = vars.binary_search(name).expect("atom is in var table");
                    ops.push(Op::Atom(i as u8));
                }
                Formula::Bottom => ops.push(Op::Bottom),
                Formula::And(a, b) => {
                    walk(a, vars, mode, ops);
                    walk(b, vars, mode, ops);
                    ops.push(Op::And);
                }
                Formula::Or(a, b) => {
                    walk(a, vars, mode, ops);
                    walk(b, vars, mode, ops);
                    ops.push(Op::Or);
                }
                Formula::Implies(a, b) => {
                    walk(a, vars, mode, ops);
                    walk(b, vars, mode, ops);
                    ops.push(Op::Implies);
                }
                Formula::Box(a) => {
                    walk(a, vars, mode, ops);
                    ops.push(match mode {
                        BoxMode::Simple => Op::BoxSimple,
                        _ => Op::BoxStandard,
                    });
                }
                Formula::Nabla(a) => {
                    walk(a, vars, mode, ops);
                    ops.push(Op::Nabla);
                }
                Formula::Diamond(a) => {
                    walk(a, vars, mode, ops);
                    ops.push(Op::Diamond);
                }
            }
        }
        walk(scheme, &vars, mode, &mut ops);
        let propositional = scheme.is_propositional();
        Compiled {
            ops,
            vars,
            propositional,
        }
    }

    /// Extension of the scheme instance as a world mask.
    fn eval(
        &self,
        space: &FrameSpace,
        order: &OrderInfo,
        fams: &[u16; 3],
        assignment: &[u16],
        stack: &mut Vec<u16>,
    ) -> u16 {
        let n = space.worlds;
        stack.clear();
        for op in &self.ops {
            match *op {
                Op::Atom(i) => stack.push(assignment[i as usize]),
                Op::Bottom => stack.push(0),
                Op::And => {
                    let b = stack.pop().unwrap();
                    *stack.last_mut().unwrap() &= b;
                }
                Op::Or => {
                    let b = stack.pop().unwrap();
                    *stack.last_mut().unwrap() |= b;
                }
                Op::Implies => {
                    let b = stack.pop().unwrap();
                    let a = *stack.last().unwrap();
                    let failing = a & !b & space.world_full;
                    let mut out = 0u16;
                    for w in 0..n {
                        if order.up[w as usize] & failing == 0 {
                            out |= 1 << w;
                        }
                    }
                    *stack.last_mut().unwrap() = out;
                }
                Op::BoxStandard => {
                    let a = *stack.last().unwrap();
                    let mut out = 0u16;
                    for w in 0..n {
                        if a & (1 << w) != 0 && fams[w as usize] & (1 << a) != 0 {
                            out |= 1 << w;
                        }
                    }
                    *stack.last_mut().unwrap() = out;
                }
                Op::BoxSimple => {
                    let a = *stack.last().unwrap();
                    let mut out = 0u16;
                    for w in 0..n {
                        if fams[w as usize] & (1 << a) != 0 {
                            out |= 1 << w;
                        }
                    }
                    *stack.last_mut().unwrap() = out;
                }
                Op::Nabla => {
                    let a = *stack.last().unwrap();
                    let meets = space.meets[a as usize];
                    let mut out = 0u16;
                    for w in 0..n {
                        if fams[w as usize] & meets != 0 {
                            out |= 1 << w;
                        }
                    }
                    *stack.last_mut().unwrap() = out;
                }
                Op::Diamond => {
                    let a = *stack.last().unwrap();
                    let missing = !space.meets[a as usize] & space.family_full;
                    let mut out = 0u16;
                    for w in 0..n {
                        if fams[w as usize] & missing == 0 {
                            out |= 1 << w;
                        }
                    }
                    *stack.last_mut().unwrap() = out;
                }
            }
        }
        stack.pop().unwrap()
    }
}

/// Lexicographic odometer over metavariable assignments; the last
/// variable varies fastest.
struct Odometer {
    idx: Vec<usize>,
    current: Vec<u16>,
    fresh: bool,
}

impl Odometer {
    fn new() -> Odometer {
        Odometer {
            idx: Vec::new(),
            current: Vec::new(),
            fresh: true,
        }
    }

    fn reset(&mut self, k: usize) {
        self.idx.clear();
        self.idx.resize(k, 0);
        self.current.clear();
        self.current.resize(k, 0);
        self.fresh = true;
    }

    fn next(&mut self, upsets: &[u16]) -> Option<&[u16]> {
        let k = self.idx.len();
        if self.fresh {
            self.fresh = false;
            for slot in self.current.iter_mut() {
                *slot = upsets[0];
            }
            return Some(&self.current);
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < upsets.len() {
                self.current[pos] = upsets[self.idx[pos]];
                return Some(&self.current);
            }
            self.idx[pos] = 0;
            self.current[pos] = upsets[0];
        }
    }
}

fn assignments_for(upsets: usize, vars: usize) -> Result<u64, SearchError> {
    let needed = (upsets as u64)
        .checked_pow(vars as u32)
        .unwrap_or(u64::MAX);
    if needed > ASSIGNMENT_BUDGET {
        return Err(SearchError::Budget {
            metavariables: vars,
            upsets,
            needed,
        });
    }
    Ok(needed)
}

fn collect_assignment(vars: &[String], assignment: &[u16]) -> BTreeMap<String, WorldSet> {
    vars.iter()
        .cloned()
        .zip(assignment.iter().map(|&m| WorldSet::from_mask(m)))
        .collect()
}

// ---------------------------------------------------------------------
// Public operations.

/// A refuting metavariable assignment with the least failing world.
pub type SchemeWitness = (BTreeMap<String, WorldSet>, u8);

/// Truth of `f` at every world of `m` under the given box mode.
pub fn valid_in_model(
    model: &Model,
    mode: BoxMode,
    f: &Formula,
) -> Result<bool, semantics::SemanticsError> {
    let ctx = EvalContext::new(model, mode)?;
    Ok(semantics::extension(&ctx, f)? == model.frame().universe())
}

/// First metavariable assignment (with the least failing world)
/// refuting the scheme on this frame, or `None` when the scheme is
/// valid on it.
pub fn scheme_countermodel_in_frame(
    frame: &Frame,
    mode: BoxMode,
    scheme: &Formula,
) -> Result<Option<SchemeWitness>, SearchError> {
    if !matches!(mode, BoxMode::Standard | BoxMode::Simple) {
        return Err(SearchError::Mode(mode));
    }
    if frame.world_count() <= MAX_SEARCH_WORLDS {
        scheme_countermodel_compact(frame, mode, scheme)
    } else {
        scheme_countermodel_general(frame, mode, scheme)
    }
}

/// Whether every monotone instantiation of the scheme is valid on the
/// frame.
pub fn scheme_valid_in_frame(
    frame: &Frame,
    mode: BoxMode,
    scheme: &Formula,
) -> Result<bool, SearchError> {
    Ok(scheme_countermodel_in_frame(frame, mode, scheme)?.is_none())
}

fn order_info_from_frame(frame: &Frame) -> OrderInfo {
    let n = frame.world_count();
    OrderInfo {
        up: (0..n).map(|w| frame.up_set(w).mask()).collect(),
        strict: frame.strict_order_pairs(),
        upsets: frame.upsets().iter().map(|s| s.mask()).collect(),
    }
}

fn fams_from_frame(frame: &Frame) -> [u16; 3] {
    let mut fams = [0u16; 3];
    for w in 0..frame.world_count() {
        for set in frame.neighborhoods(w) {
            fams[w as usize] |= 1 << set.mask();
        }
    }
    fams
}

fn scheme_countermodel_compact(
    frame: &Frame,
    mode: BoxMode,
    scheme: &Formula,
) -> Result<Option<SchemeWitness>, SearchError> {
    let space = FrameSpace::new(frame.world_count(), 0, false);
    let order = order_info_from_frame(frame);
    let fams = fams_from_frame(frame);
    let compiled = Compiled::new(scheme, mode);
    assignments_for(order.upsets.len(), compiled.vars.len())?;
    let mut odometer = Odometer::new();
    odometer.reset(compiled.vars.len());
    let mut stack = Vec::new();
    while let Some(assignment) = odometer.next(&order.upsets) {
        let ext = compiled.eval(&space, &order, &fams, assignment, &mut stack);
        if ext != space.world_full {
            let world = (!ext & space.world_full).trailing_zeros() as u8;
            let map = collect_assignment(&compiled.vars, assignment);
            return Ok(Some((map, world)));
        }
    }
    Ok(None)
}

fn scheme_countermodel_general(
    frame: &Frame,
    mode: BoxMode,
    scheme: &Formula,
) -> Result<Option<SchemeWitness>, SearchError> {
    let upsets = frame.upsets();
    let vars: Vec<String> = scheme.atoms().into_iter().collect();
    assignments_for(upsets.len(), vars.len())?;
    let universe = frame.universe();
    let masks: Vec<u16> = upsets.iter().map(|s| s.mask()).collect();
    let mut odometer = Odometer::new();
    odometer.reset(vars.len());
    while let Some(assignment) = odometer.next(&masks) {
        let map = collect_assignment(&vars, assignment);
        let model = Model::new(frame.clone(), map.clone()).expect("upsets are in range");
        let ctx = EvalContext::new(&model, mode).expect("mode was checked");
        let ext = semantics::extension(&ctx, scheme).expect("neighborhood modes cannot fail");
        if ext != universe {
            let world = universe
                .difference(ext)
                .iter()
                .next()
                .expect("extension differs from universe");
            return Ok(Some((map, world)));
        }
    }
    Ok(None)
}

/// Streaming enumeration of frames passing [`model::validate_frame`]
/// and the required conditions, in the canonical order.
pub fn enumerate_frames(
    max_worlds: u8,
    nbhd_family_cap: u8,
    required_conditions: ConditionSet,
) -> Result<FrameIter, SearchError> {
    check_bounds(max_worlds, nbhd_family_cap)?;
    Ok(FrameIter::new(
        max_worlds,
        nbhd_family_cap,
        Some(required_conditions),
    ))
}

/// Streaming enumeration of raw candidates: the order is always a
/// partial order, but condition (1) is *not* enforced. Used to probe
/// relative strength of conditions.
pub fn enumerate_candidate_frames(
    max_worlds: u8,
    nbhd_family_cap: u8,
) -> Result<FrameIter, SearchError> {
    check_bounds(max_worlds, nbhd_family_cap)?;
    Ok(FrameIter::new(max_worlds, nbhd_family_cap, None))
}

pub struct FrameIter {
    max_worlds: u8,
    cap: u8,
    filters: Option<ConditionSet>,
    worlds: u8,
    space: FrameSpace,
    order_idx: usize,
    fam_idx: Vec<usize>,
    done: bool,
}

impl FrameIter {
    fn new(max_worlds: u8, cap: u8, filters: Option<ConditionSet>) -> FrameIter {
        let space = FrameSpace::new(1, cap, filters.is_some_and(|f| f.starstar));
        FrameIter {
            max_worlds,
            cap,
            filters,
            worlds: 1,
            space,
            order_idx: 0,
            fam_idx: vec![0],
            done: false,
        }
    }

    fn bump(&mut self) {
        let m = self.space.families.len();
        let mut pos = self.fam_idx.len();
        loop {
            if pos == 0 {
                self.order_idx += 1;
                if self.order_idx >= self.space.orders.len() {
                    if self.worlds >= self.max_worlds {
                        self.done = true;
                        return;
                    }
                    self.worlds += 1;
                    self.space = FrameSpace::new(
                        self.worlds,
                        self.cap,
                        self.filters.is_some_and(|f| f.starstar),
                    );
                    self.order_idx = 0;
                }
                self.fam_idx = vec![0; self.worlds as usize];
                return;
            }
            pos -= 1;
            self.fam_idx[pos] += 1;
            if self.fam_idx[pos] < m {
                return;
            }
            self.fam_idx[pos] = 0;
        }
    }
}

impl Iterator for FrameIter {
    type Item = Frame;

    fn next(&mut self) -> Option<Frame> {
        loop {
            if self.done {
                return None;
            }
            let order = &self.space.orders[self.order_idx];
            let mut fams = [0u16; 3];
            for (w, &i) in self.fam_idx.iter().enumerate() {
                fams[w] = self.space.families[i];
            }
            let keep = match self.filters {
                Some(required) => self.space.passes(order, &fams, required),
                None => true,
            };
            let frame = keep.then(|| self.space.build_frame(order, &fams));
            self.bump();
            if let Some(frame) = frame {
                return Some(frame);
            }
        }
    }
}

enum ScanHit {
    Found {
        frame: Frame,
        assignment: BTreeMap<String, WorldSet>,
        world: u8,
    },
    Budget,
}

/// Searches the enumerated frames for a countermodel to the scheme.
///
/// Deterministic: identical specs produce identical outcomes, stats
/// included. A frame whose assignment space exceeds the budget turns
/// the verdict into `sample-budget-exhausted` rather than silently
/// truncating the search.
pub fn find_countermodel(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    spec.validate()?;
    let start = Instant::now();
    let compiled = Compiled::new(&spec.scheme, spec.box_mode);
    let mut frames: u64 = 0;
    let mut models: u64 = 0;
    let mut odometer = Odometer::new();
    let mut stack = Vec::new();
    let hit = scan_candidates(
        spec.max_worlds,
        spec.nbhd_family_cap,
        Some(spec.required_conditions),
        |space, order, fams| {
            frames += 1;
            if assignments_for(order.upsets.len(), compiled.vars.len()).is_err() {
                return ControlFlow::Break(ScanHit::Budget);
            }
            odometer.reset(compiled.vars.len());
            while let Some(assignment) = odometer.next(&order.upsets) {
                models += 1;
                let ext = compiled.eval(space, order, fams, assignment, &mut stack);
                if ext != space.world_full {
                    let world = (!ext & space.world_full).trailing_zeros() as u8;
                    return ControlFlow::Break(ScanHit::Found {
                        frame: space.build_frame(order, fams),
                        assignment: collect_assignment(&compiled.vars, assignment),
                        world,
                    });
                }
            }
            ControlFlow::Continue(())
        },
    );
    let stats = |frames, models| SearchStats {
        frames_visited: frames,
        models_visited: models,
        elapsed: start.elapsed(),
    };
    Ok(match hit {
        Some(ScanHit::Found {
            frame,
            assignment,
            world,
        }) => SearchOutcome {
            verdict: SearchVerdict::CountermodelFound,
            model: Some(Model::new(frame, assignment).expect("assignment is in range")),
            world: Some(world),
            stats: stats(frames, models),
        },
        Some(ScanHit::Budget) => SearchOutcome {
            verdict: SearchVerdict::BudgetExhausted,
            model: None,
            world: None,
            stats: stats(frames, models),
        },
        None => SearchOutcome {
            verdict: SearchVerdict::Exhausted,
            model: None,
            world: None,
            stats: stats(frames, models),
        },
    })
}

/// Searches for a model refuting the monotonicity rule: `p -> q` valid
/// in the model while `[]p -> []q` is not.
pub fn rule_countermodel_mon(max_worlds: u8, cap: u8) -> Result<SearchOutcome, SearchError> {
    check_bounds(max_worlds, cap)?;
    let start = Instant::now();
    let premise = Compiled::new(
        &Formula::implies(Formula::atom("p"), Formula::atom("q")),
        BoxMode::Standard,
    );
    let conclusion = Compiled::new(
        &Formula::implies(
            Formula::boxed(Formula::atom("p")),
            Formula::boxed(Formula::atom("q")),
        ),
        BoxMode::Standard,
    );
    let mut frames: u64 = 0;
    let mut models: u64 = 0;
    let mut odometer = Odometer::new();
    let mut stack = Vec::new();
    let hit = scan_candidates(
        max_worlds,
        cap,
        Some(ConditionSet::NONE),
        |space, order, fams| {
            frames += 1;
            odometer.reset(2);
            while let Some(assignment) = odometer.next(&order.upsets) {
                models += 1;
                if premise.eval(space, order, fams, assignment, &mut stack) != space.world_full {
                    continue;
                }
                let concl = conclusion.eval(space, order, fams, assignment, &mut stack);
                if concl != space.world_full {
                    let world = (!concl & space.world_full).trailing_zeros() as u8;
                    return ControlFlow::Break(ScanHit::Found {
                        frame: space.build_frame(order, fams),
                        assignment: collect_assignment(&premise.vars, assignment),
                        world,
                    });
                }
            }
            ControlFlow::Continue(())
        },
    );
    let elapsed = start.elapsed();
    Ok(match hit {
        Some(ScanHit::Found {
            frame,
            assignment,
            world,
        }) => SearchOutcome {
            verdict: SearchVerdict::CountermodelFound,
            model: Some(Model::new(frame, assignment).expect("assignment is in range")),
            world: Some(world),
            stats: SearchStats {
                frames_visited: frames,
                models_visited: models,
                elapsed,
            },
        },
        _ => SearchOutcome {
            verdict: SearchVerdict::Exhausted,
            model: None,
            world: None,
            stats: SearchStats {
                frames_visited: frames,
                models_visited: models,
                elapsed,
            },
        },
    })
}

/// One scheme violation discovered by a sweep.
#[derive(Clone, Debug)]
pub struct SweepViolation {
    pub scheme_index: usize,
    pub frame: Frame,
    pub assignment: BTreeMap<String, WorldSet>,
    pub world: u8,
}

/// Outcome of sweeping a list of schemes over every enumerated frame.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub frames_checked: u64,
    pub evaluations: u64,
    pub violation: Option<SweepViolation>,
}

impl SweepReport {
    pub fn clean(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that every scheme is valid on every enumerated frame.
///
/// Schemes without modal operators never read the neighborhoods, so
/// their verdict depends on the order alone and is computed once per
/// order instead of once per frame.
pub fn scheme_sweep(
    schemes: &[Formula],
    max_worlds: u8,
    cap: u8,
    mode: BoxMode,
    required: ConditionSet,
) -> Result<SweepReport, SearchError> {
    check_bounds(max_worlds, cap)?;
    if !matches!(mode, BoxMode::Standard | BoxMode::Simple) {
        return Err(SearchError::Mode(mode));
    }
    let compiled: Vec<Compiled> = schemes.iter().map(|s| Compiled::new(s, mode)).collect();
    let mut frames: u64 = 0;
    let mut evals: u64 = 0;
    let mut odometer = Odometer::new();
    let mut stack = Vec::new();
    // Keyed by world count as well: order addresses are only unique
    // within one frame space.
    let mut order_key: (u8, *const OrderInfo) = (0, std::ptr::null());
    // Per propositional scheme: the verdict on the current order.
    let mut prop_cache: Vec<Option<(BTreeMap<String, WorldSet>, u8)>> = Vec::new();
    let mut budget: Option<SearchError> = None;

    let hit = scan_candidates(max_worlds, cap, Some(required), |space, order, fams| {
        frames += 1;
        if order_key.0 != space.worlds || !std::ptr::eq(order_key.1, order) {
            order_key = (space.worlds, order);
            prop_cache.clear();
            for c in &compiled {
                if !c.propositional {
                    prop_cache.push(None);
                    continue;
                }
                if let Err(e) = assignments_for(order.upsets.len(), c.vars.len()) {
                    budget = Some(e);
                    return ControlFlow::Break(None);
                }
                let mut found = None;
                odometer.reset(c.vars.len());
                while let Some(assignment) = odometer.next(&order.upsets) {
                    evals += 1;
                    let ext = c.eval(space, order, fams, assignment, &mut stack);
                    if ext != space.world_full {
                        let world = (!ext & space.world_full).trailing_zeros() as u8;
                        found = Some((collect_assignment(&c.vars, assignment), world));
                        break;
                    }
                }
                prop_cache.push(found);
            }
        }
        for (i, c) in compiled.iter().enumerate() {
            if c.propositional {
                if let Some((assignment, world)) = &prop_cache[i] {
                    return ControlFlow::Break(Some(SweepViolation {
                        scheme_index: i,
                        frame: space.build_frame(order, fams),
                        assignment: assignment.clone(),
                        world: *world,
                    }));
                }
                continue;
            }
            if let Err(e) = assignments_for(order.upsets.len(), c.vars.len()) {
                budget = Some(e);
                return ControlFlow::Break(None);
            }
            odometer.reset(c.vars.len());
            while let Some(assignment) = odometer.next(&order.upsets) {
                evals += 1;
                let ext = c.eval(space, order, fams, assignment, &mut stack);
                if ext != space.world_full {
                    let world = (!ext & space.world_full).trailing_zeros() as u8;
                    return ControlFlow::Break(Some(SweepViolation {
                        scheme_index: i,
                        frame: space.build_frame(order, fams),
                        assignment: collect_assignment(&c.vars, assignment),
                        world,
                    }));
                }
            }
        }
        ControlFlow::Continue(())
    });
    if let Some(e) = budget {
        return Err(e);
    }
    Ok(SweepReport {
        frames_checked: frames,
        evaluations: evals,
        violation: hit.flatten(),
    })
}

/// Replay facts about the bundled three-world model where the star
/// condition holds and axiom 4 still fails.
#[derive(Clone, Debug, Serialize)]
pub struct StarModelReplay {
    pub star_holds: bool,
    pub starstar_holds: bool,
    pub box_forced: bool,
    pub boxbox_forced: bool,
}

/// Result of checking that subset-closed frames validate axiom 4.
#[derive(Clone, Debug)]
pub struct StarstarFourReport {
    pub frames_checked: u64,
    /// Offending frame with its witness, never expected.
    pub counterexample: Option<SweepViolation>,
    pub replay: StarModelReplay,
}

impl StarstarFourReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
            && self.replay.star_holds
            && !self.replay.starstar_holds
            && self.replay.box_forced
            && !self.replay.boxbox_forced
    }
}

/// Asserts axiom 4 (`[]a -> [][]a`) on every enumerated subset-closed
/// frame, and replays the model showing the star condition alone is too
/// weak for it.
pub fn verify_starstar_implies_four(
    max_worlds: u8,
    cap: u8,
) -> Result<StarstarFourReport, SearchError> {
    let four = Formula::implies(
        Formula::boxed(Formula::atom("a")),
        Formula::boxed(Formula::boxed(Formula::atom("a"))),
    );
    let report = scheme_sweep(
        &[four],
        max_worlds,
        cap,
        BoxMode::Standard,
        ConditionSet::just_starstar(),
    )?;

    let star_model = crate::builtin::star_without_starstar_model();
    let ctx = EvalContext::new(&star_model, BoxMode::Standard).expect("standard mode");
    let box_p = Formula::boxed(Formula::atom("p"));
    let boxbox_p = Formula::boxed(box_p.clone());
    let replay = StarModelReplay {
        star_holds: model::check_star(star_model.frame()).holds,
        starstar_holds: model::check_starstar(star_model.frame()).holds,
        box_forced: semantics::forces(&ctx, 0, &box_p).expect("world 0 exists"),
        boxbox_forced: semantics::forces(&ctx, 0, &boxbox_p).expect("world 0 exists"),
    };
    Ok(StarstarFourReport {
        frames_checked: report.frames_checked,
        counterexample: report.violation,
        replay,
    })
}

/// Outcome of scanning raw candidates for the relative strength of
/// conditions (1) and (2).
#[derive(Clone, Debug)]
pub struct ConditionStrengthReport {
    pub candidates: u64,
    pub cond2_candidates: u64,
    /// A candidate satisfying condition (2) but not condition (1);
    /// never expected.
    pub implication_violation: Option<Frame>,
    /// A frame passing condition (1) but failing condition (2), with
    /// the recorded cond2 witness.
    pub separating_frame: Option<(Frame, Witness)>,
}

/// Checks over every raw candidate that condition (2) implies
/// condition (1), and finds a frame showing the converse fails.
pub fn condition_strength_report(
    max_worlds: u8,
    cap: u8,
) -> Result<ConditionStrengthReport, SearchError> {
    check_bounds(max_worlds, cap)?;
    let mut report = ConditionStrengthReport {
        candidates: 0,
        cond2_candidates: 0,
        implication_violation: None,
        separating_frame: None,
    };
    scan_candidates::<()>(max_worlds, cap, None, |space, order, fams| {
        report.candidates += 1;
        let c1 = space.cond1_ok(order, fams);
        if space.cond2_ok(order, fams) {
            report.cond2_candidates += 1;
            if !c1 && report.implication_violation.is_none() {
                report.implication_violation = Some(space.build_frame(order, fams));
            }
        } else if c1 && report.separating_frame.is_none() {
            let frame = space.build_frame(order, fams);
            let witness = model::check_cond2(&frame)
                .witness
                .expect("cond2 fails on this frame");
            report.separating_frame = Some((frame, witness));
        }
        ControlFlow::Continue(())
    });
    Ok(report)
}

/// Renders a found countermodel in the model file format plus a witness
/// block naming the scheme, the metavariable assignment, and the least
/// failing world.
pub fn countermodel_document(scheme: &Formula, outcome: &SearchOutcome) -> Option<serde_json::Value> {
    let model = outcome.model.as_ref()?;
    let world = outcome.world?;
    let mut doc = model::model_to_json_value(model);
    let witness = serde_json::json!({
        "scheme": scheme.to_string(),
        "assignment": model.valuation(),
        "world": world,
    });
    doc.as_object_mut()
        .expect("model document is an object")
        .insert("witness".to_string(), witness);
    Some(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::model::validate_frame;

    fn spec(scheme: &str) -> SearchSpec {
        SearchSpec::new(parse(scheme).unwrap())
    }

    #[test]
    fn one_world_cap_one_has_three_frames() {
        let frames: Vec<Frame> = enumerate_frames(1, 1, ConditionSet::NONE)
            .unwrap()
            .collect();
        assert_eq!(frames.len(), 3);
        assert_eq!(frames[0].neighborhoods(0), &[]);
        assert_eq!(frames[1].neighborhoods(0), &[WorldSet::EMPTY]);
        assert_eq!(frames[2].neighborhoods(0), &[WorldSet::from_mask(1)]);
    }

    #[test]
    fn starstar_filter_drops_non_subset_closed_family() {
        let frames: Vec<Frame> = enumerate_frames(1, 1, ConditionSet::just_starstar())
            .unwrap()
            .collect();
        assert_eq!(frames.len(), 2);
    }

    #[test]
    fn two_world_counts_match_independent_filter() {
        // 4 one-world frames, then 675 two-world candidates: 3 orders
        // x 15 families per world squared.
        let candidates: Vec<Frame> = enumerate_candidate_frames(2, 3).unwrap().collect();
        assert_eq!(candidates.len(), 4 + 675);
        let by_validator = candidates
            .iter()
            .filter(|f| validate_frame(f).iter().all(|r| r.holds))
            .count();
        let enumerated = enumerate_frames(2, 3, ConditionSet::NONE).unwrap().count();
        assert_eq!(enumerated, by_validator);
        // One-world frames all pass; per chain order 125 of the 225
        // neighborhood choices survive condition (1).
        assert_eq!(enumerated, 4 + 225 + 125 + 125);
    }

    #[test]
    fn enumerated_frames_pass_validation() {
        for frame in enumerate_frames(2, 2, ConditionSet::NONE).unwrap() {
            assert!(validate_frame(&frame).iter().all(|r| r.holds));
        }
        for frame in enumerate_frames(2, 2, ConditionSet::just_cond2()).unwrap() {
            assert!(model::check_cond2(&frame).holds);
        }
    }

    #[test]
    fn k_scheme_has_countermodel() {
        let outcome = find_countermodel(&spec("[](a -> b) -> ([]a -> []b)")).unwrap();
        assert_eq!(outcome.verdict, SearchVerdict::CountermodelFound);
        let model = outcome.model.as_ref().unwrap();
        assert_eq!(model.frame().world_count(), 3);
        assert!(model::validate_model(model).iter().all(|r| r.holds));
        let instance = instantiate("[](a -> b) -> ([]a -> []b)");
        assert!(!valid_in_model(model, BoxMode::Standard, &instance).unwrap());
        let ctx = EvalContext::new(model, BoxMode::Standard).unwrap();
        assert!(!semantics::forces(&ctx, outcome.world.unwrap(), &instance).unwrap());
    }

    /// Substitutes the model's own valuation atoms for the scheme's
    /// metavariables, i.e. reads the scheme at this witness.
    fn instantiate(scheme: &str) -> Formula {
        let scheme = parse(scheme).unwrap();
        let map = scheme
            .atoms()
            .into_iter()
            .map(|a| (a.clone(), Formula::Atom(a)))
            .collect();
        scheme.substitute(&map).unwrap()
    }

    #[test]
    fn axiom_t_is_safe_up_to_two_worlds() {
        let outcome = find_countermodel(&spec("[]a -> a").max_worlds(2)).unwrap();
        assert_eq!(outcome.verdict, SearchVerdict::Exhausted);
    }

    #[test]
    fn axiom_d_is_safe_up_to_two_worlds() {
        let outcome = find_countermodel(&spec("[]a -> ~[]~a").max_worlds(2)).unwrap();
        assert_eq!(outcome.verdict, SearchVerdict::Exhausted);
    }

    #[test]
    fn simple_mode_refutes_axiom_t_with_one_world() {
        let outcome = find_countermodel(
            &spec("[]a -> a")
                .max_worlds(2)
                .box_mode(BoxMode::Simple)
                .require(ConditionSet::just_cond2()),
        )
        .unwrap();
        assert_eq!(outcome.verdict, SearchVerdict::CountermodelFound);
        let model = outcome.model.as_ref().unwrap();
        assert_eq!(model.frame().world_count(), 1);
        assert_eq!(model.frame().neighborhoods(0), &[WorldSet::EMPTY]);
        assert_eq!(model.atom_extension("a"), WorldSet::EMPTY);
        assert_eq!(outcome.world, Some(0));
        let instance = instantiate("[]a -> a");
        assert!(!valid_in_model(model, BoxMode::Simple, &instance).unwrap());
    }

    #[test]
    fn diamond_weakening_fails_even_on_cond2_frames() {
        let outcome = find_countermodel(
            &spec("[]a -> <*>a").require(ConditionSet::just_cond2()),
        )
        .unwrap();
        assert_eq!(outcome.verdict, SearchVerdict::CountermodelFound);
        let model = outcome.model.as_ref().unwrap();
        assert_eq!(model.frame().world_count(), 1);
        assert_eq!(
            model.frame().neighborhoods(0),
            &[WorldSet::EMPTY, WorldSet::from_mask(1)]
        );
        assert_eq!(model.atom_extension("a"), WorldSet::from_mask(1));
        let instance = instantiate("[]a -> <*>a");
        assert!(!valid_in_model(model, BoxMode::Standard, &instance).unwrap());
    }

    #[test]
    fn nabla_weakening_is_safe_up_to_two_worlds() {
        let outcome = find_countermodel(
            &spec("[]a -> <>a")
                .max_worlds(2)
                .require(ConditionSet::just_cond2()),
        )
        .unwrap();
        assert_eq!(outcome.verdict, SearchVerdict::Exhausted);
    }

    #[test]
    fn search_is_deterministic() {
        let run = || find_countermodel(&spec("[](a -> b) -> ([]a -> []b)")).unwrap();
        assert_eq!(run(), run());
        let sweep = || find_countermodel(&spec("[]a -> a").max_worlds(2)).unwrap();
        assert_eq!(sweep(), sweep());
    }

    #[test]
    fn mon_rule_separates_with_two_worlds() {
        let outcome = rule_countermodel_mon(2, 3).unwrap();
        assert_eq!(outcome.verdict, SearchVerdict::CountermodelFound);
        let model = outcome.model.as_ref().unwrap();
        assert_eq!(model.frame().world_count(), 2);
        assert_eq!(model.atom_extension("p"), WorldSet::from_mask(2));
        assert_eq!(model.atom_extension("q"), WorldSet::from_mask(3));
        assert_eq!(outcome.world, Some(1));
        assert!(valid_in_model(model, BoxMode::Standard, &parse("p -> q").unwrap()).unwrap());
        assert!(
            !valid_in_model(model, BoxMode::Standard, &parse("[]p -> []q").unwrap()).unwrap()
        );
    }

    #[test]
    fn mon_rule_needs_nonempty_neighborhoods() {
        let outcome = rule_countermodel_mon(1, 0).unwrap();
        assert_eq!(outcome.verdict, SearchVerdict::Exhausted);
    }

    #[test]
    fn axiom_t_is_scheme_valid_on_sampled_frames() {
        let t = parse("[]a -> a").unwrap();
        for frame in enumerate_frames(2, 2, ConditionSet::NONE).unwrap() {
            assert!(scheme_valid_in_frame(&frame, BoxMode::Standard, &t).unwrap());
        }
    }

    #[test]
    fn axiom_four_fails_on_star_frame_with_recorded_witness() {
        let frame = crate::builtin::star_without_starstar_model().frame().clone();
        let four = parse("[]a -> [][]a").unwrap();
        let hit = scheme_countermodel_in_frame(&frame, BoxMode::Standard, &four)
            .unwrap()
            .unwrap();
        assert_eq!(hit.0["a"], WorldSet::from_worlds(&[0, 2]));
        assert_eq!(hit.1, 0);
    }

    #[test]
    fn classicality_holds_on_single_reflexive_world() {
        let frame = Frame::new(1, &[], vec![vec![WorldSet::from_mask(1)]]).unwrap();
        assert!(scheme_valid_in_frame(&frame, BoxMode::Standard, &parse("a | ~a").unwrap())
            .unwrap());
    }

    #[test]
    fn excluded_middle_fails_on_a_chain() {
        let frame = Frame::new(2, &[(0, 1)], vec![vec![], vec![]]).unwrap();
        let hit = scheme_countermodel_in_frame(&frame, BoxMode::Standard, &parse("a | ~a").unwrap())
            .unwrap()
            .unwrap();
        // a = {1}: world 0 forces neither a nor ~a.
        assert_eq!(hit.0["a"], WorldSet::from_mask(2));
        assert_eq!(hit.1, 0);
    }

    #[test]
    fn compact_and_general_paths_agree() {
        let schemes = [
            "[]a -> a",
            "[](a -> b) -> ([]a -> []b)",
            "[]a -> ~[]~a",
            "[]a -> <>a",
            "[]a -> <*>a",
            "a | ~a",
            "[]a -> [][]a",
        ];
        for frame in enumerate_frames(2, 2, ConditionSet::NONE).unwrap().step_by(7) {
            for scheme in &schemes {
                let scheme = parse(scheme).unwrap();
                for mode in [BoxMode::Standard, BoxMode::Simple] {
                    assert_eq!(
                        scheme_countermodel_compact(&frame, mode, &scheme).unwrap(),
                        scheme_countermodel_general(&frame, mode, &scheme).unwrap(),
                    );
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let wide = parse("a1 | a2 | a3 | a4 | a5 | a6 | a7").unwrap();
        let frame = Frame::new(3, &[], vec![vec![], vec![], vec![]]).unwrap();
        assert!(matches!(
            scheme_valid_in_frame(&frame, BoxMode::Standard, &wide),
            Err(SearchError::Budget { .. })
        ));
    }

    #[test]
    fn spec_bounds_are_enforced() {
        assert!(matches!(
            find_countermodel(&spec("[]a -> a").max_worlds(9)),
            Err(SearchError::MaxWorlds(9))
        ));
        assert!(matches!(
            find_countermodel(&spec("[]a -> a").family_cap(5)),
            Err(SearchError::FamilyCap(5))
        ));
        assert!(matches!(
            find_countermodel(&spec("[]a -> a").box_mode(BoxMode::RelPlain)),
            Err(SearchError::Mode(BoxMode::RelPlain))
        ));
    }

    #[test]
    fn starstar_frames_validate_axiom_four() {
        let report = verify_starstar_implies_four(2, 3).unwrap();
        assert!(report.passed());
        assert!(report.frames_checked > 0);
    }

    #[test]
    fn empty_neighborhoods_validate_axiom_four_vacuously() {
        let frame = Frame::new(3, &[(0, 1)], vec![vec![], vec![], vec![]]).unwrap();
        assert!(model::check_starstar(&frame).holds);
        assert!(
            scheme_valid_in_frame(&frame, BoxMode::Standard, &parse("[]a -> [][]a").unwrap())
                .unwrap()
        );
    }

    #[test]
    fn condition_strength_on_small_candidates() {
        let report = condition_strength_report(2, 3).unwrap();
        assert_eq!(report.candidates, 675 + 4);
        assert!(report.implication_violation.is_none());
        let (frame, witness) = report.separating_frame.as_ref().unwrap();
        assert!(validate_frame(frame).iter().all(|r| r.holds));
        assert!(!model::check_cond2(frame).holds);
        assert!(matches!(witness, Witness::Cond2 { .. }));
    }

    #[test]
    fn axiom_sweep_is_clean_on_small_frames() {
        let schemes: Vec<Formula> = crate::proof::AxiomId::ALL
            .iter()
            .map(|id| id.template().clone())
            .collect();
        let report = scheme_sweep(
            &schemes,
            2,
            2,
            BoxMode::Standard,
            ConditionSet::NONE,
        )
        .unwrap();
        assert!(report.clean());
        assert!(report.frames_checked > 0);
        assert!(report.evaluations > 0);
    }

    #[test]
    fn sweep_reports_violations_with_frame_and_witness() {
        let bad = parse("[]a").unwrap();
        let report = scheme_sweep(&[bad], 1, 1, BoxMode::Standard, ConditionSet::NONE).unwrap();
        let violation = report.violation.unwrap();
        assert_eq!(violation.scheme_index, 0);
        assert_eq!(violation.frame.world_count(), 1);
        // First frame has no neighborhoods, so []a fails with a empty.
        assert_eq!(violation.assignment["a"], WorldSet::EMPTY);
        assert_eq!(violation.world, 0);
    }

    #[test]
    fn countermodel_document_embeds_witness() {
        let spec = spec("[](a -> b) -> ([]a -> []b)");
        let outcome = find_countermodel(&spec).unwrap();
        let doc = countermodel_document(&spec.scheme, &outcome).unwrap();
        let echoed = doc["witness"]["scheme"].as_str().unwrap();
        assert_eq!(parse(echoed).unwrap(), spec.scheme);
        assert!(doc["witness"]["world"].is_u64());
        let text = serde_json::to_string(&doc).unwrap();
        let reloaded = model::model_from_json(&text).unwrap();
        assert_eq!(&reloaded.value, outcome.model.as_ref().unwrap());
    }
}
