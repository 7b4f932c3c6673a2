//! Pre-ordered neighborhood frames and models, validators for every
//! frame/model condition the workbench uses, and the JSON exchange
//! format.
//!
//! A frame is a set of worlds `0..n` (n at most 16), a partial order on
//! them, and a neighborhood function assigning each world a finite
//! family of world sets. Condition (1) ties the two together: whenever
//! `w <= v` and a neighborhood of `w` contains `v`, that set is also a
//! neighborhood of `v`. A model adds a valuation mapping atoms to
//! upward-closed world sets.
//!
//! Validators never panic on bad data; they return [`ConditionReport`]s
//! carrying a replayable witness for every violation.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// Hard cap on worlds, so a [`WorldSet`] fits in one `u16`.
pub const MAX_WORLDS: u8 = 16;

/// A set of worlds as a bitmask over indices `0..16`.
///
/// Sets order by mask value, which is the canonical order used for
/// neighborhood families and enumeration output.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet(u16);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn from_mask(mask: u16) -> WorldSet {
        WorldSet(mask)
    }

    /// Builds a set from indices; indices must be below [`MAX_WORLDS`].
    pub fn from_worlds(worlds: &[u8]) -> WorldSet {
        let mut mask = 0u16;
        for &w in worlds {
            assert!(w < MAX_WORLDS, "world index {w} out of range");
            mask |= 1 << w;
        }
        WorldSet(mask)
    }

    pub fn full(worlds: u8) -> WorldSet {
        debug_assert!(worlds <= MAX_WORLDS);
        if worlds >= MAX_WORLDS {
            WorldSet(u16::MAX)
        } else {
            WorldSet((1 << worlds) - 1)
        }
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn contains(self, w: u8) -> bool {
        w < MAX_WORLDS && self.0 & (1 << w) != 0
    }

    pub fn with(self, w: u8) -> WorldSet {
        debug_assert!(w < MAX_WORLDS);
        WorldSet(self.0 | (1 << w))
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersection(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn difference(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn iter(self) -> impl Iterator<Item = u8> {
        (0..MAX_WORLDS).filter(move |w| self.contains(*w))
    }
}

impl fmt::Display for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, w) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized as the sorted list of member indices.
impl Serialize for WorldSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len() as usize))?;
        for w in self.iter() {
            seq.serialize_element(&w)?;
        }
        seq.end()
    }
}

/// A pre-ordered neighborhood frame.
///
/// Construction closes the order reflexively and stores each
/// neighborhood family sorted and deduplicated, so equality of frames
/// is structural. Nothing else is enforced here: order axioms and
/// condition (1) are checked by [`validate_frame`], which reports
/// violations instead of failing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    /// `up[w]` is `{v : w <= v}`, always containing `w`.
    up: Vec<WorldSet>,
    /// Per-world neighborhood family, ascending by set mask.
    nbhd: Vec<Vec<WorldSet>>,
}

impl Frame {
    pub fn new(
        worlds: u8,
        order: &[(u8, u8)],
        nbhd: Vec<Vec<WorldSet>>,
    ) -> Result<Frame, ModelError> {
        if worlds == 0 || worlds > MAX_WORLDS {
            return Err(ModelError::WorldCount(worlds as u32));
        }
        let universe = WorldSet::full(worlds);
        let mut up: Vec<WorldSet> = (0..worlds).map(|w| WorldSet::EMPTY.with(w)).collect();
        for &(w, v) in order {
            if w >= worlds {
                return Err(ModelError::world_out_of_range("order", w as u32, worlds));
            }
            if v >= worlds {
                return Err(ModelError::world_out_of_range("order", v as u32, worlds));
            }
            up[w as usize] = up[w as usize].with(v);
        }
        if nbhd.len() != worlds as usize {
            return Err(ModelError::NbhdArity {
                expected: worlds,
                got: nbhd.len(),
            });
        }
        let mut families = Vec::with_capacity(nbhd.len());
        for (w, family) in nbhd.into_iter().enumerate() {
            for set in &family {
                if !set.is_subset(universe) {
                    return Err(ModelError::world_out_of_range(
                        &format!("nbhd[{w}]"),
                        set.difference(universe).iter().next().unwrap() as u32,
                        worlds,
                    ));
                }
            }
            let mut family = family;
            family.sort_unstable();
            family.dedup();
            families.push(family);
        }
        Ok(Frame {
            up,
            nbhd: families,
        })
    }

    pub fn world_count(&self) -> u8 {
        self.up.len() as u8
    }

    pub fn universe(&self) -> WorldSet {
        WorldSet::full(self.world_count())
    }

    pub fn le(&self, w: u8, v: u8) -> bool {
        self.up[w as usize].contains(v)
    }

    /// `{v : w <= v}`, including `w` itself.
    pub fn up_set(&self, w: u8) -> WorldSet {
        self.up[w as usize]
    }

    /// Non-reflexive order pairs, lexicographically.
    pub fn strict_order_pairs(&self) -> Vec<(u8, u8)> {
        let n = self.world_count();
        let mut pairs = Vec::new();
        for w in 0..n {
            for v in 0..n {
                if w != v && self.le(w, v) {
                    pairs.push((w, v));
                }
            }
        }
        pairs
    }

    pub fn neighborhoods(&self, w: u8) -> &[WorldSet] {
        &self.nbhd[w as usize]
    }

    pub fn has_neighborhood(&self, w: u8, set: WorldSet) -> bool {
        self.nbhd[w as usize].binary_search(&set).is_ok()
    }

    /// Least superset of `s` closed under the order.
    pub fn upward_closure(&self, s: WorldSet) -> WorldSet {
        let mut out = WorldSet::EMPTY;
        for w in s.intersection(self.universe()).iter() {
            out = out.union(self.up_set(w));
        }
        out
    }

    pub fn is_upward_closed(&self, s: WorldSet) -> bool {
        self.upward_closure(s) == s
    }

    /// Every upward-closed subset of the universe, ascending by mask.
    pub fn upsets(&self) -> Vec<WorldSet> {
        (0..=self.universe().mask())
            .map(WorldSet::from_mask)
            .filter(|s| self.is_upward_closed(*s))
            .collect()
    }
}

/// A frame with a valuation.
///
/// The valuation maps atom names to world sets; upward-closedness is a
/// model condition reported by [`validate_model`], not enforced here.
/// Atoms absent from the map denote the empty extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    frame: Frame,
    valuation: BTreeMap<String, WorldSet>,
}

impl Model {
    pub fn new(frame: Frame, valuation: BTreeMap<String, WorldSet>) -> Result<Model, ModelError> {
        let universe = frame.universe();
        for (atom, set) in &valuation {
            if !atom_name_ok(atom) {
                return Err(ModelError::AtomName(atom.clone()));
            }
            if !set.is_subset(universe) {
                return Err(ModelError::world_out_of_range(
                    &format!("valuation[{atom}]"),
                    set.difference(universe).iter().next().unwrap() as u32,
                    frame.world_count(),
                ));
            }
        }
        Ok(Model { frame, valuation })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    /// Extension of an atom; absent atoms are empty.
    pub fn atom_extension(&self, name: &str) -> WorldSet {
        self.valuation.get(name).copied().unwrap_or(WorldSet::EMPTY)
    }
}

fn atom_name_ok(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("world count must be between 1 and {MAX_WORLDS}, got {0}")]
    WorldCount(u32),
    #[error("{context}: world index {index} is out of range for {worlds} worlds")]
    WorldOutOfRange {
        context: String,
        index: u32,
        worlds: u8,
    },
    #[error("expected one neighborhood family per world ({expected}), got {got}")]
    NbhdArity { expected: u8, got: usize },
    #[error("invalid atom name `{0}` (expected [a-z][a-zA-Z0-9_]*)")]
    AtomName(String),
    #[error("neighborhood key `{0}` is not a world index")]
    NbhdKey(String),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("file has no valuation; it is a frame file")]
    MissingValuation,
    #[error("file has a valuation; load it as a model")]
    UnexpectedValuation,
}

impl ModelError {
    fn world_out_of_range(context: &str, index: u32, worlds: u8) -> ModelError {
        ModelError::WorldOutOfRange {
            context: context.to_string(),
            index,
            worlds,
        }
    }
}

/// Identifies one of the checkable frame/model conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionId {
    /// Reflexivity, transitivity and antisymmetry of the order.
    OrderAxioms,
    /// `w <= v`, `v` in `X`, `X` in `N_w` imply `X` in `N_v`.
    Cond1,
    /// `w <= v` implies `N_w` is a subfamily of `N_v`.
    Cond2,
    /// `X` in `N_w` implies `{v : X in N_v}` is in `N_w`.
    Star,
    /// Every neighborhood family is closed under subsets.
    Starstar,
    /// Atom extensions are upward closed.
    ValuationMonotone,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ConditionId::OrderAxioms => "order-axioms",
            ConditionId::Cond1 => "cond1",
            ConditionId::Cond2 => "cond2",
            ConditionId::Star => "star",
            ConditionId::Starstar => "starstar",
            ConditionId::ValuationMonotone => "valuation-monotone",
        };
        f.write_str(name)
    }
}

/// A concrete violation of a condition; replaying the recorded worlds
/// and sets against the defining clause reproduces the failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `w <= v` and `v <= u` hold, `w <= u` does not.
    Transitivity { w: u8, v: u8, u: u8 },
    /// `w <= v` and `v <= w` for distinct worlds.
    Antisymmetry { w: u8, v: u8 },
    /// `set` is a neighborhood of `w` containing `v`, but not a
    /// neighborhood of `v` even though `w <= v`.
    Cond1 { w: u8, v: u8, set: WorldSet },
    /// `set` is a neighborhood of `w` but not of `v` despite `w <= v`.
    Cond2 { w: u8, v: u8, set: WorldSet },
    /// `set` is a neighborhood of `w`, yet the set of worlds holding
    /// `set` as a neighborhood (`holders`) is not one.
    Star {
        w: u8,
        set: WorldSet,
        holders: WorldSet,
    },
    /// `subset` is contained in the neighborhood `set` of `w` but is
    /// not itself a neighborhood of `w`.
    Starstar {
        w: u8,
        set: WorldSet,
        subset: WorldSet,
    },
    /// `atom` holds at `w`, `w <= v`, yet `atom` fails at `v`.
    ValuationMonotone { atom: String, w: u8, v: u8 },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Transitivity { w, v, u } => {
                write!(f, "{w}<={v} and {v}<={u} but not {w}<={u}")
            }
            Witness::Antisymmetry { w, v } => write!(f, "{w}<={v} and {v}<={w}"),
            Witness::Cond1 { w, v, set } => write!(f, "w={w} v={v} X={set}"),
            Witness::Cond2 { w, v, set } => write!(f, "w={w} v={v} X={set}"),
            Witness::Star { w, set, holders } => write!(f, "w={w} X={set} holders={holders}"),
            Witness::Starstar { w, set, subset } => write!(f, "w={w} X={set} Y={subset}"),
            Witness::ValuationMonotone { atom, w, v } => write!(f, "atom={atom} w={w} v={v}"),
        }
    }
}

/// Outcome of checking one condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition: ConditionId,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl ConditionReport {
    fn holds(condition: ConditionId) -> ConditionReport {
        ConditionReport {
            condition,
            holds: true,
            witness: None,
        }
    }

    fn fails(condition: ConditionId, witness: Witness) -> ConditionReport {
        ConditionReport {
            condition,
            holds: false,
            witness: Some(witness),
        }
    }
}

fn check_order_axioms(frame: &Frame) -> ConditionReport {
    let n = frame.world_count();
    for w in 0..n {
        for v in 0..n {
            if w != v && frame.le(w, v) && frame.le(v, w) {
                return ConditionReport::fails(
                    ConditionId::OrderAxioms,
                    Witness::Antisymmetry { w, v },
                );
            }
        }
    }
    for w in 0..n {
        for v in frame.up_set(w).iter() {
            if !frame.up_set(v).is_subset(frame.up_set(w)) {
                let u = frame
                    .up_set(v)
                    .difference(frame.up_set(w))
                    .iter()
                    .next()
                    .unwrap();
                return ConditionReport::fails(
                    ConditionId::OrderAxioms,
                    Witness::Transitivity { w, v, u },
                );
            }
        }
    }
    ConditionReport::holds(ConditionId::OrderAxioms)
}

fn check_cond1(frame: &Frame) -> ConditionReport {
    for (w, v) in frame.strict_order_pairs() {
        for &set in frame.neighborhoods(w) {
            if set.contains(v) && !frame.has_neighborhood(v, set) {
                return ConditionReport::fails(ConditionId::Cond1, Witness::Cond1 { w, v, set });
            }
        }
    }
    ConditionReport::holds(ConditionId::Cond1)
}

/// Order axioms plus condition (1); all-holds iff the data is a
/// well-formed frame.
pub fn validate_frame(frame: &Frame) -> Vec<ConditionReport> {
    vec![check_order_axioms(frame), check_cond1(frame)]
}

/// Condition (2): neighborhoods only grow along the order. Frames that
/// pass it (and [`validate_frame`]) form the class where the simple box
/// clause stays monotone.
pub fn check_cond2(frame: &Frame) -> ConditionReport {
    for (w, v) in frame.strict_order_pairs() {
        for &set in frame.neighborhoods(w) {
            if !frame.has_neighborhood(v, set) {
                return ConditionReport::fails(ConditionId::Cond2, Witness::Cond2 { w, v, set });
            }
        }
    }
    ConditionReport::holds(ConditionId::Cond2)
}

/// The classical correlate of axiom 4: whenever `X` is a neighborhood
/// of `w`, so is the set of worlds having `X` as a neighborhood.
pub fn check_star(frame: &Frame) -> ConditionReport {
    let n = frame.world_count();
    for w in 0..n {
        for &set in frame.neighborhoods(w) {
            let mut holders = WorldSet::EMPTY;
            for v in 0..n {
                if frame.has_neighborhood(v, set) {
                    holders = holders.with(v);
                }
            }
            if !frame.has_neighborhood(w, holders) {
                return ConditionReport::fails(
                    ConditionId::Star,
                    Witness::Star { w, set, holders },
                );
            }
        }
    }
    ConditionReport::holds(ConditionId::Star)
}

/// Subset closure of each neighborhood family; the sufficient condition
/// for axiom 4 (`[]a -> [][]a`) on these frames.
pub fn check_starstar(frame: &Frame) -> ConditionReport {
    for w in 0..frame.world_count() {
        for &set in frame.neighborhoods(w) {
            for sub in 0..=set.mask() {
                let subset = WorldSet::from_mask(sub);
                if subset.is_subset(set) && !frame.has_neighborhood(w, subset) {
                    return ConditionReport::fails(
                        ConditionId::Starstar,
                        Witness::Starstar { w, set, subset },
                    );
                }
            }
        }
    }
    ConditionReport::holds(ConditionId::Starstar)
}

fn check_valuation_monotone(model: &Model) -> ConditionReport {
    let frame = model.frame();
    for (atom, &set) in model.valuation() {
        for w in set.iter() {
            let escapees = frame.up_set(w).difference(set);
            if let Some(v) = escapees.iter().next() {
                return ConditionReport::fails(
                    ConditionId::ValuationMonotone,
                    Witness::ValuationMonotone {
                        atom: atom.clone(),
                        w,
                        v,
                    },
                );
            }
        }
    }
    ConditionReport::holds(ConditionId::ValuationMonotone)
}

/// Frame reports plus the valuation-monotonicity report.
pub fn validate_model(model: &Model) -> Vec<ConditionReport> {
    let mut reports = validate_frame(model.frame());
    reports.push(check_valuation_monotone(model));
    reports
}

/// A value loaded from a file, with any repair warnings.
#[derive(Clone, Debug)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

/// Either kind of workbench file.
#[derive(Clone, Debug)]
pub enum LoadedFile {
    Frame(Frame),
    Model(Model),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    worlds: u32,
    #[serde(default)]
    order: Vec<(u32, u32)>,
    #[serde(default)]
    nbhd: BTreeMap<String, Vec<Vec<u32>>>,
    #[serde(default)]
    valuation: Option<BTreeMap<String, Vec<u32>>>,
    /// Countermodel files carry an extra witness block; ignored on load.
    #[serde(default)]
    #[allow(dead_code)]
    witness: Option<serde_json::Value>,
}

fn world_index(context: &str, index: u32, worlds: u8) -> Result<u8, ModelError> {
    if index >= worlds as u32 {
        return Err(ModelError::world_out_of_range(context, index, worlds));
    }
    Ok(index as u8)
}

fn set_from_indices(context: &str, indices: &[u32], worlds: u8) -> Result<WorldSet, ModelError> {
    let mut set = WorldSet::EMPTY;
    for &i in indices {
        set = set.with(world_index(context, i, worlds)?);
    }
    Ok(set)
}

fn frame_from_raw(raw: &RawFile) -> Result<(Frame, Vec<String>), ModelError> {
    if raw.worlds == 0 || raw.worlds > MAX_WORLDS as u32 {
        return Err(ModelError::WorldCount(raw.worlds));
    }
    let worlds = raw.worlds as u8;
    let mut order = Vec::with_capacity(raw.order.len());
    for &(w, v) in &raw.order {
        order.push((
            world_index("order", w, worlds)?,
            world_index("order", v, worlds)?,
        ));
    }
    let missing_reflexive = (0..worlds)
        .filter(|&w| !order.contains(&(w, w)))
        .count();
    let mut nbhd = vec![Vec::new(); worlds as usize];
    for (key, family) in &raw.nbhd {
        let w = key
            .parse::<u32>()
            .map_err(|_| ModelError::NbhdKey(key.clone()))?;
        let w = world_index("nbhd", w, worlds)?;
        let context = format!("nbhd[{w}]");
        nbhd[w as usize] = family
            .iter()
            .map(|set| set_from_indices(&context, set, worlds))
            .collect::<Result<_, _>>()?;
    }
    let frame = Frame::new(worlds, &order, nbhd)?;
    let mut warnings = Vec::new();
    if missing_reflexive > 0 {
        warnings.push(format!(
            "order: closed reflexively ({missing_reflexive} pair(s) added)"
        ));
    }
    Ok((frame, warnings))
}

fn parse_raw(text: &str) -> Result<RawFile, ModelError> {
    serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))
}

/// Loads either a frame or a model file, deciding by the presence of a
/// `valuation` key.
pub fn load_str(text: &str) -> Result<Loaded<LoadedFile>, ModelError> {
    let raw = parse_raw(text)?;
    let (frame, warnings) = frame_from_raw(&raw)?;
    let value = match &raw.valuation {
        None => LoadedFile::Frame(frame),
        Some(valuation) => {
            let worlds = frame.world_count();
            let mut map = BTreeMap::new();
            for (atom, indices) in valuation {
                let context = format!("valuation[{atom}]");
                map.insert(atom.clone(), set_from_indices(&context, indices, worlds)?);
            }
            LoadedFile::Model(Model::new(frame, map)?)
        }
    };
    Ok(Loaded { value, warnings })
}

/// Loads a model file. A file without a valuation is accepted as a
/// model in which every atom has the empty extension.
pub fn model_from_json(text: &str) -> Result<Loaded<Model>, ModelError> {
    let loaded = load_str(text)?;
    let value = match loaded.value {
        LoadedFile::Model(m) => m,
        LoadedFile::Frame(f) => Model::new(f, BTreeMap::new())?,
    };
    Ok(Loaded {
        value,
        warnings: loaded.warnings,
    })
}

/// Loads a frame file; rejects files carrying a valuation.
pub fn frame_from_json(text: &str) -> Result<Loaded<Frame>, ModelError> {
    let loaded = load_str(text)?;
    match loaded.value {
        LoadedFile::Frame(f) => Ok(Loaded {
            value: f,
            warnings: loaded.warnings,
        }),
        LoadedFile::Model(_) => Err(ModelError::UnexpectedValuation),
    }
}

#[derive(Serialize)]
struct FileRepr {
    worlds: u8,
    order: Vec<(u8, u8)>,
    nbhd: BTreeMap<String, Vec<WorldSet>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    valuation: Option<BTreeMap<String, WorldSet>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<serde_json::Value>,
}

fn file_repr(frame: &Frame, valuation: Option<&BTreeMap<String, WorldSet>>) -> FileRepr {
    FileRepr {
        worlds: frame.world_count(),
        order: frame.strict_order_pairs(),
        nbhd: (0..frame.world_count())
            .map(|w| (w.to_string(), frame.neighborhoods(w).to_vec()))
            .collect(),
        valuation: valuation.cloned(),
        witness: None,
    }
}

pub fn frame_to_json_value(frame: &Frame) -> serde_json::Value {
    serde_json::to_value(file_repr(frame, None)).expect("frame serialization cannot fail")
}

pub fn model_to_json_value(model: &Model) -> serde_json::Value {
    serde_json::to_value(file_repr(model.frame(), Some(model.valuation())))
        .expect("model serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ws(worlds: &[u8]) -> WorldSet {
        WorldSet::from_worlds(worlds)
    }

    /// Three worlds, 2 <= 0, the neighborhood pattern separating axiom K.
    pub(crate) fn k_frame() -> Frame {
        Frame::new(
            3,
            &[(2, 0)],
            vec![
                vec![ws(&[0]), ws(&[0, 1, 2])],
                vec![ws(&[1])],
                vec![ws(&[0, 1, 2])],
            ],
        )
        .unwrap()
    }

    /// Identity order; star holds but starstar fails.
    fn star_frame() -> Frame {
        Frame::new(
            3,
            &[],
            vec![
                vec![ws(&[0, 1]), ws(&[0, 2])],
                vec![ws(&[0, 1]), ws(&[0, 2])],
                vec![ws(&[2])],
            ],
        )
        .unwrap()
    }

    fn all_hold(reports: &[ConditionReport]) -> bool {
        reports.iter().all(|r| r.holds)
    }

    /// Re-evaluates a witness against the defining clause of its
    /// condition; true means the violation is real.
    fn replay(frame: &Frame, witness: &Witness) -> bool {
        match *witness {
            Witness::Transitivity { w, v, u } => {
                frame.le(w, v) && frame.le(v, u) && !frame.le(w, u)
            }
            Witness::Antisymmetry { w, v } => w != v && frame.le(w, v) && frame.le(v, w),
            Witness::Cond1 { w, v, set } => {
                frame.le(w, v)
                    && set.contains(v)
                    && frame.has_neighborhood(w, set)
                    && !frame.has_neighborhood(v, set)
            }
            Witness::Cond2 { w, v, set } => {
                frame.le(w, v)
                    && frame.has_neighborhood(w, set)
                    && !frame.has_neighborhood(v, set)
            }
            Witness::Star { w, set, holders } => {
                let computed = (0..frame.world_count())
                    .filter(|&v| frame.has_neighborhood(v, set))
                    .fold(WorldSet::EMPTY, |acc, v| acc.with(v));
                frame.has_neighborhood(w, set)
                    && computed == holders
                    && !frame.has_neighborhood(w, holders)
            }
            Witness::Starstar { w, set, subset } => {
                frame.has_neighborhood(w, set)
                    && subset.is_subset(set)
                    && !frame.has_neighborhood(w, subset)
            }
            Witness::ValuationMonotone { .. } => unreachable!("needs a model"),
        }
    }

    #[test]
    fn k_frame_is_well_formed() {
        assert!(all_hold(&validate_frame(&k_frame())));
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<WorldSet>();
        assert_send_sync::<Frame>();
        assert_send_sync::<Model>();
        assert_send_sync::<crate::formula::Formula>();
    }

    #[test]
    fn one_world_empty_family_is_well_formed() {
        let frame = Frame::new(1, &[], vec![vec![]]).unwrap();
        assert!(all_hold(&validate_frame(&frame)));
    }

    #[test]
    fn cond1_violation_carries_replayable_witness() {
        let frame = Frame::new(2, &[(0, 1)], vec![vec![ws(&[1])], vec![]]).unwrap();
        let reports = validate_frame(&frame);
        assert!(reports[0].holds);
        assert!(!reports[1].holds);
        let witness = reports[1].witness.clone().unwrap();
        assert_eq!(
            witness,
            Witness::Cond1 {
                w: 0,
                v: 1,
                set: ws(&[1])
            }
        );
        assert!(replay(&frame, &witness));
    }

    #[test]
    fn order_axiom_violations_are_detected() {
        let cyclic = Frame::new(2, &[(0, 1), (1, 0)], vec![vec![], vec![]]).unwrap();
        let report = &validate_frame(&cyclic)[0];
        assert!(!report.holds);
        assert!(replay(&cyclic, report.witness.as_ref().unwrap()));

        let intransitive = Frame::new(3, &[(0, 1), (1, 2)], vec![vec![], vec![], vec![]]).unwrap();
        let report = &validate_frame(&intransitive)[0];
        assert_eq!(
            report.witness,
            Some(Witness::Transitivity { w: 0, v: 1, u: 2 })
        );
        assert!(replay(&intransitive, report.witness.as_ref().unwrap()));
    }

    #[test]
    fn cond2_holds_when_families_grow() {
        let frame = Frame::new(2, &[(0, 1)], vec![vec![ws(&[0, 1])], vec![ws(&[0, 1])]]).unwrap();
        assert!(check_cond2(&frame).holds);
    }

    #[test]
    fn cond2_is_strictly_stronger_than_cond1() {
        // {0} does not contain 1, so condition (1) is vacuous here, yet
        // the family shrinks along 0 <= 1.
        let frame = Frame::new(2, &[(0, 1)], vec![vec![ws(&[0])], vec![]]).unwrap();
        assert!(all_hold(&validate_frame(&frame)));
        let report = check_cond2(&frame);
        assert!(!report.holds);
        let witness = report.witness.unwrap();
        assert_eq!(
            witness,
            Witness::Cond2 {
                w: 0,
                v: 1,
                set: ws(&[0])
            }
        );
        assert!(replay(&frame, &witness));
    }

    #[test]
    fn cond2_vacuous_on_identity_order() {
        let frame = Frame::new(2, &[], vec![vec![ws(&[0])], vec![]]).unwrap();
        assert!(check_cond2(&frame).holds);
    }

    #[test]
    fn star_holds_on_star_frame() {
        assert!(check_star(&star_frame()).holds);
    }

    #[test]
    fn star_vacuous_on_empty_families() {
        let frame = Frame::new(2, &[], vec![vec![], vec![]]).unwrap();
        assert!(check_star(&frame).holds);
    }

    #[test]
    fn star_fails_when_holder_set_missing() {
        // {} is a neighborhood of 0, every world holds it, but {0} is
        // not a neighborhood of 0.
        let frame = Frame::new(1, &[], vec![vec![WorldSet::EMPTY]]).unwrap();
        let report = check_star(&frame);
        assert!(!report.holds);
        let witness = report.witness.unwrap();
        assert_eq!(
            witness,
            Witness::Star {
                w: 0,
                set: WorldSet::EMPTY,
                holders: ws(&[0])
            }
        );
        assert!(replay(&frame, &witness));
    }

    #[test]
    fn starstar_fails_on_star_frame() {
        let report = check_starstar(&star_frame());
        assert!(!report.holds);
        assert!(replay(&star_frame(), report.witness.as_ref().unwrap()));
    }

    #[test]
    fn starstar_vacuous_on_empty_families() {
        let frame = Frame::new(2, &[], vec![vec![], vec![]]).unwrap();
        assert!(check_starstar(&frame).holds);
    }

    #[test]
    fn starstar_holds_on_full_powerset() {
        let full: Vec<WorldSet> = (0..4).map(WorldSet::from_mask).collect();
        let frame = Frame::new(2, &[], vec![full.clone(), full]).unwrap();
        assert!(check_starstar(&frame).holds);
    }

    #[test]
    fn k_model_valuation_is_monotone() {
        let model = Model::new(
            k_frame(),
            BTreeMap::from([("p".into(), ws(&[0])), ("q".into(), ws(&[0, 1]))]),
        )
        .unwrap();
        assert!(all_hold(&validate_model(&model)));
    }

    #[test]
    fn non_monotone_valuation_is_reported() {
        let frame = Frame::new(2, &[(0, 1)], vec![vec![], vec![]]).unwrap();
        let model = Model::new(frame, BTreeMap::from([("p".into(), ws(&[0]))])).unwrap();
        let reports = validate_model(&model);
        let val = reports.last().unwrap();
        assert!(!val.holds);
        assert_eq!(
            val.witness,
            Some(Witness::ValuationMonotone {
                atom: "p".into(),
                w: 0,
                v: 1
            })
        );
    }

    #[test]
    fn empty_valuation_is_monotone() {
        let model = Model::new(k_frame(), BTreeMap::new()).unwrap();
        assert!(all_hold(&validate_model(&model)));
    }

    #[test]
    fn upward_closure_examples() {
        let chain = Frame::new(2, &[(0, 1)], vec![vec![], vec![]]).unwrap();
        assert_eq!(chain.upward_closure(ws(&[0])), ws(&[0, 1]));
        let identity = Frame::new(2, &[], vec![vec![], vec![]]).unwrap();
        assert_eq!(identity.upward_closure(ws(&[0])), ws(&[0]));
        assert_eq!(chain.upward_closure(WorldSet::EMPTY), WorldSet::EMPTY);
    }

    #[test]
    fn upsets_of_chain() {
        let chain = Frame::new(2, &[(0, 1)], vec![vec![], vec![]]).unwrap();
        assert_eq!(chain.upsets(), vec![WorldSet::EMPTY, ws(&[1]), ws(&[0, 1])]);
    }

    #[test]
    fn loader_round_trips_model_files() {
        let text = r#"{ "worlds": 3,
          "order": [[2,0]],
          "nbhd": { "0": [[0],[0,1,2]], "1": [[1]], "2": [[0,1,2]] },
          "valuation": { "p": [0], "q": [0,1] } }"#;
        let loaded = model_from_json(text).unwrap();
        assert_eq!(loaded.value.frame(), &k_frame());
        assert_eq!(loaded.value.atom_extension("p"), ws(&[0]));
        assert_eq!(
            loaded.warnings,
            vec!["order: closed reflexively (3 pair(s) added)"]
        );
        let json = serde_json::to_string(&model_to_json_value(&loaded.value)).unwrap();
        let reloaded = model_from_json(&json).unwrap();
        assert_eq!(reloaded.value, loaded.value);
    }

    #[test]
    fn loader_rejects_bad_files() {
        let oor = r#"{ "worlds": 2, "order": [[0,2]], "nbhd": {} }"#;
        assert!(matches!(
            load_str(oor),
            Err(ModelError::WorldOutOfRange { .. })
        ));
        let bad_set = r#"{ "worlds": 2, "nbhd": { "0": [[5]] } }"#;
        assert!(matches!(
            load_str(bad_set),
            Err(ModelError::WorldOutOfRange { .. })
        ));
        let bad_key = r#"{ "worlds": 2, "nbhd": { "x": [] } }"#;
        assert!(matches!(load_str(bad_key), Err(ModelError::NbhdKey(_))));
        let bad_atom = r#"{ "worlds": 1, "nbhd": {}, "valuation": { "P": [0] } }"#;
        assert!(matches!(load_str(bad_atom), Err(ModelError::AtomName(_))));
        let zero = r#"{ "worlds": 0, "nbhd": {} }"#;
        assert!(matches!(load_str(zero), Err(ModelError::WorldCount(0))));
        assert!(matches!(load_str("{"), Err(ModelError::Json(_))));
    }

    #[test]
    fn frame_loader_rejects_valuations() {
        let text = r#"{ "worlds": 1, "nbhd": {}, "valuation": {} }"#;
        assert!(matches!(
            frame_from_json(text),
            Err(ModelError::UnexpectedValuation)
        ));
        let frameless = r#"{ "worlds": 1, "nbhd": {} }"#;
        assert!(frame_from_json(frameless).is_ok());
    }

    prop_compose! {
        fn arb_frame()(worlds in 1u8..=3)(
            worlds in Just(worlds),
            pairs in proptest::collection::vec((0u8..worlds, 0u8..worlds), 0..4),
            families in proptest::collection::vec(
                proptest::collection::vec(0u16..(1 << worlds), 0..3),
                worlds as usize..=worlds as usize,
            ),
        ) -> Frame {
            let nbhd = families
                .into_iter()
                .map(|family| family.into_iter().map(WorldSet::from_mask).collect())
                .collect();
            Frame::new(worlds, &pairs, nbhd).unwrap()
        }
    }

    proptest! {
        #[test]
        fn accepted_frames_satisfy_cond1_pointwise(frame in arb_frame()) {
            if !all_hold(&validate_frame(&frame)) {
                return Ok(());
            }
            for w in 0..frame.world_count() {
                for v in frame.up_set(w).iter() {
                    for &set in frame.neighborhoods(w) {
                        if set.contains(v) {
                            prop_assert!(frame.has_neighborhood(v, set));
                        }
                    }
                }
            }
        }

        #[test]
        fn upward_closure_is_a_closure_operator(
            frame in arb_frame(),
            mask_a in 0u16..8,
            mask_b in 0u16..8,
        ) {
            // Idempotence needs a transitive order.
            if !validate_frame(&frame)[0].holds {
                return Ok(());
            }
            let universe = frame.universe();
            let a = WorldSet::from_mask(mask_a).intersection(universe);
            let b = WorldSet::from_mask(mask_b).intersection(universe);
            let ca = frame.upward_closure(a);
            prop_assert!(a.is_subset(ca));
            prop_assert_eq!(frame.upward_closure(ca), ca);
            if a.is_subset(b) {
                prop_assert!(ca.is_subset(frame.upward_closure(b)));
            }
        }

        #[test]
        fn produced_witnesses_replay(frame in arb_frame()) {
            for report in validate_frame(&frame) {
                if let Some(witness) = &report.witness {
                    if !matches!(witness, Witness::ValuationMonotone { .. }) {
                        prop_assert!(replay(&frame, witness));
                    }
                }
            }
            for report in [check_cond2(&frame), check_star(&frame), check_starstar(&frame)] {
                if let Some(witness) = &report.witness {
                    prop_assert!(replay(&frame, witness));
                }
            }
        }
    }
}
