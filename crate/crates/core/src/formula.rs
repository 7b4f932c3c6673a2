//! The object language: formulas over atoms, falsum, the intuitionistic
//! connectives and the modal operators `[]` (necessity), `<>` (the
//! primary possibility operator) and `<*>` (the universal-neighborhood
//! possibility operator).
//!
//! Negation and biconditional exist only as surface syntax: `~f` parses
//! to `f -> _|_` and `a <-> b` parses to `(a -> b) & (b -> a)`. The
//! printer re-introduces both as sugar, so `parse` and `print` are exact
//! inverses on abstract syntax trees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A formula of the object language.
///
/// Atom names match `[a-z][a-zA-Z0-9_]*`. There is no negation or
/// biconditional node; both are eliminated while parsing. Whether atoms
/// are propositional variables or scheme metavariables is decided by the
/// operation consuming the formula, not by the tree itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Bottom,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// Necessity, written `[]`.
    Box(Box<Formula>),
    /// Possibility via some neighborhood, written `<>`.
    Nabla(Box<Formula>),
    /// Possibility via every neighborhood, written `<*>`.
    Diamond(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// `~a`, i.e. `a -> _|_`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::Bottom)
    }

    /// `a <-> b`, i.e. `(a -> b) & (b -> a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }

    pub fn nabla(a: Formula) -> Formula {
        Formula::Nabla(Box::new(a))
    }

    pub fn diamond(a: Formula) -> Formula {
        Formula::Diamond(Box::new(a))
    }

    /// Set of atom names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        self.collect_atoms(&mut acc);
        acc
    }

    fn collect_atoms(&self, acc: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(name) => {
                acc.insert(name.clone());
            }
            Formula::Bottom => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(acc);
                b.collect_atoms(acc);
            }
            Formula::Box(a) | Formula::Nabla(a) | Formula::Diamond(a) => a.collect_atoms(acc),
        }
    }

    /// True when the formula contains no modal operator.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Bottom => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            Formula::Box(_) | Formula::Nabla(_) | Formula::Diamond(_) => false,
        }
    }

    /// Uniformly replaces every atom by its image under `map`.
    ///
    /// Reading the formula as an axiom scheme, this instantiates its
    /// metavariables. The map must bind every atom of the scheme.
    pub fn substitute(
        &self,
        map: &BTreeMap<String, Formula>,
    ) -> Result<Formula, UnboundMetavariable> {
        match self {
            Formula::Atom(name) => map
                .get(name)
                .cloned()
                .ok_or_else(|| UnboundMetavariable(name.clone())),
            Formula::Bottom => Ok(Formula::Bottom),
            Formula::And(a, b) => Ok(Formula::and(a.substitute(map)?, b.substitute(map)?)),
            Formula::Or(a, b) => Ok(Formula::or(a.substitute(map)?, b.substitute(map)?)),
            Formula::Implies(a, b) => Ok(Formula::implies(a.substitute(map)?, b.substitute(map)?)),
            Formula::Box(a) => Ok(Formula::boxed(a.substitute(map)?)),
            Formula::Nabla(a) => Ok(Formula::nabla(a.substitute(map)?)),
            Formula::Diamond(a) => Ok(Formula::diamond(a.substitute(map)?)),
        }
    }

    /// Renders with Unicode connectives instead of the ASCII grammar.
    pub fn to_unicode(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 1, Style::Unicode)
            .expect("writing to String cannot fail");
        out
    }

    /// `a <-> b` sugar: both conjuncts are converse implications.
    fn iff_parts(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::And(l, r) = self {
            if let (Formula::Implies(a, b), Formula::Implies(c, d)) = (l.as_ref(), r.as_ref()) {
                if a == d && b == c {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// `~a` sugar: an implication into falsum.
    fn negation_part(&self) -> Option<&Formula> {
        if let Formula::Implies(a, b) = self {
            if **b == Formula::Bottom {
                return Some(a);
            }
        }
        None
    }

    /// Binding strength as printed: implication/biconditional 1,
    /// disjunction 2, conjunction 3, unary 4, atoms 5.
    fn display_precedence(&self) -> u8 {
        if self.negation_part().is_some() {
            return 4;
        }
        if self.iff_parts().is_some() {
            return 1;
        }
        match self {
            Formula::Atom(_) | Formula::Bottom => 5,
            Formula::Box(_) | Formula::Nabla(_) | Formula::Diamond(_) => 4,
            Formula::And(_, _) => 3,
            Formula::Or(_, _) => 2,
            Formula::Implies(_, _) => 1,
        }
    }

    fn write<W: fmt::Write>(&self, out: &mut W, min: u8, style: Style) -> fmt::Result {
        if self.display_precedence() < min {
            out.write_char('(')?;
            self.write(out, 1, style)?;
            return out.write_char(')');
        }
        if let Some(a) = self.negation_part() {
            out.write_str(style.sym(Sym::Not))?;
            return a.write(out, 4, style);
        }
        if let Some((a, b)) = self.iff_parts() {
            a.write(out, 2, style)?;
            out.write_str(style.sym(Sym::Iff))?;
            return b.write(out, 1, style);
        }
        match self {
            Formula::Atom(name) => out.write_str(name),
            Formula::Bottom => out.write_str(style.sym(Sym::Bottom)),
            Formula::Box(a) => {
                out.write_str(style.sym(Sym::Box))?;
                a.write(out, 4, style)
            }
            Formula::Nabla(a) => {
                out.write_str(style.sym(Sym::Nabla))?;
                a.write(out, 4, style)
            }
            Formula::Diamond(a) => {
                out.write_str(style.sym(Sym::Diamond))?;
                a.write(out, 4, style)
            }
            Formula::And(a, b) => {
                a.write(out, 3, style)?;
                out.write_str(style.sym(Sym::And))?;
                b.write(out, 4, style)
            }
            Formula::Or(a, b) => {
                a.write(out, 2, style)?;
                out.write_str(style.sym(Sym::Or))?;
                b.write(out, 3, style)
            }
            Formula::Implies(a, b) => {
                a.write(out, 2, style)?;
                out.write_str(style.sym(Sym::Implies))?;
                b.write(out, 1, style)
            }
        }
    }
}

/// Minimal-parentheses rendering; the inverse of [`parse`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 1, Style::Ascii)
    }
}

#[derive(Clone, Copy)]
enum Style {
    Ascii,
    Unicode,
}

enum Sym {
    Bottom,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Box,
    Nabla,
    Diamond,
}

impl Style {
    fn sym(self, s: Sym) -> &'static str {
        match (self, s) {
            (Style::Ascii, Sym::Bottom) => "_|_",
            (Style::Ascii, Sym::Not) => "~",
            (Style::Ascii, Sym::And) => " & ",
            (Style::Ascii, Sym::Or) => " | ",
            (Style::Ascii, Sym::Implies) => " -> ",
            (Style::Ascii, Sym::Iff) => " <-> ",
            (Style::Ascii, Sym::Box) => "[]",
            (Style::Ascii, Sym::Nabla) => "<>",
            (Style::Ascii, Sym::Diamond) => "<*>",
            (Style::Unicode, Sym::Bottom) => "⊥",
            (Style::Unicode, Sym::Not) => "¬",
            (Style::Unicode, Sym::And) => " ∧ ",
            (Style::Unicode, Sym::Or) => " ∨ ",
            (Style::Unicode, Sym::Implies) => " → ",
            (Style::Unicode, Sym::Iff) => " ↔ ",
            (Style::Unicode, Sym::Box) => "□",
            (Style::Unicode, Sym::Nabla) => "∇",
            (Style::Unicode, Sym::Diamond) => "◇",
        }
    }
}

/// A substitution was applied to a scheme containing an atom the map
/// does not bind.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("no binding for metavariable `{0}`")]
pub struct UnboundMetavariable(pub String);

/// Syntax error with a 0-based character offset into the input.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("syntax error at offset {offset}: expected {expected}, found {found}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bottom,
    Not,
    And,
    Or,
    Arrow,
    Iff,
    Box,
    Nabla,
    Diamond,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("atom `{name}`"),
            Tok::Bottom => "`_|_`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Nabla => "`<>`".into(),
            Tok::Diamond => "`<*>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    let err = |offset: usize, expected: &str, found: String| ParseError {
        offset,
        expected: expected.into(),
        found,
    };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '(' => toks.push((Tok::LParen, start)),
            ')' => toks.push((Tok::RParen, start)),
            '&' => toks.push((Tok::And, start)),
            '|' => toks.push((Tok::Or, start)),
            '~' => toks.push((Tok::Not, start)),
            '_' => {
                if chars.get(i + 1) == Some(&'|') && chars.get(i + 2) == Some(&'_') {
                    toks.push((Tok::Bottom, start));
                    i += 2;
                } else {
                    return Err(err(start, "`_|_`", format!("`{c}`")));
                }
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    toks.push((Tok::Arrow, start));
                    i += 1;
                } else {
                    return Err(err(start, "`->`", format!("`{c}`")));
                }
            }
            '[' => {
                if chars.get(i + 1) == Some(&']') {
                    toks.push((Tok::Box, start));
                    i += 1;
                } else {
                    return Err(err(start, "`[]`", format!("`{c}`")));
                }
            }
            '<' => match chars.get(i + 1) {
                Some('>') => {
                    toks.push((Tok::Nabla, start));
                    i += 1;
                }
                Some('-') if chars.get(i + 2) == Some(&'>') => {
                    toks.push((Tok::Iff, start));
                    i += 2;
                }
                Some('*') if chars.get(i + 2) == Some(&'>') => {
                    toks.push((Tok::Diamond, start));
                    i += 2;
                }
                _ => return Err(err(start, "`<->`, `<>` or `<*>`", format!("`{c}`"))),
            },
            'a'..='z' => {
                let mut name = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    name.push(chars[i]);
                    i += 1;
                }
                toks.push((Tok::Ident(name), start));
                continue;
            }
            _ => return Err(err(start, "a formula token", format!("`{c}`"))),
        }
        i += 1;
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn found(&self) -> String {
        self.toks
            .get(self.pos)
            .map_or_else(|| "end of input".into(), |(t, _)| t.describe())
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.into(),
            found: self.found(),
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        match self.peek() {
            Some(Tok::Arrow) => {
                self.bump();
                Ok(Formula::implies(lhs, self.implication()?))
            }
            Some(Tok::Iff) => {
                self.bump();
                Ok(Formula::iff(lhs, self.implication()?))
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Box) => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Some(Tok::Nabla) => {
                self.bump();
                Ok(Formula::nabla(self.unary()?))
            }
            Some(Tok::Diamond) => {
                self.bump();
                Ok(Formula::diamond(self.unary()?))
            }
            _ => self.atom_term(),
        }
    }

    fn atom_term(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let f = Formula::Atom(name.clone());
                self.bump();
                Ok(f)
            }
            Some(Tok::Bottom) => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.implication()?;
                if self.peek() == Some(&Tok::RParen) {
                    self.bump();
                    Ok(f)
                } else {
                    Err(self.error("`)`"))
                }
            }
            _ => Err(self.error("a formula")),
        }
    }
}

/// Parses the ASCII formula grammar.
pub fn parse(input: &str) -> Result<Formula, ParseError> {
    let toks = lex(input)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: input.chars().count(),
    };
    let formula = parser.implication()?;
    if parser.peek().is_some() {
        return Err(parser.error("end of input"));
    }
    Ok(formula)
}

/// Minimal-parentheses rendering; `parse(&print(f)) == f`.
pub fn print(f: &Formula) -> String {
    f.to_string()
}
