//! Grammars: lexical assignment, sentence type, regime and base logic;
//! language membership with coordination; the compile-out into pure
//! Lambek grammars.

mod compile;
mod coordination;
mod membership;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use compile::{
    basic_universe, check_equivalence, compile_out, family_membership, lemma12_oracle, super_minus, super_plus,
    CompiledFamily, EquivalenceReport,
};
pub use coordination::{coordinate, type_join, type_meet};
pub use membership::{
    bracketings, membership, membership_with, validate_report, CoordinationStep, MembershipOptions, MembershipReport, WitnessItem,
};

use crate::base::{canonical_formula, BaseError, BaseLogic, BaseRegistry, BaseSpec};
use crate::feature::{is_variable_name, FeatureError, FeatureTerm};
use crate::prover::ProverError;
use crate::syntax::parse::parse_annotated_formula;
use crate::syntax::{subformula_closure, Formula, Regime, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("the sentence is empty")]
    EmptySentence,
    #[error("coordination needs meet and join, which the {0} base logic does not provide")]
    NoLattice(String),
    #[error("cannot compile out: {0}")]
    Compile(String),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

/// `V = φ`: a feature constraint on a layer variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Equation {
    pub var: String,
    pub term: FeatureTerm,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.var, self.term)
    }
}

/// One lexical type, with the feature constraints on its layer variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LexEntry {
    pub formula: Formula,
    pub constraints: Vec<Equation>,
}

impl LexEntry {
    pub fn plain(formula: Formula) -> Self {
        LexEntry {
            formula,
            constraints: Vec::new(),
        }
    }

    pub fn is_annotated(&self) -> bool {
        !self.constraints.is_empty() || self.formula.basic_occurrences().iter().any(|(_, _, b)| b.label().is_some())
    }
}

#[derive(Clone, Debug)]
pub struct Grammar {
    pub regime: Regime,
    pub base_name: String,
    pub base: Arc<dyn BaseLogic>,
    pub lexicon: BTreeMap<String, Vec<LexEntry>>,
    pub conj_markers: BTreeSet<String>,
    pub goal: LexEntry,
}

impl Grammar {
    /// Parses the line-oriented grammar format, creating the base logic
    /// through `registry`.
    pub fn parse_with(text: &str, registry: &BaseRegistry) -> Result<Self, GrammarError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim_end()))
            .filter(|(_, l)| !l.trim().is_empty())
            .collect();

        let mut regime = Regime::L;
        let mut base_name = "poset".to_string();
        let mut spec = BaseSpec::default();
        for &(n, line) in &lines {
            let (kw, rest, col) = keyword(line);
            match kw {
                "regime" => {
                    regime = rest.trim().parse().map_err(|e: SyntaxError| syntax(n, col, e.to_string()))?;
                }
                "base" => base_name = rest.trim().to_string(),
                "atom" => spec.atoms.extend(rest.split_whitespace().map(str::to_string)),
                "sub" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    let [a, b] = parts[..] else {
                        return Err(syntax(n, col, "expected `sub <subtype> <supertype>`".into()));
                    };
                    spec.edges.push((a.to_string(), b.to_string()));
                }
                "lex" | "conj" | "goal" => {}
                other => return Err(syntax(n, 1, format!("unknown declaration `{other}`"))),
            }
        }
        let base = registry.create(&base_name, &spec).map_err(|e| {
            let n = lines.iter().find(|(_, l)| keyword(l).0 == "base").map_or(1, |(n, _)| *n);
            syntax(n, 1, e.to_string())
        })?;

        let mut lexicon: BTreeMap<String, Vec<LexEntry>> = BTreeMap::new();
        let mut conj_markers = BTreeSet::new();
        let mut goal = None;
        for &(n, line) in &lines {
            let (kw, rest, col) = keyword(line);
            match kw {
                "lex" => {
                    let colon = rest
                        .find(':')
                        .ok_or_else(|| syntax(n, col, "expected `lex <word> : <type>`".into()))?;
                    let word = rest[..colon].trim();
                    if word.is_empty() || word.contains(char::is_whitespace) {
                        return Err(syntax(n, col, format!("bad word `{word}`")));
                    }
                    let entry = parse_entry(&rest[colon + 1..], &*base, n, col + colon + 1)?;
                    lexicon.entry(word.to_string()).or_default().push(entry);
                }
                "conj" => {
                    for w in rest.split_whitespace() {
                        conj_markers.insert(w.to_string());
                    }
                }
                "goal" => {
                    if goal.is_some() {
                        return Err(syntax(n, 1, "more than one goal".into()));
                    }
                    goal = Some(parse_entry(rest, &*base, n, col)?);
                }
                _ => {}
            }
        }
        if let Some(w) = conj_markers.iter().find(|w| lexicon.contains_key(*w)) {
            return Err(syntax(0, 0, format!("`{w}` is both a coordination marker and a lexical word")));
        }
        let goal = goal.ok_or_else(|| syntax(lines.last().map_or(1, |l| l.0), 1, "missing `goal` line".into()))?;
        Ok(Grammar {
            regime,
            base_name,
            base,
            lexicon,
            conj_markers,
            goal,
        })
    }

    pub fn parse(text: &str) -> Result<Self, GrammarError> {
        Self::parse_with(text, &BaseRegistry::default())
    }

    pub fn goal_formula(&self) -> &Formula {
        &self.goal.formula
    }

    pub fn is_marker(&self, word: &str) -> bool {
        self.conj_markers.contains(word)
    }

    pub fn entries(&self, word: &str) -> Result<&[LexEntry], GrammarError> {
        self.lexicon
            .get(word)
            .map(Vec::as_slice)
            .ok_or_else(|| GrammarError::UnknownWord(word.to_string()))
    }

    /// Lexical types of a word, labels erased.
    pub fn types(&self, word: &str) -> Result<Vec<Formula>, GrammarError> {
        let mut out: Vec<Formula> = Vec::new();
        for e in self.entries(word)? {
            let f = e.formula.erase();
            if !out.contains(&f) {
                out.push(f);
            }
        }
        Ok(out)
    }

    /// Whether any entry or the goal carries layer variables or constraints.
    pub fn is_annotated(&self) -> bool {
        self.goal.is_annotated() || self.lexicon.values().flatten().any(LexEntry::is_annotated)
    }

    /// Subformula closure of all lexical types and the goal, labels erased.
    pub fn closure(&self) -> BTreeSet<Formula> {
        let erased: Vec<Formula> = self
            .lexicon
            .values()
            .flatten()
            .map(|e| e.formula.erase())
            .chain(std::iter::once(self.goal.formula.erase()))
            .collect();
        subformula_closure(erased.iter())
    }
}

fn syntax(line: usize, column: usize, message: String) -> GrammarError {
    GrammarError::Syntax { line, column, message }
}

/// First word, the rest, and the 1-based column where the rest starts.
fn keyword(line: &str) -> (&str, &str, usize) {
    let trimmed = line.trim_start();
    let lead = line.len() - trimmed.len();
    let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
    (
        &trimmed[..end],
        &trimmed[end..],
        line[..lead + end].chars().count() + 1,
    )
}

/// Byte offset of the first `|` outside brackets and parentheses.
fn top_level_bar(text: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in text.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            '|' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn parse_entry(text: &str, base: &dyn BaseLogic, line: usize, col: usize) -> Result<LexEntry, GrammarError> {
    let (type_text, constraint_text) = match top_level_bar(text) {
        Some(i) => (&text[..i], Some(&text[i + 1..])),
        None => (text, None),
    };
    let formula = parse_annotated_formula(type_text).map_err(|e| match e {
        SyntaxError::Parse { column, message } => syntax(line, col + column - 1, message),
        other => syntax(line, col, other.to_string()),
    })?;
    let formula = canonical_formula(&formula, base).map_err(|e| syntax(line, col, e.to_string()))?;
    let mut constraints = Vec::new();
    if let Some(ct) = constraint_text {
        let ccol = col + type_text.chars().count() + 1;
        for eq in ct.split(',') {
            let (var, term) = eq
                .split_once('=')
                .ok_or_else(|| syntax(line, ccol, format!("expected `Var = term`, found `{}`", eq.trim())))?;
            let var = var.trim();
            if !is_variable_name(var) {
                return Err(syntax(line, ccol, format!("`{var}` is not a layer variable")));
            }
            let term = FeatureTerm::parse(term).map_err(|e| match e {
                FeatureError::Parse { message, .. } => syntax(line, ccol, format!("in `{}`: {message}", term.trim())),
                other => syntax(line, ccol, other.to_string()),
            })?;
            constraints.push(Equation {
                var: var.to_string(),
                term,
            });
        }
    }
    Ok(LexEntry { formula, constraints })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "
        # a small poset grammar
        regime L
        base poset
        atom a b c
        sub a b
        lex x : a
        lex x : c/b
        lex y : b\\c   # trailing comment
        conj and
        goal c
    ";

    #[test]
    fn parses_declarations() {
        let g = Grammar::parse(TOY).unwrap();
        assert_eq!(g.regime, Regime::L);
        assert_eq!(g.base_name, "poset");
        assert_eq!(g.types("x").unwrap().len(), 2);
        assert!(g.is_marker("and"));
        assert_eq!(g.goal_formula().to_string(), "c");
        assert!(matches!(g.types("z"), Err(GrammarError::UnknownWord(_))));
        assert!(!g.is_annotated());
        assert_eq!(g.closure().len(), 5);
    }

    #[test]
    fn errors_carry_lines() {
        let e = Grammar::parse("atom a\nlex x : a/\ngoal a").unwrap_err();
        assert!(matches!(e, GrammarError::Syntax { line: 2, .. }), "{e}");
        let e = Grammar::parse("atom a\nlex x : q\ngoal a").unwrap_err();
        assert!(matches!(e, GrammarError::Syntax { line: 2, .. }), "{e}");
        let e = Grammar::parse("atom a\nfrobnicate\ngoal a").unwrap_err();
        assert!(matches!(e, GrammarError::Syntax { line: 2, .. }));
        let e = Grammar::parse("atom a\nlex x : a").unwrap_err();
        assert!(e.to_string().contains("goal"));
        let e = Grammar::parse("base modal\ngoal a").unwrap_err();
        assert!(matches!(e, GrammarError::Syntax { line: 1, .. }));
    }

    #[test]
    fn propositional_payloads_are_canonical() {
        let g = Grammar::parse("base prop\nlex w : vp/[np|ap]\nlex v : vp/[ np | ap ]\ngoal vp").unwrap();
        assert_eq!(g.types("w").unwrap(), g.types("v").unwrap());
        assert_eq!(g.types("w").unwrap()[0].to_string(), "vp/[np | ap]");
    }

    #[test]
    fn annotated_entries() {
        let g = Grammar::parse(
            "base feature\nregime L\n\
             lex p : ([cat:np]^X \\ [cat:s]^S) / [cat:np]^Y | S = content:(influence:X & influenced:Y), Y = agr:top\n\
             goal [cat:s]^G",
        )
        .unwrap();
        let e = &g.entries("p").unwrap()[0];
        assert_eq!(e.constraints.len(), 2);
        assert_eq!(e.constraints[0].var, "S");
        assert!(g.is_annotated());
        assert_eq!(g.types("p").unwrap()[0].to_string(), "[cat:np]\\[cat:s]/[cat:np]");
        let e = Grammar::parse("base feature\nlex p : [cat:np]^X | x = top\ngoal [cat:s]").unwrap_err();
        assert!(e.to_string().contains("layer variable"));
    }
}
