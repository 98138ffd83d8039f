use std::collections::BTreeSet;
use std::fmt;

use super::{BaseError, BaseLogic, Verdict};
use crate::syntax::BasicType;

/// Negation-free propositional formula over `&` and `|`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum PropFormula {
    Atom(String),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn atom(name: &str) -> Self {
        PropFormula::Atom(name.to_string())
    }

    pub fn and(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn parse(text: &str) -> Result<Self, BaseError> {
        let mut p = PropParser {
            toks: tokenize(text)?,
            pos: 0,
            text,
        };
        let f = p.or()?;
        if p.pos != p.toks.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(f)
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            PropFormula::Atom(a) => {
                out.insert(a);
            }
            PropFormula::And(a, b) | PropFormula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn eval(&self, value: &impl Fn(&str) -> bool) -> bool {
        match self {
            PropFormula::Atom(a) => value(a),
            PropFormula::And(a, b) => a.eval(value) && b.eval(value),
            PropFormula::Or(a, b) => a.eval(value) || b.eval(value),
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropFormula::Atom(a) => f.write_str(a),
            PropFormula::And(a, b) => {
                match a.as_ref() {
                    PropFormula::Or(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                f.write_str(" & ")?;
                match b.as_ref() {
                    PropFormula::Atom(_) => write!(f, "{b}"),
                    _ => write!(f, "({b})"),
                }
            }
            PropFormula::Or(a, b) => {
                write!(f, "{a} | ")?;
                match b.as_ref() {
                    PropFormula::Or(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Atom(String),
    And,
    Or,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, BaseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '&' | '∧' => {
                chars.next();
                out.push(Tok::And);
            }
            '|' | '∨' => {
                chars.next();
                out.push(Tok::Or);
            }
            '(' => {
                chars.next();
                out.push(Tok::Open);
            }
            ')' => {
                chars.next();
                out.push(Tok::Close);
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Atom(s));
            }
            other => {
                return Err(BaseError::Parse {
                    text: text.to_string(),
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct PropParser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    text: &'a str,
}

impl PropParser<'_> {
    fn err(&self, message: &str) -> BaseError {
        BaseError::Parse {
            text: self.text.to_string(),
            message: message.to_string(),
        }
    }

    fn or(&mut self) -> Result<PropFormula, BaseError> {
        let mut acc = self.and()?;
        while self.toks.get(self.pos) == Some(&Tok::Or) {
            self.pos += 1;
            acc = PropFormula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<PropFormula, BaseError> {
        let mut acc = self.prim()?;
        while self.toks.get(self.pos) == Some(&Tok::And) {
            self.pos += 1;
            acc = PropFormula::and(acc, self.prim()?);
        }
        Ok(acc)
    }

    fn prim(&mut self) -> Result<PropFormula, BaseError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Atom(a)) => {
                self.pos += 1;
                Ok(PropFormula::Atom(a))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let f = self.or()?;
                if self.toks.get(self.pos) != Some(&Tok::Close) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(f)
            }
            _ => Err(self.err("expected an atom or `(`")),
        }
    }
}

/// Entailed iff every assignment to the atoms of both sides that satisfies
/// `lhs` satisfies `rhs`. The fragment has no unsatisfiable formulae, so
/// the two are always jointly satisfiable and `Disentailed` never arises.
pub fn prop_entails(lhs: &PropFormula, rhs: &PropFormula) -> Verdict {
    let atoms: Vec<&str> = lhs.atoms().union(&rhs.atoms()).copied().collect();
    let n = atoms.len();
    assert!(n < 32, "too many atoms for exhaustive evaluation");
    for bits in 0u64..(1u64 << n) {
        let value = |a: &str| {
            let i = atoms.binary_search(&a).expect("atom collected above");
            bits & (1 << i) != 0
        };
        if lhs.eval(&value) && !rhs.eval(&value) {
            return Verdict::Blocked;
        }
    }
    Verdict::Entailed
}

pub fn prop_meet(a: &PropFormula, b: &PropFormula) -> PropFormula {
    PropFormula::and(a.clone(), b.clone())
}

pub fn prop_join(a: &PropFormula, b: &PropFormula) -> PropFormula {
    PropFormula::or(a.clone(), b.clone())
}

/// Propositional ∧/∨ logic as a base.
#[derive(Debug, Clone, Copy, Default)]
pub struct PropBase;

impl PropBase {
    fn formula(&self, b: &BasicType) -> Result<PropFormula, BaseError> {
        PropFormula::parse(b.payload())
    }
}

impl BaseLogic for PropBase {
    fn name(&self) -> &str {
        "prop"
    }

    fn parse(&self, text: &str) -> Result<BasicType, BaseError> {
        Ok(BasicType::new(PropFormula::parse(text)?.to_string()))
    }

    fn entails(&self, lhs: &BasicType, rhs: &BasicType) -> Result<Verdict, BaseError> {
        Ok(prop_entails(&self.formula(lhs)?, &self.formula(rhs)?))
    }

    // Comparable arguments return one of them, so bounds stay small.
    fn meet(&self, a: &BasicType, b: &BasicType) -> Result<Option<BasicType>, BaseError> {
        let (fa, fb) = (self.formula(a)?, self.formula(b)?);
        let m = if prop_entails(&fa, &fb).is_entailed() {
            fa
        } else if prop_entails(&fb, &fa).is_entailed() {
            fb
        } else {
            prop_meet(&fa, &fb)
        };
        Ok(Some(BasicType::new(m.to_string())))
    }

    fn join(&self, a: &BasicType, b: &BasicType) -> Result<Option<BasicType>, BaseError> {
        let (fa, fb) = (self.formula(a)?, self.formula(b)?);
        let j = if prop_entails(&fa, &fb).is_entailed() {
            fb
        } else if prop_entails(&fb, &fa).is_entailed() {
            fa
        } else {
            prop_join(&fa, &fb)
        };
        Ok(Some(BasicType::new(j.to_string())))
    }

    fn has_lattice(&self) -> bool {
        true
    }
}
