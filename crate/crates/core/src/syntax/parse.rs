//! Concrete syntax for formulae and sequents.
//!
//! `/` associates to the left (`a/b/c` is `(a/b)/c`), `\` to the right
//! (`a\b\c` is `a\(b\c)`), and `\` binds tighter than `/`, so `np\s/np` is
//! `(np\s)/np`. Basic types are bare identifiers or bracketed base-logic
//! formulae (`[np & acc]`), optionally followed by a layer label `^X`.
//!
//! Antecedents are comma separated. A parenthesised group containing a
//! top-level comma is a nested G-term, e.g. `a, (b, c)`.

use super::formula::{is_ident_char, BasicType, Formula};
use super::gterm::{GTerm, Regime, Sequent};
use super::SyntaxError;

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    allow_labels: bool,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, allow_labels: bool) -> Self {
        Parser {
            src,
            chars: src.char_indices().collect(),
            pos: 0,
            allow_labels,
        }
    }

    fn err(&self, msg: impl Into<String>) -> SyntaxError {
        let column = self.chars.get(self.pos).map(|(i, _)| self.src[..*i].chars().count()).unwrap_or_else(|| self.src.chars().count());
        SyntaxError::Parse {
            column: column + 1,
            message: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(is_ident_char) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().map(|(_, c)| c).collect())
    }

    // over := under ('/' under)*
    fn over(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.under()?;
        while self.eat('/') {
            let arg = self.under()?;
            acc = Formula::over(acc, arg);
        }
        Ok(acc)
    }

    // under := primary ('\' under)?
    fn under(&mut self) -> Result<Formula, SyntaxError> {
        let arg = self.primary()?;
        if self.eat('\\') {
            let result = self.under()?;
            Ok(Formula::under(arg, result))
        } else {
            Ok(arg)
        }
    }

    fn primary(&mut self) -> Result<Formula, SyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let f = self.over()?;
                self.expect(')')?;
                Ok(f)
            }
            Some('[') => {
                self.pos += 1;
                let start = self.pos;
                let mut depth = 1;
                while let Some(c) = self.peek() {
                    match c {
                        '[' => depth += 1,
                        ']' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    self.pos += 1;
                }
                if depth != 0 {
                    return Err(self.err("unterminated `[`"));
                }
                let payload: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
                self.pos += 1;
                if payload.trim().is_empty() {
                    return Err(self.err("empty basic type `[]`"));
                }
                self.label(payload)
            }
            _ => match self.ident() {
                Some(id) => self.label(id),
                None => Err(self.err("expected a type")),
            },
        }
    }

    fn label(&mut self, payload: String) -> Result<Formula, SyntaxError> {
        if self.eat('^') {
            if !self.allow_labels {
                return Err(self.err("layer labels are only allowed in annotated types"));
            }
            let label = self.ident().ok_or_else(|| self.err("expected a layer variable after `^`"))?;
            Ok(Formula::Basic(BasicType::labelled(payload, label)))
        } else {
            Ok(Formula::Basic(BasicType::new(payload)))
        }
    }

    // item := '(' gterm-with-comma ')' | formula
    fn gterm(&mut self) -> Result<(GTerm, bool), SyntaxError> {
        let mut items = vec![self.item()?];
        while self.eat(',') {
            items.push(self.item()?);
        }
        let flat = items.len() > 2;
        let mut it = items.into_iter();
        let first = it.next().unwrap();
        let rest: Vec<GTerm> = it.collect();
        if rest.is_empty() {
            Ok((first, false))
        } else {
            let mut all = vec![first];
            all.extend(rest);
            Ok((GTerm::list(all), flat))
        }
    }

    fn item(&mut self) -> Result<GTerm, SyntaxError> {
        self.skip_ws();
        if self.peek() == Some('(') && self.group_has_comma() {
            self.pos += 1;
            let (g, flat) = self.gterm()?;
            if flat {
                return Err(self.err("nested G-terms must be binary: `(U, V)`"));
            }
            self.expect(')')?;
            Ok(g)
        } else {
            Ok(GTerm::Leaf(self.over()?))
        }
    }

    /// Whether the parenthesised group starting here has a comma at depth 1.
    fn group_has_comma(&self) -> bool {
        let mut depth = 0i32;
        let mut square = 0i32;
        for &(_, c) in &self.chars[self.pos..] {
            match c {
                '[' => square += 1,
                ']' => square -= 1,
                '(' if square == 0 => depth += 1,
                ')' if square == 0 => {
                    depth -= 1;
                    if depth == 0 {
                        return false;
                    }
                }
                ',' if square == 0 && depth == 1 => return true,
                _ => {}
            }
        }
        false
    }
}

fn finish<T>(mut p: Parser<'_>, value: T) -> Result<T, SyntaxError> {
    if p.at_end() {
        Ok(value)
    } else {
        Err(p.err("unexpected trailing input"))
    }
}

/// Parses an unannotated formula.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text, false);
    let f = p.over()?;
    finish(p, f)
}

/// Parses a formula whose basic types may carry `^X` layer labels.
pub fn parse_annotated_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text, true);
    let f = p.over()?;
    finish(p, f)
}

/// Parses an antecedent. Flat lists of more than two items are accepted only
/// for associative regimes; NL and NLP need explicit brackets.
pub fn parse_gterm(text: &str, regime: Regime, allow_labels: bool) -> Result<GTerm, SyntaxError> {
    let mut p = Parser::new(text, allow_labels);
    let (g, flat) = p.gterm()?;
    if flat && !regime.is_associative() {
        return Err(SyntaxError::Parse {
            column: 1,
            message: format!("{regime} antecedents with more than two items must be bracketed, e.g. `a, (b, c)`"),
        });
    }
    finish(p, g)
}

/// Parses `U => A` (or `U ⇒ A`).
pub fn parse_sequent(text: &str, regime: Regime, allow_labels: bool) -> Result<Sequent, SyntaxError> {
    let (lhs, rhs, offset) = split_arrow(text).ok_or(SyntaxError::Parse {
        column: 1,
        message: "expected `=>` between antecedent and succedent".into(),
    })?;
    let antecedent = parse_gterm(lhs, regime, allow_labels)?;
    let succedent = if allow_labels {
        parse_annotated_formula(rhs)
    } else {
        parse_formula(rhs)
    }
    .map_err(|e| e.shifted(offset))?;
    Ok(Sequent::new(antecedent, succedent))
}

fn split_arrow(text: &str) -> Option<(&str, &str, usize)> {
    let mut square = 0i32;
    for (i, c) in text.char_indices() {
        match c {
            '[' => square += 1,
            ']' => square -= 1,
            '=' if square == 0 && text[i..].starts_with("=>") => {
                return Some((&text[..i], &text[i + 2..], text[..i + 2].chars().count()))
            }
            '⇒' if square == 0 => {
                let end = i + c.len_utf8();
                return Some((&text[..i], &text[end..], text[..end].chars().count()));
            }
            _ => {}
        }
    }
    None
}
