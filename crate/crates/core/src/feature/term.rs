use std::fmt;

use super::FeatureError;

/// Feature term of the restricted feature logic.
///
/// Variables are identifiers starting with an uppercase letter; every other
/// identifier is an atom, or a feature name when followed by `:`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FeatureTerm {
    Var(String),
    Atom(String),
    Top,
    Bottom,
    Feat(String, Box<FeatureTerm>),
    Exists(String, Box<FeatureTerm>),
    Conj(Box<FeatureTerm>, Box<FeatureTerm>),
}

impl FeatureTerm {
    pub fn var(name: &str) -> Self {
        FeatureTerm::Var(name.to_string())
    }

    pub fn atom(name: &str) -> Self {
        FeatureTerm::Atom(name.to_string())
    }

    pub fn feat(f: &str, t: FeatureTerm) -> Self {
        FeatureTerm::Feat(f.to_string(), Box::new(t))
    }

    pub fn exists(x: &str, t: FeatureTerm) -> Self {
        FeatureTerm::Exists(x.to_string(), Box::new(t))
    }

    pub fn conj(a: FeatureTerm, b: FeatureTerm) -> Self {
        FeatureTerm::Conj(Box::new(a), Box::new(b))
    }

    /// Conjunction of all parts; `Top` when empty.
    pub fn conj_all(parts: impl IntoIterator<Item = FeatureTerm>) -> Self {
        parts
            .into_iter()
            .reduce(FeatureTerm::conj)
            .unwrap_or(FeatureTerm::Top)
    }

    /// `f1:f2:...:fn:leaf`, built without recursion.
    pub fn path(features: &[&str], leaf: FeatureTerm) -> Self {
        features
            .iter()
            .rev()
            .fold(leaf, |acc, f| FeatureTerm::feat(f, acc))
    }

    pub fn parse(text: &str) -> Result<Self, FeatureError> {
        let mut p = TermParser {
            text,
            chars: text.chars().collect(),
            pos: 0,
        };
        let t = p.conj()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(t)
    }
}

pub(crate) fn is_variable_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_uppercase())
}

impl fmt::Display for FeatureTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // feature chains can be very deep; walk them iteratively
        let mut cur = self;
        while let FeatureTerm::Feat(name, t) = cur {
            write!(f, "{name}:")?;
            if matches!(t.as_ref(), FeatureTerm::Conj(..)) {
                return write!(f, "({t})");
            }
            cur = t;
        }
        match cur {
            FeatureTerm::Var(x) | FeatureTerm::Atom(x) => f.write_str(x),
            FeatureTerm::Top => f.write_str("top"),
            FeatureTerm::Bottom => f.write_str("bot"),
            FeatureTerm::Exists(x, t) => write!(f, "exists {x} ({t})"),
            FeatureTerm::Conj(a, b) => write!(f, "{a} & {b}"),
            FeatureTerm::Feat(..) => unreachable!(),
        }
    }
}

struct TermParser<'a> {
    text: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl TermParser<'_> {
    fn err(&self, message: &str) -> FeatureError {
        FeatureError::Parse {
            text: self.text.to_string(),
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_alphanumeric() || *c == '_' || *c == '-' || *c == '\'')
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn conj(&mut self) -> Result<FeatureTerm, FeatureError> {
        let mut acc = self.unary()?;
        while self.eat('&') {
            acc = FeatureTerm::conj(acc, self.unary()?);
        }
        Ok(acc)
    }

    // unary := (feature ':')* primary
    fn unary(&mut self) -> Result<FeatureTerm, FeatureError> {
        let mut features = Vec::new();
        loop {
            let save = self.pos;
            match self.ident() {
                Some(id) if self.eat(':') => features.push(id),
                _ => {
                    self.pos = save;
                    break;
                }
            }
        }
        let mut t = self.primary()?;
        for f in features.into_iter().rev() {
            t = FeatureTerm::Feat(f, Box::new(t));
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<FeatureTerm, FeatureError> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some('(') => {
                self.pos += 1;
                let t = self.conj()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(t)
            }
            Some('⊤') => {
                self.pos += 1;
                Ok(FeatureTerm::Top)
            }
            Some('⊥') => {
                self.pos += 1;
                Ok(FeatureTerm::Bottom)
            }
            _ => {
                let id = self.ident().ok_or_else(|| self.err("expected a feature term"))?;
                match id.as_str() {
                    "top" => Ok(FeatureTerm::Top),
                    "bot" => Ok(FeatureTerm::Bottom),
                    "exists" => {
                        let x = self.ident().ok_or_else(|| self.err("expected a variable after `exists`"))?;
                        if !is_variable_name(&x) {
                            return Err(self.err("existential variables start with an uppercase letter"));
                        }
                        if !self.eat('(') {
                            return Err(self.err("expected `(` after the quantified variable"));
                        }
                        let body = self.conj()?;
                        if !self.eat(')') {
                            return Err(self.err("expected `)`"));
                        }
                        Ok(FeatureTerm::Exists(x, Box::new(body)))
                    }
                    _ if is_variable_name(&id) => Ok(FeatureTerm::Var(id)),
                    _ => Ok(FeatureTerm::Atom(id)),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_shapes() {
        let t = FeatureTerm::parse("cat:np & case:acc").unwrap();
        assert_eq!(
            t,
            FeatureTerm::conj(
                FeatureTerm::feat("cat", FeatureTerm::atom("np")),
                FeatureTerm::feat("case", FeatureTerm::atom("acc"))
            )
        );
        let t = FeatureTerm::parse("exists X (f:X & g:X)").unwrap();
        assert!(matches!(t, FeatureTerm::Exists(ref x, _) if x == "X"));
        assert_eq!(FeatureTerm::parse("f:g:top").unwrap(), FeatureTerm::path(&["f", "g"], FeatureTerm::Top));
        assert_eq!(FeatureTerm::parse("bot").unwrap(), FeatureTerm::Bottom);
    }

    #[test]
    fn display_roundtrip() {
        for s in [
            "cat:np & case:acc",
            "content:(relation:persuade & influence:X)",
            "exists X (f:X & g:X)",
            "f:g:h:a",
            "top",
        ] {
            let t = FeatureTerm::parse(s).unwrap();
            assert_eq!(t.to_string(), s);
            assert_eq!(FeatureTerm::parse(&t.to_string()).unwrap(), t);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(FeatureTerm::parse("cat:").is_err());
        assert!(FeatureTerm::parse("exists x (a)").is_err());
        assert!(FeatureTerm::parse("(a & b").is_err());
    }
}
